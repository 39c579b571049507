//! Brute-force Kripke model search up to a small world bound, used as an
//! independent oracle against the matrix engines. `#` is read as truth in
//! all accessible worlds. Enumeration is deterministic: world count
//! ascending, relation bit patterns ascending, assignments ascending, worlds
//! ascending; the first refutation found is the one reported.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::formula::{Formula, ModalIndex, Signature};
use crate::levels::check_validity_n;
use crate::matrix::{matrix_for, SystemName};
use crate::parser::parse;
use crate::restriction::Engine;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameClass {
    All,
    Reflexive,
    ReflexiveTransitive,
}

impl FrameClass {
    pub fn admits(&self, relation: &[u32]) -> bool {
        let n = relation.len();
        let reflexive = || (0..n).all(|w| relation[w] & (1 << w) != 0);
        let transitive = || {
            (0..n).all(|w| {
                (0..n).all(|u| relation[w] & (1 << u) == 0 || relation[u] & !relation[w] == 0)
            })
        };
        match self {
            FrameClass::All => true,
            FrameClass::Reflexive => reflexive(),
            FrameClass::ReflexiveTransitive => reflexive() && transitive(),
        }
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FrameClass::All => "all",
            FrameClass::Reflexive => "reflexive",
            FrameClass::ReflexiveTransitive => "reflexive-transitive",
        };
        write!(f, "{s}")
    }
}

impl FromStr for FrameClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<FrameClass> {
        match s {
            "all" => Ok(FrameClass::All),
            "reflexive" => Ok(FrameClass::Reflexive),
            "reflexive-transitive" => Ok(FrameClass::ReflexiveTransitive),
            other => Err(Error::UnknownSystem(other.to_string())),
        }
    }
}

/// The frame class whose modal logic the given matrix-plus-necessitation
/// system is expected to track.
pub fn frame_for(system: SystemName) -> Option<FrameClass> {
    match system {
        SystemName::Mk => Some(FrameClass::All),
        SystemName::Mkt => Some(FrameClass::Reflexive),
        SystemName::Mkt4 => Some(FrameClass::ReflexiveTransitive),
        SystemName::M | SystemName::M2 => None,
    }
}

/// Worlds are 0..n; `relation[w]` is the successor set of `w` as a bitmask;
/// each variable maps to the set of worlds where it holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: usize,
    relation: Vec<u32>,
    assignment: BTreeMap<String, u32>,
}

impl KripkeModel {
    pub fn new(worlds: usize, relation: Vec<u32>, assignment: BTreeMap<String, u32>) -> KripkeModel {
        assert_eq!(relation.len(), worlds);
        KripkeModel { worlds, relation, assignment }
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn related(&self, w: usize, u: usize) -> bool {
        self.relation[w] & (1 << u) != 0
    }

    pub fn holds(&self, var: &str, w: usize) -> bool {
        self.assignment.get(var).is_some_and(|m| m & (1 << w) != 0)
    }

    pub fn relation_rows(&self) -> &[u32] {
        &self.relation
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "worlds: {}", self.worlds)?;
        let mut arrows = Vec::new();
        for w in 0..self.worlds {
            for u in 0..self.worlds {
                if self.related(w, u) {
                    arrows.push(format!("{w}->{u}"));
                }
            }
        }
        write!(f, "; relation: {}", if arrows.is_empty() { "empty".to_string() } else { arrows.join(", ") })?;
        for (var, mask) in &self.assignment {
            let at: Vec<String> = (0..self.worlds)
                .filter(|w| mask & (1 << w) != 0)
                .map(|w| w.to_string())
                .collect();
            write!(f, "; {var}: {{{}}}", at.join(","))?;
        }
        Ok(())
    }
}

impl Serialize for KripkeModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("KripkeModel", 3)?;
        s.serialize_field("worlds", &self.worlds)?;
        let rows: Vec<Vec<usize>> = (0..self.worlds)
            .map(|w| (0..self.worlds).filter(|&u| self.related(w, u)).collect())
            .collect();
        s.serialize_field("relation", &rows)?;
        let assignment: BTreeMap<&str, Vec<usize>> = self
            .assignment
            .iter()
            .map(|(var, mask)| {
                let at: Vec<usize> = (0..self.worlds).filter(|w| mask & (1 << w) != 0).collect();
                (var.as_str(), at)
            })
            .collect();
        s.serialize_field("assignment", &assignment)?;
        s.end()
    }
}

/// Plain recursive satisfaction, kept separate from the bitmask evaluator so
/// each can check the other.
pub fn forces(model: &KripkeModel, world: usize, f: &Formula) -> bool {
    match f {
        Formula::Var(v) => model.holds(v, world),
        Formula::Neg(a) => !forces(model, world, a),
        Formula::Imp(a, b) => !forces(model, world, a) || forces(model, world, b),
        Formula::Mod(ModalIndex::One, a) => {
            (0..model.worlds).all(|u| !model.related(world, u) || forces(model, u, a))
        }
        Formula::Mod(ModalIndex::Two, _) => {
            unreachable!("bimodal formulas are rejected before Kripke evaluation")
        }
    }
}

fn eval_mask(model: &KripkeModel, f: &Formula, full: u32) -> u32 {
    match f {
        Formula::Var(v) => model.assignment.get(v).copied().unwrap_or(0),
        Formula::Neg(a) => !eval_mask(model, a, full) & full,
        Formula::Imp(a, b) => {
            (!eval_mask(model, a, full) | eval_mask(model, b, full)) & full
        }
        Formula::Mod(ModalIndex::One, a) => {
            let sat = eval_mask(model, a, full);
            let mut out = 0;
            for w in 0..model.worlds {
                if model.relation[w] & !sat == 0 {
                    out |= 1 << w;
                }
            }
            out
        }
        Formula::Mod(ModalIndex::Two, _) => {
            unreachable!("bimodal formulas are rejected before Kripke evaluation")
        }
    }
}

#[derive(Clone, Debug)]
pub enum BoundedVerdict {
    Countermodel { model: KripkeModel, world: usize },
    NoCountermodelUpTo(usize),
}

impl BoundedVerdict {
    pub fn found(&self) -> bool {
        matches!(self, BoundedVerdict::Countermodel { .. })
    }
}

impl fmt::Display for BoundedVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundedVerdict::Countermodel { model, world } => {
                write!(f, "countermodel at world {world} of [{model}]")
            }
            BoundedVerdict::NoCountermodelUpTo(n) => {
                write!(f, "no countermodel with up to {n} worlds")
            }
        }
    }
}

/// Searches every model of the frame class with at most `max_worlds` worlds
/// for a world refuting the goal. A negative answer is only a bound, never a
/// validity certificate.
pub fn kripke_check(
    frame: FrameClass,
    goal: &Formula,
    max_worlds: usize,
    budgets: &Budgets,
) -> Result<BoundedVerdict> {
    if goal.uses_mod2() {
        return Err(Error::SignatureMismatch {
            context: "the Kripke oracle reads the unimodal signature only".to_string(),
        });
    }
    if max_worlds == 0 || max_worlds > budgets.max_worlds_cap {
        return Err(Error::BudgetExceeded {
            resource: "kripke worlds".to_string(),
            needed: max_worlds as f64,
            cap: budgets.max_worlds_cap as f64,
        });
    }
    let vars: Vec<String> = goal.variables().into_iter().collect();
    let bits = (max_worlds * max_worlds + max_worlds * vars.len()) as f64;
    if bits > budgets.free_bits {
        return Err(Error::BudgetExceeded {
            resource: "kripke enumeration bits".to_string(),
            needed: bits,
            cap: budgets.free_bits,
        });
    }
    for n in 1..=max_worlds {
        let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
        for rel_code in 0u64..(1u64 << (n * n)) {
            let relation: Vec<u32> = (0..n)
                .map(|w| ((rel_code >> (w * n)) as u32) & full)
                .collect();
            if !frame.admits(&relation) {
                continue;
            }
            for assign_code in 0u64..(1u64 << (n * vars.len())) {
                let assignment: BTreeMap<String, u32> = vars
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v.clone(), ((assign_code >> (i * n)) as u32) & full))
                    .collect();
                let model = KripkeModel { worlds: n, relation: relation.clone(), assignment };
                let sat = eval_mask(&model, goal, full);
                if sat != full {
                    let world = (sat ^ full).trailing_zeros() as usize;
                    debug_assert!(!forces(&model, world, goal));
                    return Ok(BoundedVerdict::Countermodel { model, world });
                }
            }
        }
    }
    Ok(BoundedVerdict::NoCountermodelUpTo(max_worlds))
}

#[derive(Clone, Debug)]
pub struct CrossEntry {
    pub formula: Formula,
    pub level_valid: bool,
    pub kripke_refuted: bool,
}

impl CrossEntry {
    pub fn agree(&self) -> bool {
        self.level_valid != self.kripke_refuted
    }
}

#[derive(Clone, Debug)]
pub struct CrossReport {
    pub system: SystemName,
    pub frame: FrameClass,
    pub entries: Vec<CrossEntry>,
}

impl CrossReport {
    pub fn disagreements(&self) -> Vec<&CrossEntry> {
        self.entries.iter().filter(|e| !e.agree()).collect()
    }
}

/// Runs the level-valuation engine for `system` plus N against the Kripke
/// oracle on its matching frame class, formula by formula.
pub fn cross_validate(
    system: SystemName,
    corpus: &[Formula],
    max_worlds: usize,
    budgets: &Budgets,
) -> Result<CrossReport> {
    let frame = frame_for(system).ok_or_else(|| {
        Error::DomainMismatch(format!("no frame class is associated with {system}"))
    })?;
    let engine = Engine::Nmatrix(matrix_for(system));
    let mut entries = Vec::with_capacity(corpus.len());
    for f in corpus {
        let level_valid = check_validity_n(&engine, f, budgets)?.verdict.is_valid();
        let kripke_refuted = kripke_check(frame, f, max_worlds, budgets)?.found();
        entries.push(CrossEntry {
            formula: f.clone(),
            level_valid,
            kripke_refuted,
        });
    }
    Ok(CrossReport { system, frame, entries })
}

/// Twenty fixed unimodal formulas over p,q: ten theorems of the weakest
/// N-closed system here (hence of all three), and ten failures of the
/// strongest (hence of all three). The flag is the expected verdict.
pub const CURATED_FORMULAS: [(&str, bool); 20] = [
    ("p -> p", true),
    ("#(p -> p)", true),
    ("##(p -> p)", true),
    ("#(p -> (q -> p))", true),
    ("#(p -> q) -> (#p -> #q)", true),
    ("#((p -> q) -> (p -> q))", true),
    ("#(~p -> (p -> q))", true),
    ("#q -> (#(q -> p) -> #p)", true),
    ("#(p -> (q -> p)) -> (#p -> #(q -> p))", true),
    ("#((~q -> ~p) -> (p -> q))", true),
    ("p -> #p", false),
    ("#(~p -> ~p) -> p", false),
    ("#(p -> q) -> (p -> #q)", false),
    ("(#p -> #q) -> #(p -> q)", false),
    ("#(#p -> p) -> #p", false),
    ("~#p -> #~#p", false),
    ("#(p -> q) -> (#q -> #p)", false),
    ("~#p -> #~p", false),
    ("(#p -> #q) -> (p -> q)", false),
    ("#(p | q) -> (#p | #q)", false),
];

pub fn curated_formulas() -> Vec<(Formula, bool)> {
    CURATED_FORMULAS
        .iter()
        .map(|(s, expected)| (parse(s, Signature::Unimodal).expect("curated formulas parse"), *expected))
        .collect()
}
