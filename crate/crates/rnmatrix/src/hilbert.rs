//! Hilbert calculi over the unimodal signature: axiom schemas, a proof
//! checker with line-level diagnostics, and a bounded breadth-first proof
//! search. The N rule only exists in the N-suffixed systems, and only in
//! premise-free derivations; consequence from premises in those systems is
//! expressed by proving an unfolded implication whose antecedents are
//! premises.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rustc_hash::FxHashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::formula::{Closure, Formula, ModalIndex, Signature, Substitution};
use crate::parser::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SchemaName {
    Ax1,
    Ax2,
    Ax3,
    K,
    T,
    Four,
    Gl,
}

impl fmt::Display for SchemaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SchemaName::Ax1 => "Ax1",
            SchemaName::Ax2 => "Ax2",
            SchemaName::Ax3 => "Ax3",
            SchemaName::K => "K",
            SchemaName::T => "T",
            SchemaName::Four => "4",
            SchemaName::Gl => "GL",
        };
        write!(f, "{s}")
    }
}

impl FromStr for SchemaName {
    type Err = Error;
    fn from_str(s: &str) -> Result<SchemaName> {
        match s {
            "Ax1" => Ok(SchemaName::Ax1),
            "Ax2" => Ok(SchemaName::Ax2),
            "Ax3" => Ok(SchemaName::Ax3),
            "K" => Ok(SchemaName::K),
            "T" => Ok(SchemaName::T),
            "4" => Ok(SchemaName::Four),
            "GL" => Ok(SchemaName::Gl),
            other => Err(Error::UnknownAxiom(other.to_string())),
        }
    }
}

/// The schema as a formula over the metavariables A, B, C. Metavariable
/// names are uppercase, which object-level variables can never be.
pub fn template(s: SchemaName) -> Formula {
    let a = || Formula::var("A");
    let b = || Formula::var("B");
    let c = || Formula::var("C");
    match s {
        SchemaName::Ax1 => Formula::imp(a(), Formula::imp(b(), a())),
        SchemaName::Ax2 => Formula::imp(
            Formula::imp(a(), Formula::imp(b(), c())),
            Formula::imp(Formula::imp(a(), b()), Formula::imp(a(), c())),
        ),
        SchemaName::Ax3 => Formula::imp(
            Formula::imp(Formula::neg(b()), Formula::neg(a())),
            Formula::imp(a(), b()),
        ),
        SchemaName::K => Formula::imp(
            Formula::mod1(Formula::imp(a(), b())),
            Formula::imp(Formula::mod1(a()), Formula::mod1(b())),
        ),
        SchemaName::T => Formula::imp(Formula::mod1(a()), a()),
        SchemaName::Four => {
            Formula::imp(Formula::mod1(a()), Formula::mod1(Formula::mod1(a())))
        }
        SchemaName::Gl => Formula::imp(
            Formula::mod1(Formula::imp(Formula::mod1(a()), a())),
            Formula::mod1(a()),
        ),
    }
}

fn match_template(t: &Formula, f: &Formula, binding: &mut BTreeMap<String, Formula>) -> bool {
    match (t, f) {
        (Formula::Var(name), _) => match binding.get(name) {
            Some(bound) => bound == f,
            None => {
                binding.insert(name.clone(), f.clone());
                true
            }
        },
        (Formula::Neg(x), Formula::Neg(y)) => match_template(x, y, binding),
        (Formula::Imp(x1, y1), Formula::Imp(x2, y2)) => {
            match_template(x1, x2, binding) && match_template(y1, y2, binding)
        }
        (Formula::Mod(i, x), Formula::Mod(j, y)) => i == j && match_template(x, y, binding),
        _ => false,
    }
}

/// One-sided matching: a substitution sending the schema template to `f`,
/// with consistent bindings across repeated metavariables.
pub fn match_axiom(f: &Formula, s: SchemaName) -> Option<Substitution> {
    let mut binding = BTreeMap::new();
    if match_template(&template(s), f, &mut binding) {
        Some(binding.into_iter().collect())
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofSystem {
    label: String,
    schemas: Vec<SchemaName>,
    necessitation: bool,
}

impl ProofSystem {
    pub fn schemas(&self) -> &[SchemaName] {
        &self.schemas
    }

    pub fn has_necessitation(&self) -> bool {
        self.necessitation
    }
}

impl fmt::Display for ProofSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

impl FromStr for ProofSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<ProofSystem> {
        let (base, necessitation) = match s.strip_suffix('N') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let mut schemas = vec![SchemaName::Ax1, SchemaName::Ax2, SchemaName::Ax3];
        match base {
            "H" => {}
            "HK" => schemas.push(SchemaName::K),
            "HKT" => schemas.extend([SchemaName::K, SchemaName::T]),
            "HKT4" => schemas.extend([SchemaName::K, SchemaName::T, SchemaName::Four]),
            _ => return Err(Error::UnknownSystem(s.to_string())),
        }
        Ok(ProofSystem {
            label: s.to_string(),
            schemas,
            necessitation,
        })
    }
}

/// Line references are 1-based positions within the proof.
#[derive(Clone, Debug, PartialEq)]
pub enum Justification {
    Premise,
    Axiom(SchemaName, Substitution),
    Mp(usize, usize),
    N(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

#[derive(Serialize, Deserialize)]
struct WireLine {
    formula: String,
    rule: String,
    #[serde(default)]
    refs: Vec<usize>,
}

impl Proof {
    pub fn to_json(&self) -> String {
        let wire: Vec<WireLine> = self
            .lines
            .iter()
            .map(|l| {
                let (rule, refs) = match &l.justification {
                    Justification::Premise => ("premise".to_string(), vec![]),
                    Justification::Axiom(name, _) => (name.to_string(), vec![]),
                    Justification::Mp(i, j) => ("MP".to_string(), vec![*i, *j]),
                    Justification::N(i) => ("N".to_string(), vec![*i]),
                };
                WireLine {
                    formula: l.formula.to_string(),
                    rule,
                    refs,
                }
            })
            .collect();
        serde_json::to_string_pretty(&wire).expect("wire lines serialize")
    }

    pub fn from_json(text: &str) -> Result<Proof> {
        let wire: Vec<WireLine> = serde_json::from_str(text)?;
        let mut lines = Vec::with_capacity(wire.len());
        for (k, w) in wire.iter().enumerate() {
            let n = k + 1;
            let formula = parse(&w.formula, Signature::Unimodal)?;
            let arity_error = |want: usize| {
                Error::DomainMismatch(format!(
                    "proof line {n}: rule {} takes {want} reference(s), got {}",
                    w.rule,
                    w.refs.len()
                ))
            };
            let justification = match w.rule.as_str() {
                "premise" => {
                    if !w.refs.is_empty() {
                        return Err(arity_error(0));
                    }
                    Justification::Premise
                }
                "MP" => {
                    if w.refs.len() != 2 {
                        return Err(arity_error(2));
                    }
                    Justification::Mp(w.refs[0], w.refs[1])
                }
                "N" => {
                    if w.refs.len() != 1 {
                        return Err(arity_error(1));
                    }
                    Justification::N(w.refs[0])
                }
                axiom => {
                    if !w.refs.is_empty() {
                        return Err(arity_error(0));
                    }
                    let name = axiom.parse::<SchemaName>()?;
                    let subst = match_axiom(&formula, name).unwrap_or_default();
                    Justification::Axiom(name, subst)
                }
            };
            lines.push(ProofLine { formula, justification });
        }
        Ok(Proof { lines })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineDiagnostic {
    /// 1-based line number; 0 marks a defect of the proof as a whole.
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for LineDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.reason)
        } else {
            write!(f, "line {}: {}", self.line, self.reason)
        }
    }
}

/// Verifies every line and the conclusion. In N-systems with premises the
/// conclusion must peel down to the goal through antecedents drawn from the
/// premises.
pub fn check_proof(
    system: &ProofSystem,
    proof: &Proof,
    premises: &[Formula],
    goal: &Formula,
) -> std::result::Result<(), LineDiagnostic> {
    if proof.lines.is_empty() {
        return Err(LineDiagnostic {
            line: 0,
            reason: "the proof has no lines".to_string(),
        });
    }
    for (k, line) in proof.lines.iter().enumerate() {
        let n = k + 1;
        let bad = |reason: String| LineDiagnostic { line: n, reason };
        let deref = |r: usize| -> std::result::Result<&Formula, LineDiagnostic> {
            if r == 0 || r >= n {
                Err(bad(format!("reference {r} does not precede line {n}")))
            } else {
                Ok(&proof.lines[r - 1].formula)
            }
        };
        match &line.justification {
            Justification::Premise => {
                if system.necessitation {
                    return Err(bad(
                        "premise lines are not allowed in N-systems; prove an unfolded implication instead"
                            .to_string(),
                    ));
                }
                if !premises.contains(&line.formula) {
                    return Err(bad("formula is not among the premises".to_string()));
                }
            }
            Justification::Axiom(name, _) => {
                if !system.schemas.contains(name) {
                    return Err(bad(format!("axiom {name} is not available in {system}")));
                }
                if match_axiom(&line.formula, *name).is_none() {
                    return Err(bad(format!("formula is not an instance of {name}")));
                }
            }
            Justification::Mp(i, j) => {
                let fi = deref(*i)?;
                let fj = deref(*j)?;
                let via_i = *fi == Formula::imp(fj.clone(), line.formula.clone());
                let via_j = *fj == Formula::imp(fi.clone(), line.formula.clone());
                if !via_i && !via_j {
                    return Err(bad(format!(
                        "MP on lines {i} and {j} does not yield this formula"
                    )));
                }
            }
            Justification::N(i) => {
                if !system.necessitation {
                    return Err(bad(format!("rule N not available in {system}")));
                }
                let fi = deref(*i)?;
                if line.formula != Formula::mod1(fi.clone()) {
                    return Err(bad(format!(
                        "this line is not the necessitation of line {i}"
                    )));
                }
            }
        }
    }
    let last = proof.conclusion().unwrap();
    let final_line = proof.lines.len();
    if system.necessitation && !premises.is_empty() {
        let mut cur = last;
        loop {
            if cur == goal {
                return Ok(());
            }
            match cur {
                Formula::Imp(a, b) if premises.contains(a) => cur = b,
                _ => {
                    return Err(LineDiagnostic {
                        line: final_line,
                        reason: format!(
                            "the final line does not unfold to the goal {goal} over the premises"
                        ),
                    })
                }
            }
        }
    }
    if last == goal {
        Ok(())
    } else {
        Err(LineDiagnostic {
            line: final_line,
            reason: format!("the final line is {last}, not the goal {goal}"),
        })
    }
}

#[derive(Clone, Debug)]
enum SearchJust {
    Axiom(SchemaName),
    Mp(usize, usize),
    N(usize),
}

/// Builds a schema instance without going through a `Substitution`: the
/// template's metavariables are looked up positionally in `picks`. This is
/// the search's hot loop, so it avoids the map allocations.
fn instantiate(t: &Formula, metas: &[&str], picks: &[usize], closure: &Closure) -> Formula {
    match t {
        Formula::Var(name) => {
            let k = metas
                .iter()
                .position(|m| *m == name.as_str())
                .expect("templates only contain their own metavariables");
            closure.formula(picks[k]).clone()
        }
        Formula::Neg(a) => Formula::neg(instantiate(a, metas, picks, closure)),
        Formula::Imp(a, b) => Formula::imp(
            instantiate(a, metas, picks, closure),
            instantiate(b, metas, picks, closure),
        ),
        Formula::Mod(ix, a) => Formula::Mod(*ix, Box::new(instantiate(a, metas, picks, closure))),
    }
}

struct Fact {
    formula: Formula,
    just: SearchJust,
}

fn metavariables(s: SchemaName) -> &'static [&'static str] {
    match s {
        SchemaName::Ax2 => &["A", "B", "C"],
        SchemaName::Ax1 | SchemaName::Ax3 | SchemaName::K => &["A", "B"],
        SchemaName::T | SchemaName::Four | SchemaName::Gl => &["A"],
    }
}

/// Breadth-first saturation. Depth 1 holds the axiom instances whose
/// metavariables range over the goal's subformula closure; each later depth
/// adds every MP (and, in N-systems, N) conclusion not yet known. N is only
/// applied when the boxed formula occurs in the goal's closure, which keeps
/// the fact universe finite.
pub fn search_proof(
    system: &ProofSystem,
    goal: &Formula,
    depth: usize,
    budgets: &Budgets,
) -> Result<Option<Proof>> {
    if depth > budgets.proof_depth_cap {
        return Err(Error::BudgetExceeded {
            resource: "proof search depth".to_string(),
            needed: depth as f64,
            cap: budgets.proof_depth_cap as f64,
        });
    }
    let closure = Closure::of(goal);
    // the N-rule can only land on boxes the goal mentions
    let boxed_targets: Vec<(&Formula, &Formula)> = closure
        .items()
        .iter()
        .filter_map(|f| match f {
            Formula::Mod(ModalIndex::One, body) => Some((body.as_ref(), f)),
            _ => None,
        })
        .collect();
    let mut facts: Vec<Fact> = Vec::new();
    let mut index: FxHashMap<Formula, usize> = FxHashMap::default();
    // implications among known facts, keyed by antecedent
    let mut by_antecedent: FxHashMap<Formula, Vec<usize>> = FxHashMap::default();

    let mut level: Vec<(Formula, SearchJust)> = Vec::new();
    for &schema in &system.schemas {
        let metas = metavariables(schema);
        let t = template(schema);
        let mut picks = vec![0usize; metas.len()];
        loop {
            level.push((
                instantiate(&t, metas, &picks, &closure),
                SearchJust::Axiom(schema),
            ));
            let mut k = picks.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                picks[k] += 1;
                if picks[k] < closure.len() {
                    break;
                }
                picks[k] = 0;
                if k == 0 {
                    picks.clear();
                    break;
                }
            }
            if picks.is_empty() {
                break;
            }
        }
    }

    let mut last_added = 0usize;
    for current_depth in 1..=depth {
        if current_depth > 1 {
            // conclusions reachable from the facts added last round
            let frontier_start = facts.len() - last_added;
            level = Vec::new();
            let frontier: Vec<usize> = (frontier_start..facts.len()).collect();
            for &i in &frontier {
                if let Formula::Imp(a, b) = &facts[i].formula {
                    if let Some(&j) = index.get(a.as_ref()) {
                        level.push((b.as_ref().clone(), SearchJust::Mp(i, j)));
                    }
                }
                if let Some(imps) = by_antecedent.get(&facts[i].formula) {
                    for &j in imps {
                        if let Formula::Imp(_, b) = &facts[j].formula {
                            level.push((b.as_ref().clone(), SearchJust::Mp(j, i)));
                        }
                    }
                }
                if system.necessitation {
                    for (body, boxed) in &boxed_targets {
                        if *body == &facts[i].formula {
                            level.push(((*boxed).clone(), SearchJust::N(i)));
                        }
                    }
                }
            }
        }
        if !index.is_empty() {
            level.retain(|(f, _)| !index.contains_key(f));
        }
        level.sort_by_cached_key(|(f, _)| f.printed());
        level.dedup_by(|a, b| a.0 == b.0);
        if level.is_empty() {
            return Ok(None);
        }
        if facts.len() + level.len() > budgets.proof_fact_cap {
            return Err(Error::BudgetExceeded {
                resource: "proof search facts".to_string(),
                needed: (facts.len() + level.len()) as f64,
                cap: budgets.proof_fact_cap as f64,
            });
        }
        last_added = level.len();
        for (f, just) in level.drain(..) {
            let ix = facts.len();
            if let Formula::Imp(a, _) = &f {
                by_antecedent.entry(a.as_ref().clone()).or_default().push(ix);
            }
            index.insert(f.clone(), ix);
            facts.push(Fact { formula: f, just });
        }
        if let Some(&goal_ix) = index.get(goal) {
            return Ok(Some(extract(&facts, goal_ix)));
        }
    }
    Ok(None)
}

fn extract(facts: &[Fact], goal_ix: usize) -> Proof {
    let mut needed = BTreeSet::new();
    let mut stack = vec![goal_ix];
    while let Some(i) = stack.pop() {
        if !needed.insert(i) {
            continue;
        }
        match &facts[i].just {
            SearchJust::Axiom(..) => {}
            SearchJust::Mp(a, b) => {
                stack.push(*a);
                stack.push(*b);
            }
            SearchJust::N(a) => stack.push(*a),
        }
    }
    // fact indices grow with derivation depth, so ascending order is a valid
    // line order
    let order: Vec<usize> = needed.into_iter().collect();
    let renumber: HashMap<usize, usize> = order
        .iter()
        .enumerate()
        .map(|(line0, &fact)| (fact, line0 + 1))
        .collect();
    let lines = order
        .iter()
        .map(|&i| {
            let justification = match &facts[i].just {
                SearchJust::Axiom(name) => {
                    let subst = match_axiom(&facts[i].formula, *name)
                        .expect("search facts instantiate their schema");
                    Justification::Axiom(*name, subst)
                }
                SearchJust::Mp(a, b) => Justification::Mp(renumber[a], renumber[b]),
                SearchJust::N(a) => Justification::N(renumber[a]),
            };
            ProofLine {
                formula: facts[i].formula.clone(),
                justification,
            }
        })
        .collect();
    Proof { lines }
}
