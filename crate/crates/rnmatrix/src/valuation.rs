//! Valuation enumeration over a subformula closure and the local (level-0)
//! decision procedures.
//!
//! A valuation assigns every closure member a snapshot: variables range over
//! the whole value set, each compound picks from the cell its children's
//! snapshots select. First coordinates are therefore computed, never chosen;
//! the free choices are the remaining coordinates. The stream is ordered
//! deterministically: choices are resolved lowest closure index first, with
//! smaller snapshots before larger ones.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Closure, Formula, Node, Signature};
use crate::matrix::{Connective, MatrixSpec, Snapshot};

#[derive(Clone, Debug)]
pub struct Valuation {
    closure: Arc<Closure>,
    values: Vec<Snapshot>,
}

/// One row of a serialized countermodel: the full closure-to-snapshot map is
/// written out, one entry per closure member.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessEntry {
    pub formula: String,
    pub snapshot: Snapshot,
}

impl Valuation {
    pub(crate) fn new(closure: Arc<Closure>, values: Vec<Snapshot>) -> Valuation {
        debug_assert_eq!(closure.len(), values.len());
        Valuation { closure, values }
    }

    pub fn closure(&self) -> &Arc<Closure> {
        &self.closure
    }

    pub fn snapshot_at(&self, i: usize) -> Snapshot {
        self.values[i]
    }

    pub fn snapshot(&self, f: &Formula) -> Option<Snapshot> {
        self.closure.position(f).map(|i| self.values[i])
    }

    pub fn designates(&self, f: &Formula) -> Option<bool> {
        self.snapshot(f).map(|z| z.is_designated())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Formula, Snapshot)> {
        self.closure
            .items()
            .iter()
            .zip(self.values.iter().copied())
    }

    pub fn witness_entries(&self) -> Vec<WitnessEntry> {
        self.entries()
            .map(|(f, z)| WitnessEntry {
                formula: f.to_string(),
                snapshot: z,
            })
            .collect()
    }

    /// True when every variable snapshot lies in the value set and every
    /// compound's snapshot lies in the cell selected by its children.
    pub fn is_legal(&self, m: &MatrixSpec) -> bool {
        self.closure.nodes().iter().enumerate().all(|(i, node)| {
            let z = self.values[i];
            match node {
                Node::Var(_) => m.contains(z),
                Node::Neg(a) => m
                    .apply_multiop(Connective::Neg, &[self.values[*a]])
                    .map(|cell| cell.contains(&z))
                    .unwrap_or(false),
                Node::Mod(ix, a) => m
                    .apply_multiop(Connective::Mod(*ix), &[self.values[*a]])
                    .map(|cell| cell.contains(&z))
                    .unwrap_or(false),
                Node::Imp(a, b) => m
                    .apply_multiop(Connective::Imp, &[self.values[*a], self.values[*b]])
                    .map(|cell| cell.contains(&z))
                    .unwrap_or(false),
            }
        })
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (formula, z)) in self.entries().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "v({formula}) = {z}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Valid,
    Countermodel(Valuation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn witness(&self) -> Option<&Valuation> {
        match self {
            Verdict::Valid => None,
            Verdict::Countermodel(v) => Some(v),
        }
    }
}

/// Upper bound on the log2 of the stream size: variables contribute
/// log2(|values|), compounds log2 of the widest cell of their connective.
pub fn free_bits_estimate(m: &MatrixSpec, closure: &Closure) -> f64 {
    let var_bits = (m.values().len() as f64).log2();
    // widest cell per connective kind
    let widest = |conn: Connective| -> f64 {
        let mut max = 1usize;
        for &z in m.values() {
            match conn {
                Connective::Imp => {
                    for &w in m.values() {
                        max = max.max(m.apply_multiop(conn, &[z, w]).map(|c| c.len()).unwrap_or(1));
                    }
                }
                _ => {
                    max = max.max(m.apply_multiop(conn, &[z]).map(|c| c.len()).unwrap_or(1));
                }
            }
        }
        (max as f64).log2()
    };
    let neg_bits = widest(Connective::Neg);
    let imp_bits = widest(Connective::Imp);
    let mod1_bits = widest(Connective::Mod(crate::formula::ModalIndex::One));
    let mod2_bits = if m.is_bimodal() {
        widest(Connective::Mod(crate::formula::ModalIndex::Two))
    } else {
        0.0
    };
    closure
        .nodes()
        .iter()
        .map(|n| match n {
            Node::Var(_) => var_bits,
            Node::Neg(_) => neg_bits,
            Node::Imp(_, _) => imp_bits,
            Node::Mod(crate::formula::ModalIndex::One, _) => mod1_bits,
            Node::Mod(crate::formula::ModalIndex::Two, _) => mod2_bits,
        })
        .sum()
}

/// Depth-first stream of all legal valuations on `closure`.
pub struct ValuationIter<'a> {
    matrix: &'a MatrixSpec,
    closure: Arc<Closure>,
    options: Vec<Vec<Snapshot>>,
    choice: Vec<usize>,
    current: Vec<Snapshot>,
    exhausted: bool,
    started: bool,
}

impl<'a> ValuationIter<'a> {
    fn options_for(&self, i: usize) -> Vec<Snapshot> {
        match self.closure.node(i) {
            Node::Var(_) => self.matrix.values().to_vec(),
            Node::Neg(a) => self
                .matrix
                .apply_multiop(Connective::Neg, &[self.current[*a]])
                .unwrap()
                .to_vec(),
            Node::Mod(ix, a) => self
                .matrix
                .apply_multiop(Connective::Mod(*ix), &[self.current[*a]])
                .unwrap()
                .to_vec(),
            Node::Imp(a, b) => self
                .matrix
                .apply_multiop(Connective::Imp, &[self.current[*a], self.current[*b]])
                .unwrap()
                .to_vec(),
        }
    }

    /// Recomputes options and resets choices for every level from `from` on.
    fn refill(&mut self, from: usize) {
        for i in from..self.closure.len() {
            let opts = self.options_for(i);
            self.choice[i] = 0;
            self.current[i] = opts[0];
            self.options[i] = opts;
        }
    }
}

impl<'a> Iterator for ValuationIter<'a> {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        if self.exhausted {
            return None;
        }
        if self.closure.is_empty() {
            self.exhausted = true;
            return Some(Valuation::new(self.closure.clone(), Vec::new()));
        }
        if !self.started {
            self.started = true;
            self.refill(0);
            return Some(Valuation::new(self.closure.clone(), self.current.clone()));
        }
        // odometer step: bump the deepest level that still has options
        let n = self.closure.len();
        let mut i = n;
        loop {
            if i == 0 {
                self.exhausted = true;
                return None;
            }
            i -= 1;
            if self.choice[i] + 1 < self.options[i].len() {
                self.choice[i] += 1;
                self.current[i] = self.options[i][self.choice[i]];
                self.refill(i + 1);
                return Some(Valuation::new(self.closure.clone(), self.current.clone()));
            }
        }
    }
}

pub fn enumerate_valuations<'a>(
    m: &'a MatrixSpec,
    closure: &Arc<Closure>,
    free_bits_cap: f64,
) -> Result<ValuationIter<'a>> {
    if closure.signature() == Signature::Bimodal && !m.is_bimodal() {
        return Err(Error::SignatureMismatch {
            context: format!("enumerate_valuations over {}", m.name()),
        });
    }
    let needed = free_bits_estimate(m, closure);
    if needed > free_bits_cap {
        return Err(Error::BudgetExceeded {
            resource: "valuation free bits".into(),
            needed,
            cap: free_bits_cap,
        });
    }
    let n = closure.len();
    Ok(ValuationIter {
        matrix: m,
        closure: closure.clone(),
        options: vec![Vec::new(); n],
        choice: vec![0; n],
        current: vec![Snapshot::pair(false, false); n],
        exhausted: false,
        started: false,
    })
}

/// Validity over all legal valuations on the goal's closure: the first
/// valuation that fails to designate the goal is returned as countermodel.
pub fn check_validity(m: &MatrixSpec, goal: &Formula, free_bits_cap: f64) -> Result<Verdict> {
    let closure = Closure::of(goal);
    let goal_ix = closure.len() - 1;
    for v in enumerate_valuations(m, &closure, free_bits_cap)? {
        if !v.snapshot_at(goal_ix).is_designated() {
            return Ok(Verdict::Countermodel(v));
        }
    }
    Ok(Verdict::Valid)
}

/// Local consequence over the union closure of premises and goal: every
/// valuation designating all premises must designate the goal.
pub fn check_consequence_local(
    m: &MatrixSpec,
    premises: &[Formula],
    goal: &Formula,
    free_bits_cap: f64,
) -> Result<Verdict> {
    let mut roots = premises.to_vec();
    roots.push(goal.clone());
    let closure = Closure::of_all(&roots);
    let premise_ix: Vec<usize> = premises
        .iter()
        .map(|p| closure.position(p).unwrap())
        .collect();
    let goal_ix = closure.position(goal).unwrap();
    for v in enumerate_valuations(m, &closure, free_bits_cap)? {
        if premise_ix.iter().all(|&i| v.snapshot_at(i).is_designated())
            && !v.snapshot_at(goal_ix).is_designated()
        {
            return Ok(Verdict::Countermodel(v));
        }
    }
    Ok(Verdict::Valid)
}

/// Searches for a legal valuation that refutes `goal` while agreeing with
/// `partial` (a list of formula/snapshot pins). Used to confirm that
/// published refutations extend to full countermodels.
pub fn refutation_extending(
    m: &MatrixSpec,
    goal: &Formula,
    partial: &[(Formula, Snapshot)],
    free_bits_cap: f64,
) -> Result<Option<Valuation>> {
    let closure = Closure::of(goal);
    let goal_ix = closure.len() - 1;
    let pins: Vec<(usize, Snapshot)> = partial
        .iter()
        .map(|(f, z)| {
            closure
                .position(f)
                .map(|i| (i, *z))
                .ok_or_else(|| Error::DomainMismatch(format!("{f} is not in the goal's closure")))
        })
        .collect::<Result<_>>()?;
    for v in enumerate_valuations(m, &closure, free_bits_cap)? {
        if v.snapshot_at(goal_ix).is_designated() {
            continue;
        }
        if pins.iter().all(|&(i, z)| v.snapshot_at(i) == z) {
            return Ok(Some(v));
        }
    }
    Ok(None)
}
