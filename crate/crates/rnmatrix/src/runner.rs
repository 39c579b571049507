//! Batch execution and machine-readable records. A corpus run produces one
//! JSON object per input line, in input order; witnesses carry the full
//! closure-to-snapshot mapping so a later `replay` can re-check them without
//! re-running the search.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::formula::{Closure, Signature};
use crate::levels::{check_validity_n, compute_levels};
use crate::matrix::{matrix_for, SystemName};
use crate::parser::parse;
use crate::restriction::{restrictions_hold, Engine, Restriction, RnSystem};
use crate::valuation::{Valuation, Verdict, WitnessEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemanticsKind {
    Nmatrix,
    Rn,
}

impl fmt::Display for SemanticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticsKind::Nmatrix => write!(f, "nmatrix"),
            SemanticsKind::Rn => write!(f, "rn"),
        }
    }
}

impl FromStr for SemanticsKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<SemanticsKind> {
        match s {
            "nmatrix" => Ok(SemanticsKind::Nmatrix),
            "rn" => Ok(SemanticsKind::Rn),
            other => Err(Error::UnknownSystem(format!("semantics {other}"))),
        }
    }
}

/// The restriction set that mirrors a refined matrix over the base M (or,
/// for the bimodal system, over M2 with no rows active by default).
pub fn default_restrictions(system: SystemName) -> Vec<Restriction> {
    match system {
        SystemName::M | SystemName::M2 => vec![],
        SystemName::Mk => vec![Restriction::K],
        SystemName::Mkt => vec![Restriction::K, Restriction::T],
        SystemName::Mkt4 => vec![Restriction::K, Restriction::T, Restriction::Four],
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub system: SystemName,
    pub semantics: SemanticsKind,
    /// Overrides the system-derived restriction set when present.
    pub restrictions: Option<Vec<Restriction>>,
    /// Adds the necessitation fixpoint on top of the chosen semantics.
    pub necessitation: bool,
    pub budgets: Budgets,
}

impl RunConfig {
    pub fn new(system: SystemName, semantics: SemanticsKind) -> RunConfig {
        RunConfig {
            system,
            semantics,
            restrictions: None,
            necessitation: false,
            budgets: Budgets::default(),
        }
    }

    pub fn signature(&self) -> Signature {
        if self.system == SystemName::M2 {
            Signature::Bimodal
        } else {
            Signature::Unimodal
        }
    }

    pub fn resolved_restrictions(&self) -> Vec<Restriction> {
        self.restrictions
            .clone()
            .unwrap_or_else(|| default_restrictions(self.system))
    }

    /// RN semantics always layers restrictions over the base matrix of the
    /// signature (M, or M2 in the bimodal case).
    pub fn engine(&self) -> Result<Engine> {
        match self.semantics {
            SemanticsKind::Nmatrix => Ok(Engine::Nmatrix(matrix_for(self.system))),
            SemanticsKind::Rn => {
                let base = if self.system == SystemName::M2 {
                    SystemName::M2
                } else {
                    SystemName::M
                };
                Ok(Engine::Rn(RnSystem::new(
                    matrix_for(base),
                    self.resolved_restrictions(),
                )?))
            }
        }
    }

    pub fn semantics_tag(&self) -> String {
        if self.necessitation {
            format!("{}+N", self.semantics)
        } else {
            self.semantics.to_string()
        }
    }
}

pub const STATUS_VALID: &str = "valid";
pub const STATUS_COUNTERMODEL: &str = "countermodel";
pub const STATUS_ERROR: &str = "error";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResultRecord {
    pub formula: String,
    pub system: String,
    pub semantics: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restrictions: Option<Vec<String>>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<WitnessEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fragment: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_us: u64,
}

impl ResultRecord {
    pub fn is_valid(&self) -> bool {
        self.status == STATUS_VALID
    }
}

fn witness_of(v: &Valuation) -> Vec<WitnessEntry> {
    v.witness_entries()
}

/// Checks a single input line under the configuration. Parse and engine
/// errors land in the record's error field rather than aborting the run.
pub fn check_one(cfg: &RunConfig, input: &str) -> ResultRecord {
    let start = Instant::now();
    let mut record = ResultRecord {
        formula: input.trim().to_string(),
        system: cfg.system.to_string(),
        semantics: cfg.semantics_tag(),
        restrictions: match cfg.semantics {
            SemanticsKind::Rn => Some(
                cfg.resolved_restrictions()
                    .iter()
                    .map(|r| r.to_string())
                    .collect(),
            ),
            SemanticsKind::Nmatrix => None,
        },
        status: STATUS_ERROR.to_string(),
        witness: None,
        fragment: None,
        error: None,
        elapsed_us: 0,
    };
    let outcome = (|| -> Result<()> {
        let goal = parse(&record.formula, cfg.signature())?;
        let engine = cfg.engine()?;
        let verdict = if cfg.necessitation {
            let out = check_validity_n(&engine, &goal, &cfg.budgets)?;
            record.fragment = Some(
                out.trace
                    .fragment()
                    .items()
                    .iter()
                    .map(|f| f.to_string())
                    .collect(),
            );
            out.verdict
        } else {
            engine.check_validity(&goal, cfg.budgets.free_bits)?
        };
        match verdict {
            Verdict::Valid => record.status = STATUS_VALID.to_string(),
            Verdict::Countermodel(v) => {
                record.status = STATUS_COUNTERMODEL.to_string();
                record.witness = Some(witness_of(&v));
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        record.status = STATUS_ERROR.to_string();
        record.error = Some(e.to_string());
    }
    record.elapsed_us = start.elapsed().as_micros() as u64;
    record
}

/// One record per line, in input order.
pub fn run_corpus<I>(cfg: &RunConfig, lines: I) -> Vec<ResultRecord>
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    lines
        .into_iter()
        .map(|line| check_one(cfg, line.as_ref()))
        .collect()
}

#[derive(Clone, Debug)]
pub struct ComparisonEntry {
    pub formula: String,
    pub nmatrix: ResultRecord,
    pub rn: ResultRecord,
}

impl ComparisonEntry {
    pub fn agree(&self) -> bool {
        self.nmatrix.status == self.rn.status
    }
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub system: SystemName,
    pub total: usize,
    pub disagreements: Vec<ComparisonEntry>,
    pub errors: usize,
}

/// Runs the refined matrix and its restriction-based counterpart on every
/// formula and collects the verdict mismatches.
pub fn compare_engines<I>(system: SystemName, budgets: &Budgets, lines: I) -> ComparisonReport
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    let mut nm_cfg = RunConfig::new(system, SemanticsKind::Nmatrix);
    nm_cfg.budgets = budgets.clone();
    let mut rn_cfg = RunConfig::new(system, SemanticsKind::Rn);
    rn_cfg.budgets = budgets.clone();
    let mut total = 0;
    let mut errors = 0;
    let mut disagreements = Vec::new();
    for line in lines {
        total += 1;
        let nm = check_one(&nm_cfg, line.as_ref());
        let rn = check_one(&rn_cfg, line.as_ref());
        if nm.status == STATUS_ERROR || rn.status == STATUS_ERROR {
            errors += 1;
        }
        if nm.status != rn.status {
            disagreements.push(ComparisonEntry {
                formula: line.as_ref().to_string(),
                nmatrix: nm,
                rn,
            });
        }
    }
    ComparisonReport {
        system,
        total,
        disagreements,
        errors,
    }
}

#[derive(Clone, Debug)]
pub struct ReplayOutcome {
    pub index: usize,
    pub ok: bool,
    pub detail: String,
}

fn rebuild_valuation(
    entries: &[WitnessEntry],
    signature: Signature,
) -> Result<(Arc<Closure>, Valuation)> {
    let mut formulas = Vec::with_capacity(entries.len());
    for e in entries {
        formulas.push(parse(&e.formula, signature)?);
    }
    let closure = Closure::of_all(&formulas);
    if closure.len() != entries.len() {
        return Err(Error::DomainMismatch(
            "witness entries do not form a closed formula set".to_string(),
        ));
    }
    let mut values = vec![None; closure.len()];
    for (e, f) in entries.iter().zip(&formulas) {
        let pos = closure.position(f).expect("closure keeps its inputs");
        values[pos] = Some(e.snapshot);
    }
    let values: Vec<_> = values
        .into_iter()
        .map(|v| v.ok_or_else(|| Error::DomainMismatch("witness misses a closure member".into())))
        .collect::<Result<_>>()?;
    Ok((closure.clone(), Valuation::new(closure, values)))
}

fn replay_record(record: &ResultRecord, budgets: &Budgets) -> Result<()> {
    let fail = |msg: &str| Err(Error::DomainMismatch(msg.to_string()));
    if record.status == STATUS_ERROR {
        return Ok(());
    }
    let witness_expected = record.status == STATUS_COUNTERMODEL;
    if record.witness.is_some() != witness_expected {
        return fail("witness must be present exactly for countermodel records");
    }
    if !witness_expected {
        return Ok(());
    }
    let system: SystemName = record.system.parse()?;
    let signature = if system == SystemName::M2 {
        Signature::Bimodal
    } else {
        Signature::Unimodal
    };
    let goal = parse(&record.formula, signature)?;
    let entries = record.witness.as_ref().unwrap();
    let (closure, valuation) = rebuild_valuation(entries, signature)?;
    let goal_pos = match closure.position(&goal) {
        Some(p) => p,
        None => return fail("the witness does not cover the goal"),
    };
    if valuation.snapshot_at(goal_pos).is_designated() {
        return fail("the recorded witness designates the goal");
    }

    let semantics: SemanticsKind = record
        .semantics
        .strip_suffix("+N")
        .unwrap_or(&record.semantics)
        .parse()?;
    let engine = match semantics {
        SemanticsKind::Nmatrix => Engine::Nmatrix(matrix_for(system)),
        SemanticsKind::Rn => {
            let base = if system == SystemName::M2 {
                SystemName::M2
            } else {
                SystemName::M
            };
            let restrictions = record
                .restrictions
                .as_deref()
                .unwrap_or(&[])
                .iter()
                .map(|s| s.parse::<Restriction>())
                .collect::<Result<Vec<_>>>()?;
            Engine::Rn(RnSystem::new(matrix_for(base), restrictions)?)
        }
    };
    if !valuation.is_legal(engine.base()) {
        return fail("the recorded witness is not a legal valuation");
    }
    if let Engine::Rn(sys) = &engine {
        if !restrictions_hold(sys, &valuation) {
            return fail("the recorded witness violates a restriction");
        }
    }
    if record.semantics.ends_with("+N") {
        let fragment_items = match &record.fragment {
            Some(items) => items,
            None => return fail("a level run must record its fragment"),
        };
        let fragment_formulas = fragment_items
            .iter()
            .map(|s| parse(s, signature))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let fragment = Closure::of_all(&fragment_formulas);
        let trace = compute_levels(&engine, &fragment, budgets.level_free_bits)?;
        let values: Vec<_> = (0..closure.len())
            .map(|i| valuation.snapshot_at(i))
            .collect();
        let survived = trace.final_survivors().any(|v| {
            closure.len() == fragment.len()
                && (0..fragment.len()).all(|i| v.snapshot_at(i) == values[i])
        });
        if !survived {
            return fail("the recorded witness is not a surviving level valuation");
        }
    }
    Ok(())
}

/// Re-checks every countermodel witness in a record stream: legality,
/// restriction conformance, goal refutation, and (for level runs) survival
/// of the fixpoint filtration.
pub fn replay(records: &[ResultRecord], budgets: &Budgets) -> Vec<ReplayOutcome> {
    records
        .iter()
        .enumerate()
        .map(|(index, r)| match replay_record(r, budgets) {
            Ok(()) => ReplayOutcome {
                index,
                ok: true,
                detail: "ok".to_string(),
            },
            Err(e) => ReplayOutcome {
                index,
                ok: false,
                detail: e.to_string(),
            },
        })
        .collect()
}
