//! Level valuations: necessitation as a fixpoint filter. Starting from the
//! legal (possibly restricted) valuations over a fragment, each level keeps
//! the valuations that assign v2 = 1 to every formula designated by all
//! survivors of the previous level. Validity at the fixpoint captures the
//! N-closed system over that fragment.

use std::fmt;
use std::sync::Arc;

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::formula::{Closure, Formula};
use crate::restriction::Engine;
use crate::valuation::{Valuation, Verdict};

/// One filtration step. `survivors` are indices into the materialized base
/// set; `newly_forced` are fragment positions whose v2 = 1 requirement was
/// first applied at this level.
#[derive(Clone, Debug)]
pub struct Stage {
    pub level: usize,
    pub survivors: Vec<usize>,
    pub newly_forced: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LevelTrace {
    fragment: Arc<Closure>,
    f0: Vec<Valuation>,
    stages: Vec<Stage>,
}

impl LevelTrace {
    pub fn fragment(&self) -> &Arc<Closure> {
        &self.fragment
    }

    pub fn f0_len(&self) -> usize {
        self.f0.len()
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// The level at which the filtration stopped changing.
    pub fn fixpoint_level(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn survivors_at(&self, level: usize) -> impl Iterator<Item = &Valuation> {
        self.stages[level].survivors.iter().map(move |&i| &self.f0[i])
    }

    pub fn final_survivors(&self) -> impl Iterator<Item = &Valuation> {
        self.survivors_at(self.fixpoint_level())
    }

    pub fn newly_forced_at(&self, level: usize) -> Vec<&Formula> {
        self.stages[level]
            .newly_forced
            .iter()
            .map(|&i| self.fragment.formula(i))
            .collect()
    }

    /// The level whose filter first required v2(f) = 1, if any did.
    pub fn level_of_forcing(&self, f: &Formula) -> Option<usize> {
        let pos = self.fragment.position(f)?;
        self.stages
            .iter()
            .find(|s| s.newly_forced.contains(&pos))
            .map(|s| s.level)
    }

    /// A survivor at `level` that fails to designate `goal`, if one exists.
    pub fn refuter_at(&self, level: usize, goal: &Formula) -> Option<&Valuation> {
        let pos = self.fragment.position(goal)?;
        self.survivors_at(level)
            .find(|v| !v.snapshot_at(pos).is_designated())
    }
}

impl fmt::Display for LevelTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let listed: Vec<String> = self.fragment.items().iter().map(|x| x.to_string()).collect();
        writeln!(f, "fragment ({}): {}", self.fragment.len(), listed.join(", "))?;
        for s in &self.stages {
            write!(f, "level {}: {} valuations", s.level, s.survivors.len())?;
            if !s.newly_forced.is_empty() {
                let names: Vec<String> = s
                    .newly_forced
                    .iter()
                    .map(|&i| self.fragment.formula(i).to_string())
                    .collect();
                write!(f, "; newly forced: {}", names.join(", "))?;
            }
            writeln!(f)?;
        }
        write!(f, "fixpoint: F^{}", self.fixpoint_level())
    }
}

#[derive(Clone, Debug)]
pub struct LevelOutcome {
    pub goal: Formula,
    pub verdict: Verdict,
    pub trace: LevelTrace,
}

fn require_unimodal(engine: &Engine) -> Result<()> {
    if engine.base().is_bimodal() {
        return Err(Error::SignatureMismatch {
            context: "level valuations are defined over the unimodal signature".to_string(),
        });
    }
    Ok(())
}

/// Runs the filtration over `fragment` to its fixpoint.
pub fn compute_levels(
    engine: &Engine,
    fragment: &Arc<Closure>,
    free_bits: f64,
) -> Result<LevelTrace> {
    require_unimodal(engine)?;
    let f0: Vec<Valuation> = engine.valuations(fragment, free_bits)?.collect();
    let mut stages = vec![Stage {
        level: 0,
        survivors: (0..f0.len()).collect(),
        newly_forced: Vec::new(),
    }];
    let mut forced = vec![false; fragment.len()];
    loop {
        let current = &stages.last().unwrap().survivors;
        let mut newly = Vec::new();
        if !current.is_empty() {
            for (i, already) in forced.iter().enumerate() {
                if !already && current.iter().all(|&s| f0[s].snapshot_at(i).is_designated()) {
                    newly.push(i);
                }
            }
        }
        let next: Vec<usize> = current
            .iter()
            .copied()
            .filter(|&s| newly.iter().all(|&i| f0[s].snapshot_at(i).modal1()))
            .collect();
        if next.len() == current.len() && newly.is_empty() {
            break;
        }
        for &i in &newly {
            forced[i] = true;
        }
        stages.push(Stage {
            level: stages.len(),
            survivors: next,
            newly_forced: newly,
        });
    }
    Ok(LevelTrace { fragment: fragment.clone(), f0, stages })
}

/// The fragment used when the caller does not supply one: the goal's closure,
/// extended a bounded number of rounds with #B for every B the level-0 set
/// already forces to be designated.
pub fn default_fragment(
    engine: &Engine,
    goal: &Formula,
    budgets: &Budgets,
) -> Result<Arc<Closure>> {
    require_unimodal(engine)?;
    let mut fragment = Closure::of(goal);
    for _ in 0..budgets.fragment_modal_depth {
        let vals: Vec<Valuation> = engine
            .valuations(&fragment, budgets.level_free_bits)?
            .collect();
        if vals.is_empty() {
            break;
        }
        let mut additions = Vec::new();
        for (i, f) in fragment.items().iter().enumerate() {
            if vals.iter().all(|v| v.snapshot_at(i).is_designated()) {
                let boxed = Formula::mod1(f.clone());
                if !fragment.contains(&boxed) {
                    additions.push(boxed);
                }
            }
        }
        if additions.is_empty() {
            break;
        }
        fragment = fragment.extended(&additions);
    }
    Ok(fragment)
}

/// Validity at the level fixpoint over an explicit fragment. The goal must
/// belong to the fragment.
pub fn check_validity_n_in(
    engine: &Engine,
    goal: &Formula,
    fragment: &Arc<Closure>,
    free_bits: f64,
) -> Result<LevelOutcome> {
    let pos = fragment
        .position(goal)
        .ok_or_else(|| Error::GoalOutsideFragment(goal.to_string()))?;
    let trace = compute_levels(engine, fragment, free_bits)?;
    let verdict = match trace
        .final_survivors()
        .find(|v| !v.snapshot_at(pos).is_designated())
    {
        Some(v) => Verdict::Countermodel(v.clone()),
        None => Verdict::Valid,
    };
    Ok(LevelOutcome { goal: goal.clone(), verdict, trace })
}

/// Validity at the level fixpoint over the default fragment.
pub fn check_validity_n(engine: &Engine, goal: &Formula, budgets: &Budgets) -> Result<LevelOutcome> {
    let fragment = default_fragment(engine, goal, budgets)?;
    check_validity_n_in(engine, goal, &fragment, budgets.level_free_bits)
}

#[derive(Clone, Debug)]
pub struct ConsequenceOutcome {
    pub entailed: bool,
    /// The premise subset whose unfolding into the goal was valid; empty
    /// means the goal held on its own. Absent when not entailed.
    pub witness_subset: Option<Vec<Formula>>,
    /// The run that settled the question: the winning unfolding, or the
    /// full-premise unfolding when nothing worked.
    pub outcome: LevelOutcome,
}

/// Premise-ful consequence under necessitation: the premises may not be
/// necessitated, so entailment is reduced to validity of some unfolding
/// B1 -> (... -> (Bk -> goal)) over a subset of the premises.
pub fn check_consequence_n(
    engine: &Engine,
    premises: &[Formula],
    goal: &Formula,
    budgets: &Budgets,
) -> Result<ConsequenceOutcome> {
    require_unimodal(engine)?;
    if premises.len() > budgets.premise_cap {
        return Err(Error::BudgetExceeded {
            resource: "premises".to_string(),
            needed: premises.len() as f64,
            cap: budgets.premise_cap as f64,
        });
    }
    let mut sorted = premises.to_vec();
    sorted.sort_by_cached_key(|f| f.to_string());

    let run = check_validity_n(engine, goal, budgets)?;
    if run.verdict.is_valid() {
        return Ok(ConsequenceOutcome {
            entailed: true,
            witness_subset: Some(Vec::new()),
            outcome: run,
        });
    }
    let mut last = run;
    for mask in 1u64..(1u64 << sorted.len()) {
        let subset: Vec<Formula> = sorted
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, f)| f.clone())
            .collect();
        let unfolded = Formula::unfold(&subset, goal);
        let run = check_validity_n(engine, &unfolded, budgets)?;
        if run.verdict.is_valid() {
            return Ok(ConsequenceOutcome {
                entailed: true,
                witness_subset: Some(subset),
                outcome: run,
            });
        }
        last = run;
    }
    Ok(ConsequenceOutcome {
        entailed: false,
        witness_subset: None,
        outcome: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Signature;
    use crate::matrix::{matrix_for, Snapshot, SystemName};
    use crate::parser::parse;
    use crate::restriction::RnSystem;

    fn uf(s: &str) -> Formula {
        parse(s, Signature::Unimodal).unwrap()
    }

    fn m_engine() -> Engine {
        Engine::Nmatrix(matrix_for(SystemName::M))
    }

    fn mk_engine() -> Engine {
        Engine::Nmatrix(matrix_for(SystemName::Mk))
    }

    /// Independent fixpoint: refilters from scratch each round using the full
    /// designated-by-all set rather than the incremental delta.
    fn naive_final_sets(engine: &Engine, fragment: &Arc<Closure>) -> Vec<Vec<Snapshot>> {
        let all: Vec<Valuation> = engine.valuations(fragment, 18.0).unwrap().collect();
        let mut current: Vec<&Valuation> = all.iter().collect();
        loop {
            let designated: Vec<usize> = (0..fragment.len())
                .filter(|&i| {
                    !current.is_empty()
                        && current.iter().all(|v| v.snapshot_at(i).is_designated())
                })
                .collect();
            let next: Vec<&Valuation> = current
                .iter()
                .copied()
                .filter(|v| designated.iter().all(|&i| v.snapshot_at(i).modal1()))
                .collect();
            if next.len() == current.len() {
                return current
                    .iter()
                    .map(|v| (0..fragment.len()).map(|i| v.snapshot_at(i)).collect())
                    .collect();
            }
            current = next;
        }
    }

    #[test]
    fn fixpoint_matches_naive_refiltering() {
        let goals = ["#(p -> p)", "#p -> p", "##(q -> q)", "#(p -> q) -> #p -> #q"];
        for engine in [m_engine(), mk_engine(), Engine::Rn(RnSystem::rn_kt())] {
            for g in goals {
                let fragment = Closure::of(&uf(g));
                let trace = compute_levels(&engine, &fragment, 18.0).unwrap();
                let mine: Vec<Vec<Snapshot>> = trace
                    .final_survivors()
                    .map(|v| (0..fragment.len()).map(|i| v.snapshot_at(i)).collect())
                    .collect();
                assert_eq!(mine, naive_final_sets(&engine, &fragment), "{engine} {g}");
            }
        }
    }

    #[test]
    fn boxed_tautology_trace() {
        let goal = uf("#(p -> p)");
        let outcome = check_validity_n(&m_engine(), &goal, &Budgets::default()).unwrap();
        assert!(outcome.verdict.is_valid());
        let trace = &outcome.trace;
        assert_eq!(trace.fragment().len(), 3);
        assert_eq!(trace.f0_len(), 16);
        assert_eq!(trace.fixpoint_level(), 2);
        assert_eq!(trace.stages()[1].survivors.len(), 8);
        assert_eq!(trace.stages()[2].survivors.len(), 4);
        assert_eq!(trace.level_of_forcing(&uf("p -> p")), Some(1));
        assert_eq!(trace.level_of_forcing(&goal), Some(2));
        // before any filtering the goal is refutable, and every level-0
        // refuter leaves the tautology undesignated in its second coordinate
        let refuter = trace.refuter_at(0, &goal).unwrap();
        assert_eq!(refuter.snapshot(&uf("p -> p")), Some(Snapshot::pair(true, false)));
        assert!(trace.refuter_at(2, &goal).is_none());
    }

    #[test]
    fn non_theorem_keeps_its_countermodel() {
        let goal = uf("#p -> p");
        let outcome = check_validity_n(&mk_engine(), &goal, &Budgets::default()).unwrap();
        match &outcome.verdict {
            Verdict::Countermodel(v) => {
                assert_eq!(v.snapshot(&uf("p")), Some(Snapshot::pair(false, true)));
            }
            Verdict::Valid => panic!("#p -> p should fail in the K-style system"),
        }
    }

    #[test]
    fn default_fragment_adds_boxes_of_forced_formulas() {
        let goal = uf("(p -> p) -> q");
        let fragment = default_fragment(&m_engine(), &goal, &Budgets::default()).unwrap();
        assert_eq!(fragment.len(), 5);
        assert!(fragment.contains(&uf("#(p -> p)")));
        let outcome =
            check_validity_n_in(&m_engine(), &goal, &fragment, 18.0).unwrap();
        assert!(!outcome.verdict.is_valid());
    }

    #[test]
    fn goal_outside_fragment_is_an_error() {
        let fragment = Closure::of(&uf("q"));
        let err = check_validity_n_in(&m_engine(), &uf("p"), &fragment, 18.0).unwrap_err();
        assert!(matches!(err, Error::GoalOutsideFragment(_)));
    }

    #[test]
    fn levels_reject_bimodal_bases() {
        let engine = Engine::Nmatrix(matrix_for(SystemName::M2));
        let goal = uf("p");
        assert!(compute_levels(&engine, &Closure::of(&goal), 18.0).is_err());
    }

    #[test]
    fn consequence_uses_the_full_premise_set_when_needed() {
        let premises = [uf("#(p -> q)"), uf("#p")];
        let out =
            check_consequence_n(&mk_engine(), &premises, &uf("#q"), &Budgets::default()).unwrap();
        assert!(out.entailed);
        let subset = out.witness_subset.unwrap();
        assert_eq!(subset.len(), 2);
        assert_eq!(out.outcome.goal, uf("#(p -> q) -> #p -> #q"));
    }

    #[test]
    fn consequence_verdict_ignores_premise_order() {
        let budgets = Budgets::default();
        let cases: [(&[&str], &str, bool); 3] = [
            (&["#(p -> q)", "#p"], "#q", true),
            (&["p", "p -> q", "q -> #(p -> p)"], "#(p -> p)", true),
            (&["p -> q", "q"], "#q", false),
        ];
        for (premises, goal, expected) in cases {
            let goal = uf(goal);
            let mut premises: Vec<Formula> = premises.iter().map(|s| uf(s)).collect();
            // cycle through all rotations plus the reversal
            for _ in 0..premises.len() {
                premises.rotate_left(1);
                let out = check_consequence_n(&mk_engine(), &premises, &goal, &budgets).unwrap();
                assert_eq!(out.entailed, expected, "order {premises:?} |- {goal}");
            }
            premises.reverse();
            let out = check_consequence_n(&mk_engine(), &premises, &goal, &budgets).unwrap();
            assert_eq!(out.entailed, expected, "reversed order |- {goal}");
        }
    }

    #[test]
    fn consequence_goal_alone() {
        let out = check_consequence_n(
            &mk_engine(),
            &[uf("p")],
            &uf("q -> q"),
            &Budgets::default(),
        )
        .unwrap();
        assert!(out.entailed);
        assert_eq!(out.witness_subset.unwrap(), Vec::<Formula>::new());
    }

    #[test]
    fn necessitation_does_not_apply_to_premises() {
        let out =
            check_consequence_n(&mk_engine(), &[uf("p")], &uf("#p"), &Budgets::default()).unwrap();
        assert!(!out.entailed);
        assert_eq!(out.outcome.goal, uf("p -> #p"));
        match &out.outcome.verdict {
            Verdict::Countermodel(v) => {
                assert_eq!(v.snapshot(&uf("p")), Some(Snapshot::pair(true, false)));
            }
            Verdict::Valid => panic!("countermodel expected"),
        }
    }

    #[test]
    fn premise_cap_is_enforced() {
        let premises: Vec<Formula> = (0..13)
            .map(|i| Formula::var(format!("x{i}")))
            .collect();
        let err = check_consequence_n(&mk_engine(), &premises, &uf("p"), &Budgets::default())
            .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn restricted_engines_level_too() {
        // with T the reflexivity axiom holds from level 0 on; the default
        // fragment boxes it, and that box gets forced a round later
        let engine = Engine::Rn(RnSystem::rn_kt());
        let outcome = check_validity_n(&engine, &uf("#p -> p"), &Budgets::default()).unwrap();
        assert!(outcome.verdict.is_valid());
        assert!(outcome.trace.fragment().contains(&uf("#(#p -> p)")));
        assert_eq!(outcome.trace.fixpoint_level(), 2);
    }
}
