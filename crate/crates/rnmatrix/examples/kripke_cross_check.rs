//! Checks the level-valuation engine against an exhaustive search over small
//! Kripke models on the matching frame class.
//!
//!     cargo run --example kripke_cross_check

use rnmatrix::config::Budgets;
use rnmatrix::formula::Signature;
use rnmatrix::kripke::{cross_validate, curated_formulas, frame_for, kripke_check};
use rnmatrix::matrix::SystemName;
use rnmatrix::parser::parse;

fn main() {
    let budgets = Budgets::default();

    // A failing formula comes back with a concrete model and a world where
    // it fails; a holding one only rules out models up to the bound.
    for (s, frames) in [
        ("#p -> p", rnmatrix::kripke::FrameClass::All),
        ("#p -> p", rnmatrix::kripke::FrameClass::Reflexive),
        ("#p -> ##p", rnmatrix::kripke::FrameClass::Reflexive),
        ("#p -> ##p", rnmatrix::kripke::FrameClass::ReflexiveTransitive),
    ] {
        let goal = parse(s, Signature::Unimodal).unwrap();
        let verdict = kripke_check(frames, &goal, 4, &budgets).unwrap();
        println!("{goal} on {frames} frames: {verdict}");
    }
    println!();

    // Twenty fixed formulas, three systems: the fixpoint engine and the
    // bounded model search must agree on every one.
    let formulas: Vec<_> = curated_formulas().into_iter().map(|(f, _)| f).collect();
    let expected: Vec<bool> = curated_formulas().into_iter().map(|(_, e)| e).collect();
    for system in [SystemName::Mk, SystemName::Mkt, SystemName::Mkt4] {
        let report = cross_validate(system, &formulas, 4, &budgets).unwrap();
        let agreements = report.entries.iter().filter(|e| e.agree()).count();
        println!(
            "{system} + N vs {} frames: {agreements}/{} agree",
            frame_for(system).unwrap(),
            report.entries.len()
        );
        for (entry, want) in report.entries.iter().zip(&expected) {
            assert!(entry.agree(), "split verdict on {}", entry.formula);
            assert_eq!(entry.level_valid, *want, "{}", entry.formula);
        }
    }
}
