//! Two roads to the same logic: each refined matrix (MK, MKT, MKT4) against
//! the minimal matrix plus restriction predicates, compared verdict by
//! verdict over the whole two-variable corpus.
//!
//!     cargo run --example nmatrix_vs_rnmatrix

use rnmatrix::config::Budgets;
use rnmatrix::formula::{enumerate_corpus, Closure, Signature, Substitution};
use rnmatrix::parser::parse;
use rnmatrix::restriction::{
    check_structurality, check_validity_rn, enumerate_restricted, RnSystem,
};
use rnmatrix::runner::compare_engines;
use rnmatrix::matrix::SystemName;

fn main() {
    let budgets = Budgets::default();
    let corpus = enumerate_corpus(
        &["p".to_string(), "q".to_string()],
        4,
        Signature::Unimodal,
        budgets.corpus_cap,
    )
    .unwrap();
    let lines: Vec<String> = corpus.iter().map(|f| f.to_string()).collect();

    for system in [SystemName::Mk, SystemName::Mkt, SystemName::Mkt4] {
        let report = compare_engines(system, &budgets, &lines);
        println!(
            "{system}: {} formulas, {} disagreements, {} errors",
            report.total,
            report.disagreements.len(),
            report.errors
        );
    }

    // Restrictions reach logics no refined table covers. GL restricts
    // v2(#A -> A) by v2(A); that alone makes the Löb shape valid.
    let lob = parse("#(#p -> p) -> #p", Signature::Unimodal).unwrap();
    println!(
        "\n{lob}: K alone = {}, K + GL = {}",
        check_validity_rn(&RnSystem::rn_k(), &lob, 24.0).unwrap().is_valid(),
        check_validity_rn(&RnSystem::rn_gl(), &lob, 24.0).unwrap().is_valid()
    );

    // All the named restrictions are structural: composing an admitted
    // valuation with a substitution lands on an admitted valuation again.
    let sys = RnSystem::rn_kt4();
    let abstract_goal = parse("#(p -> q) -> #q", Signature::Unimodal).unwrap();
    let c = Closure::of(&abstract_goal);
    let subst = Substitution::new()
        .bind("p", parse("~r", Signature::Unimodal).unwrap())
        .bind("q", parse("#(r -> r)", Signature::Unimodal).unwrap());
    let instance_closure = Closure::of(&subst.apply(&abstract_goal));
    let mut checked = 0usize;
    for v in enumerate_restricted(&sys, &instance_closure, 24.0).unwrap() {
        assert!(check_structurality(&sys, &v, &subst, &c).unwrap());
        checked += 1;
    }
    println!("structurality: {checked} composed valuations of {abstract_goal} all admitted");
}
