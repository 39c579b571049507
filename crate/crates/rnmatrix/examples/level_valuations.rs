//! Necessitation as a fixpoint filter: watch the valuation set shrink level
//! by level until nothing new is forced.
//!
//!     cargo run --example level_valuations

use rnmatrix::config::Budgets;
use rnmatrix::formula::{Formula, Signature};
use rnmatrix::levels::{check_consequence_n, check_validity_n};
use rnmatrix::matrix::{matrix_for, SystemName};
use rnmatrix::parser::parse;
use rnmatrix::restriction::Engine;

fn uf(s: &str) -> Formula {
    parse(s, Signature::Unimodal).unwrap()
}

fn main() {
    let budgets = Budgets::default();
    let engine = Engine::Nmatrix(matrix_for(SystemName::Mk));

    // #(p -> p) is not valid in any of the matrices alone: no cell forces
    // v2 of a tautology to 1. The filtration does. Level 1 keeps the
    // valuations designating p -> p everywhere (which forces its v2), and
    // level 2 then forces #(p -> p) itself.
    let goal = uf("#(p -> p)");
    let out = check_validity_n(&engine, &goal, &budgets).unwrap();
    println!("{}", out.trace);
    println!(
        "goal {goal}: valid = {}, forced at level {:?}\n",
        out.verdict.is_valid(),
        out.trace.level_of_forcing(&goal)
    );

    // Iterating the modality keeps working: each extra box costs one level.
    for s in ["#(p -> p)", "##(p -> p)", "###(p -> p)"] {
        let goal = uf(s);
        let out = check_validity_n(&engine, &goal, &budgets).unwrap();
        println!(
            "{goal}: valid = {}, fixpoint at level {}",
            out.verdict.is_valid(),
            out.trace.fixpoint_level()
        );
    }

    // The filter respects the underlying system: the T shape stays refuted
    // under MK + N but becomes valid once the base is MKT.
    println!();
    for system in [SystemName::Mk, SystemName::Mkt] {
        let engine = Engine::Nmatrix(matrix_for(system));
        let out = check_validity_n(&engine, &uf("#p -> p"), &budgets).unwrap();
        println!("#p -> p under {system} + N: valid = {}", out.verdict.is_valid());
    }

    // Consequence with premises reduces to validity of an unfolding over
    // some premise subset; the winning subset comes back as a witness.
    let premises = [uf("#(p -> q)"), uf("#p")];
    let out = check_consequence_n(&engine, &premises, &uf("#q"), &budgets).unwrap();
    let used: Vec<String> = out
        .witness_subset
        .as_ref()
        .unwrap()
        .iter()
        .map(|f| f.to_string())
        .collect();
    println!(
        "\n#(p -> q), #p |- #q under MK + N: entailed = {}, premises used: {}",
        out.entailed,
        used.join(", ")
    );
}
