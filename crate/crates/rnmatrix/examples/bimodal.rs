//! The bimodal system: eight-triple snapshots, two independent modalities,
//! and restrictions that tie them together.
//!
//!     cargo run --example bimodal

use rnmatrix::formula::{Formula, Signature};
use rnmatrix::matrix::{matrix_for, SystemName};
use rnmatrix::parser::parse;
use rnmatrix::restriction::{check_validity_rn, Restriction, RnSystem};

fn bf(s: &str) -> Formula {
    parse(s, Signature::Bimodal).unwrap()
}

fn m2(restrictions: Vec<Restriction>) -> RnSystem {
    RnSystem::new(matrix_for(SystemName::M2), restrictions).unwrap()
}

fn main() {
    let base = matrix_for(SystemName::M2);
    println!("{}", base.render_table());

    // Unrestricted, the two boxes ignore each other completely.
    for s in ["#1p -> #2p", "#2p <-> ~#1~p", "#2#1p -> #1#2p"] {
        let goal = bf(s);
        let verdict = check_validity_rn(&m2(vec![]), &goal, 24.0).unwrap();
        println!("{goal} in plain M2: valid = {}", verdict.is_valid());
    }
    println!();

    // Each bridge is one restriction away.
    let cases: [(&str, Vec<Restriction>); 4] = [
        ("#2p <-> ~#1~p", vec![Restriction::Dual21]),
        ("#1p <-> ~#2~p", vec![Restriction::Dual12]),
        ("#1p -> #2p", vec![Restriction::Mono12]),
        ("#2#1p -> #1#2p", vec![Restriction::Swap]),
    ];
    for (s, restrictions) in cases {
        let goal = bf(s);
        let names: Vec<String> = restrictions.iter().map(|r| r.to_string()).collect();
        let verdict = check_validity_rn(&m2(restrictions), &goal, 24.0).unwrap();
        println!("{goal} under {{{}}}: valid = {}", names.join(", "), verdict.is_valid());
    }

    // With both dualities in force the boxes still differ: a countermodel
    // separates them on the spot.
    let sys = m2(vec![Restriction::Dual21, Restriction::Dual12]);
    let goal = bf("#1p -> #2p");
    let verdict = check_validity_rn(&sys, &goal, 24.0).unwrap();
    let witness = verdict.witness().expect("the boxes remain independent");
    let cells: Vec<String> = witness.entries().map(|(f, z)| format!("{f} = {z}")).collect();
    println!("\n{goal} under both dualities is still refuted: {}", cells.join(", "));
}
