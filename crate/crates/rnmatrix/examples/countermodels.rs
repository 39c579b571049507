//! Finds refuting valuations: whole-closure witnesses for invalid formulas,
//! and extensions of partially pinned snapshots.
//!
//!     cargo run --example countermodels

use rnmatrix::formula::{Formula, Signature};
use rnmatrix::matrix::{matrix_for, Snapshot, SystemName};
use rnmatrix::parser::parse;
use rnmatrix::valuation::{check_consequence_local, check_validity, refutation_extending};

fn uf(s: &str) -> Formula {
    parse(s, Signature::Unimodal).unwrap()
}

fn show(tag: &str, v: &rnmatrix::valuation::Valuation) {
    let cells: Vec<String> = v.entries().map(|(f, z)| format!("{f} = {z}")).collect();
    println!("{tag}: {}", cells.join(", "));
}

fn main() {
    // The T shape fails in the minimal system: nothing ties v2 to v1 there.
    let m = matrix_for(SystemName::M);
    let t = uf("#p -> p");
    let verdict = check_validity(&m, &t, 24.0).unwrap();
    show(&format!("{t} refuted in M"), verdict.witness().unwrap());

    // The K shape fails in M but holds once the implication cell is refined.
    let k = uf("#(p -> q) -> (#p -> #q)");
    let in_m = check_validity(&m, &k, 24.0).unwrap();
    show(&format!("{k} refuted in M"), in_m.witness().unwrap());
    let in_mk = check_validity(&matrix_for(SystemName::Mk), &k, 24.0).unwrap();
    println!("{k} in MK: valid = {}", in_mk.is_valid());

    // Pinning part of the valuation first and extending the rest. Forcing
    // p |-> (1,1) and q |-> (1,0) leaves the K antecedents designated while
    // the conclusion can still fail.
    let pins = [
        (uf("p"), Snapshot::pair(true, true)),
        (uf("q"), Snapshot::pair(true, false)),
    ];
    let extended = refutation_extending(&m, &k, &pins, 24.0)
        .unwrap()
        .expect("the pinned refutation extends");
    show("extension of the pinned snapshots", &extended);

    // Local consequence with premises: p does not force #p anywhere.
    let out = check_consequence_local(&m, &[uf("p")], &uf("#p"), 24.0).unwrap();
    show("p does not entail #p", out.witness().unwrap());
}
