//! Prints the operation tables of every built-in system and spot-reads a
//! few cells through the same accessor the evaluator uses.
//!
//!     cargo run --example tables

use rnmatrix::matrix::{matrix_for, Connective, Snapshot, SystemName};

fn main() {
    for name in [
        SystemName::M,
        SystemName::Mk,
        SystemName::Mkt,
        SystemName::Mkt4,
        SystemName::M2,
    ] {
        println!("{}\n", matrix_for(name).render_table());
    }

    // The refinement chain, read off single cells: the implication cell at
    // ((1,1), (1,0)) shrinks as systems are added, and MKT drops (0,1) from
    // the value set entirely.
    let z = Snapshot::pair(true, true);
    let w = Snapshot::pair(true, false);
    for name in [SystemName::M, SystemName::Mk, SystemName::Mkt, SystemName::Mkt4] {
        let m = matrix_for(name);
        let cell = m.apply_multiop(Connective::Imp, &[z, w]).unwrap();
        let shown: Vec<String> = cell.iter().map(|v| v.to_string()).collect();
        println!(
            "{name}: |values| = {}, imp({z}, {w}) = {{{}}}",
            m.values().len(),
            shown.join(", ")
        );
    }
}
