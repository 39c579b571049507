//! Bounded proof search over the two-variable corpus: how many theorems
//! each Hilbert system yields at depth 8, and how long the search takes.
//!
//!     cargo run --example hilbert_search

use std::time::Instant;

use rnmatrix::config::Budgets;
use rnmatrix::formula::{enumerate_corpus, Signature};
use rnmatrix::hilbert::{check_proof, search_proof, ProofSystem};
use rnmatrix::parser::parse;

fn main() {
    let budgets = Budgets::default();
    let corpus = enumerate_corpus(
        &["p".to_string(), "q".to_string()],
        4,
        Signature::Unimodal,
        budgets.corpus_cap,
    )
    .expect("corpus fits the cap");
    println!("corpus: {} formulas over p, q with up to 4 connectives", corpus.len());

    for name in ["H", "HK", "HKT", "HKT4", "HN", "HKN", "HKTN", "HKT4N"] {
        let system: ProofSystem = name.parse().unwrap();
        let start = Instant::now();
        let mut found = 0usize;
        for goal in &corpus {
            if let Some(proof) = search_proof(&system, goal, 8, &budgets).unwrap() {
                check_proof(&system, &proof, &[], goal).expect("search output checks");
                found += 1;
            }
        }
        println!(
            "{name:>6}: {found:>4} theorems at depth 8  [{:.1?}]",
            start.elapsed()
        );
    }

    // one worked proof, end to end
    let system: ProofSystem = "HKN".parse().unwrap();
    let goal = parse("#(q -> q -> q)", Signature::Unimodal).unwrap();
    let proof = search_proof(&system, &goal, 8, &budgets)
        .unwrap()
        .expect("a short necessitated tautology is provable");
    println!("\nproof of {goal} in HKN:\n{}", proof.to_json());
}
