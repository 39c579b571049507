//! Decision procedures for modal logics presented as non-deterministic
//! matrices over truth snapshots, with optional valuation restrictions,
//! level valuations for necessitation, a Hilbert proof kernel, and a bounded
//! Kripke-model oracle for cross-checking.
//!
//! The quickest tour is the `examples/` directory; each file there drives one
//! capability end to end.

pub mod config;
pub mod error;
pub mod formula;
pub mod hilbert;
pub mod kripke;
pub mod levels;
pub mod matrix;
pub mod parser;
pub mod restriction;
pub mod runner;
pub mod valuation;

pub use config::Budgets;
pub use error::{Error, ParseError, Result};
pub use formula::{Closure, Formula, ModalIndex, Signature, Substitution};
pub use hilbert::{
    check_proof, match_axiom, search_proof, Justification, LineDiagnostic, Proof, ProofLine,
    ProofSystem, SchemaName,
};
pub use kripke::{
    cross_validate, curated_formulas, forces, frame_for, kripke_check, BoundedVerdict, CrossReport,
    FrameClass, KripkeModel, CURATED_FORMULAS,
};
pub use levels::{
    check_consequence_n, check_validity_n, check_validity_n_in, compute_levels, default_fragment,
    ConsequenceOutcome, LevelOutcome, LevelTrace, Stage,
};
pub use matrix::{matrix_for, Connective, MatrixSpec, Snapshot, SystemName};
pub use parser::parse;
pub use restriction::{
    check_structurality, check_validity_rn, enumerate_restricted, restrictions_hold, Engine,
    Restriction, RnSystem,
};
pub use runner::{
    check_one, compare_engines, default_restrictions, replay, run_corpus, ComparisonReport,
    ResultRecord, RunConfig, SemanticsKind,
};
pub use valuation::{
    check_consequence_local, check_validity, enumerate_valuations, refutation_extending,
    Valuation, Verdict, WitnessEntry,
};
