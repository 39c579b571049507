//! Resource budgets. Every potentially explosive operation takes a budget and
//! fails with `Error::BudgetExceeded` instead of running away. The `RNMATRIX_*`
//! environment variables override individual fields (CLI entry points call
//! `Budgets::from_env`; library callers pass values explicitly).

#[derive(Clone, Debug)]
pub struct Budgets {
    /// Cap on the estimated number of free choice bits a valuation
    /// enumeration may have (log2 of the stream size upper bound).
    pub free_bits: f64,
    /// Same cap for level-valuation runs, which materialize the full set.
    pub level_free_bits: f64,
    /// Rounds of default-fragment extension with `#B` for forced `B`.
    pub fragment_modal_depth: usize,
    /// Largest depth `search_proof` accepts.
    pub proof_depth_cap: usize,
    /// Cap on facts derived during proof search.
    pub proof_fact_cap: usize,
    /// Largest world count the Kripke oracle accepts.
    pub max_worlds_cap: usize,
    /// Cap on generated corpus size.
    pub corpus_cap: u64,
    /// Cap on premise count for consequence checks (subsets are enumerated).
    pub premise_cap: usize,
}

impl Default for Budgets {
    fn default() -> Budgets {
        Budgets {
            free_bits: 24.0,
            level_free_bits: 18.0,
            fragment_modal_depth: 2,
            proof_depth_cap: 12,
            proof_fact_cap: 500_000,
            max_worlds_cap: 4,
            corpus_cap: 1_000_000,
            premise_cap: 12,
        }
    }
}

impl Budgets {
    pub fn from_env() -> Budgets {
        fn get<T: std::str::FromStr>(name: &str, default: T) -> T {
            std::env::var(name)
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or(default)
        }
        let d = Budgets::default();
        Budgets {
            free_bits: get("RNMATRIX_FREE_BITS", d.free_bits),
            level_free_bits: get("RNMATRIX_LEVEL_FREE_BITS", d.level_free_bits),
            fragment_modal_depth: get("RNMATRIX_FRAGMENT_DEPTH", d.fragment_modal_depth),
            proof_depth_cap: get("RNMATRIX_PROOF_DEPTH", d.proof_depth_cap),
            proof_fact_cap: get("RNMATRIX_PROOF_FACTS", d.proof_fact_cap),
            max_worlds_cap: get("RNMATRIX_MAX_WORLDS", d.max_worlds_cap),
            corpus_cap: get("RNMATRIX_CORPUS_CAP", d.corpus_cap),
            premise_cap: get("RNMATRIX_PREMISE_CAP", d.premise_cap),
        }
    }
}
