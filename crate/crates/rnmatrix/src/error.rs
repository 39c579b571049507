use thiserror::Error;

/// Syntax error produced by the formula parser. Positions are 0-based byte
/// offsets into the input; `token` is the 1-based index of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at token {token} (byte {byte}): {message}")]
pub struct ParseError {
    pub byte: usize,
    pub token: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown system `{0}`")]
    UnknownSystem(String),

    #[error("unknown axiom/restriction name `{0}`")]
    UnknownAxiom(String),

    #[error("{context}: formula uses modality index 2 but the matrix is unimodal")]
    SignatureMismatch { context: String },

    #[error("value {value} is not in the value set of {system}")]
    ValueOutsideMatrix { system: String, value: String },

    #[error("budget exceeded: {resource} needs {needed}, cap is {cap}")]
    BudgetExceeded {
        resource: String,
        needed: f64,
        cap: f64,
    },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("goal outside fragment: {0}")]
    GoalOutsideFragment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
