use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("block entry {name} out of range: {reason}")]
    EntryOutOfRange { name: String, reason: String },

    #[error("invalid Hodge numbers: {0}")]
    InvalidHodge(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("orthogonality violated: {0}")]
    Orthogonality(String),

    #[error("linearly dependent basis: vector {index} lies in the span of the previous ones")]
    DependentBasis { index: usize },

    #[error("vectors {first} and {second} do not commute: bracket block ({block_row},{block_col}) = {value}")]
    NonCommuting {
        first: usize,
        second: usize,
        block_row: usize,
        block_col: usize,
        value: String,
    },

    #[error("form is not closed: {witness}")]
    NotClosed { witness: String },

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("inconsistent linear system at degree {degree}")]
    Inconsistent { degree: u32 },

    #[error("budget exceeded: {needed} free entries, budget {budget}")]
    BudgetExceeded { needed: usize, budget: usize },

    #[error("incompatible graph forms: {0}")]
    IncompatibleGraph(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Mathematical failures (as opposed to malformed input).
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::NotClosed { .. }
                | Error::NonCommuting { .. }
                | Error::DependentBasis { .. }
                | Error::Inconsistent { .. }
                | Error::Constraint(_)
                | Error::Orthogonality(_)
        )
    }
}
