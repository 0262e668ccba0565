use thiserror::Error;

/// Library-wide error type. Everything here is a domain error: the input was
/// understood but the operation cannot produce a result for it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} out of range for structure of order {1}")]
    OutOfRange(usize, usize),

    #[error("invalid structure: {0}")]
    Invalid(String),

    #[error("{op} requires a {want} oracle, got {got}")]
    KindMismatch {
        op: &'static str,
        want: &'static str,
        got: &'static str,
    },

    #[error("scan budget {budget} exhausted after finding {found} of {want} requested elements (finite difference side or budget too small)")]
    BudgetExhausted {
        budget: u64,
        found: usize,
        want: usize,
    },

    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    #[error("search node budget exceeded ({0} nodes)")]
    NodeBudget(u64),

    #[error("extraction failed: needed a monochromatic index set of size {needed}, largest found {found}")]
    Extraction { needed: usize, found: usize },

    #[error("comparability probe returned `unknown` for target pair ({x}, {y}); raise --probe")]
    UnknownComparability { x: u128, y: u128 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
