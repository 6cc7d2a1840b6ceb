use thiserror::Error;

use crate::structures::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters k={k}, t={t}, lambda={lambda}: need 2 <= t <= k and lambda >= 1")]
    Parameter { k: usize, t: usize, lambda: usize },

    #[error("invalid design: {0}")]
    InvalidDesign(ValidationReport),

    #[error("expected a set of {expected} distinct vertices, got {found}")]
    Arity { expected: usize, found: usize },

    #[error("vertex {vertex} is outside the universe 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("universe of {n} vertices exceeds the supported maximum of {max}")]
    UniverseTooLarge { n: usize, max: usize },

    #[error("function table is inconsistent with the blocks at t-set {tset:?}")]
    InconsistentStructure { tset: Vec<usize> },

    #[error("canonical form requested for {n} vertices, limit is {limit}")]
    SizeLimit { n: usize, limit: usize },

    #[error("image of the base is not closed in {side}")]
    NotClosed { side: &'static str },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("search budget of {limit} nodes exceeded")]
    BudgetExceeded { limit: u64 },

    #[error("pattern has no copies in the host while the target does")]
    EmptyPattern,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
