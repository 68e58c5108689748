use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node {node} is outside 1..={rank}")]
    NodeOutOfRange { node: i32, rank: u32 },

    #[error("invalid label r={r} i={i} j={j} k={k}: {reason}")]
    InvalidLabel {
        r: u32,
        i: i32,
        j: i32,
        k: u32,
        reason: &'static str,
    },

    #[error("invalid column tableau: {0}")]
    InvalidColumn(String),

    #[error("{m} is not a descendant of {m_plus}: {reason}")]
    NotADescendant {
        m: String,
        m_plus: String,
        reason: &'static str,
    },

    #[error("monomial {0} is not dominant")]
    NotDominant(String),

    #[error("series window too small to determine the pairing")]
    InsufficientWindow,

    #[error("window k_max={0} leaves no checkable column")]
    UsageWindow(u32),

    #[error("{found} L-strips exceed the subset-search budget of {budget}")]
    SearchBudgetExceeded { found: usize, budget: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
