use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid divisor: the exponent vector of 1 - y^alpha must be nonzero")]
    InvalidDivisor,

    #[error("polynomial is not divisible by 1 - y^{alpha:?}{}", factor.map(|i| format!(" (factor #{i})")).unwrap_or_default())]
    NotDivisible {
        alpha: Vec<i64>,
        factor: Option<usize>,
    },

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("not a GKM graph: no connection candidate for edge ({p},{q}) and ({p},{k})")]
    NotGkm { p: usize, q: usize, k: usize },

    #[error("three-independence violated: {count} connection candidates for edge ({p},{q}) and ({p},{k})")]
    ThreeIndependenceViolated {
        p: usize,
        q: usize,
        k: usize,
        count: usize,
    },

    #[error("invalid vertex {vertex} (graph has {count} vertices)")]
    InvalidVertex { vertex: usize, count: usize },

    #[error("invalid quadric dimension parameter n = {0}; need n >= 1")]
    InvalidN(usize),

    #[error("subset {members:?} is not admissible: {reason}")]
    Admissibility { members: Vec<usize>, reason: String },

    #[error("subset {0:?} is neither a vertex complement nor admissible")]
    InvalidFIndex(Vec<usize>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a K-class: division failed at decomposition step {step}")]
    NotAKClass { step: usize },

    #[error("internal consistency error: {0}")]
    Internal(String),
}
