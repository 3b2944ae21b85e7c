use thiserror::Error;

/// Errors raised by the graph, broadcast, bound and solver layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid circulant parameters: {0}")]
    InvalidCirculant(String),

    /// The parameters fall outside the family a formula or construction is proven for.
    #[error("outside proven regime: {0}")]
    OutOfRegime(String),

    #[error("dimension mismatch: expected {expected} vertices, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("cannot parse broadcast: {0}")]
    Parse(String),

    #[error("distance table is not symmetric: d({0},{1}) != d({1},{0})")]
    Asymmetric(usize, usize),

    #[error("value {value} at v{vertex} exceeds cap {cap}")]
    ExceedsCap { vertex: usize, value: u32, cap: u32 },

    #[error("inconsistent counts: {0}")]
    InconsistentCounts(String),

    /// Two placement rules of a construction wrote to the same vertex.
    #[error("construction places two values on v{vertex}")]
    Collision { vertex: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
