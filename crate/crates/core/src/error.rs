use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed digraph: {0}")]
    Malformed(String),
    #[error("vertex {vertex} out of range for a digraph on {size} vertices")]
    VertexOutOfRange { vertex: usize, size: usize },
    #[error("digraph is not connected")]
    NotConnected,
    #[error("digraph is not connected with a fixed point (not in F1)")]
    NotInF1,
    #[error("cycle length must be at least 1")]
    InvalidCycleLength,
    #[error("size {size} exceeds the enumeration limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("divisor must be non-empty")]
    EmptyDivisor,
    #[error("no non-primality witness exists for {0}")]
    NoWitness(String),
    #[error("vertex {vertex} has depth {depth}, expected {expected}")]
    WrongDepth {
        vertex: usize,
        depth: usize,
        expected: usize,
    },
    #[error("vertex {vertex} is not allowed in tuple component {index}")]
    InvalidComponent { index: usize, vertex: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("witness invalid: {0}")]
    WitnessInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
