use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The explicit hypergeometric sum has a vanishing denominator for these
    /// parameters; use the ladder route instead.
    #[error("singular parameters: {0}")]
    SingularParameters(String),

    /// A nonzero stencil coefficient asked for a value below the lattice.
    #[error("evaluation below the lattice at ({x1}, {x2})")]
    OutOfDomain { x1: i64, x2: i64 },

    /// A grid-backed function was read outside its window.
    #[error("point ({x1}, {x2}) lies outside the window [0..={m1}]x[0..={m2}]")]
    OutOfWindow { x1: usize, x2: usize, m1: usize, m2: usize },

    #[error("invalid label: {0}")]
    InvalidLabel(String),
}
