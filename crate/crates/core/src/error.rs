use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible group points: dimensions {0} and {1}")]
    DimensionMismatch(usize, usize),

    #[error("field index {index} out of range 1..={n}")]
    FieldIndex { index: usize, n: usize },

    #[error("unsupported action: {0}")]
    UnsupportedAction(String),

    #[error("insufficient differentiability: failing derivative order {0}")]
    Differentiability(usize),

    #[error("non-integrable decay class: {0}")]
    NonIntegrable(String),

    #[error("Fock matrix dimension {dim} exceeds configured cap {cap}")]
    MatrixTooLarge { dim: usize, cap: usize },

    #[error("eigenvalue structure violation: {0}")]
    EigenvalueStructure(String),

    #[error("point {0:?} outside enumerated spectrum range; extend lambda range or alpha cut to cover it")]
    OutsideEnumeration(Vec<f64>),

    #[error("spherical evaluation at lambda = 0 is degenerate; use the degenerate family")]
    DegenerateLambda,

    #[error("function is not invariant under the declared action (residual {0:.3e})")]
    NotInvariant(f64),

    #[error("right inverse check failed: |Q(P(x)) - x| = {0:.3e} at a sampled point of E")]
    NotRightInverse(f64),

    #[error("moment condition violated: |integral of h dt| = {0:.3e} exceeds tolerance {1:.3e}")]
    MomentCondition(f64, f64),

    #[error("two interpolation summands active at the same point; integer separation violated")]
    OverlappingSummands,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
