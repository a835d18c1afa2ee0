use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An invariant polynomial has a factor with no Gaussian-rational root.
    #[error("spectrum is not Gaussian-rational: irreducible factor {factor}")]
    IrrationalSpectrum { factor: String },

    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,

    #[error("degenerate point triple: {0}")]
    DegenerateTriple(String),

    #[error("the all-zero tensor is not a state")]
    ZeroState,

    /// The system carries a continuous family of classes (four or more
    /// distinct eigenvalue points fit), so no finite catalogue exists.
    #[error("infinitely many SLOCC classes: {0}")]
    InfiniteFamilies(String),

    #[error("malformed input: {0}")]
    Parse(String),

    /// A postcondition check failed; this is a bug, not bad input.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
