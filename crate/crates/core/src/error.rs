use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("composition of consecutive differentials is nonzero")]
    CompositionNonzero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("basis columns are linearly dependent")]
    LinearlyDependent,
    #[error("vector is not in the integer lattice spanned by the basis")]
    NotInLattice,
    #[error("map is not well defined: relation {0} of the source does not map into the target relations")]
    NotWellDefined(usize),
    #[error("isomorphism test only supports finite groups")]
    InfiniteGroupUnsupported,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("iterated Tor needs n >= 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("no table entry for q = {q}, i = {i}")]
    OutOfTable { q: usize, i: usize },
    #[error("degree out of range: {0}")]
    DegreeOutOfRange(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
