use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed rational {0:?} (expected \"p\" or \"p/q\")")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("basis is not generic for this tableau: {0}")]
    NonGenericBasis(String),
    #[error("invalid characters: {0}")]
    InvalidCharacters(String),
    #[error("invalid symbol presentation: {0}")]
    InvalidPresentation(String),
    #[error("matrix does not lie in the tableau")]
    NotInTableau,
    #[error("presentation is not endovolutive: coefficient B[{a},{lambda},{i},{b}] is nonzero with a > s_lambda")]
    NotEndovolutive { a: usize, lambda: usize, i: usize, b: usize },
    #[error("no endovolutive basis found after {retries} retries (inconclusive)")]
    Inconclusive { retries: usize },
    #[error("covector vanishes on U* (phi_1 = ... = phi_ell = 0)")]
    ZeroCovector,
    #[error("census needs {assignments} assignments, cap is {cap}")]
    CensusTooLarge { assignments: String, cap: u64 },
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
}

pub type Result<T> = std::result::Result<T, Error>;
