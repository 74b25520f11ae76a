use thiserror::Error;

pub type Result<T> = std::result::Result<T, FrontError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrontError {
    #[error("grid size {0} must be a power of two >= 8")]
    InvalidGrid(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("grid mismatch: {0} modes vs {1} modes")]
    GridMismatch(usize, usize),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("coefficients violate Hermitian symmetry at k = {k} (defect {defect:e})")]
    NotHermitian { k: i64, defect: f64 },

    #[error("multiplier symbol is not even in k (k = {k})")]
    SymbolNotEven { k: i64 },

    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("resonance: b(k) = b(3k) for k = {k}")]
    Resonance { k: f64 },

    #[error("numerical abort at t = {time}: {reason}")]
    NumericalAbort { time: f64, reason: String },

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("quadrature did not converge: estimated error {estimate:e} > {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl FrontError {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        FrontError::Domain {
            what,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for FrontError {
    fn from(e: std::io::Error) -> Self {
        FrontError::Io(e.to_string())
    }
}
