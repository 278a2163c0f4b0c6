use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("transfer matrix is defective: {0}")]
    Defective(String),

    #[error("imaginary residue {residue:.3e} exceeds tolerance in {context}")]
    ImaginaryResidue { residue: f64, context: String },

    #[error("site index out of range: {0}")]
    SiteOutOfRange(String),

    #[error("state vector for N = {n} exceeds cap {cap} ({bytes} bytes required)")]
    ChainTooLong { n: usize, cap: usize, bytes: u128 },

    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),

    #[error("undefined quantity: {0}")]
    Undefined(String),

    #[error("gate file: {0}")]
    GateFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by malformed user input as opposed to a
    /// numerical tolerance being exceeded.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch(_)
                | Error::InvalidInput(_)
                | Error::NotUnitary { .. }
                | Error::SiteOutOfRange(_)
                | Error::ChainTooLong { .. }
                | Error::GateFile(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
