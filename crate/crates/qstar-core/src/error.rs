use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("pair is already unital")]
    AlreadyUnital,
    #[error("pair has no unit")]
    NotUnital,
    #[error("functional is not representable: {0}")]
    NotRepresentable(String),
    #[error("empty Hilbert space: the Gram matrix has no eigenvalue above the cutoff")]
    EmptyHilbertSpace,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("solver did not converge: {0}")]
    Nonconvergent(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
