use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// The overlap matrix is numerically singular at the requested basis size.
    #[error(
        "overlap matrix ill-conditioned at basis size {size}: pivot ratio {pivot_ratio:.3e} \
         (try a smaller basis)"
    )]
    Conditioning { size: usize, pivot_ratio: f64 },

    /// Root isolation or an iterative solver failed.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Eigenvectors on either side of a finite-difference window do not match.
    #[error(
        "level {level} changes character inside [{lo}, {hi}]: eigenvector overlap {overlap:.4}"
    )]
    LevelCrossing {
        level: usize,
        lo: f64,
        hi: f64,
        overlap: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
