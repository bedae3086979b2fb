use thiserror::Error;

/// Errors raised by the operators, linear algebra and solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OscarError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("input magnitudes are not non-increasing at index {index}")]
    NotSorted { index: usize },

    #[error("input of length {len} exceeds the limit of {max}")]
    TooLarge { len: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("iterate became non-finite at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("step-size search exceeded alpha_max without decreasing the objective at iteration {iteration}")]
    Stagnation { iteration: usize, last: Vec<f64> },
}

pub type Result<T> = std::result::Result<T, OscarError>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(OscarError::Dimension { expected, found })
    }
}
