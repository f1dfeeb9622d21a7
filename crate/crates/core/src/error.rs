use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("point {0} lies on the slit [0, 1)")]
    SlitViolation(String),
    #[error("truncation failure: {0}")]
    Truncation(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("index {index} out of range (sequence has {len} zeros)")]
    Index { index: usize, len: usize },
    #[error("branch selection failed: {0}")]
    Branch(String),
    #[error("contour passes within {distance:e} of a solution")]
    ContourTooClose { distance: f64 },
    #[error("quadrature did not settle on an integer (last value {value})")]
    NonInteger { value: f64 },
    #[error("approach path leaves the aperture: {0}")]
    Aperture(String),
    #[error("sector violation: {0}")]
    Sector(String),
    #[error("sequence is not strictly decreasing at position {0}")]
    NonMonotone(usize),
    #[error("function vanishes at t = {0}")]
    Vanishes(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl Error {
    /// Errors caused by a point or parameter outside the admissible set.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::SlitViolation(_)
                | Error::Pole(_)
                | Error::Aperture(_)
                | Error::Sector(_)
                | Error::NonMonotone(_)
                | Error::Index { .. }
        )
    }
}
