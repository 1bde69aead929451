use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("weight {0} is invalid: must be even and at least 4")]
    InvalidWeight(i64),

    #[error("weight {0} exceeds the supported maximum of {max}", max = crate::MAX_WEIGHT)]
    WeightTooLarge(u32),

    #[error("point ({re}, {im}) is not in the upper half plane")]
    NotInUpperHalfPlane { re: f64, im: f64 },

    #[error("q-expansion needs Im(tau) >= 0.5, got {0}")]
    QExpansionOutOfRange(f64),

    #[error("lattice radius must be at least 2, got {0}")]
    InvalidRadius(u32),

    #[error("angle {0} lies outside [pi/2, 2pi/3]")]
    AngleOutOfRange(f64),

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("sample index m = {m} is outside the range for weight {weight}")]
    SampleIndexOutOfRange { m: i64, weight: u32 },

    #[error("residue mismatch: l = {l} is not {expected} mod 6")]
    ResidueMismatch { l: u32, expected: u32 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("evaluation is not real on this line: imaginary part {imag:e} at scale {scale:e}")]
    NotReal { imag: f64, scale: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed report: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}
