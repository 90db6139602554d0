use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The real part of a combined quadratic exponent is not negative definite,
    /// so the integrand has no Gaussian envelope.
    #[error("non-integrable pairing: {0}")]
    NotIntegrable(String),

    #[error("quadrature order {0} outside 1..=512")]
    QuadratureOrder(usize),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("unknown function id `{0}`")]
    UnknownFunction(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
