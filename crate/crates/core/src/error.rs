use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("singular matrix (condition estimate {cond:.3e})")]
    SingularMatrix { cond: f64 },

    #[error(
        "scattering angle {theta_deg} deg lies on the singular support of the flat amplitude; use f0_distributional"
    )]
    SingularAngle { theta_deg: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not converge (error estimate {estimate:.3e}, target {target:.3e})")]
    NonConvergence { estimate: f64, target: f64 },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }
}
