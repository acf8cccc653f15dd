use thiserror::Error;

/// Errors surfaced by strategy construction, law building, and pricing.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated its domain; `field` is the dotted path of the
    /// offending input.
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter {
        field: &'static str,
        message: String,
    },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge within {max_subdivisions} subdivisions (residual {residual:.3e})")]
    QuadratureNonConvergence {
        max_subdivisions: u32,
        residual: f64,
    },
}

impl Error {
    pub fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
