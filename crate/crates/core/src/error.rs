//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter is outside its documented range.
    #[error("invalid `{name}`: {reason} (got {value})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A function was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// Adaptive quadrature stopped before reaching the requested tolerance.
    /// Carries the best estimate and its error bound for diagnostics.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions: \
         estimate {estimate:e}, error bound {error_bound:e}"
    )]
    Quadrature {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    /// A design target is at or above what the link can ever deliver.
    #[error(
        "infeasible target: required link coverage {required:.6} is at or \
         above the attainable ceiling {ceiling:.6}"
    )]
    Infeasible { required: f64, ceiling: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
