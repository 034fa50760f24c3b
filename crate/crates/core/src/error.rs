use thiserror::Error;

/// Where an adaptive integration gave up.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureFailure {
    pub label: String,
    pub estimate: f64,
    pub error: f64,
    pub tolerance: f64,
    pub evaluations: usize,
    /// Interval (in the integration variable) carrying the largest error when the budget ran out.
    pub worst_interval: (f64, f64),
    pub worst_error: f64,
}

impl std::fmt::Display for QuadratureFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: estimate {:e} with error {:e} exceeds tolerance {:e} after {} evaluations; worst sub-interval [{:e}, {:e}] carries {:e}",
            self.label,
            self.estimate,
            self.error,
            self.tolerance,
            self.evaluations,
            self.worst_interval.0,
            self.worst_interval.1,
            self.worst_error
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {what} = {value:e} ({reason})")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("quadrature did not converge: {0}")]
    Quadrature(Box<QuadratureFailure>),
    #[error("integrand not finite in {label} at ({x:e}, {y:e})")]
    NonFinite { label: String, x: f64, y: f64 },
    #[error("time step {dt:e} s exceeds the explicit stability bound {required:e} s")]
    Stability { dt: f64, required: f64 },
    #[error("solver did not converge after {steps} steps; last residuals {residuals:?}")]
    NonConvergence { steps: usize, residuals: Vec<f64> },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain { what, value, reason }
    }

    /// True for failures of numerical machinery rather than of inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature(_) | Error::NonFinite { .. } | Error::NonConvergence { .. } | Error::Stability { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Reject anything that is not a finite, strictly positive number.
pub(crate) fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(what, value, "must be finite and > 0"))
    }
}

pub(crate) fn non_negative(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(what, value, "must be finite and >= 0"))
    }
}
