use thiserror::Error;

/// Errors raised by channel construction, dynamics and capacity routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite parameter `{name}` = {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("parameter `{name}` = {value} outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("channel ({lambda1}, {lambda3}, {lambda_star}) is not completely positive")]
    InvalidChannel {
        lambda1: f64,
        lambda3: f64,
        lambda_star: f64,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("weights must be non-negative and sum to 1 (sum = {0})")]
    BadWeights(f64),

    #[error("length mismatch: {0} channels, {1} weights")]
    LengthMismatch(usize, usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("time-local generator is singular at t = {0} (lambda(t) = 0)")]
    SingularGenerator(f64),

    #[error("parameter ordering violated: {0}")]
    Ordering(String),

    #[error("solver unstable at t = {t}: |{component}| = {value:e} exceeds 10")]
    Unstable {
        t: f64,
        component: &'static str,
        value: f64,
    },

    #[error("channel is outside the generalized amplitude damping family: {0}")]
    NotGadc(String),

    #[error("integration failed: {0}")]
    Quadrature(String),

    #[error("invalid recipe: {0}")]
    Recipe(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

pub(crate) fn ensure_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<f64> {
    ensure_finite(name, value)?;
    if value < min || value > max {
        Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        })
    } else {
        Ok(value)
    }
}
