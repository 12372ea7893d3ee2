use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported order {order} (maximum {max})")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("non-finite integrand value at quadrature node {index} (x = {x})")]
    NonFinite { index: usize, x: f64 },

    #[error("quadrature did not converge: relative change {change:.3e} exceeds {tolerance:.1e}")]
    Accuracy { change: f64, tolerance: f64 },

    #[error("basis truncation residual {residual:.3e} exceeds {tolerance:.1e}")]
    Truncation { residual: f64, tolerance: f64 },

    #[error("spectral content at {wavenumber:.4e} exceeds the output grid Nyquist limit {nyquist:.4e} ({axis})")]
    Resolution {
        axis: &'static str,
        wavenumber: f64,
        nyquist: f64,
    },

    #[error("degenerate amplitude: {0}")]
    Degenerate(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
