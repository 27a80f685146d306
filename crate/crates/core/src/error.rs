use thiserror::Error;

/// Errors raised by the numerical kernels and the physics layers built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("the free particle has a continuum spectrum; use ep_free instead of a level set")]
    ContinuumSpectrum,

    #[error("level index {index} out of range for {system} (valid: {valid})")]
    IndexOutOfRange {
        system: &'static str,
        index: u32,
        valid: String,
    },

    #[error("operation requires a {expected} system, got {got}")]
    WrongSystem {
        expected: &'static str,
        got: &'static str,
    },

    /// Adaptive quadrature hit `max_depth` before meeting the tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    Quadrature { estimate: f64, error_bound: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("evanescent regime: squared wavenumber {radicand:e} is negative")]
    Evanescent { radicand: f64 },

    #[error("frequency collapse: Omega_{n} = {omega:e} is not positive")]
    FrequencyCollapse { n: u32, omega: f64 },

    #[error("invalid overlap convention: {0}")]
    Convention(String),

    #[error("unknown figure id {0:?} (expected one of 2a, 2b, 3, 4, 5a, 5b, 6, 7)")]
    UnknownFigure(String),

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
