use std::fmt;

/// Which bosonic mode of the effective two-mode model a truncation error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Photon,
    Atom,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Photon => f.write_str("photon"),
            Mode::Atom => f.write_str("atom"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finder did not converge after {iterations} iterations, final bracket [{lo}, {hi}]")]
    RootNotConverged { lo: f64, hi: f64, iterations: usize },

    #[error("no sign change on bracket [{lo}, {hi}] (f(lo)={f_lo}, f(hi)={f_hi})")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("quadrature did not reach rel_tol {requested:e}: achieved {achieved:e} with {nodes} nodes")]
    Quadrature { requested: f64, achieved: f64, nodes: usize },

    #[error("eigensolver failed (LAPACK info = {0})")]
    Eigensolver(i32),

    #[error("{mode} cutoff too small: tail probability {tail:e} exceeds {limit:e}")]
    CutoffTooSmall { mode: Mode, tail: f64, limit: f64 },

    #[error("cutoff not converged: energy shift {shift:e} when cutoff grew from {from} to {to}")]
    CutoffNotConverged { shift: f64, from: usize, to: usize },

    #[error("critical point: {0}")]
    CriticalPoint(String),

    #[error("insufficient data: need at least {need} points, got {got}")]
    InsufficientData { need: usize, got: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
