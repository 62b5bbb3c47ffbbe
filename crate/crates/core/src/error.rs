use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Constraint violations name the inequality that failed so callers can
/// surface it verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("search-space size must satisfy n >= 2 (got n = {n})")]
    InstanceTooSmall { n: usize },

    #[error("marked index {index} outside [0, {n})")]
    MarkedIndexOutOfRange { index: usize, n: usize },

    #[error("constraint a3 > a2 violated (a2 = {a2}, a3 = {a3}): |psi> would not be the ground state of H_i")]
    InitialOrdering { a2: f64, a3: f64 },

    #[error("constraint b2 > b3 violated (b2 = {b2}, b3 = {b3}): |alpha> would not be the ground state of H_f")]
    FinalOrdering { b2: f64, b3: f64 },

    #[error("coefficient {name} is not finite ({value})")]
    NonFinite { name: &'static str, value: f64 },

    #[error("scaling exponent gamma must be >= 0 (got {0})")]
    NegativeGamma(f64),

    #[error("gap polynomial outside its structural regime: {0}")]
    Structural(String),

    #[error("instance mismatch: {what} built for n = {expected}, used with n = {found}")]
    InstanceMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("interpolation parameter s = {0} outside [0, 1]")]
    ParameterOutOfRange(f64),

    #[error("dense construction limited to n <= {max} (got n = {n})")]
    DenseGuard { n: usize, max: usize },

    #[error("adiabatic accuracy epsilon must lie in (0, 1) (got {0})")]
    Epsilon(f64),

    #[error("degenerate levels at s = {s}: ground and excited energies coincide")]
    LevelTie { s: f64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
