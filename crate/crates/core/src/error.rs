use thiserror::Error;

/// Errors raised by the solvers, the case loader and the CLI.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid equation of state: gamma = {0} (must be > 1)")]
    InvalidEos(f64),
    #[error("geometry error at x = {x}: {reason}")]
    Geometry { x: f64, reason: String },
    #[error("vacuum formation: {0}")]
    VacuumFormation(String),
    #[error("no convergence after {iterations} iterations: {what}")]
    NoConvergence { iterations: usize, what: String },
    #[error("ill-posed boundary condition: {0}")]
    IllPosedBoundary(String),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("solver failure at cell {cell}, t = {time}: {reason}")]
    Solver { cell: usize, time: f64, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
