use std::fmt;

use thiserror::Error;

/// Position inside a network source file (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate species name `{0}`")]
    DuplicateSpecies(String),
    #[error("duplicate hypervertex composition {0:?}")]
    DuplicateHypervertex(Vec<u32>),
    #[error("edge {edge} is a self loop (head and tail hypervertex {vertex})")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("rate constant {which} of edge {edge} must be positive and finite, got {value}")]
    NonPositiveRate {
        edge: usize,
        which: &'static str,
        value: f64,
    },
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    Dimension {
        expected: usize,
        got: usize,
        context: &'static str,
    },
    #[error("state must be strictly positive: component {index} is {value}")]
    NonPositiveState { index: usize, value: f64 },
    #[error("activity must be strictly positive: component {index} is {value}")]
    NonPositiveActivity { index: usize, value: f64 },
    #[error("graph Laplacian requires Γ = I (every hypervertex a single species)")]
    NotAGraph,
    #[error("{0}")]
    Domain(String),
    #[error("solver `{solver}` did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("integration halted at t = {t}: {reason}")]
    BoundaryHalt {
        t: f64,
        reason: String,
        /// Everything recorded before the halt.
        partial: Box<crate::dynamics::Trajectory>,
    },
    #[error("{span}: {message}")]
    Parse { span: Span, message: String },
    #[error("scenario: {0}")]
    Scenario(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(expected: usize, got: usize, context: &'static str) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected,
            got,
            context,
        })
    }
}

pub(crate) fn check_positive(x: &[f64]) -> Result<()> {
    for (index, &value) in x.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveState { index, value });
        }
    }
    Ok(())
}
