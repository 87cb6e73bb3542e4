use std::fmt;

use thiserror::Error;

use crate::lattice::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("grid has {points} points, more than the limit of {limit}")]
    Capacity { points: u128, limit: u128 },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("monotonicity violation: {0}")]
    Violation(Box<ViolationReport>),

    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::Parse { line, reason: reason.into() }
    }

    pub fn violation(&self) -> Option<&ViolationReport> {
        match self {
            Error::Violation(report) => Some(report),
            _ => None,
        }
    }
}

/// A pair `x <= y` with `F(x) <= F(y)` failing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub x: Point,
    pub y: Point,
    pub fx: Point,
    pub fy: Point,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x = {} <= y = {} but F(x) = {} is not <= F(y) = {}", self.x, self.y, self.fx, self.fy)
    }
}

/// Raised when a local case analysis fails. `queries` is the constant-size set of
/// evaluated points the failed step relied on; if `F` is not monotone, a violating
/// pair lies among them. `witness` is that pair when one could be extracted.
#[derive(Clone, Debug)]
pub struct ViolationReport {
    pub step: String,
    pub queries: Vec<(Point, Point)>,
    pub witness: Option<Violation>,
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} implicated queries", self.step, self.queries.len())?;
        match &self.witness {
            Some(w) => write!(f, "; witness: {w})"),
            None => write!(f, "; no witness pair among them)"),
        }
    }
}
