//! Error types shared across the engine.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(begin: usize, end: usize, line: usize, column: usize) -> Self {
        debug_assert!(begin <= end);
        SourceSpan { begin, end, line, column }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at {span} ({message}; expected {})", expected.join(", "))]
    Parse {
        span: SourceSpan,
        message: String,
        expected: Vec<String>,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("zero test inconclusive: {failed} of {trials} sample points hit domain errors")]
    Inconclusive { failed: u32, trials: u32 },
    #[error("expression of jet order {found} exceeds the prolongation order {order}")]
    Order { order: u32, found: u32 },
    #[error("planar vector field coefficient depends on {0}")]
    Arity(String),
    #[error("bracket [e{i}, e{j}] does not lie in the span of the basis")]
    NotClosed { i: usize, j: usize },
    #[error("no non-singular sample found after {0} attempts")]
    SingularSample(u32),
    #[error("rank sequence stuck below the dimension {dim} up to order {order}")]
    Stabilization { dim: usize, order: u32 },
    #[error("every maximal minor of the Lie matrix vanishes identically")]
    AllMinorsVanish,
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("linearly dependent functions: {0}")]
    Independence(String),
    #[error("basis change matrix is singular")]
    SingularMatrix,
    #[error("flow integration failed for basis element e{index}: every restart left the sampling box or hit a singularity")]
    FlowSingular { index: usize },
    #[error("unknown catalog entry {0}")]
    UnknownEntry(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(span: SourceSpan, message: impl Into<String>, expected: &[&str]) -> Error {
        Error::Parse {
            span,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }
}
