use thiserror::Error;

use crate::graph::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("self-loop on node {0}: self-loops are derived, never stored")]
    SelfLoop(usize),

    #[error("duplicate edge ({src}, {dst})")]
    DuplicateEdge { src: usize, dst: usize },

    #[error("invalid influence graph: {0}")]
    InvalidGraph(ValidationReport),

    #[error("seed set must be nonempty")]
    EmptySeedSet,

    #[error("node {0} is isolated (zero degree)")]
    IsolatedNode(usize),

    #[error("adjacency is not symmetric at ({0}, {1})")]
    AsymmetricAdjacency(usize, usize),

    #[error("infeasible UISLT parameters at node {node}: {detail}")]
    InfeasibleParams { node: usize, detail: String },

    #[error("exact evaluation over {size} nodes exceeds the cap of {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("enumeration of {count} candidate sets exceeds the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u128 },

    #[error("underlying undirected graph has a cycle through node {0}")]
    CycleDetected(usize),

    #[error("graph is not degree-normalized: edge ({src}, {dst}) has weight {weight}, expected {expected}")]
    NotDegreeNormalized {
        src: usize,
        dst: usize,
        weight: f64,
        expected: f64,
    },

    #[error("power iteration did not converge in {iterations} iterations (last residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad input rather than a failure inside the library.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::NotConverged { .. })
    }
}
