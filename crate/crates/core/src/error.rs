use thiserror::Error;

/// Reasons an edge-list document can be rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty document: expected a vertex-count header line")]
    MissingHeader,
    #[error("line {line}: malformed line {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: duplicate edge ({a}, {b})")]
    DuplicateEdge { line: usize, a: usize, b: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("edge ({0}, {1}) is not in the graph")]
    EdgeNotInGraph(usize, usize),

    #[error("graph is not {degree}-regular")]
    NotRegular { degree: usize },

    #[error("resource limit exceeded: {what} needs {requested}, limit is {limit}")]
    Resource {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("evaluation budget exceeded: {requested} evaluations requested, budget is {budget}")]
    Budget { requested: u64, budget: u64 },

    #[error("infeasible input: {0}")]
    Infeasible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("series did not converge within {terms} terms")]
    NotConverged { terms: usize },

    #[error("random regular graph generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
