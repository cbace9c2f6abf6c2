use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge {edge:?} has {got} vertices, expected {expected}")]
    WrongArity {
        edge: Vec<usize>,
        expected: usize,
        got: usize,
    },
    #[error("edge {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("uniformity must be at least 2, got {0}")]
    BadUniformity(usize),
    #[error("edge {0:?} is not present")]
    NoSuchEdge(Vec<usize>),
    #[error("uniformity mismatch: {0} vs {1}")]
    UniformityMismatch(usize, usize),
    #[error("blow-up counts invalid: {0}")]
    BadCounts(String),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("partition targets differ: {0} vs {1}")]
    TargetMismatch(usize, usize),
    #[error("{0}")]
    TooSmall(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vector has {got} entries, graph has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exponent p = {0} must satisfy 1 < p < inf")]
    BadP(f64),
    #[error("vector is identically zero")]
    AllZero,
    #[error("graph has an isolated vertex")]
    IsolatedVertex,
    #[error("cloning requires two distinct vertices")]
    SameVertex,
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("k = {k} must lie in [1, {max}]")]
    BadK { k: usize, max: usize },
    #[error("trivial partition is not allowed here")]
    TrivialPartition,
    #[error("graph is not a member of the family")]
    NotMember,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("infeasible request: {0}")]
    Infeasible(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("invalid solver configuration: {0}")]
    BadConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
