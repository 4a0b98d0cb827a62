use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("undefined on empty graph")]
    EmptyGraph,
    #[error("instance too large for exact oracle: {vertices} vertices exceeds cap {cap}")]
    TooLargeForExact { vertices: usize, cap: usize },
    #[error("edge {index} endpoint out of range: ({tail}, {head}) with n = {n}")]
    VertexOutOfRange {
        index: usize,
        tail: usize,
        head: usize,
        n: usize,
    },
    #[error("self-loop at edge {index} on vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("assignment has {got} values but graph has {expected} vertices")]
    AssignmentLength { expected: usize, got: usize },
    #[error("assignment value {value} for vertex {vertex} outside [0, 1]")]
    AssignmentRange { vertex: usize, value: f64 },
    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
    #[error("invalid degree oracle: {0}")]
    InvalidDegreeOracle(String),
    #[error("degree bound exceeded in ball: vertex {vertex} has degree {degree} > {bound}")]
    DegreeBoundExceeded {
        vertex: usize,
        degree: usize,
        bound: usize,
    },
    #[error("edge index {index} out of range for {edges} edges")]
    EdgeIndexOutOfRange { index: usize, edges: usize },
    #[error("empty sample: no type counts are positive")]
    EmptySample,
    #[error("sampling probability {0} outside (0, 1]")]
    InvalidProbability(f64),
    #[error("sampled vertex {0} has no recorded full degree")]
    MissingDegree(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("malformed type id: {0}")]
    MalformedTypeId(String),
}

pub type Result<T> = std::result::Result<T, Error>;
