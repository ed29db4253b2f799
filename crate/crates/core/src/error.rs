use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("vertex index {index} out of range for graph with {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("self-edge at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {from} -> {to}")]
    DuplicateEdge { from: usize, to: usize },
    #[error("edge {from} -> {to} has zero weight")]
    ZeroWeight { from: usize, to: usize },
    #[error("edge {from} -> {to} has a non-finite weight")]
    NonFiniteWeight { from: usize, to: usize },
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("edge set contains a directed cycle")]
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergraphError {
    #[error("vertex index {index} out of range for hypergraph with {len} vertices")]
    VertexOutOfRange { index: usize, len: usize },
    #[error("vertex {vertex} is incident to edge {edge} more than once")]
    DuplicateIncidence { vertex: usize, edge: usize },
    #[error("incidence ({vertex}, {edge}) has weight zero or non-finite")]
    InvalidWeight { vertex: usize, edge: usize },
    #[error("vertex {0} has zero magnitude; normalized matrices are undefined")]
    ZeroMagnitude(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BnError {
    #[error("expected {expected} noise scales, got {got}")]
    SigmaLength { expected: usize, got: usize },
    #[error("noise scale for vertex {vertex} must be positive and finite, got {value}")]
    InvalidSigma { vertex: usize, value: f64 },
    #[error("assumption checks need an odd positive power, got {0}")]
    EvenPower(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix asymmetry {asymmetry:e} exceeds tolerance")]
    NotSymmetric { asymmetry: f64 },
    #[error("diagonal entry {index} is {value}, expected 1")]
    NotNormalized { index: usize, value: f64 },
    #[error("odd power required, got {0}")]
    EvenPower(usize),
    #[error("vector has zero norm")]
    ZeroVector,
    #[error("vector length {got} does not match {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("node count must be at least 1")]
    NoVertices,
    #[error("edge probability {0} outside [0, 1]")]
    EdgeProbability(f64),
    #[error("invalid weight support [{lo}, {hi}]: need 0 < lo <= hi")]
    WeightSupport { lo: f64, hi: f64 },
    #[error("invalid noise scale range [{lo}, {hi}]: need 0 < lo <= hi")]
    SigmaRange { lo: f64, hi: f64 },
    #[error("sample covariance is singular at working precision")]
    SingularCovariance,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Bn(#[from] BnError),
}
