use thiserror::Error;

/// Errors raised while building or validating a triangle mesh.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("mesh dimension must be 3 or 4, got {0}")]
    BadDimension(usize),
    #[error("vertex {vertex} has {found} coordinates, expected {expected}")]
    BadVertex {
        vertex: usize,
        found: usize,
        expected: usize,
    },
    #[error("triangle {triangle} references vertex {vertex} out of range")]
    IndexOutOfRange { triangle: usize, vertex: usize },
    #[error("triangle {0} repeats a vertex index")]
    RepeatedIndex(usize),
    #[error("non-manifold edge ({0}, {1}) shared by more than two triangles")]
    NonManifoldEdge(usize, usize),
    #[error("inconsistent orientation on edge ({0}, {1})")]
    InconsistentOrientation(usize, usize),
    #[error("degenerate triangle {index} (area {area:e})")]
    DegenerateTriangle { index: usize, area: f64 },
    #[error("boundary edges at vertex {0} do not form simple closed loops")]
    NonSimpleBoundary(usize),
    #[error("mesh has no triangles")]
    Empty,
    #[error("mesh is not connected ({0} components)")]
    Disconnected(usize),
    #[error("mesh has no boundary")]
    NoBoundary,
    #[error("mesh must be closed")]
    NotClosed,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Errors raised by contour construction and the criteria.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("contour has no components")]
    Empty,
    #[error("component {0} has fewer than 3 points")]
    TooFewPoints(usize),
    #[error("component {component} repeats point {index} consecutively")]
    DuplicatePoint { component: usize, index: usize },
    #[error("components {0} and {1} are not disjoint")]
    NotDisjoint(usize, usize),
    #[error("contour dimension must be 3, got {0}")]
    BadDimension(usize),
    #[error("criterion needs at least two components")]
    SingleComponent,
    #[error("brute-force oracle supports 2..=12 components, got {0}")]
    OracleRange(usize),
    #[error("search budget must be positive")]
    BadBudget,
    #[error("circle radius {radius} must be below the packing radius {packing}")]
    RadiusTooLarge { radius: f64, packing: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Errors from the shape and net generators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error("unknown shape {0}")]
    UnknownShape(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("no net with covering radius <= {0} below the point cap")]
    NetInfeasible(f64),
}

/// Errors from curve construction and the doubling pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("transition function argument {0} outside [0, 1]")]
    OutOfDomain(f64),
    #[error("teardrop needs k >= 1 and samples_per_unit >= 100")]
    BadTeardropParams,
    #[error("half-circle resolved by only {0} samples (need >= 32)")]
    UnderResolved(usize),
    #[error("duplicate consecutive samples at index {0}")]
    DuplicateSample(usize),
    #[error("curve needs at least 3 samples")]
    TooFewSamples,
    #[error("degenerate tangent on boundary loop {loop_index} at sample {sample}")]
    DegenerateTangent { loop_index: usize, sample: usize },
    #[error("epsilon {epsilon} must lie in (0, {threshold})")]
    EpsilonTooLarge { epsilon: f64, threshold: f64 },
    #[error("degenerate tube cell at ({0}, {1})")]
    DegenerateCell(usize, usize),
    #[error("gluing mismatch: loop has {loop_len} samples, tube ring has {ring_len}")]
    GluingMismatch { loop_len: usize, ring_len: usize },
}

/// Errors from file IO and format parsing.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error("unsupported file extension: {0}")]
    UnknownFormat(String),
}
