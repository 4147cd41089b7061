use thiserror::Error;

/// Errors produced by the graph model and the spectral routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex class list is empty")]
    EmptyClasses,

    #[error("edge list is empty")]
    EmptyEdges,

    #[error("edge {edge} references unknown class `{id}`")]
    UnknownClass { edge: usize, id: String },

    #[error("edge {edge} ({from} -> {to}): index has length {got}, expected dimension {expected}")]
    IndexLength {
        edge: usize,
        from: String,
        to: String,
        got: usize,
        expected: usize,
    },

    #[error("class `{id}`: potential is not finite")]
    NonFinitePotential { id: String },

    #[error("duplicate class id `{id}`")]
    DuplicateClass { id: String },

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("gauge offset list has length {got}, expected one offset per class ({expected})")]
    OffsetCount { got: usize, expected: usize },

    #[error("gauge offset {index} has length {got}, expected dimension {expected}")]
    OffsetLength {
        index: usize,
        got: usize,
        expected: usize,
    },

    #[error("quasimomentum has {got} components, expected {expected}")]
    ThetaLength { got: usize, expected: usize },

    #[error("torus grid resolution {0} must be even and at least 2")]
    BadGridResolution(usize),

    #[error("torus grid {resolution}^{dimension} does not fit in memory")]
    GridTooLarge { resolution: usize, dimension: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("eigensolver did not converge within {sweeps} sweeps (order {order})")]
    NoConvergence { sweeps: usize, order: usize },

    #[error("eigensolve failed at theta = {theta}: {source}")]
    FiberEigen {
        theta: String,
        #[source]
        source: Box<Error>,
    },

    #[error("band path needs at least two waypoints")]
    TooFewWaypoints,

    #[error("band path needs at least one step per segment")]
    ZeroSteps,

    #[error("band count mismatch: {0} vs {1}")]
    BandCountMismatch(usize, usize),

    #[error("inconsistent bracket data: {0}")]
    Inconsistent(String),

    #[error("gauge enumeration would examine {count} gauges, above the budget of {budget}")]
    GaugeBudget { count: u128, budget: u128 },

    #[error("spec file: {0}")]
    SpecFile(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
