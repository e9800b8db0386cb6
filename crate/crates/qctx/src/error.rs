use thiserror::Error;

/// Everything a caller can get wrong, plus the one capacity limit the
/// exhaustive solvers enforce. Interior contradictions (two deciders
/// disagreeing, a verified context losing its eigenvalue) panic instead:
/// they are bugs, not inputs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("site counts differ: {left} vs {right}")]
    SiteCountMismatch { left: usize, right: usize },

    #[error("operation requires single-site terms")]
    NotSingleSite,

    #[error("site count must be 1 or 2, got {0}")]
    UnsupportedSiteCount(usize),

    #[error("state vector has norm {norm:.6}, expected 1 within 1e-12")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("observable must square to the identity to define a two-outcome measurement")]
    NotInvolutory,

    #[error("observable must be Hermitian")]
    NotHermitian,

    #[error("cannot normalize a zero state vector")]
    ZeroState,

    #[error("{found} variables exceed the exhaustive-enumeration capacity of {limit}")]
    TooManyVariables { found: usize, limit: usize },

    #[error("{found} constraints exceed the certificate-search capacity of {limit}")]
    TooManyConstraints { found: usize, limit: usize },

    #[error("duplicate variable {0:?}")]
    DuplicateVariable(String),

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("variable {0:?} repeats within one constraint")]
    RepeatedVariable(String),

    #[error("a constraint must mention at least one variable")]
    EmptyConstraint,

    #[error("sign must be +1 or -1, got {0}")]
    InvalidSign(i64),

    #[error("context has no verified eigenvalue; build it through a context-set constructor")]
    MissingEigenvalue,

    #[error("context must consist of exactly two measurement events")]
    MalformedContext,

    #[error("cannot parse {input:?} as an angle; try forms like \"pi/2\", \"3pi/4\", \"1.5708\"")]
    AngleParse { input: String },

    #[error("unknown state name {0:?}; known: up, down, plus, upup, singlet, random[:SEED]")]
    UnknownState(String),

    #[error("state {name:?} has dimension {dim}, but this run needs dimension {expected}")]
    StateDimension { name: String, dim: usize, expected: usize },

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("scan grid must have at least 8 points, got {0}")]
    GridTooCoarse(usize),

    #[error("invalid constraint-system document: {0}")]
    BadSystemDocument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
