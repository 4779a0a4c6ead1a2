use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("frame must contain at least one label")]
    EmptyFrame,
    #[error("frame has {0} labels, at most {max} are supported", max = crate::belief::MAX_FRAME_SIZE)]
    FrameTooLarge(usize),
    #[error("duplicate label `{0}` in frame")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("subset {0:#x} has members outside the frame")]
    SubsetOutOfFrame(u64),
    #[error("focal set listed twice: {0}")]
    DuplicateFocalSet(String),
    #[error("invalid mass {0}: masses must be finite and nonnegative")]
    InvalidMass(f64),
    #[error("masses sum to {0}, expected 1")]
    MassSum(f64),
    #[error("simple support needs a nonempty focus")]
    EmptyFocus,
    #[error("mass functions are defined on different frames")]
    FrameMismatch,
    #[error("total conflict: all mass is on the empty set")]
    TotalConflict,
    #[error("rate {0} outside [0, 1]")]
    RateOutOfRange(f64),

    #[error("learning set is empty")]
    EmptyLearningSet,
    #[error("case {case} has {found} features, expected {expected}")]
    DimensionMismatch {
        case: usize,
        expected: usize,
        found: usize,
    },
    #[error("case {0} has an empty partially known class")]
    EmptyLabel(usize),
    #[error("covariance matrix around case {0} is not positive definite")]
    SingularCovariance(usize),
    #[error("invalid classifier configuration: {0}")]
    BadConfig(String),
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("test case {0} does not carry a single class")]
    NonSingletonLabel(usize),

    #[error("frames share no label")]
    DisjointFrames,

    #[error("need at least one source")]
    EmptyPool,
    #[error("cannot form {k} nonempty groups from {sources} sources")]
    InvalidGroupCount { k: usize, sources: usize },
    #[error("{0} sources exceed the supported 64")]
    TooManySources(usize),

    #[error("rank must be at least 1, got {0}")]
    BadRank(u32),
    #[error("unknown document `{0}`")]
    UnknownDocument(String),
    #[error("duplicate document `{0}`")]
    DuplicateDocument(String),
    #[error("document `{0}` links to itself")]
    SelfLink(String),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("expression has {0} variables, exact evaluation supports at most {max}", max = crate::pas::MAX_EXACT_VARIABLES)]
    TooManyVariables(usize),
    #[error("more than {0} arguments; raise the path budget")]
    PathBudgetExceeded(usize),

    #[error("invalid experiment: {0}")]
    BadSpec(String),
    #[error("pooled covariance is not positive definite")]
    SingularPooledCovariance,

    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Malformed input, as opposed to a failure inside a module.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Json(_) | Error::Csv(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
