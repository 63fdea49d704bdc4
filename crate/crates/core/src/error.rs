use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node index {index} out of range 1..={node_count}")]
    IndexOutOfRange { index: usize, node_count: usize },

    #[error("edge weight must be finite and nonnegative, got {0}")]
    InvalidWeight(f64),

    #[error("node count must be at least {min}, got {got}")]
    NodeCount { min: usize, got: usize },

    #[error("networks disagree on node count: expected {expected}, found {found}")]
    InconsistentNodeCount { expected: usize, found: usize },

    #[error("operation needs at least {min} networks, sample has {got}")]
    TooFewNetworks { min: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("empty edge series")]
    EmptySeries,

    #[error("alpha must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),

    #[error("modularity is undefined on a network with zero total weight")]
    ZeroTotalWeight,

    #[error("partitions have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("number of groups {groups} outside 1..={n}")]
    GroupCountOutOfRange { groups: usize, n: usize },

    #[error("empty group")]
    EmptyGroup,

    #[error("coordinates ({x}, {y}) outside the pitch")]
    OutOfBounds { x: f64, y: f64 },

    #[error("events are not sorted by seq within match {match_id}")]
    UnsortedEvents { match_id: String },

    #[error("unknown event category `{0}`")]
    UnknownCategory(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("effective minutes must be positive, got {0}")]
    NonPositiveMinutes(f64),

    #[error("invalid score-model parameters: {0}")]
    InvalidParameter(String),

    #[error("team {0} never observed in the fitting window")]
    TeamNotObserved(usize),

    #[error("rank-deficient design: {0}")]
    RankDeficient(String),

    #[error("optimizer did not converge after {iterations} iterations (gradient max-norm {grad_norm:e})")]
    NonConvergence { iterations: usize, grad_norm: f64 },

    #[error("singular {which} matrix (condition number {condition:e})")]
    SingularMatrix { which: &'static str, condition: f64 },

    #[error("confidence interval escapes the search grid [{low}, {high}]; widen the grid")]
    GridTooNarrow { low: f64, high: f64 },

    #[error("empty range: {0}")]
    EmptyRange(String),

    #[error("empty candidate list")]
    EmptyCandidates,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable identifier for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::InvalidWeight(_) => "invalid_weight",
            Error::NodeCount { .. } => "node_count",
            Error::InconsistentNodeCount { .. } => "inconsistent_node_count",
            Error::TooFewNetworks { .. } => "too_few_networks",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::EmptySeries => "empty_series",
            Error::InvalidAlpha(_) => "invalid_alpha",
            Error::ZeroTotalWeight => "zero_total_weight",
            Error::LengthMismatch(..) => "length_mismatch",
            Error::InvalidPartition(_) => "invalid_partition",
            Error::GroupCountOutOfRange { .. } => "group_count_out_of_range",
            Error::EmptyGroup => "empty_group",
            Error::OutOfBounds { .. } => "out_of_bounds",
            Error::UnsortedEvents { .. } => "unsorted_events",
            Error::UnknownCategory(_) => "unknown_category",
            Error::InvalidProbability(_) => "invalid_probability",
            Error::NonPositiveMinutes(_) => "nonpositive_minutes",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::TeamNotObserved(_) => "team_not_observed",
            Error::RankDeficient(_) => "rank_deficient",
            Error::NonConvergence { .. } => "non_convergence",
            Error::SingularMatrix { .. } => "singular_matrix",
            Error::GridTooNarrow { .. } => "grid_too_narrow",
            Error::EmptyRange(_) => "empty_range",
            Error::EmptyCandidates => "empty_candidates",
            Error::Invalid(_) => "invalid_input",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
