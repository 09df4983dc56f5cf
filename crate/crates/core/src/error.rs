use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} is {left_rows}x{left_cols}, {right} is {right_rows}x{right_cols}")]
    DimensionMismatch {
        left: &'static str,
        left_rows: usize,
        left_cols: usize,
        right: &'static str,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("trivial game: {0}")]
    TrivialGame(String),

    #[error("game is not in canonical 3x2 form; canonicalize it first")]
    NotCanonical,

    #[error("{what} has {size} entries, above the enumeration cap of {cap}; reduce homogeneous columns or raise the cap")]
    EnumerationCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("gram extraction inconsistent: max deviation {deviation:e} exceeds {tolerance:e}")]
    GramInconsistent { deviation: f64, tolerance: f64 },

    #[error("vector norm {norm} exceeds 1")]
    NormTooLarge { norm: f64 },

    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("column {0} uses a default answer and has no measurement")]
    DefaultColumn(usize),

    #[error("vector dimension {dim} exceeds the dense simulation cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("invalid card: {0:?}")]
    InvalidCard(String),

    #[error("invalid round: {0}")]
    InvalidRound(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("incomplete catalog: {0}")]
    IncompleteCatalog(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag, used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidGame(_) => "invalid_game",
            Error::InvalidStrategy(_) => "invalid_strategy",
            Error::TrivialGame(_) => "trivial_game",
            Error::NotCanonical => "not_canonical",
            Error::EnumerationCap { .. } => "enumeration_cap",
            Error::GramInconsistent { .. } => "gram_inconsistent",
            Error::NormTooLarge { .. } => "norm_too_large",
            Error::QubitOutOfRange { .. } => "qubit_out_of_range",
            Error::InvalidGate(_) => "invalid_gate",
            Error::DefaultColumn(_) => "default_column",
            Error::DimensionCap { .. } => "dimension_cap",
            Error::InvalidCard(_) => "invalid_card",
            Error::InvalidRound(_) => "invalid_round",
            Error::InvalidSweep(_) => "invalid_sweep",
            Error::IncompleteCatalog(_) => "incomplete_catalog",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Schema(_) => "schema",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
