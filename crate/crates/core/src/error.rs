use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value in {what} at flat index {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("component mismatch: expected {expected} components, found {found}")]
    Components { expected: usize, found: usize },

    #[error("symbol is singular at nonzero mode {mode:?}")]
    SingularSymbol { mode: Vec<i64> },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("pressure law is not smooth at rho = {rho}: {reason}")]
    NonSmoothPressure { rho: f64, reason: String },

    #[error("vacuum guard violated: min(1 + a) = {min_one_plus_a} < {threshold}")]
    Vacuum { min_one_plus_a: f64, threshold: f64 },

    #[error("missing norms in record: {}", .0.join(", "))]
    MissingNorms(Vec<String>),

    #[error("not enough samples: need at least {needed}, have {have}")]
    NotEnoughSamples { needed: usize, have: usize },

    #[error("solver produced non-finite state at t = {t}: {detail}")]
    Blowup { t: f64, detail: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
