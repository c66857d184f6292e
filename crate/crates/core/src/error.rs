use thiserror::Error;

/// Which of the first-wavelength integer sets failed to resolve in the
/// double-remainder search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum IntegerSet {
    /// Time-domain folding integers of wavelength 1.
    #[serde(rename = "S_T")]
    Time,
    /// Space-domain folding integers of wavelength 1.
    #[serde(rename = "S_S")]
    Space,
}

impl std::fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntegerSet::Time => f.write_str("S_T"),
            IntegerSet::Space => f.write_str("S_S"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("no consistent solution: {set} is empty ({detail})")]
    NoSolution { set: IntegerSet, detail: String },

    #[error("ambiguous solution: S_T = {s_t:?}, S_S = {s_s:?}")]
    Ambiguous { s_t: Vec<i64>, s_s: Vec<i64> },

    #[error("estimation failure: {0}")]
    Estimation(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
