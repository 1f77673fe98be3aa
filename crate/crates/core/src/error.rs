use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An arithmetic helper was called outside the range where it is defined.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// The orders do not describe a stratum with a nonnegative integral genus.
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    /// `mv_convert` was asked for a signature outside its applicability range.
    #[error("no Masur-Veech conversion for {0}")]
    UnsupportedConversion(String),

    /// A volume file line could not be parsed.
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Two volume table lines share the same canonical key.
    #[error("duplicate volume key `{key}` (line {line})")]
    DuplicateKey { key: String, line: usize },

    /// No provider could resolve one or more stratum volumes.
    ///
    /// `keys` holds the canonical keys in the volume-file syntax, sorted and
    /// deduplicated; `context` names the graphs that needed them.
    #[error("missing volumes: {}", keys.join(" | "))]
    MissingVolume { keys: Vec<String>, context: Vec<String> },

    /// A caller violated a documented precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }

    /// Lines ready to paste into a volume file, one per missing key.
    pub fn missing_table_lines(&self) -> Vec<String> {
        match self {
            Error::MissingVolume { keys, .. } => keys.iter().map(|k| format!("{k}; vol=")).collect(),
            _ => Vec::new(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
