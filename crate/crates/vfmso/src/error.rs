use thiserror::Error;

#[derive(Debug, Error)]
pub enum VfmsoError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("rul standard deviation must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("due date {due} does not exceed previous repair time {previous}")]
    DegenerateLife { due: f64, previous: f64 },

    #[error("unsupported instance format `{format}` version {version}")]
    UnsupportedFormat { format: String, version: u32 },

    #[error("invalid sample set: {0}")]
    InvalidSamples(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("cannot parse instance file: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("cannot serialize instance: {0}")]
    Serialize(#[from] toml::ser::Error),
}

pub type Result<T> = std::result::Result<T, VfmsoError>;
