use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown object category `{0}`")]
    UnknownCategory(String),

    #[error("asset index {index} out of range for {category} ({count} available)")]
    AssetIndex {
        category: &'static str,
        index: u32,
        count: u32,
    },

    #[error("scene object #{object} cannot be resolved: {reason}")]
    UnresolvedMark { object: usize, reason: String },

    #[error("point ({x}, {y}) is not on a road cell")]
    OffRoad { x: f64, y: f64 },

    #[error("invalid camera: {0}")]
    Camera(String),

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("histogram bin count mismatch: {0} vs {1}")]
    BinMismatch(usize, usize),

    #[error("empty image set")]
    EmptyImageSet,

    #[error("{what}, line {line}: {msg}")]
    Parse {
        what: &'static str,
        line: usize,
        msg: String,
    },

    #[error("{path}: {msg}")]
    Image { path: String, msg: String },

    #[error("integrity check failed for {0}")]
    Digest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    TomlDe(#[from] toml::de::Error),

    #[error(transparent)]
    TomlSer(#[from] toml::ser::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(what: &'static str, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            what,
            line,
            msg: msg.into(),
        }
    }
}
