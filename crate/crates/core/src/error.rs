use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid ENVI header: {0}")]
    Header(String),
    #[error("unsupported ENVI data type code {0}")]
    UnsupportedDataType(u32),
    #[error("data file holds {actual} bytes, header declares {expected}")]
    SizeMismatch { expected: u64, actual: u64 },
    #[error("value {value} at element {index} is not representable as ENVI data type {code}")]
    NotRepresentable { value: f64, index: usize, code: u32 },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cube kind {found} cannot feed {op} (expects {expected})")]
    KindTransition { op: &'static str, expected: String, found: String },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("non-finite value at {0}")]
    NonFinite(String),
    #[error("every calibration position is dead (white <= dark)")]
    AllDead,
    #[error("invalid scene: {0}")]
    Scene(String),
    #[error("image codec error: {0}")]
    Image(#[from] image::ImageError),
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
