use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("pixel index {index} out of bounds for {len} pixels")]
    Bounds { index: usize, len: usize },

    /// A field value lies outside every interval of the cover.
    #[error("pixel {pixel} has value {value} which no cover interval contains")]
    CoverMismatch { pixel: usize, value: f64 },

    #[error("operation not supported for {0} covers")]
    UnsupportedStyle(&'static str),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
