use std::path::PathBuf;

/// Errors produced by the gate pipeline and its file formats.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// width * height * 255 does not fit the 32-bit cumulative sum field.
    #[error("image {width}x{height} too large for 32-bit integral sums")]
    DimensionOverflow { width: usize, height: usize },

    #[error("rectangle ({x0},{y0})-({x1},{y1}) out of bounds for {width}x{height} image")]
    RectOutOfBounds {
        x0: usize,
        y0: usize,
        x1: usize,
        y1: usize,
        width: usize,
        height: usize,
    },

    #[error("{size}x{size} window at ({cx},{cy}) out of bounds for {width}x{height} image")]
    WindowOutOfBounds {
        cx: usize,
        cy: usize,
        size: usize,
        width: usize,
        height: usize,
    },

    #[error("dimension mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid phantom geometry: {0}")]
    Geometry(String),

    #[error("{path}: malformed netpbm data: {reason}")]
    Pnm { path: PathBuf, reason: String },

    #[error("{path}, line {line}: {reason}")]
    Labels {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("all {0} entries failed to evaluate")]
    AllEntriesFailed(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn pnm(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Pnm {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by a bad configuration rather than bad input data.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Geometry(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
