use std::io;
use std::path::PathBuf;

/// Malformed file contents.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad magic: expected {expected:02x?}, found {found:02x?}")]
    BadMagic { expected: Vec<u8>, found: Vec<u8> },
    #[error("truncated: header declares {expected} bytes, file has {found}")]
    Truncated { expected: usize, found: usize },
    #[error("size mismatch: dims need {expected} payload bytes, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("{images} images but {labels} labels")]
    CountMismatch { images: usize, labels: usize },
    #[error("tensor must have at least one dimension")]
    ZeroDims,
    #[error("expected a {expected}-dimensional tensor, got dims {found:?}")]
    Rank { expected: &'static str, found: Vec<usize> },
    #[error("line {line}: {message}")]
    Text { line: usize, message: String },
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Analysis(#[from] ctopo_core::Error),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}

pub(crate) fn format_err(path: impl Into<PathBuf>) -> impl FnOnce(FormatError) -> Error {
    let path = path.into();
    move |source| Error::Format { path, source }
}
