use alloc::string::String;

/// Every failure the analysis core can report.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("entries ({row}, {col}) and ({col}, {row}) differ")]
    NotSymmetric { row: usize, col: usize },
    #[error("{what}: expected {expected} values, got {found}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("kernel {kernel_rows}x{kernel_cols} does not fit in image {image_rows}x{image_cols}")]
    KernelTooLarge {
        image_rows: usize,
        image_cols: usize,
        kernel_rows: usize,
        kernel_cols: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix side {n} is below the minimum of 2")]
    TooSmall { n: usize },
    #[error("matrix side {n} exceeds the dimension guard of {guard}")]
    GuardExceeded { n: usize, guard: usize },
    #[error("flag expansion needs {required} simplices, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("all inputs must share one shape: {0}")]
    MixedShapes(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("duplicate category id {0}")]
    DuplicateCategory(u32),
    #[error("unknown category id {0}")]
    UnknownCategory(u32),
    #[error("contract violated: {0}")]
    Contract(String),
}

pub type Result<T> = core::result::Result<T, Error>;
