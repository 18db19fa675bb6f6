//! File formats: IDX datasets, TFL1 tensors and delimited text matrices.

pub mod idx;
pub mod tensor;
pub mod text;

use std::fs;
use std::path::Path;

use ctopo_core::matrix::Grid;

use crate::error::{format_err, io_err, Result};

pub use idx::{load_idx, load_idx_images, load_idx_labels};
pub use tensor::{read_tensor, write_tensor, Tensor};
pub use text::{read_text_matrix, write_text_matrix};

/// Reads a TFL1 tensor (detected by magic) or a text matrix as one grid.
pub fn read_grid(path: &Path) -> Result<Grid> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    if bytes.starts_with(tensor::TENSOR_MAGIC) {
        tensor::decode_tensor(&bytes)
            .and_then(|t| t.to_grid())
            .map_err(format_err(path))
    } else {
        let text = String::from_utf8_lossy(&bytes);
        text::parse_text_matrix(&text).map_err(format_err(path))
    }
}

/// Reads one or more grids: a rank-3 TFL1 tensor, or any single grid.
pub fn read_grids(path: &Path) -> Result<Vec<Grid>> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    if bytes.starts_with(tensor::TENSOR_MAGIC) {
        tensor::decode_tensor(&bytes)
            .and_then(|t| t.to_grids())
            .map_err(format_err(path))
    } else {
        read_grid(path).map(|g| vec![g])
    }
}

/// Writes TFL1 for `.tfl`/`.tfl1` paths, text otherwise.
pub fn write_grid(path: &Path, grid: &Grid) -> Result<()> {
    let is_tensor = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("tfl") || e.eq_ignore_ascii_case("tfl1"));
    if is_tensor {
        write_tensor(path, &Tensor::from_grid(grid))
    } else {
        write_text_matrix(path, grid)
    }
}
