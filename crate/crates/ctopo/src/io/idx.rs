//! IDX files as distributed with MNIST: a big-endian `u32` magic
//! (`0x00000803` for `u8` image tensors, `0x00000801` for `u8` labels),
//! one big-endian `u32` per dimension, then the raw bytes.

use std::fs;
use std::path::Path;

use ctopo_core::matrix::RawImage;

use crate::error::{format_err, io_err, FormatError, Result};

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

fn read_header(bytes: &[u8], magic: u32, dims: usize) -> std::result::Result<Vec<usize>, FormatError> {
    let header = 4 * (1 + dims);
    if bytes.len() < header {
        return Err(FormatError::Truncated {
            expected: header,
            found: bytes.len(),
        });
    }
    if bytes[..4] != magic.to_be_bytes() {
        return Err(FormatError::BadMagic {
            expected: magic.to_be_bytes().to_vec(),
            found: bytes[..4].to_vec(),
        });
    }
    Ok(bytes[4..header]
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]) as usize)
        .collect())
}

/// Images of a `count x rows x cols` `u8` tensor. Pixel bytes become
/// reals unchanged (0 to 255).
pub fn parse_idx_images(bytes: &[u8]) -> std::result::Result<Vec<RawImage>, FormatError> {
    let dims = read_header(bytes, IMAGES_MAGIC, 3)?;
    let (count, rows, cols) = (dims[0], dims[1], dims[2]);
    let expected = 16 + count * rows * cols;
    if bytes.len() < expected {
        return Err(FormatError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    if rows == 0 || cols == 0 {
        return Err(FormatError::ZeroDims);
    }
    Ok(bytes[16..expected]
        .chunks_exact(rows * cols)
        .map(|px| RawImage::new(rows, cols, px.iter().map(|&b| f64::from(b)).collect()).expect("finite pixels"))
        .collect())
}

pub fn parse_idx_labels(bytes: &[u8]) -> std::result::Result<Vec<u8>, FormatError> {
    let dims = read_header(bytes, LABELS_MAGIC, 1)?;
    let expected = 8 + dims[0];
    if bytes.len() < expected {
        return Err(FormatError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    Ok(bytes[8..expected].to_vec())
}

pub fn load_idx_images(path: &Path) -> Result<Vec<RawImage>> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    parse_idx_images(&bytes).map_err(format_err(path))
}

pub fn load_idx_labels(path: &Path) -> Result<Vec<u8>> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    parse_idx_labels(&bytes).map_err(format_err(path))
}

/// Images plus labels; the two files must agree on the count.
pub fn load_idx(images: &Path, labels: &Path) -> Result<(Vec<RawImage>, Vec<u8>)> {
    let imgs = load_idx_images(images)?;
    let labs = load_idx_labels(labels)?;
    if imgs.len() != labs.len() {
        return Err(format_err(labels)(FormatError::CountMismatch {
            images: imgs.len(),
            labels: labs.len(),
        }));
    }
    Ok((imgs, labs))
}

/// Encodes `u8` images of one shape. Values are rounded and clamped to 0..=255.
pub fn encode_idx_images(images: &[RawImage]) -> std::result::Result<Vec<u8>, FormatError> {
    let (rows, cols) = images.first().map_or((0, 0), |i| (i.rows(), i.cols()));
    let mut out = Vec::with_capacity(16 + images.len() * rows * cols);
    out.extend_from_slice(&IMAGES_MAGIC.to_be_bytes());
    for d in [images.len(), rows, cols] {
        out.extend_from_slice(&(d as u32).to_be_bytes());
    }
    for img in images {
        if (img.rows(), img.cols()) != (rows, cols) {
            return Err(FormatError::SizeMismatch {
                expected: rows * cols,
                found: img.rows() * img.cols(),
            });
        }
        out.extend(img.values().iter().map(|&v| v.round().clamp(0.0, 255.0) as u8));
    }
    Ok(out)
}

pub fn encode_idx_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}
