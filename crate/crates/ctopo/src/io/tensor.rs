//! TFL1 tensor interchange: ASCII `TFL1`, `u32` LE rank, `rank` LE `u32`
//! dims, then row-major `f64` LE values.

use std::fs;
use std::path::Path;

use ctopo_core::matrix::Grid;

use crate::error::{format_err, io_err, FormatError, Result};

pub const TENSOR_MAGIC: &[u8; 4] = b"TFL1";

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> std::result::Result<Self, FormatError> {
        if dims.is_empty() {
            return Err(FormatError::ZeroDims);
        }
        let expected: usize = dims.iter().product();
        if expected != data.len() {
            return Err(FormatError::SizeMismatch {
                expected: expected * 8,
                found: data.len() * 8,
            });
        }
        Ok(Self { dims, data })
    }

    pub fn from_grid(grid: &Grid) -> Self {
        Self {
            dims: vec![grid.rows(), grid.cols()],
            data: grid.values().to_vec(),
        }
    }

    pub fn stack(grids: &[Grid]) -> std::result::Result<Self, FormatError> {
        let (r, c) = grids.first().map_or((0, 0), |g| (g.rows(), g.cols()));
        let mut data = Vec::with_capacity(grids.len() * r * c);
        for g in grids {
            if (g.rows(), g.cols()) != (r, c) {
                return Err(FormatError::SizeMismatch {
                    expected: r * c * 8,
                    found: g.values().len() * 8,
                });
            }
            data.extend_from_slice(g.values());
        }
        Self::new(vec![grids.len(), r, c], data)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// A rank-2 tensor, or rank 3 with a leading 1, as one grid.
    pub fn to_grid(&self) -> std::result::Result<Grid, FormatError> {
        let (r, c) = match self.dims[..] {
            [r, c] | [1, r, c] => (r, c),
            _ => {
                return Err(FormatError::Rank {
                    expected: "2",
                    found: self.dims.clone(),
                })
            }
        };
        Grid::new(r, c, self.data.clone()).map_err(|_| FormatError::ZeroDims)
    }

    /// Rank 3 `[count, rows, cols]` as `count` grids; rank 2 as one grid.
    pub fn to_grids(&self) -> std::result::Result<Vec<Grid>, FormatError> {
        let (count, r, c) = match self.dims[..] {
            [r, c] => (1, r, c),
            [n, r, c] => (n, r, c),
            _ => {
                return Err(FormatError::Rank {
                    expected: "2 or 3",
                    found: self.dims.clone(),
                })
            }
        };
        if r == 0 || c == 0 {
            return Err(FormatError::ZeroDims);
        }
        Ok((0..count)
            .map(|i| Grid::new(r, c, self.data[i * r * c..(i + 1) * r * c].to_vec()).expect("shape checked"))
            .collect())
    }
}

pub fn encode_tensor(t: &Tensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 4 * t.dims.len() + 8 * t.data.len());
    out.extend_from_slice(TENSOR_MAGIC);
    out.extend_from_slice(&(t.dims.len() as u32).to_le_bytes());
    for &d in &t.dims {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    for &v in &t.data {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_tensor(bytes: &[u8]) -> std::result::Result<Tensor, FormatError> {
    if bytes.len() < 8 {
        return Err(FormatError::Truncated {
            expected: 8,
            found: bytes.len(),
        });
    }
    if &bytes[..4] != TENSOR_MAGIC {
        return Err(FormatError::BadMagic {
            expected: TENSOR_MAGIC.to_vec(),
            found: bytes[..4].to_vec(),
        });
    }
    let ndim = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    if ndim == 0 {
        return Err(FormatError::ZeroDims);
    }
    let header = 8 + 4 * ndim;
    if bytes.len() < header {
        return Err(FormatError::Truncated {
            expected: header,
            found: bytes.len(),
        });
    }
    let dims: Vec<usize> = bytes[8..header]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()) as usize)
        .collect();
    let expected = dims.iter().try_fold(8usize, |acc, &d| acc.checked_mul(d));
    let payload = bytes.len() - header;
    if expected != Some(payload) {
        return Err(FormatError::SizeMismatch {
            expected: expected.unwrap_or(usize::MAX),
            found: payload,
        });
    }
    let data = bytes[header..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Tensor { dims, data })
}

pub fn read_tensor(path: &Path) -> Result<Tensor> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    decode_tensor(&bytes).map_err(format_err(path))
}

pub fn write_tensor(path: &Path, tensor: &Tensor) -> Result<()> {
    fs::write(path, encode_tensor(tensor)).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn layout_is_little_endian() {
        let t = Tensor::new(vec![1, 2], vec![1.0, -2.5]).unwrap();
        let bytes = encode_tensor(&t);
        assert_eq!(&bytes[..4], b"TFL1");
        assert_eq!(&bytes[4..16], &[2, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0]);
        assert_eq!(&bytes[16..24], &1.0f64.to_le_bytes());
        assert_eq!(bytes.len(), 32);
    }

    #[test]
    fn round_trip_2x3() {
        let t = Tensor::new(vec![2, 3], vec![0.1, 0.2, -0.3, 1e300, f64::MIN_POSITIVE, -0.0]).unwrap();
        let back = decode_tensor(&encode_tensor(&t)).unwrap();
        assert_eq!(back.dims(), &[2, 3]);
        for (a, b) in t.data().iter().zip(back.data()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn size_mismatch_and_bad_headers() {
        let mut bytes = b"TFL1".to_vec();
        bytes.extend_from_slice(&2u32.to_le_bytes());
        bytes.extend_from_slice(&2u32.to_le_bytes());
        bytes.extend_from_slice(&2u32.to_le_bytes());
        assert_eq!(bytes.len(), 16);
        assert_eq!(
            decode_tensor(&bytes),
            Err(FormatError::SizeMismatch { expected: 32, found: 0 })
        );
        let mut zero = b"TFL1".to_vec();
        zero.extend_from_slice(&0u32.to_le_bytes());
        assert_eq!(decode_tensor(&zero), Err(FormatError::ZeroDims));
        assert!(matches!(
            decode_tensor(b"TFL2\0\0\0\0"),
            Err(FormatError::BadMagic { .. })
        ));
        assert!(Tensor::new(vec![], vec![]).is_err());
    }

    proptest! {
        #[test]
        fn bit_exact_round_trip(dims in prop::collection::vec(1usize..5, 1..4), seed in any::<u64>()) {
            let len: usize = dims.iter().product();
            let data: Vec<f64> = (0..len as u64).map(|i| f64::from_bits(seed.wrapping_mul(i + 1).rotate_left(7))).collect();
            let t = Tensor::new(dims, data).unwrap();
            let back = decode_tensor(&encode_tensor(&t)).unwrap();
            prop_assert_eq!(back.dims(), t.dims());
            prop_assert!(back.data().iter().zip(t.data()).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }
}
