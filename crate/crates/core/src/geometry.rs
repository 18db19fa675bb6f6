//! Geometric and random symmetric matrices for constructing-complexity runs.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

/// `n` points in `R^d`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    n: usize,
    d: usize,
    coordinates: Vec<f64>,
}

impl PointCloud {
    pub fn new(n: usize, d: usize, coordinates: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall { n });
        }
        if d == 0 {
            return Err(Error::Empty("point cloud of dimension 0"));
        }
        if coordinates.len() != n * d {
            return Err(Error::ShapeMismatch {
                what: "point cloud",
                expected: n * d,
                found: coordinates.len(),
            });
        }
        if let Some(p) = coordinates.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { row: p / d, col: p % d });
        }
        Ok(Self { n, d, coordinates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coordinates[i * self.d..(i + 1) * self.d]
    }

    pub fn coordinates(&self) -> &[f64] {
        &self.coordinates
    }
}

/// Pairwise Euclidean distances `a_ij = |p_i - p_j|`.
pub fn geometric_matrix(cloud: &PointCloud) -> SymmetricMatrix {
    SymmetricMatrix::from_upper(cloud.n, |i, j| {
        if i == j {
            return 0.0;
        }
        let sq: f64 = cloud
            .point(i)
            .iter()
            .zip(cloud.point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        libm::sqrt(sq)
    })
    .expect("point clouds have n >= 2")
}

/// `n` points drawn i.i.d. uniformly from `[0, 1]^d`.
pub fn sample_point_cloud(n: usize, d: usize, seed: u64) -> Result<PointCloud> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coordinates = (0..n * d).map(|_| rng.random::<f64>()).collect();
    PointCloud::new(n, d, coordinates)
}

/// Upper triangle i.i.d. uniform on `[0, 1)`, mirrored; zero diagonal.
pub fn random_symmetric(n: usize, seed: u64) -> Result<SymmetricMatrix> {
    if n < 2 {
        return Err(Error::TooSmall { n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SymmetricMatrix::from_upper(n, |i, j| if i == j { 0.0 } else { rng.random::<f64>() })
}
