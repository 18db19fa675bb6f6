//! Dense matrices and the edge ordering that drives clique topology.
//!
//! Images, kernels and feature maps are plain row-major grids. Anything fed
//! to the topology engine goes through [`SymmetricMatrix`], whose
//! off-diagonal entries are ranked by [`edge_order`] into an
//! [`EdgeFiltration`].

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};

/// A row-major grid of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty("grid with a zero dimension"));
        }
        if values.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                what: "grid",
                expected: rows * cols,
                found: values.len(),
            });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                values.push(f(r, c));
            }
        }
        Self::new(rows, cols, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Applies `f` to every value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.values
            .iter()
            .position(|v| !v.is_finite())
            .map(|p| (p / self.cols, p % self.cols))
    }
}

macro_rules! grid_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(Grid);

        impl $name {
            pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
                Grid::new(rows, cols, values).and_then(Self::from_grid)
            }

            pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
                Grid::from_fn(rows, cols, f).and_then(Self::from_grid)
            }

            pub fn from_grid(grid: Grid) -> Result<Self> {
                if let Some((row, col)) = grid.first_non_finite() {
                    return Err(Error::NonFinite { row, col });
                }
                Ok(Self(grid))
            }

            pub fn grid(&self) -> &Grid {
                &self.0
            }

            pub fn into_grid(self) -> Grid {
                self.0
            }

            pub fn rows(&self) -> usize {
                self.0.rows
            }

            pub fn cols(&self) -> usize {
                self.0.cols
            }

            #[inline]
            pub fn get(&self, row: usize, col: usize) -> f64 {
                self.0.get(row, col)
            }

            pub fn values(&self) -> &[f64] {
                &self.0.values
            }
        }
    };
}

grid_newtype!(
    /// Pixel intensities of an input image.
    RawImage
);
grid_newtype!(
    /// Convolution weights of a single 2-D filter.
    Kernel
);
grid_newtype!(
    /// Output of convolving a [`RawImage`] with a [`Kernel`].
    FeatureMap
);

/// A square real matrix with `a[i][j] == a[j][i]` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Validates exact symmetry of a row-major `n x n` buffer.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("matrix of side 0"));
        }
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch {
                what: "symmetric matrix",
                expected: n * n,
                found: entries.len(),
            });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (entries[i * n + j], entries[j * n + i]);
                // NaN never equals itself; accept bit-identical pairs.
                if a != b && a.to_bits() != b.to_bits() {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_grid(grid: Grid) -> Result<Self> {
        if !grid.is_square() {
            return Err(Error::NotSquare {
                rows: grid.rows,
                cols: grid.cols,
            });
        }
        Self::new(grid.rows, grid.values)
    }

    /// Builds a matrix from the upper triangle `f(i, j)` with `i <= j`.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("matrix of side 0"));
        }
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.n)
    }

    /// Applies `f` entrywise. The result is symmetric because `f` is a function.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn into_grid(self) -> Grid {
        Grid {
            rows: self.n,
            cols: self.n,
            values: self.entries,
        }
    }
}

/// `F'[i][j] = max(F[i][j], F[j][i])`, keeping the larger response of each pair.
pub fn symmetrize_max(map: &FeatureMap) -> Result<SymmetricMatrix> {
    symmetrize_with(map.grid(), f64::max)
}

/// `I + I^T`.
pub fn symmetrize_add(image: &RawImage) -> Result<SymmetricMatrix> {
    symmetrize_with(image.grid(), |a, b| a + b)
}

fn symmetrize_with(grid: &Grid, combine: impl Fn(f64, f64) -> f64) -> Result<SymmetricMatrix> {
    if !grid.is_square() {
        return Err(Error::NotSquare {
            rows: grid.rows,
            cols: grid.cols,
        });
    }
    let n = grid.rows;
    SymmetricMatrix::from_upper(n, |i, j| combine(grid.get(i, j), grid.get(j, i)))
}

/// Direction in which off-diagonal values enter the filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EdgeOrdering {
    /// Largest values first (feature maps, images).
    #[default]
    Descending,
    /// Smallest values first (distance matrices).
    Ascending,
}

/// One off-diagonal position `(i, j)`, `i < j`, with its matrix value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// All `n(n-1)/2` vertex pairs of a matrix, ranked by value.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFiltration {
    n: usize,
    ordering: EdgeOrdering,
    edges: Vec<Edge>,
}

impl EdgeFiltration {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ordering(&self) -> EdgeOrdering {
        self.ordering
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `N = n(n-1)/2`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The `(i, j)` pairs in filtration order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|e| (e.i, e.j))
    }

    /// `rank[pair_index(i, j)]` is the 1-based step at which `{i, j}` enters.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = alloc::vec![0usize; self.edges.len()];
        for (step, e) in self.edges.iter().enumerate() {
            ranks[pair_index(self.n, e.i, e.j)] = step + 1;
        }
        ranks
    }
}

/// Lexicographic index of the pair `(i, j)`, `i < j`, among all pairs of `n` vertices.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Ranks the strict upper triangle of `matrix`. Equal values keep
/// lexicographic `(i, j)` order.
pub fn edge_order(matrix: &SymmetricMatrix, ordering: EdgeOrdering) -> Result<EdgeFiltration> {
    let n = matrix.n();
    if n < 2 {
        return Err(Error::TooSmall { n });
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let value = matrix.get(i, j);
            if !value.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
            edges.push(Edge { i, j, value });
        }
    }
    // Stable sort over a lexicographically generated list handles ties.
    // partial_cmp treats -0.0 and 0.0 as equal, which a strictly increasing map preserves.
    match ordering {
        EdgeOrdering::Descending => edges.sort_by(|a, b| cmp_finite(b.value, a.value)),
        EdgeOrdering::Ascending => edges.sort_by(|a, b| cmp_finite(a.value, b.value)),
    }
    Ok(EdgeFiltration { n, ordering, edges })
}

fn cmp_finite(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}
