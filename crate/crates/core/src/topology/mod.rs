//! Betti curves of the order complex of a symmetric matrix.
//!
//! Off-diagonal entries are added one at a time (see [`edge_order`]); after
//! `v` steps the first `v` pairs form a graph whose clique complex has Betti
//! numbers `beta_k(v)`. A single persistence reduction yields every
//! `beta_k(v)` for `v = 0..=N` at once.

mod flag;
mod reduce;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{edge_order, Edge, EdgeFiltration, EdgeOrdering, SymmetricMatrix};

pub use flag::{binomial, flag_filtration, flag_simplex_count, SimplexFiltration, SimplexRef, DEFAULT_SIMPLEX_BUDGET};
pub use reduce::Interval;

/// Largest matrix side accepted unless the guard is lifted.
pub const DEFAULT_DIMENSION_GUARD: usize = 140;

/// Knobs shared by every topology run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopologyConfig {
    /// Highest homology dimension computed.
    pub k_max: usize,
    pub ordering: EdgeOrdering,
    /// `None` disables the side-length check.
    pub guard: Option<usize>,
    pub simplex_budget: u64,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        Self {
            k_max: 1,
            ordering: EdgeOrdering::Descending,
            guard: Some(DEFAULT_DIMENSION_GUARD),
            simplex_budget: DEFAULT_SIMPLEX_BUDGET,
        }
    }
}

impl TopologyConfig {
    pub fn with_ordering(mut self, ordering: EdgeOrdering) -> Self {
        self.ordering = ordering;
        self
    }

    pub fn with_k_max(mut self, k_max: usize) -> Self {
        self.k_max = k_max;
        self
    }

    pub fn check_guard(&self, n: usize) -> Result<()> {
        match self.guard {
            Some(guard) if n > guard => Err(Error::GuardExceeded { n, guard }),
            _ => Ok(()),
        }
    }
}

/// `beta_k(v)` for `k = 0..=k_max` and `v = 0..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiCurves {
    n: usize,
    edge_count: usize,
    curves: Vec<Vec<usize>>,
}

impl BettiCurves {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = n(n-1)/2`.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn k_max(&self) -> usize {
        self.curves.len() - 1
    }

    /// `beta_k` indexed by edge count, length `N + 1`.
    pub fn curve(&self, k: usize) -> Option<&[usize]> {
        self.curves.get(k).map(Vec::as_slice)
    }

    pub fn beta(&self, k: usize, v: usize) -> Option<usize> {
        self.curve(k).and_then(|c| c.get(v).copied())
    }

    /// Normalized edge density `e = v / N`.
    pub fn density(&self, v: usize) -> f64 {
        if self.edge_count == 0 {
            0.0
        } else {
            v as f64 / self.edge_count as f64
        }
    }

    fn checked_curve(&self, k: usize) -> Result<&[usize]> {
        self.curve(k)
            .ok_or_else(|| Error::Contract(format!("homology dimension {k} exceeds k_max {}", self.k_max())))
    }
}

/// Reads Betti curves off a persistence reduction of `sf`.
///
/// Needs `sf.max_dim() >= k_max + 1`, since `beta_k` depends on the
/// `(k + 1)`-simplices that fill `k`-cycles.
pub fn betti_curves(sf: &SimplexFiltration, k_max: usize) -> Result<BettiCurves> {
    if k_max + 1 > sf.max_dim() {
        return Err(Error::Contract(format!(
            "beta_{k_max} needs simplices of dimension {}, filtration stops at {}",
            k_max + 1,
            sf.max_dim()
        )));
    }
    let steps = sf.edge_count() + 1;
    // Difference arrays, one slot past the end for classes dying at N + 1.
    let mut deltas = vec![vec![0isize; steps + 1]; k_max + 1];
    for interval in reduce::persistence_intervals(sf, k_max) {
        let end = interval.death.unwrap_or(steps);
        if end > interval.birth {
            deltas[interval.dim][interval.birth] += 1;
            deltas[interval.dim][end] -= 1;
        }
    }
    let curves = deltas
        .into_iter()
        .map(|d| {
            let mut running = 0isize;
            d[..steps]
                .iter()
                .map(|&x| {
                    running += x;
                    running as usize
                })
                .collect()
        })
        .collect();
    Ok(BettiCurves {
        n: sf.n(),
        edge_count: sf.edge_count(),
        curves,
    })
}

/// Persistence intervals of dimensions `0..=k_max`, zero-length ones dropped.
pub fn persistence(sf: &SimplexFiltration, k_max: usize) -> Result<Vec<Interval>> {
    if k_max + 1 > sf.max_dim() {
        return Err(Error::Contract(format!(
            "persistence up to {k_max} needs max_dim {}",
            k_max + 1
        )));
    }
    let mut intervals: Vec<_> = reduce::persistence_intervals(sf, k_max)
        .into_iter()
        .filter(|i| i.death.is_none_or(|d| d > i.birth))
        .collect();
    intervals.sort_unstable();
    Ok(intervals)
}

/// Guard check, edge ordering, flag expansion to `k_max + 1`, and reduction.
pub fn betti_curves_of(matrix: &SymmetricMatrix, config: &TopologyConfig) -> Result<BettiCurves> {
    config.check_guard(matrix.n())?;
    let ef = edge_order(matrix, config.ordering)?;
    betti_curves_of_filtration(&ef, config)
}

pub fn betti_curves_of_filtration(ef: &EdgeFiltration, config: &TopologyConfig) -> Result<BettiCurves> {
    let sf = flag_filtration(ef, config.k_max + 1, config.simplex_budget)?;
    betti_curves(&sf, config.k_max)
}

/// Smallest edge count `v` with `beta_k(v) != 0`, or `None` if no
/// `k`-dimensional hole ever forms.
pub fn starting_edge_density(curves: &BettiCurves, k: usize) -> Result<Option<usize>> {
    Ok(curves.checked_curve(k)?.iter().position(|&b| b != 0))
}

/// `max_v beta_k(v)`: the most `k`-dimensional holes the order complex reaches.
pub fn max_betti(curves: &BettiCurves, k: usize) -> Result<usize> {
    Ok(curves.checked_curve(k)?.iter().copied().max().unwrap_or(0))
}

/// The graph spanned by the top `v` pairs of a filtration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureTopology<'a> {
    n: usize,
    edges: &'a [Edge],
}

impl<'a> FeatureTopology<'a> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of pairs included.
    pub fn v(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &'a [Edge] {
        self.edges
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.edges.iter().any(|e| e.i == i && e.j == j)
    }

    /// True when every edge of `self` is also in `other`.
    pub fn is_subset_of(&self, other: &FeatureTopology<'_>) -> bool {
        self.n == other.n && self.edges.iter().all(|e| other.contains(e.i, e.j))
    }
}

/// `tau(F, v)`: the first `v` pairs of `ef`.
pub fn feature_topology(ef: &EdgeFiltration, v: usize) -> Result<FeatureTopology<'_>> {
    if v > ef.len() {
        return Err(Error::Contract(format!("edge count {v} exceeds N = {}", ef.len())));
    }
    Ok(FeatureTopology {
        n: ef.n(),
        edges: &ef.edges()[..v],
    })
}
