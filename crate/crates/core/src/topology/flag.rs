//! Clique (flag) expansion of an edge filtration.
//!
//! Simplices of each dimension are stored level by level in colexicographic
//! order, so a simplex's position inside its level is its combinatorial
//! rank `sum_t C(v_t, t + 1)`. That lets facets be located without hashing.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{pair_index, EdgeFiltration};

/// Default cap on the total number of simplices a flag expansion may build.
pub const DEFAULT_SIMPLEX_BUDGET: u64 = 50_000_000;

/// Binomial coefficients `C(a, b)` for `a <= n`, `b <= k`.
#[derive(Debug, Clone)]
pub(crate) struct Binomials {
    k: usize,
    table: Vec<usize>,
}

impl Binomials {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let mut table = vec![0usize; (n + 1) * (k + 1)];
        for a in 0..=n {
            table[a * (k + 1)] = 1;
            for b in 1..=k.min(a) {
                let left = table[(a - 1) * (k + 1) + b - 1];
                let up = if b < a { table[(a - 1) * (k + 1) + b] } else { 0 };
                table[a * (k + 1) + b] = left.saturating_add(up);
            }
        }
        Self { k, table }
    }

    #[inline]
    pub(crate) fn get(&self, a: usize, b: usize) -> usize {
        if b > a {
            0
        } else {
            self.table[a * (self.k + 1) + b]
        }
    }

    /// Colex rank of a strictly increasing vertex list.
    #[inline]
    pub(crate) fn rank(&self, vertices: impl Iterator<Item = u32>) -> usize {
        vertices.enumerate().map(|(t, v)| self.get(v as usize, t + 1)).sum()
    }
}

/// Exact `C(n, k)` without overflow for the sizes a budget check sees.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// All simplices of one dimension, colex ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Level {
    /// Flat vertex lists, `dim + 1` per simplex.
    pub(crate) vertices: Vec<u32>,
    pub(crate) births: Vec<usize>,
}

/// A borrowed view of one simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplexRef<'a> {
    pub vertices: &'a [u32],
    /// Filtration step (edge count) at which the simplex appears.
    pub birth: usize,
}

impl SimplexRef<'_> {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// The clique complex of the complete graph on `n` vertices, truncated at
/// `max_dim`, with each simplex born when its last edge enters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexFiltration {
    n: usize,
    edge_count: usize,
    levels: Vec<Level>,
}

impl SimplexFiltration {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_dim(&self) -> usize {
        self.levels.len() - 1
    }

    /// `N`, the number of filtration steps after step 0.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn count(&self, dim: usize) -> usize {
        self.levels.get(dim).map_or(0, |l| l.births.len())
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(|l| l.births.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn simplices(&self, dim: usize) -> impl Iterator<Item = SimplexRef<'_>> + '_ {
        let level = &self.levels[dim];
        level
            .vertices
            .chunks_exact(dim + 1)
            .zip(level.births.iter())
            .map(|(vertices, &birth)| SimplexRef { vertices, birth })
    }

    pub fn iter(&self) -> impl Iterator<Item = SimplexRef<'_>> + '_ {
        (0..self.levels.len()).flat_map(move |d| self.simplices(d))
    }

    pub(crate) fn levels(&self) -> &[Level] {
        &self.levels
    }
}

/// Number of simplices a flag expansion of `n` vertices up to `max_dim` builds.
pub fn flag_simplex_count(n: usize, max_dim: usize) -> u128 {
    (0..=max_dim as u64).map(|d| binomial(n as u64, d + 1)).sum()
}

/// Expands `filtration` into all cliques with at most `max_dim + 1` vertices.
///
/// Fails with [`Error::BudgetExceeded`] (reporting the required count) when
/// the expansion would exceed `budget` simplices.
pub fn flag_filtration(filtration: &EdgeFiltration, max_dim: usize, budget: u64) -> Result<SimplexFiltration> {
    if max_dim < 1 {
        return Err(Error::Contract("flag expansion needs max_dim >= 1".into()));
    }
    let n = filtration.n();
    let required = flag_simplex_count(n, max_dim);
    if required > u128::from(budget) {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let binom = Binomials::new(n, max_dim + 1);

    let mut levels = Vec::with_capacity(max_dim + 1);
    levels.push(Level {
        vertices: (0..n as u32).collect(),
        births: vec![0; n],
    });

    // Edges in colex order: (i, j) with j major.
    let ranks = filtration.ranks();
    let mut edge_vertices = Vec::with_capacity(n * (n - 1));
    let mut edge_births = Vec::with_capacity(n * (n - 1) / 2);
    for j in 1..n {
        for i in 0..j {
            edge_vertices.push(i as u32);
            edge_vertices.push(j as u32);
            edge_births.push(ranks[pair_index(n, i, j)]);
        }
    }
    levels.push(Level {
        vertices: edge_vertices,
        births: edge_births,
    });

    for dim in 2..=max_dim {
        let size = dim + 1;
        let count = binom.get(n, size);
        let mut vertices = Vec::with_capacity(count * size);
        let mut births = Vec::with_capacity(count);
        let prev = &levels[dim - 1];
        let mut current: Vec<u32> = (0..size as u32).collect();
        let mut facet = Vec::with_capacity(dim);
        if size <= n {
            loop {
                // Birth = max over facets, which covers every edge when dim >= 2.
                let mut birth = 0;
                for skip in 0..size {
                    facet.clear();
                    facet.extend(current.iter().enumerate().filter(|&(t, _)| t != skip).map(|(_, &v)| v));
                    let r = binom.rank(facet.iter().copied());
                    birth = birth.max(prev.births[r]);
                }
                vertices.extend_from_slice(&current);
                births.push(birth);
                if !next_colex(&mut current, n) {
                    break;
                }
            }
        }
        debug_assert_eq!(births.len(), count);
        levels.push(Level { vertices, births });
    }

    Ok(SimplexFiltration {
        n,
        edge_count: filtration.len(),
        levels,
    })
}

/// Advances a strictly increasing list to its colex successor within `0..n`.
fn next_colex(c: &mut [u32], n: usize) -> bool {
    let k = c.len();
    for t in 0..k {
        let limit = if t + 1 < k { c[t + 1] } else { n as u32 };
        if c[t] + 1 < limit {
            c[t] += 1;
            for (s, slot) in c.iter_mut().enumerate().take(t) {
                *slot = s as u32;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{edge_order, EdgeOrdering, SymmetricMatrix};

    fn filtration_of(n: usize, seed: u64) -> EdgeFiltration {
        // Simple deterministic distinct values.
        let m = SymmetricMatrix::from_upper(n, |i, j| {
            if i == j {
                0.0
            } else {
                ((i * 31 + j * 17 + seed as usize * 7) % 97) as f64 + (i * n + j) as f64 * 1e-3
            }
        })
        .unwrap();
        edge_order(&m, EdgeOrdering::Descending).unwrap()
    }

    #[test]
    fn colex_rank_matches_position() {
        let n = 7;
        let binom = Binomials::new(n, 4);
        for size in 1..=4 {
            let mut c: Vec<u32> = (0..size as u32).collect();
            let mut pos = 0;
            loop {
                assert_eq!(binom.rank(c.iter().copied()), pos);
                pos += 1;
                if !next_colex(&mut c, n) {
                    break;
                }
            }
            assert_eq!(pos, binom.get(n, size));
        }
    }

    #[test]
    fn triangle_is_born_with_its_last_edge() {
        let m = SymmetricMatrix::new(3, vec![0.0, 9.0, 7.0, 9.0, 0.0, 5.0, 7.0, 5.0, 0.0]).unwrap();
        let ef = edge_order(&m, EdgeOrdering::Descending).unwrap();
        let sf = flag_filtration(&ef, 2, DEFAULT_SIMPLEX_BUDGET).unwrap();
        assert_eq!((sf.count(0), sf.count(1), sf.count(2)), (3, 3, 1));
        let mut edge_births: Vec<_> = sf.simplices(1).map(|s| s.birth).collect();
        edge_births.sort();
        assert_eq!(edge_births, vec![1, 2, 3]);
        assert_eq!(sf.simplices(2).next().unwrap().birth, 3);
        assert!(sf.simplices(0).all(|s| s.birth == 0));
    }

    #[test]
    fn simplex_counts_are_binomial() {
        let sf = flag_filtration(&filtration_of(4, 0), 2, DEFAULT_SIMPLEX_BUDGET).unwrap();
        assert_eq!((sf.count(0), sf.count(1), sf.count(2)), (4, 6, 4));
        let sf = flag_filtration(&filtration_of(2, 0), 2, DEFAULT_SIMPLEX_BUDGET).unwrap();
        assert_eq!((sf.count(0), sf.count(1), sf.count(2)), (2, 1, 0));
        let sf = flag_filtration(&filtration_of(9, 3), 4, DEFAULT_SIMPLEX_BUDGET).unwrap();
        for d in 0..=4 {
            assert_eq!(sf.count(d) as u128, binomial(9, d as u64 + 1));
        }
    }

    #[test]
    fn births_follow_the_clique_rule() {
        let ef = filtration_of(8, 5);
        let sf = flag_filtration(&ef, 3, DEFAULT_SIMPLEX_BUDGET).unwrap();
        let ranks = ef.ranks();
        for d in 2..=3 {
            for s in sf.simplices(d) {
                let mut expected = 0;
                for a in 0..s.vertices.len() {
                    for b in (a + 1)..s.vertices.len() {
                        let (i, j) = (s.vertices[a] as usize, s.vertices[b] as usize);
                        expected = expected.max(ranks[pair_index(8, i, j)]);
                    }
                }
                assert_eq!(s.birth, expected);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let ef = filtration_of(10, 1);
        let err = flag_filtration(&ef, 2, 100).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                required: 10 + 45 + 120,
                budget: 100
            }
        );
        assert!(flag_filtration(&ef, 0, 100).is_err());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(140, 3), 447_580);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(30, 15), 155_117_520);
    }
}
