//! Test-only oracles and synthetic data.
//!
//! Nothing here depends on `ctopo-core`: the brute-force homology oracle
//! rebuilds every subcomplex from scratch and computes boundary ranks by
//! Gaussian elimination, so it shares no code path with the persistence
//! reduction it checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric `n x n` matrix with i.i.d. uniform off-diagonal entries and
/// a zero diagonal. `levels` > 0 quantizes values to force ties.
#[allow(clippy::needless_range_loop)]
pub fn random_symmetric_rows(n: usize, levels: u32, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = if levels > 0 {
                f64::from(rng.random_range(0..levels))
            } else {
                rng.random::<f64>()
            };
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// Pairs in filtration order by repeated selection: the best remaining
/// value wins, ties go to the lexicographically smallest pair.
pub fn selection_order(rows: &[Vec<f64>], descending: bool) -> Vec<(usize, usize)> {
    let n = rows.len();
    let mut remaining: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let mut out = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let mut best = 0;
        for (idx, &(i, j)) in remaining.iter().enumerate() {
            let (bi, bj) = remaining[best];
            let (v, bv) = (rows[i][j], rows[bi][bj]);
            let better = if descending { v > bv } else { v < bv };
            if better {
                best = idx;
            }
        }
        out.push(remaining.remove(best));
    }
    out
}

/// Rank over Z/2 of the rows given as bitsets.
fn rank_z2(mut rows: Vec<Vec<u64>>) -> usize {
    let width = rows.first().map_or(0, Vec::len) * 64;
    let mut rank = 0;
    for col in 0..width {
        let (word, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][word] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[word] & bit != 0 {
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn bitset(len: usize, ones: &[usize]) -> Vec<u64> {
    let mut v = vec![0u64; len.div_ceil(64).max(1)];
    for &o in ones {
        v[o / 64] |= 1 << (o % 64);
    }
    v
}

/// `(beta_0, beta_1)` of the clique complex on `n` vertices with the given edges.
pub fn clique_betti_01(n: usize, edges: &[(usize, usize)]) -> (usize, usize) {
    let mut adj = vec![vec![false; n]; n];
    for &(i, j) in edges {
        adj[i][j] = true;
        adj[j][i] = true;
    }
    let edge_id = |a: usize, b: usize| edges.iter().position(|&(i, j)| (i, j) == (a.min(b), a.max(b))).unwrap();
    let mut triangles = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                if adj[a][b] && adj[a][c] && adj[b][c] {
                    triangles.push([edge_id(a, b), edge_id(a, c), edge_id(b, c)]);
                }
            }
        }
    }
    let d1: Vec<_> = edges.iter().map(|&(i, j)| bitset(n, &[i, j])).collect();
    let d2: Vec<_> = triangles.iter().map(|t| bitset(edges.len(), t)).collect();
    let r1 = rank_z2(d1);
    let r2 = rank_z2(d2);
    (n - r1, edges.len() - r1 - r2)
}

/// `beta_0(v)` and `beta_1(v)` for `v = 0..=N`, one subcomplex at a time.
pub fn brute_force_betti_curves(rows: &[Vec<f64>], descending: bool) -> (Vec<usize>, Vec<usize>) {
    let order = selection_order(rows, descending);
    let n = rows.len();
    let (mut b0, mut b1) = (Vec::new(), Vec::new());
    for v in 0..=order.len() {
        let (x, y) = clique_betti_01(n, &order[..v]);
        b0.push(x);
        b1.push(y);
    }
    (b0, b1)
}

fn gaussian(r: f64, c: f64, cr: f64, cc: f64, sigma: f64) -> f64 {
    let d2 = (r - cr) * (r - cr) + (c - cc) * (c - cc);
    (-d2 / (2.0 * sigma * sigma)).exp()
}

/// Feature map whose largest values fill a 3x3 block at rows
/// `row0..row0+3`, cols `col0..col0+3`, shifted by a random offset in
/// `{-1, 0, 1}^2`. Background is uniform on `[0, 1)`.
pub fn planted_feature_map(n: usize, row0: usize, col0: usize, rng: &mut impl Rng) -> Vec<f64> {
    let dr = rng.random_range(0..3) as isize - 1;
    let dc = rng.random_range(0..3) as isize - 1;
    let mut map: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>()).collect();
    for r in 0..3 {
        for c in 0..3 {
            let rr = (row0 as isize + r + dr) as usize;
            let cc = (col0 as isize + c + dc) as usize;
            map[rr * n + cc] = 2.0 + 0.1 * rng.random::<f64>();
        }
    }
    map
}

pub fn random_feature_map(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n * n).map(|_| rng.random::<f64>()).collect()
}

/// `size x size` image: faint uniform noise plus a Gaussian spot at
/// `(row, col)` jittered by up to one pixel.
pub fn spot_image(size: usize, row: usize, col: usize, rng: &mut impl Rng) -> Vec<f64> {
    let dr = rng.random_range(0..3) as f64 - 1.0;
    let dc = rng.random_range(0..3) as f64 - 1.0;
    let (cr, cc) = (row as f64 + dr, col as f64 + dc);
    (0..size * size)
        .map(|p| {
            let (r, c) = ((p / size) as f64, (p % size) as f64);
            gaussian(r, c, cr, cc, 1.2) + 0.2 * rng.random::<f64>()
        })
        .collect()
}

/// Matched filter for [`spot_image`].
pub fn spot_kernel(size: usize) -> Vec<f64> {
    let mid = (size / 2) as f64;
    (0..size * size)
        .map(|p| gaussian((p / size) as f64, (p % size) as f64, mid, mid, 1.2))
        .collect()
}

pub fn random_kernel(size: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..size * size).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// `(1 - t) a + t b`.
pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_on_a_square() {
        let edges = [(0, 1), (1, 2), (2, 3), (0, 3)];
        assert_eq!(clique_betti_01(4, &edges), (1, 1));
        let filled = [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)];
        assert_eq!(clique_betti_01(4, &filled), (1, 0));
        assert_eq!(clique_betti_01(3, &[]), (3, 0));
    }

    #[test]
    fn selection_breaks_ties_lexicographically() {
        let rows = vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]];
        assert_eq!(selection_order(&rows, true), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(selection_order(&rows, false), vec![(0, 1), (0, 2), (1, 2)]);
    }
}
