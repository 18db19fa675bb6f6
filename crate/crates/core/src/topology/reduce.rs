//! Z/2 boundary-matrix reduction with clearing.

use alloc::vec;
use alloc::vec::Vec;

use super::flag::{Binomials, SimplexFiltration};

const NONE: u32 = u32::MAX;

/// A homology class alive on the filtration steps `birth..death`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub dim: usize,
    pub birth: usize,
    /// `None` for classes that never die.
    pub death: Option<usize>,
}

/// Persistence intervals of dimensions `0..=k_max`, including zero-length ones.
///
/// Uses simplex levels `0..=k_max + 1`; the caller guarantees they exist.
pub(crate) fn persistence_intervals(sf: &SimplexFiltration, k_max: usize) -> Vec<Interval> {
    let top = k_max + 1;
    let levels = &sf.levels()[..=top];
    let n = sf.n();

    // Filtration order: birth, then dimension, then colex rank.
    let mut order: Vec<(usize, u8, u32)> = Vec::with_capacity(levels.iter().map(|l| l.births.len()).sum());
    for (dim, level) in levels.iter().enumerate() {
        for (rank, &birth) in level.births.iter().enumerate() {
            order.push((birth, dim as u8, rank as u32));
        }
    }
    order.sort_unstable();
    let total = order.len();

    let mut position: Vec<Vec<u32>> = levels.iter().map(|l| vec![0u32; l.births.len()]).collect();
    for (p, &(_, dim, rank)) in order.iter().enumerate() {
        position[dim as usize][rank as usize] = p as u32;
    }

    let binom = Binomials::new(n, top + 1);
    let mut owner = vec![NONE; total];
    let mut cleared = vec![false; total];
    let mut negative = vec![false; total];
    let mut reduced: Vec<Vec<u32>> = vec![Vec::new(); total];
    let mut scratch = Vec::new();
    let mut facet = Vec::with_capacity(top + 1);

    for dim in (1..=top).rev() {
        let level = &levels[dim];
        let size = dim + 1;
        // Columns of this dimension in filtration order.
        let mut columns: Vec<u32> = position[dim].clone();
        columns.sort_unstable();
        for &j in &columns {
            if cleared[j as usize] {
                continue;
            }
            let rank = order[j as usize].2 as usize;
            let simplex = &level.vertices[rank * size..(rank + 1) * size];
            let mut col: Vec<u32> = (0..size)
                .map(|skip| {
                    facet.clear();
                    facet.extend(simplex.iter().enumerate().filter(|&(t, _)| t != skip).map(|(_, &v)| v));
                    position[dim - 1][binom.rank(facet.iter().copied())]
                })
                .collect();
            col.sort_unstable();

            while let Some(&low) = col.last() {
                let o = owner[low as usize];
                if o == NONE {
                    break;
                }
                add_into(&mut col, &reduced[o as usize], &mut scratch);
            }
            if let Some(&low) = col.last() {
                owner[low as usize] = j;
                cleared[low as usize] = true;
                negative[j as usize] = true;
                reduced[j as usize] = col;
            }
        }
    }

    let mut intervals = Vec::new();
    for (p, &(birth, dim, _)) in order.iter().enumerate() {
        let dim = dim as usize;
        if dim > k_max || negative[p] {
            continue;
        }
        let death = match owner[p] {
            NONE => None,
            j => Some(order[j as usize].0),
        };
        intervals.push(Interval { dim, birth, death });
    }
    intervals
}

/// `col += other` over Z/2 on sorted index lists.
fn add_into(col: &mut Vec<u32>, other: &[u32], scratch: &mut Vec<u32>) {
    scratch.clear();
    let (mut a, mut b) = (0, 0);
    while a < col.len() && b < other.len() {
        match col[a].cmp(&other[b]) {
            core::cmp::Ordering::Less => {
                scratch.push(col[a]);
                a += 1;
            }
            core::cmp::Ordering::Greater => {
                scratch.push(other[b]);
                b += 1;
            }
            core::cmp::Ordering::Equal => {
                a += 1;
                b += 1;
            }
        }
    }
    scratch.extend_from_slice(&col[a..]);
    scratch.extend_from_slice(&other[b..]);
    core::mem::swap(col, scratch);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_addition_cancels_shared_rows() {
        let mut col = vec![1, 3, 5, 9];
        let mut scratch = Vec::new();
        add_into(&mut col, &[0, 3, 9, 12], &mut scratch);
        assert_eq!(col, vec![0, 1, 5, 12]);
        add_into(&mut col, &[0, 1, 5, 12], &mut scratch);
        assert!(col.is_empty());
    }
}
