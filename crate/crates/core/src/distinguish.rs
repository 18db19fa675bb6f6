//! Inter-class distinguishability from maxima of Betti curves.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::filters::{CategoryId, StatisticConfig};
use crate::histogram::Histogram;
use crate::matrix::{symmetrize_add, RawImage};
use crate::topology::{betti_curves_of, max_betti};

/// Raw images of one category.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryImageSet {
    category: CategoryId,
    images: Vec<RawImage>,
}

impl CategoryImageSet {
    pub fn new(category: CategoryId, images: Vec<RawImage>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::Empty("category without images"));
        }
        if let Some(bad) = images.iter().find(|i| i.rows() != i.cols()) {
            return Err(Error::NotSquare {
                rows: bad.rows(),
                cols: bad.cols(),
            });
        }
        Ok(Self { category, images })
    }

    pub fn category(&self) -> CategoryId {
        self.category
    }

    pub fn images(&self) -> &[RawImage] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

/// `M_k` of one image after `I + I^T`.
pub fn image_max_betti(image: &RawImage, config: &StatisticConfig) -> Result<usize> {
    let sym = symmetrize_add(image)?;
    let curves = betti_curves_of(&sym, &config.topology)?;
    max_betti(&curves, config.k)
}

/// Histogram of `M_k` over a category's images.
pub fn mbc_distribution(set: &CategoryImageSet, config: &StatisticConfig) -> Result<Histogram> {
    config.validate()?;
    let mut h = Histogram::new(config.bin_width)?;
    for image in set.images() {
        h.record(Some(image_max_betti(image, config)? as u64));
    }
    Ok(h)
}

/// Jensen-Shannon divergence with base-2 logarithms, in `[0, 1]`.
/// Bins missing from one side count as zero probability there.
pub fn category_distance(p: &Histogram, q: &Histogram) -> Result<f64> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::Empty("category distance of an empty histogram"));
    }
    let (tp, tq) = (p.total() as f64, q.total() as f64);
    let labels: BTreeSet<_> = p.counts().chain(q.counts()).map(|(b, _)| b).collect();
    // Accumulate count * log2(p / r) and divide by the total once, so
    // disjoint supports give exactly T / T = 1.
    let (mut kl_p, mut kl_q) = (0.0, 0.0);
    for bin in labels {
        let (cp, cq) = (p.count(bin) as f64, q.count(bin) as f64);
        let (pp, pq) = (cp / tp, cq / tq);
        let r = 0.5 * (pp + pq);
        if cp > 0.0 {
            kl_p += cp * libm::log2(pp / r);
        }
        if cq > 0.0 {
            kl_q += cq * libm::log2(pq / r);
        }
    }
    let cd = 0.5 * (kl_p / tp) + 0.5 * (kl_q / tq);
    Ok(cd.clamp(0.0, 1.0))
}

/// Symmetric, zero-diagonal matrix of pairwise category distances.
#[derive(Debug, Clone, PartialEq)]
pub struct CdMatrix {
    labels: Vec<CategoryId>,
    values: Vec<f64>,
}

impl CdMatrix {
    pub fn labels(&self) -> &[CategoryId] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.labels.len() + j]
    }

    pub fn index_of(&self, category: CategoryId) -> Result<usize> {
        self.labels
            .iter()
            .position(|&c| c == category)
            .ok_or(Error::UnknownCategory(category.0))
    }

    pub fn distance(&self, a: CategoryId, b: CategoryId) -> Result<f64> {
        Ok(self.get(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.labels.len();
        &self.values[i * n..(i + 1) * n]
    }

    /// `dd` for every label, in label order.
    pub fn degrees(&self) -> Vec<f64> {
        (0..self.labels.len()).map(|i| self.row(i).iter().sum()).collect()
    }
}

pub fn cd_matrix(distributions: &[(CategoryId, Histogram)]) -> Result<CdMatrix> {
    if distributions.len() < 2 {
        return Err(Error::Contract(format!(
            "a CD matrix needs at least two categories, got {}",
            distributions.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for (c, _) in distributions {
        if !seen.insert(*c) {
            return Err(Error::DuplicateCategory(c.0));
        }
    }
    let n = distributions.len();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let cd = category_distance(&distributions[i].1, &distributions[j].1)?;
            values[i * n + j] = cd;
            values[j * n + i] = cd;
        }
    }
    Ok(CdMatrix {
        labels: distributions.iter().map(|(c, _)| *c).collect(),
        values,
    })
}

/// `dd_i = sum_j C_ij`.
pub fn distinguishable_degree(matrix: &CdMatrix, category: CategoryId) -> Result<f64> {
    let i = matrix.index_of(category)?;
    Ok(matrix.row(i).iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::histogram::Bin;

    fn hist(obs: &[u64]) -> Histogram {
        Histogram::from_observations(1, obs.iter().map(|&o| Some(o))).unwrap()
    }

    #[test]
    fn identical_distributions_are_at_distance_zero() {
        assert_eq!(category_distance(&hist(&[1, 2, 2]), &hist(&[1, 2, 2])), Ok(0.0));
        assert_eq!(
            category_distance(&hist(&[1, 2, 2]), &hist(&[2, 1, 2, 1, 2, 2])),
            Ok(0.0)
        );
    }

    #[test]
    fn disjoint_supports_are_at_distance_one() {
        assert_eq!(
            category_distance(&hist(&[0, 1, 1]), &hist(&[2, 3, 4, 5, 5, 7, 9])),
            Ok(1.0)
        );
        let none_only = Histogram::from_observations(1, [None, None]).unwrap();
        assert_eq!(category_distance(&hist(&[3]), &none_only), Ok(1.0));
    }

    #[test]
    fn half_overlap_value() {
        // R = {a: 0.75, b: 0.25};
        // cd = 0.5 log2(1 / 0.75) + 0.5 (0.5 log2(0.5 / 0.75) + 0.5 log2(0.5 / 0.25)).
        let expected = 0.5 * (1.0f64 / 0.75).log2() + 0.25 * (0.5f64 / 0.75).log2() + 0.25;
        let cd = category_distance(&hist(&[0]), &hist(&[0, 1])).unwrap();
        assert!((cd - expected).abs() < 1e-15);
        assert!((cd - 0.3113).abs() < 1e-4);
    }

    #[test]
    fn degrees_are_row_sums() {
        let h = |c| Histogram::from_counts(1, [(Bin::Value(0), c), (Bin::Value(1), 10 - c)]).unwrap();
        let dists = vec![(CategoryId(0), h(1)), (CategoryId(1), h(5)), (CategoryId(2), h(9))];
        let m = cd_matrix(&dists).unwrap();
        for i in 0..3 {
            assert_eq!(m.get(i, i), 0.0);
            for j in 0..3 {
                assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
        let dd = m.degrees();
        assert_eq!(distinguishable_degree(&m, CategoryId(1)), Ok(dd[1]));
        assert_eq!(dd[1], m.get(1, 0) + m.get(1, 2));
        assert!(distinguishable_degree(&m, CategoryId(9)).is_err());
    }

    #[test]
    fn cd_matrix_contract() {
        assert!(cd_matrix(&[(CategoryId(0), hist(&[1]))]).is_err());
        assert_eq!(
            cd_matrix(&[(CategoryId(3), hist(&[1])), (CategoryId(3), hist(&[2]))]),
            Err(Error::DuplicateCategory(3))
        );
        let zero = cd_matrix(&[(CategoryId(0), hist(&[4])), (CategoryId(1), hist(&[4]))]).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn three_by_three_images_are_degenerate_at_zero() {
        let images = (0..5)
            .map(|s| RawImage::from_fn(3, 3, |r, c| ((r * 5 + c * 2 + s) % 7) as f64).unwrap())
            .collect();
        let set = CategoryImageSet::new(CategoryId(0), images).unwrap();
        let h = mbc_distribution(&set, &StatisticConfig::default()).unwrap();
        assert_eq!(h.count(Bin::Value(0)), 5);
    }

    #[test]
    fn non_square_images_are_rejected() {
        let img = RawImage::new(2, 3, vec![0.0; 6]).unwrap();
        assert!(matches!(
            CategoryImageSet::new(CategoryId(0), vec![img]),
            Err(Error::NotSquare { .. })
        ));
        assert!(CategoryImageSet::new(CategoryId(0), vec![]).is_err());
    }
}
