//! Filter assessment: convolution, SED distributions, filter entropy and
//! its variation over training, effective sets and pruning ranks.
//!
//! A filter that has learned a category's structure places the top values of
//! every feature map in a similar arrangement, so the starting edge
//! densities (SEDs) of those maps concentrate and their entropy drops.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::matrix::{symmetrize_max, FeatureMap, Kernel, RawImage};
use crate::topology::{betti_curves_of, starting_edge_density, TopologyConfig};

/// Image category label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CategoryId(pub u32);

/// Index of a filter within a layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FilterId(pub u32);

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FilterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

/// Settings for turning a set of matrices into a histogram of a Betti statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatisticConfig {
    /// Homology dimension the statistic is read from.
    pub k: usize,
    pub bin_width: u64,
    pub topology: TopologyConfig,
}

impl Default for StatisticConfig {
    fn default() -> Self {
        Self {
            k: 1,
            bin_width: 1,
            topology: TopologyConfig::default(),
        }
    }
}

impl StatisticConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k > self.topology.k_max {
            return Err(Error::Contract(format!(
                "homology dimension {} exceeds k_max {}",
                self.k, self.topology.k_max
            )));
        }
        if self.bin_width == 0 {
            return Err(Error::Contract("bin width must be positive".into()));
        }
        Ok(())
    }
}

/// Valid-mode cross-correlation, output `(H - h + 1) x (W - w + 1)`.
pub fn convolve(image: &RawImage, kernel: &Kernel) -> Result<FeatureMap> {
    let (ih, iw) = (image.rows(), image.cols());
    let (kh, kw) = (kernel.rows(), kernel.cols());
    if kh > ih || kw > iw {
        return Err(Error::KernelTooLarge {
            image_rows: ih,
            image_cols: iw,
            kernel_rows: kh,
            kernel_cols: kw,
        });
    }
    let (oh, ow) = (ih - kh + 1, iw - kw + 1);
    let px = image.values();
    let w = kernel.values();
    FeatureMap::from_fn(oh, ow, |r, c| {
        let mut acc = 0.0;
        for dr in 0..kh {
            let row = &px[(r + dr) * iw + c..(r + dr) * iw + c + kw];
            let wrow = &w[dr * kw..(dr + 1) * kw];
            acc += row.iter().zip(wrow).map(|(a, b)| a * b).sum::<f64>();
        }
        acc
    })
}

/// The feature maps one filter produced on every image of one category.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryFeatureSet {
    category: CategoryId,
    maps: Vec<FeatureMap>,
}

impl CategoryFeatureSet {
    pub fn new(category: CategoryId, maps: Vec<FeatureMap>) -> Result<Self> {
        let first = maps.first().ok_or(Error::Empty("category without feature maps"))?;
        let shape = (first.rows(), first.cols());
        if let Some(bad) = maps.iter().find(|m| (m.rows(), m.cols()) != shape) {
            return Err(Error::MixedShapes(format!(
                "category {category}: {}x{} vs {}x{}",
                shape.0,
                shape.1,
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(Self { category, maps })
    }

    pub fn category(&self) -> CategoryId {
        self.category
    }

    pub fn maps(&self) -> &[FeatureMap] {
        &self.maps
    }

    /// `N_i`.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// `S_k` of one feature map after max-symmetrization.
pub fn map_starting_edge_density(map: &FeatureMap, k: usize, topology: &TopologyConfig) -> Result<Option<usize>> {
    let sym = symmetrize_max(map)?;
    let curves = betti_curves_of(&sym, topology)?;
    starting_edge_density(&curves, k)
}

/// Histogram of `S_k` over the maps of one category; maps without any
/// `k`-hole land in [`Bin::None`](crate::histogram::Bin::None).
pub fn sed_distribution(set: &CategoryFeatureSet, config: &StatisticConfig) -> Result<Histogram> {
    config.validate()?;
    let mut h = Histogram::new(config.bin_width)?;
    for map in set.maps() {
        let sed = map_starting_edge_density(map, config.k, &config.topology)?;
        h.record(sed.map(|v| v as u64));
    }
    Ok(h)
}

/// Shannon entropy in bits, `0 log 0 = 0`.
pub fn entropy(h: &Histogram) -> Result<f64> {
    if h.is_empty() {
        return Err(Error::Empty("entropy of an empty histogram"));
    }
    let total = h.total() as f64;
    let bits: f64 = h
        .counts()
        .map(|(_, c)| {
            let p = c as f64 / total;
            -p * libm::log2(p)
        })
        .sum();
    // A single bin gives -1 * log2(1) = -0.0.
    Ok(bits.max(0.0))
}

/// Filter entropy of one category at successive training iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySeries {
    snapshots: Vec<(u64, f64)>,
}

impl EntropySeries {
    pub fn new(snapshots: Vec<(u64, f64)>) -> Result<Self> {
        for w in snapshots.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Contract(format!(
                    "iterations must increase strictly: {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(t, h)) = snapshots.iter().find(|(_, h)| !(h.is_finite() && *h >= 0.0)) {
            return Err(Error::Contract(format!(
                "entropy {h} at iteration {t} is not a non-negative number"
            )));
        }
        Ok(Self { snapshots })
    }

    pub fn snapshots(&self) -> &[(u64, f64)] {
        &self.snapshots
    }
}

/// `dH = H(last) - H(first)`; negative means the entropy decreased.
pub fn entropy_variation(series: &EntropySeries) -> Result<f64> {
    match series.snapshots() {
        [(_, first), .., (_, last)] => Ok(last - first),
        _ => Err(Error::Contract("entropy variation needs at least two snapshots".into())),
    }
}

/// Categories whose entropy strictly decreased.
pub fn effective_set(deltas: &BTreeMap<CategoryId, f64>) -> Result<BTreeSet<CategoryId>> {
    if deltas.is_empty() {
        return Err(Error::Empty("no categories"));
    }
    Ok(deltas.iter().filter(|(_, &d)| d < 0.0).map(|(&c, _)| c).collect())
}

/// `E = sum of dH over the effective set`, always `<= 0`.
pub fn ensemble_performance(deltas: &BTreeMap<CategoryId, f64>) -> Result<f64> {
    let effective = effective_set(deltas)?;
    Ok(effective.iter().fold(0.0, |acc, c| acc + deltas[c]))
}

/// Per-category entropy variations of one filter and the resulting score.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterAssessment {
    pub deltas: BTreeMap<CategoryId, f64>,
    pub effective: BTreeSet<CategoryId>,
    pub score: f64,
}

impl FilterAssessment {
    pub fn from_deltas(deltas: BTreeMap<CategoryId, f64>) -> Result<Self> {
        let effective = effective_set(&deltas)?;
        let score = ensemble_performance(&deltas)?;
        Ok(Self {
            deltas,
            effective,
            score,
        })
    }

    pub fn from_series(series: &BTreeMap<CategoryId, EntropySeries>) -> Result<Self> {
        let deltas = series
            .iter()
            .map(|(&c, s)| entropy_variation(s).map(|d| (c, d)))
            .collect::<Result<_>>()?;
        Self::from_deltas(deltas)
    }
}

/// Filters ranked by ensemble score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneRank {
    /// Most effective (most negative score) first; ties by ascending id.
    pub effectiveness: Vec<FilterId>,
    /// Reverse of `effectiveness`: least effective pruned first.
    pub prune_order: Vec<FilterId>,
}

pub fn prune_rank(scores: &BTreeMap<FilterId, f64>) -> Result<PruneRank> {
    if scores.is_empty() {
        return Err(Error::Empty("no filters to rank"));
    }
    let mut effectiveness: Vec<_> = scores.iter().map(|(&f, &s)| (f, s)).collect();
    effectiveness.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let effectiveness: Vec<FilterId> = effectiveness.into_iter().map(|(f, _)| f).collect();
    let prune_order = effectiveness.iter().rev().copied().collect();
    Ok(PruneRank {
        effectiveness,
        prune_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::histogram::Bin;
    use alloc::vec;

    fn image(rows: usize, cols: usize, v: Vec<f64>) -> RawImage {
        RawImage::new(rows, cols, v).unwrap()
    }

    #[test]
    fn convolution_window_sums() {
        let out = convolve(&image(3, 3, vec![1.0; 9]), &Kernel::new(2, 2, vec![1.0; 4]).unwrap()).unwrap();
        assert_eq!((out.rows(), out.cols()), (2, 2));
        assert!(out.values().iter().all(|&v| v == 4.0));

        let img = image(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let doubled = convolve(&img, &Kernel::new(1, 1, vec![2.0]).unwrap()).unwrap();
        assert_eq!(doubled.values(), &[2.0, 4.0, 6.0, 8.0, 10.0, 12.0]);
    }

    #[test]
    fn delta_kernel_selects_bottom_right_of_window() {
        let img = image(3, 3, (1..=9).map(f64::from).collect());
        let delta = Kernel::new(2, 2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let out = convolve(&img, &delta).unwrap();
        // Output (r, c) reads pixel (r + 1, c + 1).
        assert_eq!(out.values(), &[5.0, 6.0, 8.0, 9.0]);
    }

    #[test]
    fn oversized_kernel() {
        let err = convolve(&image(2, 2, vec![0.0; 4]), &Kernel::new(3, 1, vec![0.0; 3]).unwrap());
        assert!(matches!(err, Err(Error::KernelTooLarge { .. })));
    }

    #[test]
    fn entropy_examples() {
        let degenerate = Histogram::from_observations(1, [Some(3); 7]).unwrap();
        assert_eq!(entropy(&degenerate), Ok(0.0));
        let uniform = Histogram::from_observations(1, [Some(1), Some(2), Some(3), Some(4)]).unwrap();
        assert_eq!(entropy(&uniform), Ok(2.0));
        let dyadic = Histogram::from_observations(1, [Some(1), Some(1), Some(2), None]).unwrap();
        assert_eq!(entropy(&dyadic), Ok(1.5));
        assert!(entropy(&Histogram::default()).is_err());
    }

    #[test]
    fn entropy_variation_examples() {
        let s = EntropySeries::new(vec![(1, 3.25), (10, 3.0), (20, 2.92)]).unwrap();
        assert!((entropy_variation(&s).unwrap() + 0.33).abs() < 1e-12);
        let s = EntropySeries::new(vec![(1, 2.75), (20, 2.93)]).unwrap();
        assert!((entropy_variation(&s).unwrap() - 0.18).abs() < 1e-12);
        let s = EntropySeries::new(vec![(0, 1.0), (1, 1.0), (2, 1.0)]).unwrap();
        assert_eq!(entropy_variation(&s), Ok(0.0));
        let s = EntropySeries::new(vec![(0, 1.0)]).unwrap();
        assert!(entropy_variation(&s).is_err());
        assert!(EntropySeries::new(vec![(2, 1.0), (2, 1.0)]).is_err());
        assert!(EntropySeries::new(vec![(0, -1.0)]).is_err());
    }

    fn deltas(v: &[(u32, f64)]) -> BTreeMap<CategoryId, f64> {
        v.iter().map(|&(c, d)| (CategoryId(c), d)).collect()
    }

    #[test]
    fn effective_set_and_ensemble() {
        let d = deltas(&[(0, -0.2), (1, 0.1), (2, -0.3)]);
        assert_eq!(
            effective_set(&d).unwrap(),
            [CategoryId(0), CategoryId(2)].into_iter().collect()
        );
        assert!((ensemble_performance(&d).unwrap() + 0.5).abs() < 1e-15);

        let positive = deltas(&[(0, 0.2), (1, 0.1)]);
        assert!(effective_set(&positive).unwrap().is_empty());
        assert_eq!(ensemble_performance(&positive), Ok(0.0));

        assert!(effective_set(&deltas(&[(0, 0.0)])).unwrap().is_empty());
        assert_eq!(ensemble_performance(&deltas(&[(0, -1.0)])), Ok(-1.0));
        assert!(effective_set(&BTreeMap::new()).is_err());
    }

    #[test]
    fn prune_rank_examples() {
        let scores: BTreeMap<_, _> = [(0, -0.5), (1, -0.1), (2, -0.9)]
            .into_iter()
            .map(|(f, s)| (FilterId(f), s))
            .collect();
        let r = prune_rank(&scores).unwrap();
        assert_eq!(r.effectiveness, vec![FilterId(2), FilterId(0), FilterId(1)]);
        assert_eq!(r.prune_order, vec![FilterId(1), FilterId(0), FilterId(2)]);

        let ties: BTreeMap<_, _> = (0..3).map(|f| (FilterId(f), -0.25)).collect();
        assert_eq!(
            prune_rank(&ties).unwrap().effectiveness,
            vec![FilterId(0), FilterId(1), FilterId(2)]
        );
        let single: BTreeMap<_, _> = [(FilterId(0), 0.0)].into_iter().collect();
        assert_eq!(prune_rank(&single).unwrap().effectiveness, vec![FilterId(0)]);
        assert!(prune_rank(&BTreeMap::new()).is_err());
    }

    #[test]
    fn sed_of_identical_maps_is_degenerate() {
        let map = FeatureMap::from_fn(6, 6, |r, c| ((r * 7 + c * 3) % 11) as f64 + 0.01 * (r * 6 + c) as f64).unwrap();
        let set = CategoryFeatureSet::new(CategoryId(7), vec![map; 5]).unwrap();
        let h = sed_distribution(&set, &StatisticConfig::default()).unwrap();
        assert_eq!(h.occupied(), 1);
        assert_eq!(h.total(), 5);
        assert_eq!(entropy(&h), Ok(0.0));
    }

    #[test]
    fn three_by_three_maps_have_no_sed() {
        let maps = (0..4)
            .map(|s| FeatureMap::from_fn(3, 3, |r, c| (r * 3 + c + s) as f64).unwrap())
            .collect();
        let set = CategoryFeatureSet::new(CategoryId(0), maps).unwrap();
        let h = sed_distribution(&set, &StatisticConfig::default()).unwrap();
        assert_eq!(h.count(Bin::None), 4);
    }

    #[test]
    fn feature_set_validation() {
        assert!(CategoryFeatureSet::new(CategoryId(0), vec![]).is_err());
        let a = FeatureMap::new(2, 2, vec![0.0; 4]).unwrap();
        let b = FeatureMap::new(3, 3, vec![0.0; 9]).unwrap();
        assert!(matches!(
            CategoryFeatureSet::new(CategoryId(0), vec![a, b]),
            Err(Error::MixedShapes(_))
        ));
        let bad = StatisticConfig {
            k: 2,
            ..StatisticConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn empty_ensemble_is_positive_zero() {
        let deltas = BTreeMap::from([(CategoryId(0), 0.0), (CategoryId(1), 0.4)]);
        assert_eq!(ensemble_performance(&deltas).unwrap().to_bits(), 0.0f64.to_bits());
    }
}
