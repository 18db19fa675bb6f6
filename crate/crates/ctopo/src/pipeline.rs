//! End-to-end runs: filter assessment over training snapshots and CD
//! matrices over image categories.
//!
//! Per-image topology runs fan out over rayon; results are collected in
//! input order, so reports do not depend on scheduling.

use std::collections::BTreeMap;
use std::path::Path;

use ctopo_core::distinguish::{cd_matrix, CdMatrix};
use ctopo_core::filters::{
    convolve, entropy, prune_rank, CategoryId, EntropySeries, FilterAssessment, FilterId, StatisticConfig,
};
use ctopo_core::histogram::Histogram;
use ctopo_core::matrix::{symmetrize_add, symmetrize_max, FeatureMap, RawImage};
use ctopo_core::topology::{betti_curves_of, max_betti, starting_edge_density, BettiCurves};
use rayon::prelude::*;

use crate::error::{io_err, Error, Result};
use crate::io;
use crate::manifest::{FilterSource, SnapshotManifest};
use crate::report::*;

/// Labelled images.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    images: Vec<RawImage>,
    labels: Vec<u32>,
}

/// Which categories and how many images of each to analyze.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selection {
    /// `None` selects every label present.
    pub categories: Option<Vec<u32>>,
    /// First `n` images of each category in file order.
    pub per_class: Option<usize>,
}

impl Dataset {
    pub fn new(images: Vec<RawImage>, labels: Vec<u32>) -> Result<Self> {
        if images.len() != labels.len() {
            return Err(Error::Dataset(format!(
                "{} images but {} labels",
                images.len(),
                labels.len()
            )));
        }
        Ok(Self { images, labels })
    }

    pub fn load_idx(images: &Path, labels: &Path) -> Result<Self> {
        let (imgs, labs) = io::load_idx(images, labels)?;
        Self::new(imgs, labs.into_iter().map(u32::from).collect())
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[RawImage] {
        &self.images
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Image indices per selected category.
    pub fn select(&self, selection: &Selection) -> Result<BTreeMap<CategoryId, Vec<usize>>> {
        let mut groups: BTreeMap<CategoryId, Vec<usize>> = BTreeMap::new();
        for (idx, &label) in self.labels.iter().enumerate() {
            if selection.categories.as_ref().is_some_and(|c| !c.contains(&label)) {
                continue;
            }
            let group = groups.entry(CategoryId(label)).or_default();
            if selection.per_class.is_none_or(|n| group.len() < n) {
                group.push(idx);
            }
        }
        if let Some(wanted) = &selection.categories {
            if let Some(missing) = wanted.iter().find(|&&c| !groups.contains_key(&CategoryId(c))) {
                return Err(Error::Dataset(format!("category {missing} has no images")));
            }
        }
        if groups.is_empty() {
            return Err(Error::Dataset("no images selected".into()));
        }
        Ok(groups)
    }
}

/// A report plus named CSV plot files.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: AnalysisReport,
    /// `(file name, contents)` of example Betti curves.
    pub curves: Vec<(String, String)>,
}

impl RunOutput {
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        let curves_dir = dir.join("curves");
        std::fs::create_dir_all(&curves_dir).map_err(io_err(&curves_dir))?;
        let report = dir.join("report.json");
        std::fs::write(&report, self.report.to_json()).map_err(io_err(&report))?;
        for (name, csv) in &self.curves {
            let p = curves_dir.join(name);
            std::fs::write(&p, csv).map_err(io_err(&p))?;
        }
        Ok(())
    }
}

/// Flat, category-ordered image indices with the first index of each category marked.
fn flatten(groups: &BTreeMap<CategoryId, Vec<usize>>) -> Vec<(CategoryId, usize, bool)> {
    groups
        .iter()
        .flat_map(|(&c, idx)| idx.iter().enumerate().map(move |(pos, &i)| (c, i, pos == 0)))
        .collect()
}

fn histogram_of(config: &StatisticConfig, values: impl IntoIterator<Item = Option<u64>>) -> Result<Histogram> {
    Ok(Histogram::from_observations(config.bin_width, values)?)
}

/// SEDs, SED histograms and entropies for every filter at every snapshot,
/// then entropy variations, effective sets, ensemble scores and the pruning order.
pub fn run_assess(
    manifest: &SnapshotManifest,
    dataset: &Dataset,
    config: &RunConfig,
    selection: &Selection,
) -> Result<RunOutput> {
    if manifest.iterations.len() < 2 {
        return Err(ctopo_core::Error::Contract(format!(
            "assessment needs at least two snapshots, manifest has {}",
            manifest.iterations.len()
        ))
        .into());
    }
    let stat = config.statistic();
    stat.validate()?;
    let groups = dataset.select(selection)?;
    let items = flatten(&groups);
    let filter_count = manifest.filter_count();

    let mut snapshots: Vec<Vec<FilterSnapshot>> = vec![Vec::new(); filter_count];
    let mut curves = Vec::new();
    for (it, entry) in manifest.iterations.iter().enumerate() {
        let sources = manifest.load_iteration(it)?;
        for (f, source) in sources.iter().enumerate() {
            if let FilterSource::FeatureMaps(maps) = source {
                if maps.len() != dataset.len() {
                    return Err(Error::Manifest(format!(
                        "iteration {}: filter {f} has {} feature maps for {} images",
                        entry.t,
                        maps.len(),
                        dataset.len()
                    )));
                }
            }
            let results: Vec<(Option<usize>, Option<BettiCurves>)> = items
                .par_iter()
                .map(|&(_, idx, first)| {
                    let map = match source {
                        FilterSource::Kernel(kernel) => convolve(&dataset.images[idx], kernel)?,
                        FilterSource::FeatureMaps(maps) => maps[idx].clone(),
                    };
                    let bc = map_curves(&map, &stat)?;
                    let sed = starting_edge_density(&bc, stat.k)?;
                    Ok((sed, first.then_some(bc)))
                })
                .collect::<Result<_>>()?;

            let mut categories = Vec::with_capacity(groups.len());
            let mut offset = 0;
            for (&c, idx) in &groups {
                let chunk = &results[offset..offset + idx.len()];
                offset += idx.len();
                if let Some(bc) = &chunk[0].1 {
                    curves.push((format!("assess_f{f}_t{}_c{}.csv", entry.t, c.0), curves_csv(bc)));
                }
                let seds: Vec<Option<usize>> = chunk.iter().map(|r| r.0).collect();
                let h = histogram_of(&stat, seds.iter().map(|s| s.map(|v| v as u64)))?;
                categories.push(CategorySnapshot {
                    category: c.0,
                    entropy: entropy(&h)?,
                    histogram: HistogramReport::from(&h),
                    seds,
                });
            }
            snapshots[f].push(FilterSnapshot { t: entry.t, categories });
        }
    }

    let mut filters = Vec::with_capacity(filter_count);
    let mut scores = BTreeMap::new();
    for (f, snaps) in snapshots.into_iter().enumerate() {
        let series = groups
            .keys()
            .enumerate()
            .map(|(ci, &c)| {
                let points = snaps.iter().map(|s| (s.t, s.categories[ci].entropy)).collect();
                Ok((c, EntropySeries::new(points)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let assessment = FilterAssessment::from_series(&series)?;
        scores.insert(FilterId(f as u32), assessment.score);
        filters.push(FilterReport {
            filter: f as u32,
            snapshots: snaps,
            deltas: assessment
                .deltas
                .iter()
                .map(|(c, &d)| CategoryDelta {
                    category: c.0,
                    delta_h: d,
                })
                .collect(),
            effective_set: assessment.effective.iter().map(|c| c.0).collect(),
            score: assessment.score,
        });
    }
    let rank = prune_rank(&scores)?;

    Ok(RunOutput {
        report: AnalysisReport::Assess(AssessReport {
            config: config.clone(),
            metadata: manifest.metadata.clone(),
            iterations: manifest.iterations.iter().map(|e| e.t).collect(),
            categories: groups.keys().map(|c| c.0).collect(),
            filters,
            effectiveness_order: rank.effectiveness.iter().map(|f| f.0).collect(),
            prune_order: rank.prune_order.iter().map(|f| f.0).collect(),
        }),
        curves,
    })
}

fn map_curves(map: &FeatureMap, stat: &StatisticConfig) -> Result<BettiCurves> {
    let sym = symmetrize_max(map)?;
    Ok(betti_curves_of(&sym, &stat.topology)?)
}

/// MBC histograms per category, the CD matrix and distinguishable degrees.
pub fn run_cdmatrix(dataset: &Dataset, config: &RunConfig, selection: &Selection) -> Result<RunOutput> {
    let stat = config.statistic();
    stat.validate()?;
    let groups = dataset.select(selection)?;
    if groups.len() < 2 {
        return Err(ctopo_core::Error::Contract(format!(
            "a CD matrix needs at least two categories, selection has {}",
            groups.len()
        ))
        .into());
    }
    let items = flatten(&groups);
    let results: Vec<(usize, Option<BettiCurves>)> = items
        .par_iter()
        .map(|&(_, idx, first)| {
            let sym = symmetrize_add(&dataset.images[idx])?;
            let bc = betti_curves_of(&sym, &stat.topology)?;
            Ok((max_betti(&bc, stat.k)?, first.then_some(bc)))
        })
        .collect::<Result<_>>()?;

    let mut categories = Vec::new();
    let mut dists = Vec::new();
    let mut curves = Vec::new();
    let mut offset = 0;
    for (&c, idx) in &groups {
        let chunk = &results[offset..offset + idx.len()];
        offset += idx.len();
        if let Some(bc) = &chunk[0].1 {
            curves.push((format!("cd_c{}.csv", c.0), curves_csv(bc)));
        }
        let maxima: Vec<usize> = chunk.iter().map(|r| r.0).collect();
        let h = histogram_of(&stat, maxima.iter().map(|&m| Some(m as u64)))?;
        categories.push(CategoryMbc {
            category: c.0,
            maxima,
            histogram: HistogramReport::from(&h),
        });
        dists.push((c, h));
    }
    let matrix = cd_matrix(&dists)?;
    Ok(RunOutput {
        report: AnalysisReport::Cdmatrix(CdReport {
            config: config.clone(),
            categories,
            cd_matrix: matrix_report(&matrix),
            distinguishable_degree: matrix
                .labels()
                .iter()
                .zip(matrix.degrees())
                .map(|(c, dd)| DegreeReport { category: c.0, dd })
                .collect(),
        }),
        curves,
    })
}

fn matrix_report(m: &CdMatrix) -> CdMatrixReport {
    CdMatrixReport {
        labels: m.labels().iter().map(|c| c.0).collect(),
        values: (0..m.len()).map(|i| m.row(i).to_vec()).collect(),
    }
}
