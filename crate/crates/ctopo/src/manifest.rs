//! Snapshot manifests: which filters (or precomputed feature maps) exist at
//! each training iteration.
//!
//! ```json
//! {
//!   "metadata": { "layer": "conv1", "activation": "pre" },
//!   "iterations": [
//!     { "t": 0,   "filters": ["t0/f0.tfl", "t0/f1.tfl"] },
//!     { "t": 234, "feature_maps": ["t234/f0_maps.tfl", "t234/f1_maps.tfl"] }
//!   ]
//! }
//! ```
//!
//! Filter files are rank-2 TFL1 kernels. Feature-map files are rank-3
//! `[images, rows, cols]` tensors aligned with the dataset's image order.
//! Relative paths resolve against the manifest's directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use ctopo_core::matrix::{FeatureMap, Kernel};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};
use crate::io;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub t: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub filters: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub feature_maps: Vec<PathBuf>,
}

impl SnapshotEntry {
    pub fn filter_count(&self) -> usize {
        self.filters.len().max(self.feature_maps.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotManifest {
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
    pub iterations: Vec<SnapshotEntry>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// What one filter contributes at one iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterSource {
    Kernel(Kernel),
    /// One map per dataset image.
    FeatureMaps(Vec<FeatureMap>),
}

impl SnapshotManifest {
    pub fn from_json(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut m: SnapshotManifest = serde_json::from_str(text)?;
        m.base_dir = base_dir.into();
        m.validate_structure()?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text, base)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifests serialize")
    }

    fn validate_structure(&self) -> Result<()> {
        if self.iterations.is_empty() {
            return Err(Error::Manifest("no iterations".into()));
        }
        for w in self.iterations.windows(2) {
            if w[1].t <= w[0].t {
                return Err(Error::Manifest(format!(
                    "iterations must increase strictly: {} then {}",
                    w[0].t, w[1].t
                )));
            }
        }
        let filters = self.iterations[0].filter_count();
        for e in &self.iterations {
            match (e.filters.is_empty(), e.feature_maps.is_empty()) {
                (true, true) => return Err(Error::Manifest(format!("iteration {} lists nothing", e.t))),
                (false, false) => {
                    return Err(Error::Manifest(format!(
                        "iteration {} mixes filters and feature maps",
                        e.t
                    )))
                }
                _ => {}
            }
            if e.filter_count() != filters {
                return Err(Error::Manifest(format!(
                    "iteration {} has {} filters, iteration {} has {filters}",
                    e.t,
                    e.filter_count(),
                    self.iterations[0].t
                )));
            }
        }
        Ok(())
    }

    pub fn filter_count(&self) -> usize {
        self.iterations[0].filter_count()
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Loads every filter of one iteration.
    pub fn load_iteration(&self, index: usize) -> Result<Vec<FilterSource>> {
        let entry = &self.iterations[index];
        if !entry.filters.is_empty() {
            entry
                .filters
                .iter()
                .map(|p| {
                    let grid = io::read_grid(&self.resolve(p))?;
                    Ok(FilterSource::Kernel(Kernel::from_grid(grid)?))
                })
                .collect()
        } else {
            entry
                .feature_maps
                .iter()
                .map(|p| {
                    let maps = io::read_grids(&self.resolve(p))?
                        .into_iter()
                        .map(|g| FeatureMap::from_grid(g).map_err(Error::from))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(FilterSource::FeatureMaps(maps))
                })
                .collect()
        }
    }

    /// Checks that every referenced file exists and parses.
    pub fn validate_files(&self) -> Result<()> {
        for i in 0..self.iterations.len() {
            self.load_iteration(i)?;
        }
        Ok(())
    }
}
