//! Run configuration and JSON reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ctopo_core::filters::StatisticConfig;
use ctopo_core::histogram::{Bin, Histogram};
use ctopo_core::matrix::EdgeOrdering;
use ctopo_core::topology::{BettiCurves, TopologyConfig, DEFAULT_DIMENSION_GUARD, DEFAULT_SIMPLEX_BUDGET};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    #[default]
    Desc,
    Asc,
}

impl From<Order> for EdgeOrdering {
    fn from(o: Order) -> Self {
        match o {
            Order::Desc => EdgeOrdering::Descending,
            Order::Asc => EdgeOrdering::Ascending,
        }
    }
}

/// Every knob that influences a run, recorded in its report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub k: usize,
    pub order: Order,
    pub bin_width: u64,
    /// `None` when the dimension guard is disabled.
    pub guard: Option<usize>,
    pub seed: u64,
    pub simplex_budget: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: 1,
            order: Order::Desc,
            bin_width: 1,
            guard: Some(DEFAULT_DIMENSION_GUARD),
            seed: 0,
            simplex_budget: DEFAULT_SIMPLEX_BUDGET,
        }
    }
}

impl RunConfig {
    pub fn topology(&self) -> TopologyConfig {
        TopologyConfig {
            k_max: self.k,
            ordering: self.order.into(),
            guard: self.guard,
            simplex_budget: self.simplex_budget,
        }
    }

    pub fn statistic(&self) -> StatisticConfig {
        StatisticConfig {
            k: self.k,
            bin_width: self.bin_width,
            topology: self.topology(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinReport {
    /// Lower bin edge; `null` for the no-hole bin.
    pub label: Option<u64>,
    pub count: u64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramReport {
    pub bin_width: u64,
    pub total: u64,
    pub bins: Vec<BinReport>,
}

impl From<&Histogram> for HistogramReport {
    fn from(h: &Histogram) -> Self {
        Self {
            bin_width: h.bin_width(),
            total: h.total(),
            bins: h
                .probabilities()
                .map(|(bin, probability)| BinReport {
                    label: match bin {
                        Bin::Value(v) => Some(v),
                        Bin::None => None,
                    },
                    count: h.count(bin),
                    probability,
                })
                .collect(),
        }
    }
}

impl HistogramReport {
    pub fn to_histogram(&self) -> ctopo_core::Result<Histogram> {
        Histogram::from_counts(self.bin_width, self.bins.iter().map(|b| (Bin::from(b.label), b.count)))
    }

    pub fn probability_sum(&self) -> f64 {
        self.bins.iter().map(|b| b.probability).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategorySnapshot {
    pub category: u32,
    /// Starting edge density per image; `null` where no hole forms.
    pub seds: Vec<Option<usize>>,
    pub histogram: HistogramReport,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSnapshot {
    pub t: u64,
    pub categories: Vec<CategorySnapshot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryDelta {
    pub category: u32,
    pub delta_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    pub filter: u32,
    pub snapshots: Vec<FilterSnapshot>,
    pub deltas: Vec<CategoryDelta>,
    pub effective_set: Vec<u32>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessReport {
    pub config: RunConfig,
    pub metadata: BTreeMap<String, String>,
    pub iterations: Vec<u64>,
    pub categories: Vec<u32>,
    pub filters: Vec<FilterReport>,
    /// Most effective first.
    pub effectiveness_order: Vec<u32>,
    /// Least effective first.
    pub prune_order: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryMbc {
    pub category: u32,
    pub maxima: Vec<usize>,
    pub histogram: HistogramReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdMatrixReport {
    pub labels: Vec<u32>,
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub category: u32,
    pub dd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdReport {
    pub config: RunConfig,
    pub categories: Vec<CategoryMbc>,
    pub cd_matrix: CdMatrixReport,
    pub distinguishable_degree: Vec<DegreeReport>,
}

impl CdReport {
    pub fn distance(&self, a: u32, b: u32) -> Option<f64> {
        let i = self.cd_matrix.labels.iter().position(|&l| l == a)?;
        let j = self.cd_matrix.labels.iter().position(|&l| l == b)?;
        Some(self.cd_matrix.values[i][j])
    }

    pub fn degree(&self, c: u32) -> Option<f64> {
        self.distinguishable_degree
            .iter()
            .find(|d| d.category == c)
            .map(|d| d.dd)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AnalysisReport {
    Assess(AssessReport),
    Cdmatrix(CdReport),
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn histograms(&self) -> Vec<&HistogramReport> {
        match self {
            AnalysisReport::Assess(a) => a
                .filters
                .iter()
                .flat_map(|f| f.snapshots.iter())
                .flat_map(|s| s.categories.iter())
                .map(|c| &c.histogram)
                .collect(),
            AnalysisReport::Cdmatrix(c) => c.categories.iter().map(|c| &c.histogram).collect(),
        }
    }
}

/// `v,e,beta_0,...,beta_kmax` rows for plotting.
pub fn curves_csv(curves: &BettiCurves) -> String {
    let mut out = String::from("v,e");
    for k in 0..=curves.k_max() {
        let _ = write!(out, ",beta_{k}");
    }
    out.push('\n');
    for v in 0..=curves.edge_count() {
        let _ = write!(out, "{v},{}", curves.density(v));
        for k in 0..=curves.k_max() {
            let _ = write!(out, ",{}", curves.beta(k, v).unwrap_or(0));
        }
        out.push('\n');
    }
    out
}
