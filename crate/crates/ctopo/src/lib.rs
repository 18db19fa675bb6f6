//! File formats, snapshot manifests, JSON reports and end-to-end runs on top
//! of `ctopo-core`.

pub mod error;
pub mod io;
pub mod manifest;
pub mod pipeline;
pub mod report;

pub use error::{Error, FormatError, Result};
pub use manifest::{FilterSource, SnapshotManifest};
pub use pipeline::{run_assess, run_cdmatrix, Dataset, RunOutput, Selection};
pub use report::{AnalysisReport, Order, RunConfig};
