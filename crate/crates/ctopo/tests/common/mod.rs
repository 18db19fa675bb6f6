#![allow(dead_code)]

use std::path::{Path, PathBuf};

use ctopo::io::{write_tensor, Tensor};
use ctopo::{Dataset, SnapshotManifest};
use ctopo_core::matrix::{Grid, RawImage};
use ctopo_testkit as kit;

pub const MNIST_IMAGES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/mnist2k-images-idx3-ubyte");
pub const MNIST_LABELS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/mnist2k-labels-idx1-ubyte");

pub const SPOT_SIZE: usize = 20;
pub const SPOT_AT: (usize, usize) = (6, 13);
pub const KERNEL_SIZE: usize = 5;

/// One category of jittered spot images.
pub fn spot_dataset(count: usize, seed: u64) -> Dataset {
    let mut rng = kit::rng(seed);
    let images = (0..count)
        .map(|_| {
            let px = kit::spot_image(SPOT_SIZE, SPOT_AT.0, SPOT_AT.1, &mut rng);
            RawImage::new(SPOT_SIZE, SPOT_SIZE, px).unwrap()
        })
        .collect();
    Dataset::new(images, vec![0; count]).unwrap()
}

/// Random images of side `size`, labelled `label`.
pub fn random_images(count: usize, size: usize, label: u32, rng: &mut impl rand::Rng) -> (Vec<RawImage>, Vec<u32>) {
    let images = (0..count)
        .map(|_| RawImage::new(size, size, kit::random_feature_map(size, rng)).unwrap())
        .collect();
    (images, vec![label; count])
}

/// Kernels moving from a random filter to the matched spot filter.
pub fn converging_kernels(ts: &[f64], seed: u64) -> Vec<Grid> {
    let mut rng = kit::rng(seed);
    let start = kit::random_kernel(KERNEL_SIZE, &mut rng);
    let target = kit::spot_kernel(KERNEL_SIZE);
    ts.iter()
        .map(|&t| Grid::new(KERNEL_SIZE, KERNEL_SIZE, kit::lerp(&start, &target, t)).unwrap())
        .collect()
}

/// Writes one TFL1 file per (iteration, filter) and a manifest naming them.
pub fn write_kernel_manifest(dir: &Path, snapshots: &[(u64, Vec<Grid>)]) -> PathBuf {
    let mut iterations = Vec::new();
    for (t, kernels) in snapshots {
        let files: Vec<String> = (0..kernels.len()).map(|f| format!("t{t}_f{f}.tfl")).collect();
        for (name, k) in files.iter().zip(kernels) {
            write_tensor(&dir.join(name), &Tensor::from_grid(k)).unwrap();
        }
        iterations.push(serde_json::json!({ "t": t, "filters": files }));
    }
    let path = dir.join("manifest.json");
    let body = serde_json::json!({ "metadata": { "layer": "conv1" }, "iterations": iterations });
    std::fs::write(&path, serde_json::to_string_pretty(&body).unwrap()).unwrap();
    path
}

pub fn load_manifest(path: &Path) -> SnapshotManifest {
    SnapshotManifest::load(path).unwrap()
}
