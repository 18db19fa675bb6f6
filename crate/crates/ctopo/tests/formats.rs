use std::fs;

use ctopo::io::idx::{encode_idx_images, encode_idx_labels};
use ctopo::io::{load_idx, read_grid, read_grids, read_tensor, write_grid, write_tensor, Tensor};
use ctopo::{Error, FormatError};
use ctopo_core::matrix::{Grid, RawImage};
use proptest::prelude::*;

mod common;

#[test]
fn idx_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let images: Vec<_> = (0..4)
        .map(|i| RawImage::from_fn(3, 2, |r, c| ((i * 60 + r * 7 + c) % 256) as f64).unwrap())
        .collect();
    let (ip, lp) = (dir.path().join("img"), dir.path().join("lab"));
    fs::write(&ip, encode_idx_images(&images).unwrap()).unwrap();
    fs::write(&lp, encode_idx_labels(&[1, 0, 9, 4])).unwrap();
    let (back, labels) = load_idx(&ip, &lp).unwrap();
    assert_eq!(back, images);
    assert_eq!(labels, [1, 0, 9, 4]);

    fs::write(&lp, encode_idx_labels(&[1, 0, 9])).unwrap();
    let err = load_idx(&ip, &lp).unwrap_err();
    assert!(
        matches!(
            err,
            Error::Format {
                source: FormatError::CountMismatch { images: 4, labels: 3 },
                ..
            }
        ),
        "{err}"
    );
}

#[test]
fn truncated_idx_is_reported_with_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = encode_idx_images(&[RawImage::new(2, 2, vec![1.0; 4]).unwrap()]).unwrap();
    bytes.pop();
    let p = dir.path().join("short");
    fs::write(&p, &bytes).unwrap();
    let err = ctopo::io::load_idx_images(&p).unwrap_err();
    assert!(err.to_string().contains("short"), "{err}");
    assert!(matches!(
        err,
        Error::Format {
            source: FormatError::Truncated { .. },
            ..
        }
    ));
}

#[test]
fn fixture_is_class_sorted_mnist() {
    let (images, labels) = load_idx(common::MNIST_IMAGES.as_ref(), common::MNIST_LABELS.as_ref()).unwrap();
    assert_eq!(images.len(), 2000);
    assert_eq!((images[0].rows(), images[0].cols()), (28, 28));
    for c in 0..10u8 {
        assert_eq!(labels.iter().filter(|&&l| l == c).count(), 200);
    }
    assert!(images
        .iter()
        .flat_map(|i| i.values())
        .all(|&v| (0.0..=255.0).contains(&v) && v.fract() == 0.0));
}

#[test]
fn grids_dispatch_on_extension_and_magic() {
    let dir = tempfile::tempdir().unwrap();
    let g = Grid::new(2, 3, vec![0.5, -1.0, 3.25, 1e-300, 7.0, f64::MAX]).unwrap();
    for name in ["m.tfl", "m.TFL1", "m.csv", "m.txt"] {
        let p = dir.path().join(name);
        write_grid(&p, &g).unwrap();
        assert_eq!(read_grid(&p).unwrap(), g, "{name}");
        assert_eq!(read_grids(&p).unwrap(), vec![g.clone()], "{name}");
    }
    assert!(fs::read(dir.path().join("m.tfl")).unwrap().starts_with(b"TFL1"));
    assert!(fs::read_to_string(dir.path().join("m.csv"))
        .unwrap()
        .starts_with("0.5,-1,3.25"));
}

#[test]
fn stacked_tensors_read_as_many_grids() {
    let dir = tempfile::tempdir().unwrap();
    let grids: Vec<_> = (0..3)
        .map(|i| Grid::from_fn(2, 2, |r, c| (i * 4 + r * 2 + c) as f64).unwrap())
        .collect();
    let p = dir.path().join("s.tfl");
    write_tensor(&p, &Tensor::stack(&grids).unwrap()).unwrap();
    assert_eq!(read_tensor(&p).unwrap().dims(), [3, 2, 2]);
    assert_eq!(read_grids(&p).unwrap(), grids);
    assert!(matches!(
        read_grid(&p),
        Err(Error::Format {
            source: FormatError::Rank { .. },
            ..
        })
    ));
}

#[test]
fn missing_file_is_an_io_error() {
    assert!(matches!(
        read_grid("/nonexistent/x.tfl".as_ref()),
        Err(Error::Io { .. })
    ));
}

proptest! {
    #[test]
    fn idx_pixels_survive(rows in 1usize..6, cols in 1usize..6, px in prop::collection::vec(any::<u8>(), 36 * 3)) {
        let images: Vec<_> = (0..3)
            .map(|i| RawImage::from_fn(rows, cols, |r, c| px[i * 36 + r * 6 + c] as f64).unwrap())
            .collect();
        let bytes = encode_idx_images(&images).unwrap();
        let back = ctopo::io::idx::parse_idx_images(&bytes).unwrap();
        prop_assert_eq!(back, images);
    }

    #[test]
    fn tensor_files_are_bit_exact(bits in prop::collection::vec(any::<u64>(), 1..40)) {
        let dir = tempfile::tempdir().unwrap();
        let data: Vec<f64> = bits.iter().map(|&b| f64::from_bits(b)).collect();
        let p = dir.path().join("t.tfl");
        write_tensor(&p, &Tensor::new(vec![data.len()], data).unwrap()).unwrap();
        let back: Vec<u64> = read_tensor(&p).unwrap().data().iter().map(|v| v.to_bits()).collect();
        prop_assert_eq!(back, bits);
    }
}
