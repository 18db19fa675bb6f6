//! Clique topology of matrices: Betti curves of order complexes and the
//! statistics built on them.
//!
//! * [`matrix`] - dense grids, symmetrization and edge ordering.
//! * [`topology`] - flag filtrations, Z/2 persistence, Betti curves,
//!   starting edge density and maxima of Betti curves.
//! * [`geometry`] - geometric (distance) and random symmetric matrices.
//! * [`filters`] - convolution, SED distributions, filter entropy,
//!   effective sets and pruning ranks.
//! * [`distinguish`] - MBC distributions, category distances and CD matrices.
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! ```
//! use ctopo_core::matrix::SymmetricMatrix;
//! use ctopo_core::topology::{betti_curves_of, starting_edge_density, TopologyConfig};
//!
//! // Pairs (0,1), (1,2), (2,3), (0,3) rank highest and close a square.
//! let m = SymmetricMatrix::new(4, vec![
//!     0.0, 10.0, 2.0, 7.0,
//!     10.0, 0.0, 9.0, 1.0,
//!     2.0, 9.0, 0.0, 8.0,
//!     7.0, 1.0, 8.0, 0.0,
//! ]).unwrap();
//! let curves = betti_curves_of(&m, &TopologyConfig::default()).unwrap();
//! assert_eq!(curves.curve(1).unwrap(), &[0, 0, 0, 0, 1, 0, 0]);
//! assert_eq!(starting_edge_density(&curves, 1).unwrap(), Some(4));
//! ```
#![no_std]

extern crate alloc;

pub mod distinguish;
mod error;
pub mod filters;
pub mod geometry;
pub mod histogram;
pub mod matrix;
pub mod topology;

pub use error::{Error, Result};
