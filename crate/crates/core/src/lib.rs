//! Chaos detection for one-dimensional Lorenz-type interval maps.
//!
//! Two tests are provided. The transitivity test ([`transitivity`]) checks
//! whether a random orbit visits every bin of a fine partition of the domain.
//! The LEO test ([`leo`]) checks whether every small subinterval is eventually
//! mapped onto the whole domain, tracking images as unions of intervals.
//!
//! [`maps`] holds the map families (β-transformations, the piecewise-linear
//! and cubic CNV neuron maps, two example maps), [`sweep`] scans parameter
//! planes in parallel, [`density`] estimates invariant densities and [`io`]
//! reads and writes the CSV/PPM outputs.
//!
//! ```
//! use lorenz_chaos::maps::MapSpec;
//! use lorenz_chaos::transitivity::{num_trans_test, TransitivityConfig};
//!
//! let map = MapSpec::beta_transformation(1.8, 0.05).unwrap();
//! assert!(num_trans_test(&map, 0.0, 1.0, &TransitivityConfig::default()).unwrap());
//! ```

// `!(a < b)` is used deliberately so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod error;
pub mod exec;
pub mod io;
pub mod leo;
pub mod maps;
pub mod rng;
pub mod sweep;
pub mod transitivity;

pub use error::{Error, Result};
pub use exec::Execution;
