//! Density metrics `d_rho` on planar domains.
//!
//! A continuous density `rho: Omega -> (0, inf)` turns a domain into a new
//! metric space by weighting curve length with `rho`. This crate builds such
//! metrics numerically (Whitney grids plus shortest paths), estimates
//! Hausdorff/packing-type dimensions of the boundary from distance oracles,
//! and evaluates the closed-form dimension formulas the estimates are checked
//! against.
//!
//! The crate is organised along the pipeline:
//!
//! * [`domains`] -- planar domain geometry and the Koch-type snowflake,
//! * [`densities`] -- density families and Cantor-set constructions,
//! * [`metric`] -- Whitney grids, weighted graphs, shortest paths, and
//!   radial-path oracles,
//! * [`dimension`] -- covering/packing counts and log-log slope fits,
//! * [`theory`] -- closed-form dimension formulas and spectra,
//! * [`config`] / [`experiments`] / [`report`] -- the named, reproducible
//!   experiments behind the `rhometric` CLI.
//!
//! With the default `parallel` feature, distance-matrix sweeps, counting
//! ladders, and Monte Carlo checks run on rayon; disabling the feature gives a
//! bit-identical sequential fallback.

pub mod config;
pub mod densities;
pub mod dimension;
pub mod domains;
pub mod error;
pub mod experiments;
pub mod metric;
pub mod report;
pub mod theory;

pub use error::{Error, Result};
