//! Spectral-fluctuation statistics of rectangular quantum billiards.
//!
//! The crate generates billiard spectra in unit-mean-spacing variables,
//! computes sample statistics (interval and global number variance,
//! spectral rigidity, staircase correlation), averages them with three
//! ensemble procedures (spectral, rescaled-spectral, parametric), and
//! evaluates the matching periodic-orbit predictions.
//!
//! The data-parallel inner loops (ensemble members, grid points, mode
//! sums) run on rayon when the default `parallel` feature is enabled and
//! fall back to plain iteration without it; either way the reduction
//! order is fixed, so results are bit-identical.

pub mod averaging;
pub mod error;
pub mod exec;
pub mod spectrum;
pub mod statistics;
pub mod theory;

pub use error::{Error, Result};
