//! Photon-pair generation by spontaneous four-wave mixing in periodically
//! tapered waveguides, computed with a Heisenberg-picture transfer-matrix
//! model for CW and pulsed pumps.

// `!(x > 0.0)` is used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod dispersion;
pub mod error;
pub mod medium;
pub mod modes;
pub mod output;
pub mod propagation;
pub mod pump;
pub mod sweep;
pub mod units;
pub mod waveguide;

pub use error::{Error, Result};
