//! Grey-box identification of the PWM-to-velocity input gain of
//! twin-thruster surface vessels from position, heading and PWM logs.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: domain types, frames, operating regions, thrust maps and the
//!   input-gain evaluators.
//! - [`dataprep`]: multi-rate log synchronisation, filtering and
//!   differentiation into a uniform dataset.
//! - [`regressors`]: the linear-in-parameters systems `A X = b`.
//! - [`estimator`]: least squares and the shared-pole resolution.
//! - [`validate`]: partitions, one-step prediction and metrics.
//! - [`synth`]: ground-truth simulators used as test oracles.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataprep;
pub mod error;
pub mod estimator;
pub mod model;
pub mod regressors;
pub mod synth;
pub mod validate;

pub use error::{Error, Result};
