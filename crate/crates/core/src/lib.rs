//! Semi-parametric extreme value analysis.
//!
//! The crate is organised around the ascending-sorted [`OrderedSample`] and
//! the tail statistics built on its top order statistics:
//!
//! - [`distributions`]: GEV and its three classical types, max-semi-stable
//!   laws, second-order heavy-tail models used as simulation oracles.
//! - [`tail_stats`]: log-excess moments, ratio moments and excess ratios.
//! - [`estimators`]: Hill, moment, mixed-moment, power-mean and mean-of-order-p
//!   extreme value index estimators and the Gumbel model-choice statistic.
//! - [`reduced_bias`]: second-order parameter estimation and the
//!   minimum-variance reduced-bias Hill estimator.
//! - [`resampling`]: jackknife, generalized jackknife and the double bootstrap
//!   selection of the optimal number of top order statistics.
//! - [`port`]: peaks over random thresholds.
//! - [`cluster`]: extremal index estimation for stationary sequences.
//! - [`asymptotics`]: joint laws of the top order statistics, rates of
//!   convergence and penultimate approximations.
//! - [`cli`]: the batch front end behind the `evtkit` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod cluster;
pub mod distributions;
mod error;
pub mod estimators;
pub mod port;
pub mod reduced_bias;
pub mod resampling;
pub mod rng;
pub mod tail_stats;

pub use error::{EvtError, Result};
pub use estimators::{EviEstimate, Method, Note};
pub use tail_stats::{OrderedSample, TailLevel};
