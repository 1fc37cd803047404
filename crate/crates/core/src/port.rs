//! Peaks over random thresholds.
//!
//! Estimators are applied to the excesses over an empirical quantile
//! `X_{n_s:n}`, `n_s = floor(n s) + 1`, which removes any location shift of
//! the data before a logarithm is taken.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{EvtError, Result};
use crate::estimators::{hill, mixed_moment, moment, EviEstimate, Method, Note};
use crate::tail_stats::OrderedSample;

/// Default quantile level when none is given.
pub const DEFAULT_S: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PortBase {
    Hill,
    Moment,
    MixedMoment,
}

impl fmt::Display for PortBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PortBase::Hill => "hill",
            PortBase::Moment => "moment",
            PortBase::MixedMoment => "mixed_moment",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortConfig {
    s: f64,
}

impl PortConfig {
    /// `0 <= s < 1`. With `s = 0` the threshold is the sample minimum.
    pub fn new(s: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&s) {
            return Err(EvtError::domain(format!(
                "PORT level s must lie in [0, 1), got {s}"
            )));
        }
        Ok(Self { s })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `n_s = floor(n s) + 1`.
    pub fn threshold_rank(&self, n: usize) -> usize {
        (n as f64 * self.s).floor() as usize + 1
    }
}

impl Default for PortConfig {
    fn default() -> Self {
        Self { s: DEFAULT_S }
    }
}

/// `{X_{n-j+1:n} - X_{n_s:n} : 1 <= j <= n - n_s}`, ascending.
pub fn port_excesses(sample: &OrderedSample, cfg: &PortConfig) -> Result<OrderedSample> {
    let n = sample.len();
    let ns = cfg.threshold_rank(n);
    if ns >= n {
        return Err(EvtError::domain(format!(
            "PORT threshold rank n_s = {ns} leaves no excesses (n = {n})"
        )));
    }
    let threshold = sample.order_stat(ns);
    let excesses: Vec<f64> = sample.values()[ns..]
        .iter()
        .map(|&x| x - threshold)
        .collect();
    Ok(OrderedSample::new(excesses)?.with_provenance(format!(
        "port(s={}) of {}",
        cfg.s,
        sample.provenance()
    )))
}

/// Base estimator applied to the PORT excesses at level `k < n - n_s`.
pub fn port_evi(
    sample: &OrderedSample,
    cfg: &PortConfig,
    k: usize,
    base: PortBase,
) -> Result<EviEstimate> {
    let excesses = port_excesses(sample, cfg)?;
    let estimate = match base {
        PortBase::Hill => hill(&excesses, k)?,
        PortBase::Moment => moment(&excesses, k)?,
        PortBase::MixedMoment => mixed_moment(&excesses, k)?,
    };
    let mut estimate = EviEstimate {
        method: Method::Port { base, s: cfg.s },
        ..estimate
    };
    if cfg.s == 0.0 {
        estimate = estimate.with_note(Note::FiniteLeftEndpointAssumed);
    }
    Ok(estimate)
}
