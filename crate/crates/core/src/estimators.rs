//! Classical extreme value index estimators.
//!
//! All of them are functions of the k top order statistics relative to the
//! threshold `X_{n-k:n}`, hence invariant to a change of scale of the data.

use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{EvtError, Result};
use crate::port::PortBase;
use crate::tail_stats::{
    excess_ratios, log_excess_moment, ratio_excess_moment, OrderedSample, TailLevel,
};

/// Which estimator produced an [`EviEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Method {
    Hill,
    Moment,
    MixedMoment,
    PowerMean { p: f64 },
    MeanOrderP { p: f64 },
    GeneralizedJackknife { rho: f64 },
    Mvrb { beta: f64, rho: f64 },
    Port { base: PortBase, s: f64 },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Hill => write!(f, "hill"),
            Method::Moment => write!(f, "moment"),
            Method::MixedMoment => write!(f, "mixed_moment"),
            Method::PowerMean { p } => write!(f, "pme(p={p})"),
            Method::MeanOrderP { p } => write!(f, "mop(p={p})"),
            Method::GeneralizedJackknife { rho } => write!(f, "gj(rho={rho})"),
            Method::Mvrb { .. } => write!(f, "mvrb"),
            Method::Port { base, s } => write!(f, "port_{base}(s={s})"),
        }
    }
}

/// Advisory metadata attached to an estimate. None of these is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Note {
    /// Mean-of-order-p used with `p * H(k) >= 1`, outside the range where
    /// the estimator is consistent.
    OrderBeyondValidity,
    /// The estimated second-order shape came out non-negative and was
    /// clamped to a small negative value.
    RhoClamped,
    /// The estimated second-order shape was too close to zero for the scale
    /// `beta` to be identified; no bias correction was applied.
    BetaSuppressed,
    /// PORT with `s = 0`: excesses over the sample minimum, meaningful only
    /// for a finite left endpoint.
    FiniteLeftEndpointAssumed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EviEstimate {
    pub method: Method,
    pub k: TailLevel,
    pub value: f64,
    /// No asymptotic variance formula is attached to these estimators; kept
    /// for callers that supply their own.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<Note>,
}

impl EviEstimate {
    pub(crate) fn new(method: Method, k: TailLevel, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(EvtError::Overflow(format!(
                "{method} at k = {k} is not finite ({value})"
            )));
        }
        Ok(Self {
            method,
            k,
            value,
            variance: None,
            notes: Vec::new(),
        })
    }

    pub(crate) fn with_note(mut self, note: Note) -> Self {
        if !self.notes.contains(&note) {
            self.notes.push(note);
        }
        self
    }
}

/// Hill estimator `H(k) = M^(1)(k)`.
pub fn hill(sample: &OrderedSample, k: usize) -> Result<EviEstimate> {
    let value = log_excess_moment(sample, k, 1.0)?;
    EviEstimate::new(Method::Hill, sample.tail_level(k)?, value)
}

/// Moment estimator `M^(1) + 1 - 1/2 (1 - (M^(1))^2 / M^(2))^{-1}`.
pub fn moment(sample: &OrderedSample, k: usize) -> Result<EviEstimate> {
    let m1 = log_excess_moment(sample, k, 1.0)?;
    let m2 = log_excess_moment(sample, k, 2.0)?;
    if m2 <= 0.0 {
        return Err(EvtError::singular(format!(
            "second log-excess moment is zero at k = {k}"
        )));
    }
    let denom = 1.0 - m1 * m1 / m2;
    if denom == 0.0 {
        return Err(EvtError::singular(format!(
            "log-excesses are constant at k = {k}, (M1)^2 / M2 = 1"
        )));
    }
    EviEstimate::new(
        Method::Moment,
        sample.tail_level(k)?,
        m1 + 1.0 - 0.5 / denom,
    )
}

/// Mixed-moment estimator from `phi = (M^(1) - L^(1)) / (L^(1))^2`.
pub fn mixed_moment(sample: &OrderedSample, k: usize) -> Result<EviEstimate> {
    let m1 = log_excess_moment(sample, k, 1.0)?;
    let l1 = ratio_excess_moment(sample, k, 1.0)?;
    if l1 <= 0.0 {
        return Err(EvtError::singular(format!(
            "ratio moment L1 is zero at k = {k}"
        )));
    }
    let phi = (m1 - l1) / (l1 * l1);
    let value = mixed_moment_from_phi(phi)?;
    EviEstimate::new(Method::MixedMoment, sample.tail_level(k)?, value)
}

/// `(phi - 1) / (1 + 2 min(phi - 1, 0))`.
pub fn mixed_moment_from_phi(phi: f64) -> Result<f64> {
    let excess = phi - 1.0;
    let denom = 1.0 + 2.0 * excess.min(0.0);
    if denom == 0.0 {
        return Err(EvtError::singular(
            "mixed-moment denominator vanishes at phi = 1/2",
        ));
    }
    Ok(excess / denom)
}

/// `Gamma(p + 1)`, exact factorials for small integer `p`.
fn gamma_p_plus_one(p: f64) -> f64 {
    if p.fract() == 0.0 && (0.0..=20.0).contains(&p) {
        (1..=p as u64).product::<u64>() as f64
    } else {
        gamma(p + 1.0)
    }
}

/// Power mean of exponent `p > 0`: `(M^(p)(k) / Gamma(p + 1))^(1/p)`.
/// Coincides with Hill at `p = 1`.
pub fn power_mean_evi(sample: &OrderedSample, k: usize, p: f64) -> Result<EviEstimate> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(EvtError::domain(format!(
            "power mean exponent must be positive, got {p}"
        )));
    }
    let mp = log_excess_moment(sample, k, p)?;
    let scaled = mp / gamma_p_plus_one(p);
    let value = if p == 1.0 {
        scaled
    } else {
        scaled.powf(1.0 / p)
    };
    EviEstimate::new(Method::PowerMean { p }, sample.tail_level(k)?, value)
}

/// Mean of order `p` of the excess ratios `U_{ik}`:
/// `(1 - mean(U^p)^{-1}) / p`, and Hill at `p = 0`.
///
/// When `p * H(k) >= 1` the estimate is still returned but carries
/// [`Note::OrderBeyondValidity`].
pub fn mean_order_p_evi(sample: &OrderedSample, k: usize, p: f64) -> Result<EviEstimate> {
    if !p.is_finite() {
        return Err(EvtError::domain(format!("order p must be finite, got {p}")));
    }
    if p == 0.0 {
        let h = hill(sample, k)?;
        return Ok(EviEstimate {
            method: Method::MeanOrderP { p },
            ..h
        });
    }
    let ratios = excess_ratios(sample, k)?;
    let mean = ratios.iter().map(|u| u.powf(p)).sum::<f64>() / k as f64;
    if !mean.is_finite() || mean == 0.0 {
        return Err(EvtError::Overflow(format!(
            "mean of U^p is {mean} at k = {k}, p = {p}"
        )));
    }
    let value = (1.0 - 1.0 / mean) / p;
    let mut estimate = EviEstimate::new(Method::MeanOrderP { p }, sample.tail_level(k)?, value)?;
    if p > 0.0 && p * log_excess_moment(sample, k, 1.0)? >= 1.0 {
        estimate = estimate.with_note(Note::OrderBeyondValidity);
    }
    Ok(estimate)
}

/// Gumbel's statistic
/// `(X_{n:n} - X_{floor(n/2)+1:n}) / (X_{floor(n/2)+1:n} - X_{1:n})`,
/// balancing the upper and lower ranges of the sample.
pub fn gumbel_statistic(sample: &OrderedSample) -> Result<f64> {
    let n = sample.len();
    if n < 3 {
        return Err(EvtError::domain(format!(
            "Gumbel statistic needs n >= 3, got {n}"
        )));
    }
    let mid = sample.order_stat(n / 2 + 1);
    let denom = mid - sample.order_stat(1);
    if denom == 0.0 {
        return Err(EvtError::singular("lower half of the sample is degenerate"));
    }
    Ok((sample.order_stat(n) - mid) / denom)
}
