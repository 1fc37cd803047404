//! Second-order parameter estimation and the minimum-variance reduced-bias
//! (MVRB) Hill estimator.
//!
//! For tails with `U(t) = C t^xi (1 + A(t)/rho + o(t^rho))`,
//! `A(t) = xi beta t^rho`, the dominant bias of `H(k)` is `A(n/k)/(1 - rho)`.
//! `(beta, rho)` are estimated once at a high level `k_high` and the bias is
//! divided out of the whole Hill path:
//!
//! `H_bar(k) = H(k) (1 - beta_hat (n/k)^rho_hat / (1 - rho_hat))`.
//!
//! `rho_hat` is the tau = 0 member of the log-moment ratio family,
//!
//! ```text
//! T(k)    = (ln M1 - ln(M2/2)/2) / (ln(M2/2)/2 - ln(M3/6)/3)
//! rho_hat = -|3 (T - 1) / (T - 3)|
//! ```
//!
//! and `beta_hat` is the least-squares estimator built on the scaled
//! log-spacings `W_i = i (ln X_{n-i+1:n} - ln X_{n-i:n})`:
//!
//! ```text
//! beta_hat = (k/n)^rho_hat (d(rho) D(0) - D(rho)) / (d(rho) D(rho) - D(2 rho))
//! d(a) = mean_i (i/k)^(-a),   D(a) = mean_i (i/k)^(-a) W_i
//! ```
//!
//! Both the numerator and the denominator of `beta_hat` vanish as
//! `rho -> 0`, the latter like `rho^2`. Above [`RHO_IDENTIFIABLE`] the ratio
//! is noise (on exact Pareto data `rho_hat` lands there a few percent of the
//! time), so `beta_hat` is set to 0 and the correction switched off.

use serde::{Deserialize, Serialize};

use crate::error::{EvtError, Result};
use crate::estimators::{hill, EviEstimate, Method, Note};
use crate::tail_stats::{log_excess_moment, OrderedSample, TailLevel};

/// Exponent of the default high level `k_high = floor(n^0.995)`.
pub const K_HIGH_EXPONENT: f64 = 0.995;

/// Value substituted for a non-negative `rho_hat`.
pub const RHO_CLAMP: f64 = -1e-6;

/// Largest `rho_hat` for which `beta_hat` is estimated.
pub const RHO_IDENTIFIABLE: f64 = -0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderEstimate {
    rho_hat: f64,
    beta_hat: f64,
    k_high: TailLevel,
    rho_clamped: bool,
    beta_suppressed: bool,
}

impl SecondOrderEstimate {
    /// Externally supplied parameters.
    pub fn new(rho_hat: f64, beta_hat: f64, k_high: TailLevel) -> Result<Self> {
        if !(rho_hat < 0.0) || !rho_hat.is_finite() {
            return Err(EvtError::domain(format!(
                "rho_hat must be negative and finite, got {rho_hat}"
            )));
        }
        if !beta_hat.is_finite() {
            return Err(EvtError::domain(format!(
                "beta_hat must be finite, got {beta_hat}"
            )));
        }
        Ok(Self {
            rho_hat,
            beta_hat,
            k_high,
            rho_clamped: false,
            beta_suppressed: false,
        })
    }

    pub fn rho_hat(&self) -> f64 {
        self.rho_hat
    }

    pub fn beta_hat(&self) -> f64 {
        self.beta_hat
    }

    pub fn k_high(&self) -> TailLevel {
        self.k_high
    }

    /// Whether `rho_hat` was clamped to [`RHO_CLAMP`].
    pub fn rho_clamped(&self) -> bool {
        self.rho_clamped
    }

    /// Whether `rho_hat` exceeded [`RHO_IDENTIFIABLE`] and `beta_hat` was
    /// set to 0.
    pub fn beta_suppressed(&self) -> bool {
        self.beta_suppressed
    }

    /// `1 - beta_hat (n/k)^rho_hat / (1 - rho_hat)`.
    pub fn correction_factor(&self, n: usize, k: usize) -> f64 {
        1.0 - self.beta_hat * (n as f64 / k as f64).powf(self.rho_hat) / (1.0 - self.rho_hat)
    }
}

/// `floor(n^0.995)`, capped at `n - 1` and at the largest level whose
/// threshold order statistic is positive.
pub fn default_k_high(sample: &OrderedSample) -> usize {
    let n = sample.len();
    let positive = sample.values().iter().filter(|&&x| x > 0.0).count();
    let k = ((n as f64).powf(K_HIGH_EXPONENT).floor() as usize).min(n - 1);
    k.min(positive.saturating_sub(1))
}

/// Log-moment ratio estimate of `rho` at level `k` (tau = 0).
pub fn rho_estimate(sample: &OrderedSample, k: usize) -> Result<f64> {
    let m1 = log_excess_moment(sample, k, 1.0)?;
    let m2 = log_excess_moment(sample, k, 2.0)?;
    let m3 = log_excess_moment(sample, k, 3.0)?;
    if !(m1 > 0.0 && m2 > 0.0 && m3 > 0.0) {
        return Err(EvtError::EstimationFailure(format!(
            "degenerate log-excess moments at k = {k}: ({m1}, {m2}, {m3})"
        )));
    }
    let half_log_m2 = 0.5 * (m2 / 2.0).ln();
    let t = (m1.ln() - half_log_m2) / (half_log_m2 - (m3 / 6.0).ln() / 3.0);
    let rho = -(3.0 * (t - 1.0) / (t - 3.0)).abs();
    if !rho.is_finite() {
        return Err(EvtError::EstimationFailure(format!(
            "rho statistic is not finite (T = {t}) at k = {k}"
        )));
    }
    Ok(rho)
}

/// Least-squares estimate of `beta` at level `k` given `rho`.
pub fn beta_estimate(sample: &OrderedSample, k: usize, rho: f64) -> Result<f64> {
    let n = sample.len();
    let level = sample.tail_level(k)?;
    let k = level.get();
    if sample.top(k + 1) <= 0.0 {
        return Err(EvtError::domain(format!(
            "log-spacings need positive top {} values",
            k + 1
        )));
    }
    let kf = k as f64;
    let (mut d_rho, mut big_d0, mut big_d_rho, mut big_d_2rho) = (0.0, 0.0, 0.0, 0.0);
    for i in 1..=k {
        let spacing = i as f64 * (sample.top(i).ln() - sample.top(i + 1).ln());
        let w = (i as f64 / kf).powf(-rho);
        d_rho += w;
        big_d0 += spacing;
        big_d_rho += w * spacing;
        big_d_2rho += w * w * spacing;
    }
    let (d_rho, big_d0, big_d_rho, big_d_2rho) =
        (d_rho / kf, big_d0 / kf, big_d_rho / kf, big_d_2rho / kf);
    let denom = d_rho * big_d_rho - big_d_2rho;
    if denom == 0.0 {
        return Err(EvtError::EstimationFailure(format!(
            "beta statistic denominator vanishes at k = {k}"
        )));
    }
    let beta = (kf / n as f64).powf(rho) * (d_rho * big_d0 - big_d_rho) / denom;
    if !beta.is_finite() {
        return Err(EvtError::EstimationFailure(format!(
            "beta statistic is not finite at k = {k}"
        )));
    }
    Ok(beta)
}

/// `(rho_hat, beta_hat)` at `k_high` (default [`default_k_high`]).
///
/// A non-negative `rho_hat` is clamped to [`RHO_CLAMP`] and flagged; above
/// [`RHO_IDENTIFIABLE`] `beta_hat` is 0 and flagged.
pub fn estimate_second_order(
    sample: &OrderedSample,
    k_high: Option<usize>,
) -> Result<SecondOrderEstimate> {
    let k = k_high.unwrap_or_else(|| default_k_high(sample));
    if k < 2 {
        return Err(EvtError::EstimationFailure(format!(
            "not enough positive upper order statistics for second-order estimation (k_high = {k})"
        )));
    }
    let level = sample.tail_level(k)?;
    let mut rho = rho_estimate(sample, k)?;
    let mut clamped = false;
    if rho >= RHO_CLAMP {
        rho = RHO_CLAMP;
        clamped = true;
    }
    let suppressed = rho > RHO_IDENTIFIABLE;
    let beta = if suppressed {
        0.0
    } else {
        beta_estimate(sample, k, rho)?
    };
    Ok(SecondOrderEstimate {
        rho_hat: rho,
        beta_hat: beta,
        k_high: level,
        rho_clamped: clamped,
        beta_suppressed: suppressed,
    })
}

/// `H_bar(k) = H(k) (1 - beta_hat (n/k)^rho_hat / (1 - rho_hat))`.
pub fn mvrb_hill(
    sample: &OrderedSample,
    k: usize,
    so: &SecondOrderEstimate,
) -> Result<EviEstimate> {
    let h = hill(sample, k)?;
    let value = h.value * so.correction_factor(sample.len(), k);
    let mut est = EviEstimate::new(
        Method::Mvrb {
            beta: so.beta_hat,
            rho: so.rho_hat,
        },
        h.k,
        value,
    )?;
    if so.rho_clamped {
        est = est.with_note(Note::RhoClamped);
    }
    if so.beta_suppressed {
        est = est.with_note(Note::BetaSuppressed);
    }
    Ok(est)
}

/// MVRB estimates for `k = 1..n-1` from a Hill path, index `k - 1`.
pub fn mvrb_path(hill_path: &[f64], so: &SecondOrderEstimate) -> Vec<f64> {
    let n = hill_path.len() + 1;
    hill_path
        .iter()
        .enumerate()
        .map(|(i, h)| h * so.correction_factor(n, i + 1))
        .collect()
}
