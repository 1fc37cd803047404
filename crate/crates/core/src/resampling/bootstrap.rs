//! Double bootstrap choice of the number `k` of top order statistics.
//!
//! The auxiliary statistic `A(k) = T(k) - T(floor(k/2))` has the same
//! dominant bias structure as `T(k)` but converges to zero, so its mean
//! squared error can be estimated by resampling without knowing the tail
//! index. For each of the two sub-sample sizes `n1 > n2 = floor(n1^2 / n)`
//! the bootstrap MSE of `A` is minimised over `k`, and the two minimisers are
//! combined into
//!
//! `k_hat = floor(c(rho) * k1^2 / k2)`, `c(rho) = (1 - 2^rho)^(2 / (1 - 2 rho))`,
//!
//! with `c = 1` when `rho` cannot be estimated.
//!
//! The raw argmin of a bootstrap MSE curve follows the quirks of the one
//! sample it was resampled from. When `rho_hat` is available each curve is
//! instead replaced by its weighted least-squares fit `v / k + b k^(-2 rho)`
//! over `FIT_POINTS` log-spaced levels and `k*` is the minimiser of the fit,
//! `(v / (-2 rho b))^(1 / (1 - 2 rho))`. The raw argmin is the fallback.
//! In `c`, `rho_hat` is capped at `RHO_CORRECTION_CAP` since `c(rho) -> 0`
//! as `rho -> 0`.
//!
//! Replicate `b` of sub-sample size number `j` (0 for `n1`, 1 for `n2`) draws
//! from ChaCha stream `2 b + j` of the plan seed. Per-replicate curves are
//! summed in replicate order, so results do not depend on the thread count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EvtError, Result};
use crate::estimators::{hill, mean_order_p_evi};
use crate::reduced_bias::{estimate_second_order, mvrb_hill, mvrb_path, SecondOrderEstimate};
use crate::rng::stream_rng;
use crate::tail_stats::{hill_path_sorted, ratio_power_mean_path, OrderedSample, TailLevel};

pub const MIN_REPLICATES: usize = 100;
pub const DEFAULT_REPLICATES: usize = 250;

/// Exponent of the default first sub-sample size `n1 = floor(n^0.955)`.
const N1_EXPONENT: f64 = 0.955;
/// Levels used to fit the bootstrap MSE curves.
pub const FIT_POINTS: usize = 200;
/// Upper bound on the `rho` entering the correction `c(rho)`.
pub const RHO_CORRECTION_CAP: f64 = -0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BootstrapPlan {
    n1: usize,
    n2: usize,
    replicates: usize,
    seed: u64,
}

impl BootstrapPlan {
    /// Requires `1 < n2 < n1 < n` and at least [`MIN_REPLICATES`] replicates.
    pub fn new(n: usize, n1: usize, n2: usize, replicates: usize, seed: u64) -> Result<Self> {
        if !(1 < n2 && n2 < n1 && n1 < n) {
            return Err(EvtError::domain(format!(
                "bootstrap sub-sample sizes must satisfy 1 < n2 < n1 < n, got n2 = {n2}, n1 = {n1}, n = {n}"
            )));
        }
        if replicates < MIN_REPLICATES {
            return Err(EvtError::domain(format!(
                "at least {MIN_REPLICATES} bootstrap replicates are needed, got {replicates}"
            )));
        }
        Ok(Self {
            n1,
            n2,
            replicates,
            seed,
        })
    }

    /// `n1 = floor(n^0.955)`, `n2 = floor(n1^2 / n)`.
    pub fn default_for(n: usize, replicates: usize, seed: u64) -> Result<Self> {
        let n1 = (n as f64).powf(N1_EXPONENT).floor() as usize;
        let n2 = (n1 * n1) / n.max(1);
        Self::new(n, n1, n2, replicates, seed)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn replicates(&self) -> usize {
        self.replicates
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// The estimator `T` whose sample fraction is selected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum BootstrapEstimator {
    Hill,
    MeanOrderP { p: f64 },
    Mvrb,
}

/// Bootstrap MSE curves of the auxiliary statistic, index `k - 1`
/// (entry 0 is always NaN since `A(1)` needs `T(0)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapDiagnostics {
    pub n1: usize,
    pub n2: usize,
    pub replicates: usize,
    pub mse_n1: Vec<f64>,
    pub mse_n2: Vec<f64>,
    pub rho_hat: Option<f64>,
    pub correction: f64,
    /// Raw argmins of `mse_n1` and `mse_n2`.
    pub k1_argmin: Option<usize>,
    pub k2_argmin: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub k_hat: TailLevel,
    /// Minimisers of the bootstrap MSE of `A` at `n1` and `n2`; fractional
    /// when they come from the fitted curves.
    pub k1_star: f64,
    pub k2_star: f64,
    /// `T(k_hat)` on the full sample.
    pub estimate: f64,
    pub diagnostics: BootstrapDiagnostics,
}

/// Path `T(k)`, `k = 1..len-1`, on an ascending slice.
fn estimator_path(
    ascending: &[f64],
    estimator: BootstrapEstimator,
    so: Option<&SecondOrderEstimate>,
) -> Vec<f64> {
    match estimator {
        BootstrapEstimator::Hill => hill_path_sorted(ascending),
        BootstrapEstimator::MeanOrderP { p: 0.0 } => hill_path_sorted(ascending),
        BootstrapEstimator::MeanOrderP { p } => ratio_power_mean_path(ascending, p)
            .into_iter()
            .map(|m| (1.0 - 1.0 / m) / p)
            .collect(),
        BootstrapEstimator::Mvrb => {
            let so = so.expect("second-order estimate is computed before resampling");
            mvrb_path(&hill_path_sorted(ascending), so)
        }
    }
}

/// `A(k)^2 = (T(k) - T(floor(k/2)))^2`, index `k - 1`.
fn auxiliary_squares(path: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(path.len());
    out.push(f64::NAN);
    for k in 2..=path.len() {
        let a = path[k - 1] - path[k / 2 - 1];
        out.push(a * a);
    }
    out
}

fn mse_curve(
    values: &[f64],
    m: usize,
    stream_offset: u64,
    plan: &BootstrapPlan,
    estimator: BootstrapEstimator,
    so: Option<&SecondOrderEstimate>,
) -> Vec<f64> {
    let n = values.len();
    let curves: Vec<Vec<f64>> = (0..plan.replicates as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(plan.seed, 2 * b + stream_offset);
            let mut resample: Vec<f64> = (0..m).map(|_| values[rng.random_range(0..n)]).collect();
            resample.sort_by(f64::total_cmp);
            auxiliary_squares(&estimator_path(&resample, estimator, so))
        })
        .collect();
    let mut total = vec![0.0; m - 1];
    for curve in &curves {
        for (t, c) in total.iter_mut().zip(curve) {
            *t += c;
        }
    }
    let b = plan.replicates as f64;
    total.iter().map(|t| t / b).collect()
}

/// Spread below which an MSE curve is treated as flat (rounding noise of an
/// estimator that does not vary with `k`).
const FLAT_SPREAD: f64 = 1e-20;

/// Smallest `k` attaining the minimum of the finite part of `mse`, or `None`
/// if no entry is finite or the curve is flat.
fn argmin_k(mse: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    let mut max = f64::NEG_INFINITY;
    for (i, &v) in mse.iter().enumerate() {
        if !v.is_finite() {
            continue;
        }
        max = max.max(v);
        if best.is_none_or(|(_, b)| v < b) {
            best = Some((i + 1, v));
        }
    }
    match best {
        Some((k, v)) if max - v > FLAT_SPREAD => Some(k),
        _ => None,
    }
}

/// `c(rho) = (1 - 2^rho)^(2 / (1 - 2 rho))`.
fn correction(rho: f64) -> f64 {
    (1.0 - 2f64.powf(rho)).powf(2.0 / (1.0 - 2.0 * rho))
}

/// Minimiser of the least-squares fit `v / k + b k^(-2 rho)` to `mse`,
/// with residuals relative to the curve. `None` unless both `v` and `b`
/// come out positive.
fn fitted_minimizer(mse: &[f64], rho: f64) -> Option<f64> {
    let top = mse.len() as f64;
    if !(rho < 0.0) || top < 2.0 {
        return None;
    }
    let step = (top / 2.0).ln() / (FIT_POINTS - 1) as f64;
    let mut levels: Vec<usize> = (0..FIT_POINTS)
        .map(|j| (2.0 * (step * j as f64).exp()) as usize)
        .collect();
    levels.dedup();
    // Normal equations of the weighted problem, columns 1/k and k^(-2 rho).
    let (mut s11, mut s12, mut s22, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for k in levels {
        let y = match mse.get(k - 1) {
            Some(&y) if y.is_finite() && y > 0.0 => y,
            _ => continue,
        };
        let kf = k as f64;
        let (x1, x2) = (1.0 / (kf * y), kf.powf(-2.0 * rho) / y);
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        t1 += x1;
        t2 += x2;
    }
    let det = s11 * s22 - s12 * s12;
    if !(det.abs() > 0.0) {
        return None;
    }
    let v = (t1 * s22 - t2 * s12) / det;
    let b = (s11 * t2 - s12 * t1) / det;
    if !(v > 0.0 && b > 0.0) {
        return None;
    }
    let k = (v / (-2.0 * rho * b)).powf(1.0 / (1.0 - 2.0 * rho));
    k.is_finite().then_some(k)
}

/// Double bootstrap selection of `k` for `estimator`, deterministic in the
/// plan seed.
pub fn bootstrap_osf(
    sample: &OrderedSample,
    estimator: BootstrapEstimator,
    plan: &BootstrapPlan,
) -> Result<BootstrapResult> {
    let n = sample.len();
    if plan.n1 >= n {
        return Err(EvtError::domain(format!(
            "plan sub-sample size n1 = {} is not below n = {n}",
            plan.n1
        )));
    }
    if let BootstrapEstimator::MeanOrderP { p } = estimator {
        if !p.is_finite() {
            return Err(EvtError::domain(format!("order p must be finite, got {p}")));
        }
    }
    let second_order = estimate_second_order(sample, None);
    let so = match (estimator, &second_order) {
        (BootstrapEstimator::Mvrb, Err(e)) => return Err(e.clone()),
        (_, Ok(so)) => Some(*so),
        (_, Err(_)) => None,
    };
    let rho_hat = so.map(|s| s.rho_hat());
    let c = rho_hat.map_or(1.0, |r| correction(r.min(RHO_CORRECTION_CAP)));

    let values = sample.values();
    let mse_n1 = mse_curve(values, plan.n1, 0, plan, estimator, so.as_ref());
    let mse_n2 = mse_curve(values, plan.n2, 1, plan, estimator, so.as_ref());
    let k1_argmin = argmin_k(&mse_n1);
    let k2_argmin = argmin_k(&mse_n2);
    let locate = |mse: &[f64], raw: Option<usize>| {
        raw.map(|raw| {
            rho_hat
                .and_then(|r| fitted_minimizer(mse, r))
                .unwrap_or(raw as f64)
        })
    };
    let k1 = locate(&mse_n1, k1_argmin);
    let k2 = locate(&mse_n2, k2_argmin);
    let diagnostics = BootstrapDiagnostics {
        n1: plan.n1,
        n2: plan.n2,
        replicates: plan.replicates,
        mse_n1,
        mse_n2,
        rho_hat,
        correction: c,
        k1_argmin,
        k2_argmin,
    };
    let (k1, k2) = match (k1, k2) {
        (Some(k1), Some(k2)) => (k1, k2),
        _ => {
            return Err(EvtError::SelectionFailure {
                reason: "bootstrap MSE curve has no finite, non-flat minimum".into(),
                diagnostics: Box::new(diagnostics),
            })
        }
    };
    let raw = (c * k1 * k1 / k2).floor();
    let k_hat = if raw.is_finite() {
        (raw as usize).clamp(1, n - 1)
    } else {
        n - 1
    };
    let estimate = match estimator {
        BootstrapEstimator::Hill => hill(sample, k_hat),
        BootstrapEstimator::MeanOrderP { p } => mean_order_p_evi(sample, k_hat, p),
        BootstrapEstimator::Mvrb => mvrb_hill(sample, k_hat, so.as_ref().expect("checked above")),
    };
    let estimate = match estimate {
        Ok(e) => e.value,
        Err(e) => {
            return Err(EvtError::SelectionFailure {
                reason: format!("estimator fails at the selected k = {k_hat}: {e}"),
                diagnostics: Box::new(diagnostics),
            })
        }
    };
    Ok(BootstrapResult {
        k_hat: TailLevel::new(k_hat, n)?,
        k1_star: k1,
        k2_star: k2,
        estimate,
        diagnostics,
    })
}
