//! Ordered samples and the tail statistics computed on their top order
//! statistics.
//!
//! Indexing follows the usual convention for ascending order statistics:
//! `X_{1:n} <= ... <= X_{n:n}`. The k top values are `X_{n-i+1:n}`,
//! `i = 1..=k`, and the intermediate threshold is `X_{n-k:n}`.

use serde::{Deserialize, Serialize};

use crate::error::{EvtError, Result};

/// Validated, ascending-sorted univariate sample with at least two values.
///
/// Positivity is not required here. Statistics built on logarithms or ratios
/// check the threshold order statistic when they are evaluated, so the same
/// container holds raw data and shifted (PORT) excesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedSample {
    values: Vec<f64>,
    provenance: String,
}

impl OrderedSample {
    /// Sorts `values` ascending. Rejects fewer than two values and NaN or
    /// infinite entries.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(EvtError::domain(format!(
                "an ordered sample needs at least 2 values, got {}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(EvtError::domain(format!(
                "non-finite value {} at position {}",
                values[pos], pos
            )));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self {
            values,
            provenance: String::new(),
        })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: construction guarantees at least two values.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Ascending values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `X_{i:n}` with 1-based `i`.
    ///
    /// # Panics
    /// If `i` is 0 or larger than `n`.
    pub fn order_stat(&self, i: usize) -> f64 {
        assert!(
            i >= 1 && i <= self.len(),
            "order statistic index {i} out of 1..={}",
            self.len()
        );
        self.values[i - 1]
    }

    /// `X_{n-i+1:n}`, the i-th largest value (1-based).
    pub fn top(&self, i: usize) -> f64 {
        self.order_stat(self.len() + 1 - i)
    }

    /// Validates `1 <= k < n`.
    pub fn tail_level(&self, k: usize) -> Result<TailLevel> {
        TailLevel::new(k, self.len())
    }

    /// Affine image `a * x + b` of every value (order preserved for `a > 0`).
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(EvtError::domain(format!(
                "affine scale must be positive, got {a}"
            )));
        }
        let values = self.values.iter().map(|&x| a * x + b).collect();
        Ok(Self {
            values,
            provenance: self.provenance.clone(),
        })
    }

    /// Threshold `X_{n-k:n}` after checking it is strictly positive.
    fn positive_threshold(&self, k: TailLevel) -> Result<f64> {
        let threshold = self.top(k.get() + 1);
        if threshold > 0.0 {
            Ok(threshold)
        } else {
            Err(EvtError::domain(format!(
                "threshold order statistic X_(n-k:n) = {threshold} is not positive (k = {})",
                k.get()
            )))
        }
    }

    /// The k top values, largest first.
    fn top_values(&self, k: TailLevel) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().rev().take(k.get()).copied()
    }
}

/// Number of top order statistics used by a tail estimator, `1 <= k < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TailLevel(usize);

impl TailLevel {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(EvtError::domain(format!(
                "tail level k = {k} outside 1..{n}"
            )));
        }
        Ok(Self(k))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for TailLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// `y^p` with exact results for the exponents the estimators use most.
#[inline]
pub(crate) fn pow_exact(y: f64, p: f64) -> f64 {
    if p == 1.0 {
        y
    } else if p == 2.0 {
        y * y
    } else if p == 0.0 {
        1.0
    } else {
        y.powf(p)
    }
}

/// Moment of order `p` of the log-excesses over `X_{n-k:n}`:
/// `(1/k) * sum_{i=1..k} (ln X_{n-i+1:n} - ln X_{n-k:n})^p`.
///
/// `p = 0` returns 1 (every term is `x^0 = 1`).
pub fn log_excess_moment(sample: &OrderedSample, k: usize, p: f64) -> Result<f64> {
    let level = sample.tail_level(k)?;
    let threshold = sample.positive_threshold(level)?;
    if p == 0.0 {
        return Ok(1.0);
    }
    let log_threshold = threshold.ln();
    let sum: f64 = sample
        .top_values(level)
        .map(|x| pow_exact(x.ln() - log_threshold, p))
        .sum();
    Ok(sum / k as f64)
}

/// Moment of order `p >= 1` of the ratio excesses:
/// `(1/k) * sum_{i=1..k} (1 - X_{n-k:n} / X_{n-i+1:n})^p`, a value in `[0, 1)`.
pub fn ratio_excess_moment(sample: &OrderedSample, k: usize, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(EvtError::domain(format!(
            "ratio moment order must be finite and >= 1, got {p}"
        )));
    }
    let level = sample.tail_level(k)?;
    let threshold = sample.positive_threshold(level)?;
    let sum: f64 = sample
        .top_values(level)
        .map(|x| pow_exact(1.0 - threshold / x, p))
        .sum();
    Ok(sum / k as f64)
}

/// The ratios `U_{ik} = X_{n-i+1:n} / X_{n-k:n}`, `i = 1..=k`, largest first.
pub fn excess_ratios(sample: &OrderedSample, k: usize) -> Result<Vec<f64>> {
    let level = sample.tail_level(k)?;
    let threshold = sample.positive_threshold(level)?;
    Ok(sample.top_values(level).map(|x| x / threshold).collect())
}

/// Hill estimates `H(k)` for every `k = 1..n-1` in one pass, index `k - 1`.
///
/// Uses running sums of the top log-values, so the result agrees with
/// [`log_excess_moment`] at `p = 1` up to rounding. Entries whose threshold
/// is not positive are NaN.
pub fn hill_path(sample: &OrderedSample) -> Vec<f64> {
    hill_path_sorted(sample.values())
}

/// [`hill_path`] on a raw ascending slice.
pub(crate) fn hill_path_sorted(ascending: &[f64]) -> Vec<f64> {
    let n = ascending.len();
    let mut path = Vec::with_capacity(n.saturating_sub(1));
    let mut log_sum = 0.0;
    for k in 1..n {
        let top = ascending[n - k];
        log_sum += top.ln();
        let threshold = ascending[n - k - 1];
        if threshold > 0.0 {
            path.push(log_sum / k as f64 - threshold.ln());
        } else {
            path.push(f64::NAN);
        }
    }
    path
}

/// Mean of `U_{ik}^p` for every `k = 1..n-1`, index `k - 1`, via running sums
/// of `X^p`. Entries with a non-positive threshold are NaN.
pub(crate) fn ratio_power_mean_path(ascending: &[f64], p: f64) -> Vec<f64> {
    let n = ascending.len();
    let mut path = Vec::with_capacity(n.saturating_sub(1));
    let mut pow_sum = 0.0;
    for k in 1..n {
        pow_sum += ascending[n - k].powf(p);
        let threshold = ascending[n - k - 1];
        if threshold > 0.0 {
            path.push(pow_sum / (k as f64 * threshold.powf(p)));
        } else {
            path.push(f64::NAN);
        }
    }
    path
}
