use libm::erfc;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc_inv;

use crate::error::{EvtError, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Attraction coefficients `(a_n, b_n)` for `F^n(a_n x + b_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizingConstants {
    pub a_n: f64,
    pub b_n: f64,
    pub n: u64,
}

impl NormalizingConstants {
    pub fn new(a_n: f64, b_n: f64, n: u64) -> Result<Self> {
        if !(a_n > 0.0) || !a_n.is_finite() || !b_n.is_finite() {
            return Err(EvtError::domain(format!(
                "invalid norming constants a_n = {a_n}, b_n = {b_n}"
            )));
        }
        if n == 0 {
            return Err(EvtError::domain("sample size n must be positive"));
        }
        Ok(Self { a_n, b_n, n })
    }
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal CDF.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// `ln Phi(x)`, accurate in both tails.
pub fn std_normal_log_cdf(x: f64) -> f64 {
    if x > 0.0 {
        (-0.5 * erfc(x / std::f64::consts::SQRT_2)).ln_1p()
    } else {
        (0.5 * erfc(-x / std::f64::consts::SQRT_2)).ln()
    }
}

/// `Phi^{-1}(p)` for `0 < p < 1`: an `erfc` inversion polished by two
/// Newton steps on the lower half, mirrored for `p > 1/2`.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(EvtError::domain(format!(
            "normal quantile level must lie in (0, 1), got {p}"
        )));
    }
    if p > 0.5 {
        return Ok(-std_normal_quantile(1.0 - p)?);
    }
    let mut x = -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p);
    for _ in 0..2 {
        let density = std_normal_pdf(x);
        if density > 0.0 {
            x -= (std_normal_cdf(x) - p) / density;
        }
    }
    Ok(x)
}

/// Von Mises constants for the normal law: `1 - Phi(b_n) = 1/n` and
/// `a_n = 1 / (n phi(b_n))`.
pub fn normal_attraction_constants(n: u64) -> Result<NormalizingConstants> {
    if n < 2 {
        return Err(EvtError::domain(format!(
            "normal attraction constants need n >= 2, got {n}"
        )));
    }
    // b_n = -Phi^{-1}(1/n) avoids cancellation in 1 - 1/n.
    let b_n = -std_normal_quantile(1.0 / n as f64)?;
    let a_n = 1.0 / (n as f64 * std_normal_pdf(b_n));
    NormalizingConstants::new(a_n, b_n, n)
}
