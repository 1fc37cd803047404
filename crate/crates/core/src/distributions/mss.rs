use std::fmt;
use std::sync::Arc;

use crate::error::{EvtError, Result};

use super::gev::SHAPE_EPS;

/// Points per period used to validate a periodic modulation.
const VALIDATION_POINTS: usize = 4096;

/// Positive, bounded, periodic function `nu` modulating a max-semi-stable law.
///
/// Validity is checked on a dense grid over two periods when the function is
/// built: every value finite and positive, and `nu(x + period) = nu(x)` to
/// relative precision `1e-9`.
#[derive(Clone)]
pub struct PeriodicFn {
    period: f64,
    lower: f64,
    upper: f64,
    func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl PeriodicFn {
    pub fn new<F>(period: f64, func: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(period > 0.0) || !period.is_finite() {
            return Err(EvtError::InvalidParameters(format!(
                "period must be positive, got {period}"
            )));
        }
        let mut lower = f64::INFINITY;
        let mut upper = f64::NEG_INFINITY;
        for i in 0..VALIDATION_POINTS {
            let x = period * i as f64 / VALIDATION_POINTS as f64;
            let v = func(x);
            if !v.is_finite() || v <= 0.0 {
                return Err(EvtError::InvalidParameters(format!(
                    "modulation must be finite and positive, nu({x}) = {v}"
                )));
            }
            let shifted = func(x + period);
            if (shifted - v).abs() > 1e-9 * v.abs().max(1.0) {
                return Err(EvtError::InvalidParameters(format!(
                    "modulation is not {period}-periodic: nu({x}) = {v}, nu({}) = {shifted}",
                    x + period
                )));
            }
            lower = lower.min(v);
            upper = upper.max(v);
        }
        Ok(Self {
            period,
            lower,
            upper,
            func: Arc::new(func),
        })
    }

    /// `nu == c`.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(1.0, move |_| c)
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Range observed on the validation grid.
    pub fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.func)(x)
    }
}

impl fmt::Debug for PeriodicFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicFn")
            .field("period", &self.period)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .finish_non_exhaustive()
    }
}

/// Max-semi-stable law with shape `xi` and modulation `nu`.
#[derive(Debug, Clone)]
pub struct MssParams {
    shape: f64,
    nu: PeriodicFn,
}

impl MssParams {
    pub fn new(shape: f64, nu: PeriodicFn) -> Result<Self> {
        if !shape.is_finite() {
            return Err(EvtError::InvalidParameters(format!(
                "MSS shape must be finite, got {shape}"
            )));
        }
        Ok(Self { shape, nu })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn nu(&self) -> &PeriodicFn {
        &self.nu
    }
}

/// `exp(-nu(ln(1 + xi x)/xi) (1 + xi x)^(-1/xi))` on `1 + xi x > 0`, and
/// `exp(-nu(x) exp(-x))` at `xi = 0`.
pub fn mss_cdf(params: &MssParams, x: f64) -> f64 {
    let xi = params.shape;
    if xi.abs() <= SHAPE_EPS {
        return (-params.nu.eval(x) * (-x).exp()).exp();
    }
    let xz = xi * x;
    if xz <= -1.0 {
        return if xi > 0.0 { 0.0 } else { 1.0 };
    }
    let log_t = xz.ln_1p();
    let intensity = (-log_t / xi).exp();
    (-params.nu.eval(log_t / xi) * intensity).exp()
}
