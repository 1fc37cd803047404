use serde::{Deserialize, Serialize};

use crate::error::{EvtError, Result};
use crate::rng::{open01, stream_rng};
use crate::tail_stats::OrderedSample;

/// Below this magnitude the shape is treated as 0 and the Gumbel branch is
/// evaluated.
pub const SHAPE_EPS: f64 = 1e-8;

/// Generalized extreme value law `G_xi((x - location) / scale)` with
/// `G_xi(z) = exp(-(1 + xi z)^(-1/xi))` on `1 + xi z > 0`, and the Gumbel
/// law `exp(-exp(-z))` at `xi = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevParams {
    shape: f64,
    location: f64,
    scale: f64,
}

impl GevParams {
    pub fn new(shape: f64, location: f64, scale: f64) -> Result<Self> {
        if !shape.is_finite() || !location.is_finite() {
            return Err(EvtError::InvalidParameters(format!(
                "GEV shape and location must be finite (shape = {shape}, location = {location})"
            )));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(EvtError::InvalidParameters(format!(
                "GEV scale must be positive and finite, got {scale}"
            )));
        }
        Ok(Self {
            shape,
            location,
            scale,
        })
    }

    /// `G_xi` with location 0 and scale 1.
    pub fn standard(shape: f64) -> Result<Self> {
        Self::new(shape, 0.0, 1.0)
    }

    /// Type I, `exp(-exp(-x))`.
    pub fn gumbel() -> Self {
        Self {
            shape: 0.0,
            location: 0.0,
            scale: 1.0,
        }
    }

    /// Type II, `exp(-x^(-alpha))` for `x >= 0`.
    pub fn frechet(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(EvtError::InvalidParameters(format!(
                "Frechet alpha must be positive, got {alpha}"
            )));
        }
        Self::new(1.0 / alpha, 1.0, 1.0 / alpha)
    }

    /// Type III, `exp(-(-x)^alpha)` for `x <= 0`.
    pub fn max_weibull(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(EvtError::InvalidParameters(format!(
                "max-Weibull alpha must be positive, got {alpha}"
            )));
        }
        Self::new(-1.0 / alpha, -1.0, 1.0 / alpha)
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Same location and scale, different shape.
    pub fn with_shape(&self, shape: f64) -> Result<Self> {
        Self::new(shape, self.location, self.scale)
    }

    fn is_gumbel(&self) -> bool {
        self.shape.abs() <= SHAPE_EPS
    }

    /// Lower end of the support (`-inf` unless `xi > 0`).
    pub fn lower_endpoint(&self) -> f64 {
        if self.shape > SHAPE_EPS {
            self.location - self.scale / self.shape
        } else {
            f64::NEG_INFINITY
        }
    }

    /// Upper end of the support (`+inf` unless `xi < 0`).
    pub fn upper_endpoint(&self) -> f64 {
        if self.shape < -SHAPE_EPS {
            self.location - self.scale / self.shape
        } else {
            f64::INFINITY
        }
    }

    /// `-ln G(x)` in standardized form: `(1 + xi z)^(-1/xi)` or `exp(-z)`.
    /// `None` outside the support; the caller decides between 0 and 1.
    fn exceedance_intensity(&self, x: f64) -> Option<f64> {
        let z = (x - self.location) / self.scale;
        if self.is_gumbel() {
            return Some((-z).exp());
        }
        let xz = self.shape * z;
        if xz <= -1.0 {
            return None;
        }
        Some((-xz.ln_1p() / self.shape).exp())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.exceedance_intensity(x) {
            Some(intensity) => (-intensity).exp(),
            None if self.shape > 0.0 => 0.0,
            None => 1.0,
        }
    }

    /// `ln G(x)`; `-inf` below the support, 0 above it.
    pub fn log_cdf(&self, x: f64) -> f64 {
        match self.exceedance_intensity(x) {
            Some(intensity) => -intensity,
            None if self.shape > 0.0 => f64::NEG_INFINITY,
            None => 0.0,
        }
    }

    /// Density `g = G'`, zero off the open support.
    pub fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.location) / self.scale;
        if self.is_gumbel() {
            let e = (-z).exp();
            if !e.is_finite() {
                return 0.0;
            }
            return e * (-e).exp() / self.scale;
        }
        let t = 1.0 + self.shape * z;
        if t <= 0.0 {
            return 0.0;
        }
        let intensity = (-t.ln() / self.shape).exp();
        intensity * (-intensity).exp() / (t * self.scale)
    }

    /// Inverse of [`GevParams::cdf`] on `0 < q < 1`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(EvtError::domain(format!(
                "GEV quantile level must lie in (0, 1), got {q}"
            )));
        }
        let log_y = (-q.ln()).ln();
        let z = if self.is_gumbel() {
            -log_y
        } else {
            (-self.shape * log_y).exp_m1() / self.shape
        };
        Ok(self.location + self.scale * z)
    }
}

pub fn gev_cdf(params: &GevParams, x: f64) -> f64 {
    params.cdf(x)
}

pub fn gev_quantile(params: &GevParams, q: f64) -> Result<f64> {
    params.quantile(q)
}

/// Inverse-transform sample of size `n` (at least 2), deterministic in `seed`.
pub fn gev_sample(params: &GevParams, n: usize, seed: u64) -> Result<OrderedSample> {
    let mut rng = stream_rng(seed, 0);
    let values = (0..n)
        .map(|_| params.quantile(open01(&mut rng)))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderedSample::new(values)?.with_provenance(format!(
        "gev(shape={}, location={}, scale={}) n={n} seed={seed}",
        params.shape, params.location, params.scale
    )))
}

/// `sup_x |G^k(a_k x + b_k) - G(x)|` over `grid`.
///
/// Zero for a max-stable `G` with its own norming constants.
pub fn max_stability_defect(
    params: &GevParams,
    k: u32,
    a_k: f64,
    b_k: f64,
    grid: &[f64],
) -> Result<f64> {
    if !(a_k > 0.0) {
        return Err(EvtError::domain(format!(
            "scale constant A_k must be positive, got {a_k}"
        )));
    }
    if k == 0 {
        return Err(EvtError::domain("power k must be at least 1"));
    }
    if grid.is_empty() {
        return Err(EvtError::domain("empty evaluation grid"));
    }
    let defect = grid
        .iter()
        .map(|&x| {
            let powered = (k as f64 * params.log_cdf(a_k * x + b_k)).exp();
            (powered - params.cdf(x)).abs()
        })
        .fold(0.0, f64::max);
    Ok(defect)
}
