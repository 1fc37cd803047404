use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::{
    normal_attraction_constants, std_normal_log_cdf, GevParams, NormalizingConstants,
};
use crate::error::{EvtError, Result};

/// Points in [`default_grid`].
pub const GRID_POINTS: usize = 2001;
/// The default grid spans the target quantiles `GRID_TAIL` and `1 - GRID_TAIL`.
pub const GRID_TAIL: f64 = 1e-4;
/// Width of the final bracket of the penultimate shape search.
pub const SHAPE_TOLERANCE: f64 = 1e-6;

const SHAPE_RANGE: (f64, f64) = (-1.0, 1.0);
const COARSE_STEPS: usize = 40;

/// Parent distributions with closed-form tails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Model {
    /// Standard normal.
    Normal,
    /// Standard exponential.
    Exponential,
    /// Uniform on (0, 1).
    Uniform,
    /// `exp(-x^(-alpha))`, `x > 0`.
    Frechet { alpha: f64 },
}

impl Model {
    /// `ln F(x)`.
    pub fn log_cdf(&self, x: f64) -> f64 {
        match *self {
            Model::Normal => std_normal_log_cdf(x),
            Model::Exponential => {
                if x <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    (-(-x).exp_m1()).ln()
                }
            }
            Model::Uniform => {
                if x <= 0.0 {
                    f64::NEG_INFINITY
                } else if x >= 1.0 {
                    0.0
                } else {
                    x.ln()
                }
            }
            Model::Frechet { alpha } => {
                if x <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    -x.powf(-alpha)
                }
            }
        }
    }

    /// Textbook norming constants for maxima of `n` observations.
    pub fn standard_constants(&self, n: u64) -> Result<NormalizingConstants> {
        let nf = n as f64;
        match *self {
            Model::Normal => normal_attraction_constants(n),
            Model::Exponential => NormalizingConstants::new(1.0, nf.ln(), n),
            Model::Uniform => NormalizingConstants::new(1.0 / nf, 1.0, n),
            Model::Frechet { alpha } => NormalizingConstants::new(nf.powf(1.0 / alpha), 0.0, n),
        }
    }

    /// Limit law of `(M_n - b_n) / a_n` under [`Model::standard_constants`].
    pub fn ultimate_target(&self) -> Result<GevParams> {
        match *self {
            Model::Normal | Model::Exponential => Ok(GevParams::gumbel()),
            Model::Uniform => GevParams::max_weibull(1.0),
            Model::Frechet { alpha } => GevParams::frechet(alpha),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Model::Frechet { alpha } = *self {
            if !(alpha > 0.0) || !alpha.is_finite() {
                return Err(EvtError::domain(format!(
                    "Frechet alpha must be positive, got {alpha}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Normal => f.write_str("normal"),
            Model::Exponential => f.write_str("exponential"),
            Model::Uniform => f.write_str("uniform"),
            Model::Frechet { alpha } => write!(f, "frechet:{alpha}"),
        }
    }
}

impl FromStr for Model {
    type Err = EvtError;

    /// `normal`, `exponential`, `uniform` or `frechet:<alpha>`.
    fn from_str(s: &str) -> Result<Self> {
        let model = match s.trim().to_ascii_lowercase().as_str() {
            "normal" => Model::Normal,
            "exponential" => Model::Exponential,
            "uniform" => Model::Uniform,
            other => match other.strip_prefix("frechet:") {
                Some(alpha) => Model::Frechet {
                    alpha: alpha.parse().map_err(|_| {
                        EvtError::domain(format!("invalid Frechet alpha '{alpha}'"))
                    })?,
                },
                None => return Err(EvtError::domain(format!("unknown model '{s}'"))),
            },
        };
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub n: u64,
    pub constants: NormalizingConstants,
    pub sup_distance_ultimate: f64,
    pub sup_distance_penultimate: f64,
    pub penultimate_shape: f64,
}

/// `GRID_POINTS` equally spaced points between the `GRID_TAIL` and
/// `1 - GRID_TAIL` quantiles of `target`.
pub fn default_grid(target: &GevParams) -> Vec<f64> {
    let lo = target.quantile(GRID_TAIL).expect("level in (0, 1)");
    let hi = target.quantile(1.0 - GRID_TAIL).expect("level in (0, 1)");
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    (0..GRID_POINTS).map(|j| lo + step * j as f64).collect()
}

/// `sup_x |F^n(a_n x + b_n) - G(x)|` over `grid`, with `F^n = exp(n ln F)`.
pub fn convergence_distance(
    model: &Model,
    constants: &NormalizingConstants,
    target: &GevParams,
    grid: &[f64],
) -> Result<f64> {
    model.validate()?;
    if grid.is_empty() {
        return Err(EvtError::domain("empty evaluation grid"));
    }
    let nf = constants.n as f64;
    Ok(grid
        .iter()
        .map(|&x| {
            let fn_x = (nf * model.log_cdf(constants.a_n * x + constants.b_n)).exp();
            (fn_x - target.cdf(x)).abs()
        })
        .fold(0.0, f64::max))
}

/// Best GEV approximation to `F^n(a_n x + b_n)` within the family of the
/// ultimate target with its shape left free.
///
/// The shape is located on a coarse grid over `[-1, 1]` and refined by
/// golden-section search. The ultimate shape is always a candidate, so the
/// penultimate distance never exceeds the ultimate one.
pub fn penultimate_fit(
    model: &Model,
    constants: &NormalizingConstants,
) -> Result<ConvergenceReport> {
    let target = model.ultimate_target()?;
    let grid = default_grid(&target);
    let distance = |shape: f64| -> Result<f64> {
        convergence_distance(model, constants, &target.with_shape(shape)?, &grid)
    };
    let ultimate = distance(target.shape())?;

    let (lo, hi) = SHAPE_RANGE;
    let step = (hi - lo) / COARSE_STEPS as f64;
    let mut best = (target.shape(), ultimate);
    for j in 0..=COARSE_STEPS {
        let shape = lo + step * j as f64;
        let d = distance(shape)?;
        if d < best.1 {
            best = (shape, d);
        }
    }
    let (mut a, mut b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (distance(c)?, distance(d)?);
    let mut iterations = 0;
    while b - a > SHAPE_TOLERANCE {
        iterations += 1;
        if iterations > 200 || !(fc.is_finite() && fd.is_finite()) {
            return Err(EvtError::NonConvergence(format!(
                "golden-section search stalled on [{a}, {b}] after {iterations} steps"
            )));
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = distance(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = distance(d)?;
        }
    }
    for (shape, dist) in [(c, fc), (d, fd)] {
        if dist < best.1 {
            best = (shape, dist);
        }
    }
    if ultimate <= best.1 {
        best = (target.shape(), ultimate);
    }
    Ok(ConvergenceReport {
        n: constants.n,
        constants: *constants,
        sup_distance_ultimate: ultimate,
        sup_distance_penultimate: best.1,
        penultimate_shape: best.0,
    })
}
