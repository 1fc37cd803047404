use serde::{Deserialize, Serialize};

use crate::error::{EvtError, Result};
use crate::rng::{open01, stream_rng};
use crate::tail_stats::OrderedSample;

/// How the second-order term enters the tail quantile function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondOrderForm {
    /// `U(t) = C t^xi (1 + A(t)/rho)`: the expansion with its remainder dropped.
    Truncated,
    /// `U(t) = C t^xi exp(A(t)/rho)`: same `(xi, beta, rho, C)`, remainder
    /// `O(t^(2 rho))`, positive for every `t >= 1`.
    Exponential,
}

/// Heavy-tailed model with known second-order behaviour,
/// `A(t) = xi * beta * t^rho`.
///
/// The tail quantile function `U(t) = F^{-1}(1 - 1/t)` must be positive and
/// strictly increasing on `t >= 1`; this is checked in closed form at
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HallWelshModel {
    xi: f64,
    beta: f64,
    rho: f64,
    c: f64,
    form: SecondOrderForm,
}

impl HallWelshModel {
    /// Truncated form. Besides the class constraints (`xi > 0`, `beta != 0`,
    /// `rho < 0`, `C > 0`) this needs `U(1) = C (1 + xi beta / rho) > 0` and
    /// `U'(t) = C xi t^(xi-1) (1 + beta (xi + rho)/rho t^rho) > 0` for `t > 1`,
    /// i.e. `beta (xi + rho) / rho >= -1`.
    pub fn new(xi: f64, beta: f64, rho: f64, c: f64) -> Result<Self> {
        Self::with_form(xi, beta, rho, c, SecondOrderForm::Truncated)
    }

    /// Exponential form. Always positive; increasing iff `beta >= -1`, since
    /// `d ln U / d ln t = xi (1 + beta t^rho)`.
    pub fn exponential(xi: f64, beta: f64, rho: f64, c: f64) -> Result<Self> {
        Self::with_form(xi, beta, rho, c, SecondOrderForm::Exponential)
    }

    pub fn with_form(xi: f64, beta: f64, rho: f64, c: f64, form: SecondOrderForm) -> Result<Self> {
        let invalid = |msg: String| Err(EvtError::InvalidParameters(msg));
        if !(xi > 0.0) || !xi.is_finite() {
            return invalid(format!("xi must be positive and finite, got {xi}"));
        }
        if !(rho < 0.0) || !rho.is_finite() {
            return invalid(format!("rho must be negative and finite, got {rho}"));
        }
        if beta == 0.0 || !beta.is_finite() {
            return invalid(format!("beta must be nonzero and finite, got {beta}"));
        }
        if !(c > 0.0) || !c.is_finite() {
            return invalid(format!("C must be positive and finite, got {c}"));
        }
        match form {
            SecondOrderForm::Truncated => {
                let u1 = c * (1.0 + xi * beta / rho);
                if !(u1 > 0.0) {
                    return invalid(format!(
                        "U(1) = {u1} is not positive for (xi, beta, rho) = ({xi}, {beta}, {rho})"
                    ));
                }
                let slope = beta * (xi + rho) / rho;
                if slope < -1.0 {
                    return invalid(format!(
                        "U is not increasing near t = 1: 1 + beta (xi + rho)/rho = {}",
                        1.0 + slope
                    ));
                }
            }
            SecondOrderForm::Exponential => {
                if beta < -1.0 {
                    return invalid(format!(
                        "U is not increasing near t = 1: 1 + beta = {}",
                        1.0 + beta
                    ));
                }
            }
        }
        Ok(Self {
            xi,
            beta,
            rho,
            c,
            form,
        })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn form(&self) -> SecondOrderForm {
        self.form
    }

    /// `A(t) = xi beta t^rho`.
    pub fn a_function(&self, t: f64) -> f64 {
        self.xi * self.beta * t.powf(self.rho)
    }

    /// Tail quantile function `U(t)`, `t >= 1`.
    pub fn quantile(&self, t: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(EvtError::domain(format!(
                "tail quantile argument must be >= 1, got {t}"
            )));
        }
        let second = self.a_function(t) / self.rho;
        let factor = match self.form {
            SecondOrderForm::Truncated => 1.0 + second,
            SecondOrderForm::Exponential => second.exp(),
        };
        Ok(self.c * t.powf(self.xi) * factor)
    }

    /// Dominant Hill bias `A(n/k) / (1 - rho)` at level `k` out of `n`.
    pub fn hill_bias(&self, n: usize, k: usize) -> f64 {
        self.a_function(n as f64 / k as f64) / (1.0 - self.rho)
    }
}

pub fn hall_welsh_quantile(model: &HallWelshModel, t: f64) -> Result<f64> {
    model.quantile(t)
}

/// `X = U(1 / W)` with `W` uniform on (0, 1), deterministic in `seed`.
pub fn hall_welsh_sample(model: &HallWelshModel, n: usize, seed: u64) -> Result<OrderedSample> {
    let mut rng = stream_rng(seed, 0);
    let values = (0..n)
        .map(|_| model.quantile(1.0 / open01(&mut rng)))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderedSample::new(values)?.with_provenance(format!(
        "hall-welsh(xi={}, beta={}, rho={}, C={}, {:?}) n={n} seed={seed}",
        model.xi, model.beta, model.rho, model.c, model.form
    )))
}

/// Strict Pareto sample, `X = V^(-xi)` (no second-order term).
pub fn pareto_sample(xi: f64, n: usize, seed: u64) -> Result<OrderedSample> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(EvtError::InvalidParameters(format!(
            "Pareto xi must be positive, got {xi}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let values = (0..n).map(|_| open01(&mut rng).powf(-xi)).collect();
    Ok(OrderedSample::new(values)?.with_provenance(format!("pareto(xi={xi}) n={n} seed={seed}")))
}
