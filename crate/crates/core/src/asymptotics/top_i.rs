use serde::{Deserialize, Serialize};

use crate::distributions::GevParams;
use crate::error::{EvtError, Result};

/// Arguments `x_1 >= x_2 >= ... >= x_i` of the joint law of the `i` largest
/// normalized maxima.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopIPoint {
    coords: Vec<f64>,
}

impl TopIPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(EvtError::domain(
                "a top-i point needs at least one coordinate",
            ));
        }
        if coords.iter().any(|x| x.is_nan()) {
            return Err(EvtError::domain("top-i coordinates must not be NaN"));
        }
        Ok(Self { coords })
    }

    pub fn i(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    fn weakly_decreasing(&self) -> bool {
        self.coords.windows(2).all(|w| w[0] >= w[1])
    }

    fn strictly_decreasing(&self) -> bool {
        self.coords.windows(2).all(|w| w[0] > w[1])
    }
}

/// `P(M^(1) <= x_1, ..., M^(i) <= x_i)` in the limit:
///
/// `G(x_i) sum_{r} prod_{j=1}^{i-1} L_j^(r_{j+1} - r_j) / (r_{j+1} - r_j)!`,
/// `L_j = ln G(x_j) - ln G(x_{j+1})`, over integer sequences
/// `0 = r_1 <= r_2 <= ... <= r_i` with `r_j <= j - 1`.
///
/// The nested sum is accumulated over the current value of `r_j`.
pub fn top_i_cdf(family: &GevParams, point: &TopIPoint) -> Result<f64> {
    if !point.weakly_decreasing() {
        return Err(EvtError::domain(format!(
            "top-i coordinates must be weakly decreasing, got {:?}",
            point.coords
        )));
    }
    let logs: Vec<f64> = point.coords.iter().map(|&x| family.log_cdf(x)).collect();
    let i = logs.len();
    let last = logs[i - 1];
    if last == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    // weights[r] = sum of products over sequences ending with r_j = r.
    let mut weights = vec![0.0; i];
    weights[0] = 1.0;
    for j in 1..i {
        let gap = logs[j - 1] - logs[j];
        let mut next = vec![0.0; i];
        for (r, &w) in weights.iter().enumerate().take(j) {
            if w == 0.0 {
                continue;
            }
            let mut term = w;
            for (step, slot) in next.iter_mut().enumerate().take(j + 1).skip(r) {
                if step > r {
                    term *= gap / (step - r) as f64;
                }
                *slot += term;
            }
        }
        weights = next;
    }
    Ok(last.exp() * weights.iter().sum::<f64>())
}

/// Limiting joint density `g(x_i) prod_{j<i} g(x_j) / G(x_j)`; zero off the
/// strict ordering region and off the support.
pub fn top_i_pdf(family: &GevParams, point: &TopIPoint) -> f64 {
    if !point.strictly_decreasing() {
        return 0.0;
    }
    let (&last, rest) = point
        .coords
        .split_last()
        .expect("non-empty by construction");
    let mut density = family.pdf(last);
    for &x in rest {
        let g = family.pdf(x);
        if g == 0.0 {
            return 0.0;
        }
        density *= g / family.cdf(x);
    }
    density
}
