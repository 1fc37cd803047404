use crate::error::{EvtError, Result};
use crate::estimators::{hill, EviEstimate, Method};
use crate::tail_stats::OrderedSample;

/// A statistic `T_n` computable on a sample of any size.
///
/// Implemented for every `Fn(&[f64]) -> Result<f64>`.
pub trait Statistic {
    fn eval(&self, data: &[f64]) -> Result<f64>;
}

impl<F> Statistic for F
where
    F: Fn(&[f64]) -> Result<f64>,
{
    fn eval(&self, data: &[f64]) -> Result<f64> {
        self(data)
    }
}

/// Pseudo-values `n T_n - (n - 1) T_{n,i}`, where `T_{n,i}` leaves out
/// observation `i`.
pub fn jackknife_pseudo_values<T: Statistic + ?Sized>(stat: &T, data: &[f64]) -> Result<Vec<f64>> {
    let n = data.len();
    if n < 2 {
        return Err(EvtError::domain(format!(
            "jackknife needs at least 2 observations, got {n}"
        )));
    }
    let full = stat.eval(data)?;
    let nf = n as f64;
    let mut held_out = Vec::with_capacity(n - 1);
    let mut pseudo = Vec::with_capacity(n);
    for i in 0..n {
        held_out.clear();
        held_out.extend_from_slice(&data[..i]);
        held_out.extend_from_slice(&data[i + 1..]);
        pseudo.push(nf * full - (nf - 1.0) * stat.eval(&held_out)?);
    }
    Ok(pseudo)
}

/// `T^J = n T_n - (n - 1) mean_i T_{n,i}`, evaluated as the mean of the
/// pseudo-values.
pub fn pure_jackknife<T: Statistic + ?Sized>(stat: &T, data: &[f64]) -> Result<f64> {
    let pseudo = jackknife_pseudo_values(stat, data)?;
    Ok(pseudo.iter().sum::<f64>() / pseudo.len() as f64)
}

/// `(t1 - alpha t2) / (1 - alpha)`.
pub fn generalized_jackknife(t1: f64, t2: f64, alpha: f64) -> Result<f64> {
    if alpha == 1.0 {
        return Err(EvtError::singular("generalized jackknife with alpha = 1"));
    }
    Ok((t1 - alpha * t2) / (1.0 - alpha))
}

/// Generalized jackknife of `H(k)` and `H(floor(k/2))` with `alpha = 2^(-rho)`,
/// which cancels a bias term proportional to `(n/k)^rho`.
pub fn gj_hill(sample: &OrderedSample, k: usize, rho_hat: f64) -> Result<EviEstimate> {
    if !(rho_hat < 0.0) || !rho_hat.is_finite() {
        return Err(EvtError::domain(format!(
            "rho must be negative and finite, got {rho_hat}"
        )));
    }
    if k < 2 {
        return Err(EvtError::domain(format!(
            "generalized jackknife Hill needs k >= 2, got {k}"
        )));
    }
    let t1 = hill(sample, k)?;
    let t2 = hill(sample, k / 2)?;
    let value = generalized_jackknife(t1.value, t2.value, 2f64.powf(-rho_hat))?;
    EviEstimate::new(Method::GeneralizedJackknife { rho: rho_hat }, t1.k, value)
}
