//! Extremal index estimation for stationary sequences.
//!
//! An exceedance is an observation strictly greater than the threshold.

use serde::{Deserialize, Serialize};

use crate::error::{EvtError, Result};
use crate::rng::{open01, stream_rng};

/// Steps discarded before [`armax_sample`] starts recording.
pub const ARMAX_BURN_IN: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EiEstimate {
    pub theta_hat: f64,
    pub block_len: usize,
    pub threshold: f64,
    pub exceedance_count: usize,
}

/// Max-autoregressive sequence `X_j = max(alpha X_{j-1}, (1 - alpha) Z_j)`
/// with unit Frechet innovations. Unit Frechet margins, extremal index
/// `1 - alpha`.
pub fn armax_sample(alpha: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(EvtError::domain(format!(
            "ARMAX alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let mut frechet = || -1.0 / open01(&mut rng).ln();
    let mut x = frechet();
    for _ in 0..ARMAX_BURN_IN {
        x = (alpha * x).max((1.0 - alpha) * frechet());
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        x = (alpha * x).max((1.0 - alpha) * frechet());
        out.push(x);
    }
    Ok(out)
}

/// I.i.d. unit Frechet series, `-1 / ln V`.
pub fn frechet_series(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0);
    (0..n).map(|_| -1.0 / open01(&mut rng).ln()).collect()
}

/// Empirical quantile `X_{ceil(n q):n}` of an unsorted series, `0 < q < 1`.
pub fn empirical_quantile(series: &[f64], q: f64) -> Result<f64> {
    if series.is_empty() || !(q > 0.0 && q < 1.0) {
        return Err(EvtError::domain(format!(
            "empirical quantile needs a non-empty series and q in (0, 1), got n = {}, q = {q}",
            series.len()
        )));
    }
    let mut sorted = series.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((series.len() as f64 * q).ceil() as usize).clamp(1, series.len());
    Ok(sorted[rank - 1])
}

fn check_block_len(block_len: usize, n: usize) -> Result<()> {
    if block_len == 0 || block_len > n {
        return Err(EvtError::domain(format!(
            "block length must lie in 1..={n}, got {block_len}"
        )));
    }
    Ok(())
}

/// Blocks estimator: blocks containing an exceedance over total exceedances.
/// A trailing partial block counts as a block.
pub fn blocks_ei(series: &[f64], block_len: usize, threshold: f64) -> Result<EiEstimate> {
    check_block_len(block_len, series.len())?;
    let mut blocks_hit = 0;
    let mut exceedances = 0;
    for block in series.chunks(block_len) {
        let count = block.iter().filter(|&&x| x > threshold).count();
        exceedances += count;
        blocks_hit += usize::from(count > 0);
    }
    if exceedances == 0 {
        return Err(EvtError::NoExceedance { threshold });
    }
    let theta = (blocks_hit as f64 / exceedances as f64).clamp(f64::MIN_POSITIVE, 1.0);
    Ok(EiEstimate {
        theta_hat: theta,
        block_len,
        threshold,
        exceedance_count: exceedances,
    })
}

/// Logarithmic blocks estimator on one or more series,
/// `ln(1 - K/b) / (r ln(1 - N/n))`, the empirical counterpart of
/// `P(M_r <= u) = F(u)^(r theta)`.
///
/// `b` counts the complete blocks of length `r` (blocks never straddle two
/// series), `K` those containing an exceedance, and `N` the exceedances among
/// the `n = b r` observations covered. Unlike [`blocks_ei`] it stays
/// unbiased when a block is likely to contain an exceedance.
pub fn probability_ratio_ei(
    series: &[&[f64]],
    block_len: usize,
    threshold: f64,
) -> Result<EiEstimate> {
    let longest = series.iter().map(|s| s.len()).max().unwrap_or(0);
    check_block_len(block_len, longest)?;
    let (mut blocks, mut blocks_hit, mut exceedances) = (0usize, 0usize, 0usize);
    for s in series {
        for block in s.chunks_exact(block_len) {
            let count = block.iter().filter(|&&x| x > threshold).count();
            blocks += 1;
            exceedances += count;
            blocks_hit += usize::from(count > 0);
        }
    }
    if exceedances == 0 {
        return Err(EvtError::NoExceedance { threshold });
    }
    if blocks_hit == blocks {
        return Err(EvtError::domain(format!(
            "every block exceeds {threshold}; raise the threshold or shorten the blocks"
        )));
    }
    let covered = (blocks * block_len) as f64;
    let block_term = (-(blocks_hit as f64) / blocks as f64).ln_1p();
    let marginal_term = block_len as f64 * (-(exceedances as f64) / covered).ln_1p();
    let theta = (block_term / marginal_term).clamp(f64::MIN_POSITIVE, 1.0);
    Ok(EiEstimate {
        theta_hat: theta,
        block_len,
        threshold,
        exceedance_count: exceedances,
    })
}

/// [`probability_ratio_ei`] on a single series.
pub fn blocks_ei_log(series: &[f64], block_len: usize, threshold: f64) -> Result<EiEstimate> {
    probability_ratio_ei(&[series], block_len, threshold)
}

/// `P(X_{t+1} > u | X_t > u)`, estimated by counting.
pub fn lag_one_extremal_dependence(series: &[f64], threshold: f64) -> Result<f64> {
    let mut exceed = 0usize;
    let mut both = 0usize;
    for w in series.windows(2) {
        if w[0] > threshold {
            exceed += 1;
            both += usize::from(w[1] > threshold);
        }
    }
    if exceed == 0 {
        return Err(EvtError::NoExceedance { threshold });
    }
    Ok(both as f64 / exceed as f64)
}
