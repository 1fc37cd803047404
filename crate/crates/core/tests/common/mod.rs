//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Five-point Gauss-Legendre rule on [-1, 1].
const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

/// Composite Gauss-Legendre nodes and weights for `[a, b]` split into `panels`.
pub fn gl_rule(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * 5);
    for p in 0..panels {
        let mid = a + h * (p as f64 + 0.5);
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    gl_rule(a, b, panels)
        .into_iter()
        .map(|(x, w)| w * f(x))
        .sum()
}

pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

pub fn mse(values: &[f64], truth: f64) -> f64 {
    values
        .iter()
        .map(|v| (v - truth) * (v - truth))
        .sum::<f64>()
        / values.len() as f64
}

/// Largest and second largest of `n` standard exponentials, drawn exactly:
/// the maximum by inversion of `(1 - e^-x)^n`, the runner-up by inversion of
/// the conditional law of the remaining `n - 1` values below it.
pub struct TopTwoExponential {
    rng: ChaCha20Rng,
    n: f64,
}

impl TopTwoExponential {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            n: n as f64,
        }
    }

    pub fn draw(&mut self) -> (f64, f64) {
        let u: f64 = self.rng.random_range(f64::EPSILON..1.0);
        let v: f64 = self.rng.random_range(f64::EPSILON..1.0);
        // F(x1) = u^(1/n), x1 = -ln(1 - F(x1)).
        let f1 = (u.ln() / self.n).exp();
        let x1 = -(-(u.ln() / self.n).exp_m1()).ln();
        let f2 = f1 * (v.ln() / (self.n - 1.0)).exp();
        let x2 = -(1.0 - f2).ln();
        (x1, x2.min(x1))
    }
}

/// `EVTKIT` binary built by cargo for this test crate.
pub fn bin() -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_BIN_EXE_evtkit"))
}
