//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) and exits non-zero when any
//! criterion fails.

mod common;

use std::f64::consts::E;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use evtkit::asymptotics::{penultimate_fit, top_i_cdf, top_i_pdf, Model, TopIPoint};
use evtkit::cluster::{
    armax_sample, blocks_ei, blocks_ei_log, frechet_series, probability_ratio_ei,
};
use evtkit::distributions::{
    hall_welsh_sample, max_stability_defect, pareto_sample, GevParams, HallWelshModel,
};
use evtkit::estimators::{
    gumbel_statistic, hill, mean_order_p_evi, mixed_moment, moment, power_mean_evi,
};
use evtkit::port::{port_evi, PortBase, PortConfig};
use evtkit::reduced_bias::{estimate_second_order, mvrb_hill, mvrb_path, SecondOrderEstimate};
use evtkit::resampling::{
    bootstrap_osf, generalized_jackknife, jackknife_pseudo_values, BootstrapEstimator,
    BootstrapPlan,
};
use evtkit::tail_stats::hill_path;
use evtkit::{OrderedSample, Result, TailLevel};

use common::{gl_rule, median, mse, TopTwoExponential};

/// Named boolean checks with a short measured value each.
#[derive(Default)]
struct Checks {
    items: Vec<(String, bool)>,
}

impl Checks {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.items.push((name.into(), ok));
    }

    fn passed(&self) -> bool {
        self.items.iter().all(|(_, ok)| *ok)
    }

    fn summary(&self) -> String {
        let failed: Vec<&str> = self
            .items
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| n.as_str())
            .collect();
        if failed.is_empty() {
            self.items
                .iter()
                .map(|(n, _)| n.as_str())
                .collect::<Vec<_>>()
                .join("; ")
        } else {
            format!("failed: {}", failed.join("; "))
        }
    }
}

fn ok_or_false<T>(r: Result<T>, f: impl FnOnce(T) -> bool) -> bool {
    r.map(f).unwrap_or(false)
}

fn sample(v: &[f64]) -> OrderedSample {
    OrderedSample::new(v.to_vec()).expect("valid hand sample")
}

fn criterion_1() -> Checks {
    let mut c = Checks::default();
    let e4 = sample(&[1.0, E, E * E, E * E * E]);
    let e3 = sample(&[1.0, E, E * E]);

    let h = hill(&e4, 3).map(|e| e.value);
    c.check(
        format!("Hill = {:?}", h),
        ok_or_false(h, |v| (v - 2.0).abs() < 1e-14),
    );
    let m = moment(&e3, 2).map(|e| e.value);
    c.check(
        format!("Moment = {:?}", m),
        ok_or_false(m, |v| (v + 2.5).abs() < 1e-12),
    );
    let mm = mixed_moment(&e3, 2).map(|e| e.value);
    c.check(
        format!("MM = {:?}", mm),
        ok_or_false(mm, |v| (v - 0.34193).abs() <= 1e-5),
    );

    let mut bits = true;
    for k in 1..4 {
        let h = hill(&e4, k).unwrap().value.to_bits();
        bits &= mean_order_p_evi(&e4, k, 0.0).unwrap().value.to_bits() == h;
        bits &= power_mean_evi(&e4, k, 1.0).unwrap().value.to_bits() == h;
    }
    c.check("MOp(0) and PMEp(1) equal Hill bit for bit", bits);

    let w = gumbel_statistic(&sample(&[1.0, 2.0, 3.0, 4.0, 5.0]));
    c.check(format!("Gumbel W = {:?}", w), w == Ok(1.0));
    let gj = generalized_jackknife(1.2, 1.0, 0.5);
    c.check(
        format!("GJ = {:?}", gj),
        ok_or_false(gj, |v| (v - 1.4).abs() < 1e-14),
    );

    let so = SecondOrderEstimate::new(-0.8, 0.0, TailLevel::new(3, 4).unwrap()).unwrap();
    let mvrb_equal =
        (1..4).all(|k| mvrb_hill(&e4, k, &so).unwrap().value == hill(&e4, k).unwrap().value);
    c.check("MVRB with beta = 0 equals Hill", mvrb_equal);

    let data = [0.5, 3.0, -2.25, 7.0, 1.0, 4.5];
    let mean = |x: &[f64]| Ok(x.iter().sum::<f64>() / x.len() as f64);
    let pseudo = jackknife_pseudo_values(&mean, &data).unwrap();
    let max_dev = pseudo
        .iter()
        .zip(data)
        .map(|(p, x)| (p - x).abs())
        .fold(0.0, f64::max);
    c.check(
        format!("mean pseudo-values match data (max dev {max_dev:.1e})"),
        max_dev < 1e-12,
    );
    c
}

fn criterion_2() -> Checks {
    let mut c = Checks::default();
    let model = HallWelshModel::exponential(0.5, 1.0, -1.0, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let s = hall_welsh_sample(&model, 500, seed).unwrap();
        for scale in [1e-3, 0.37, 4.0, 2.5e4] {
            let t = s.affine(scale, 0.0).unwrap();
            for k in [10, 50, 200] {
                let pairs = [
                    (hill(&s, k), hill(&t, k)),
                    (moment(&s, k), moment(&t, k)),
                    (mixed_moment(&s, k), mixed_moment(&t, k)),
                    (power_mean_evi(&s, k, 2.0), power_mean_evi(&t, k, 2.0)),
                    (mean_order_p_evi(&s, k, 0.5), mean_order_p_evi(&t, k, 0.5)),
                ];
                for (a, b) in pairs {
                    let (a, b) = (a.unwrap().value, b.unwrap().value);
                    worst = worst.max(((a - b) / a).abs());
                }
            }
        }
    }
    c.check(
        format!("scale invariance (max rel drift {worst:.1e})"),
        worst <= 1e-12,
    );

    let dyadic: Vec<f64> = pareto_sample(0.5, 400, 3)
        .unwrap()
        .values()
        .iter()
        .map(|x| (x * 1024.0).round() / 1024.0)
        .collect();
    let base = sample(&dyadic);
    let cfg = PortConfig::new(0.1).unwrap();
    let mut exact = true;
    for shift in [-1000.0, 1000.0] {
        let shifted = base.affine(1.0, shift).unwrap();
        for b in [PortBase::Hill, PortBase::Moment, PortBase::MixedMoment] {
            for k in [20, 100, 300] {
                let x = port_evi(&base, &cfg, k, b).map(|e| e.value.to_bits());
                let y = port_evi(&shifted, &cfg, k, b).map(|e| e.value.to_bits());
                exact &= x == y;
            }
        }
    }
    c.check(
        "PORT location invariance exact for shifts of -1000 and 1000",
        exact,
    );

    let g = pareto_sample(1.0, 201, 9).unwrap();
    let w = gumbel_statistic(&g).unwrap();
    let wa = gumbel_statistic(&g.affine(3.5, -12.0).unwrap()).unwrap();
    c.check(
        format!("Gumbel statistic affine drift {:.1e}", (w - wa).abs()),
        (w - wa).abs() <= 1e-12 * w.abs(),
    );

    let grid: Vec<f64> = (0..=400).map(|j| -3.0 + 0.025 * j as f64).collect();
    let mut defect: f64 = 0.0;
    for k in [2u32, 5, 17] {
        let kf = k as f64;
        defect =
            defect.max(max_stability_defect(&GevParams::gumbel(), k, 1.0, kf.ln(), &grid).unwrap());
        for alpha in [0.5, 2.0] {
            let a = kf.powf(1.0 / alpha);
            defect = defect.max(
                max_stability_defect(&GevParams::frechet(alpha).unwrap(), k, a, 0.0, &grid)
                    .unwrap(),
            );
            let b = kf.powf(-1.0 / alpha);
            defect = defect.max(
                max_stability_defect(&GevParams::max_weibull(alpha).unwrap(), k, b, 0.0, &grid)
                    .unwrap(),
            );
        }
    }
    c.check(
        format!("max-stability defect {defect:.1e}"),
        defect <= 1e-12,
    );
    c
}

fn criterion_3() -> Checks {
    let mut c = Checks::default();

    let hills: Vec<f64> = (0..200u64)
        .into_par_iter()
        .map(|seed| {
            hill(&pareto_sample(0.5, 5000, 1000 + seed).unwrap(), 70)
                .unwrap()
                .value
        })
        .collect();
    let m = median(&hills);
    c.check(
        format!("Hill median {m:.4} on Pareto(0.5)"),
        (m - 0.5).abs() <= 0.05,
    );

    let model = HallWelshModel::exponential(1.0, 1.0, -0.5, 1.0).unwrap();
    let rhos: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let s = hall_welsh_sample(&model, 20_000, 2000 + seed).unwrap();
            estimate_second_order(&s, None).map_or(f64::NAN, |so| so.rho_hat())
        })
        .collect();
    let m = median(&rhos);
    c.check(format!("rho_hat median {m:.4}"), (m + 0.5).abs() <= 0.15);

    let n = 5000;
    let k_lo = (n as f64).powf(0.6).floor() as usize;
    let k_hi = (n as f64).powf(0.9).floor() as usize;
    let paths: Vec<(Vec<f64>, Vec<f64>)> = (0..200u64)
        .into_par_iter()
        .map(|seed| {
            let s = hall_welsh_sample(&model, n, 3000 + seed).unwrap();
            let so = estimate_second_order(&s, None).unwrap();
            let h = hill_path(&s);
            let hb = mvrb_path(&h, &so);
            (h, hb)
        })
        .collect();
    let mut worst_ratio: f64 = 0.0;
    for k in k_lo..=k_hi {
        let h: Vec<f64> = paths.iter().map(|p| p.0[k - 1]).collect();
        let hb: Vec<f64> = paths.iter().map(|p| p.1[k - 1]).collect();
        worst_ratio = worst_ratio.max(mse(&hb, 1.0) / mse(&h, 1.0));
    }
    c.check(
        format!("MVRB/Hill MSE ratio at most {worst_ratio:.3} over k in [{k_lo}, {k_hi}]"),
        worst_ratio <= 1.0,
    );
    c
}

fn criterion_4() -> Checks {
    let mut c = Checks::default();
    let model = HallWelshModel::exponential(1.0, 1.0, -0.5, 1.0).unwrap();
    let n = 5000;
    let runs: Vec<(Vec<f64>, usize)> = (0..100u64)
        .map(|seed| {
            let s = hall_welsh_sample(&model, n, 4000 + seed).unwrap();
            let plan = BootstrapPlan::default_for(n, 250, 9000 + seed).unwrap();
            let r = bootstrap_osf(&s, BootstrapEstimator::Hill, &plan).unwrap();
            (hill_path(&s), r.k_hat.get())
        })
        .collect();
    let at_k_hat: Vec<f64> = runs.iter().map(|(p, k)| p[k - 1]).collect();
    let mse_hat = mse(&at_k_hat, 1.0);
    let oracle = (1..n)
        .map(|k| mse(&runs.iter().map(|(p, _)| p[k - 1]).collect::<Vec<_>>(), 1.0))
        .fold(f64::INFINITY, f64::min);
    let ratio = mse_hat / oracle;
    c.check(
        format!("MSE at k_hat {mse_hat:.5} vs oracle {oracle:.5} (ratio {ratio:.3})"),
        ratio <= 1.5,
    );

    let s = hall_welsh_sample(&model, n, 4000).unwrap();
    let plan = BootstrapPlan::default_for(n, 250, 9000).unwrap();
    let a = bootstrap_osf(&s, BootstrapEstimator::Hill, &plan).unwrap();
    let b = bootstrap_osf(&s, BootstrapEstimator::Hill, &plan).unwrap();
    let identical = serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap();
    c.check("identical rerun", identical);
    c
}

fn criterion_5() -> Checks {
    let mut c = Checks::default();
    let g = GevParams::gumbel();
    let pdf = |x: &[f64]| top_i_pdf(&g, &TopIPoint::new(x.to_vec()).unwrap());

    // Lowest coordinate, then positive gaps between consecutive coordinates.
    let base = gl_rule(-5.0, 25.0, 60);
    let gaps = gl_rule(0.0, 30.0, 60);
    let two: f64 = base
        .iter()
        .map(|&(x2, w2)| {
            gaps.iter()
                .map(|&(d, w)| w * pdf(&[x2 + d, x2]))
                .sum::<f64>()
                * w2
        })
        .sum();
    let base3 = gl_rule(-5.0, 20.0, 30);
    let gaps3 = gl_rule(0.0, 25.0, 30);
    let three: f64 = base3
        .par_iter()
        .map(|&(x3, w3)| {
            let mut acc = 0.0;
            for &(d2, v2) in &gaps3 {
                for &(d1, v1) in &gaps3 {
                    acc += v1 * v2 * pdf(&[x3 + d2 + d1, x3 + d2, x3]);
                }
            }
            acc * w3
        })
        .sum();
    c.check(format!("2-d mass {two:.6}"), (two - 1.0).abs() <= 1e-3);
    c.check(format!("3-d mass {three:.6}"), (three - 1.0).abs() <= 1e-3);

    let n = 10_000usize;
    let shift = (n as f64).ln();
    let mut sampler = TopTwoExponential::new(n, 77);
    let pairs = 100_000;
    let hits = (0..pairs)
        .filter(|_| {
            let (x1, x2) = sampler.draw();
            x1 - shift <= 1.0 && x2 - shift <= 0.0
        })
        .count();
    let mc = hits as f64 / pairs as f64;
    let cdf = top_i_cdf(&g, &TopIPoint::new(vec![1.0, 0.0]).unwrap()).unwrap();
    c.check(
        format!("top-2 CDF {cdf:.4} vs Monte Carlo {mc:.4}"),
        (cdf - mc).abs() <= 0.01,
    );

    let h = pdf(&[1.0, 0.0]);
    c.check(
        format!("PDF at (1, 0) = {h:.9}"),
        (h - (-2.0f64).exp()).abs() <= 1e-9,
    );
    c
}

fn criterion_6() -> Checks {
    let mut c = Checks::default();
    // Ultimate distances from a 50-digit evaluation on the same grid.
    for (n, oracle) in [
        (100u64, 0.027_189_746_612_805_106),
        (1000, 0.018_246_785_056_059_555),
    ] {
        let model = Model::Normal;
        let r = penultimate_fit(&model, &model.standard_constants(n).unwrap()).unwrap();
        let gap = (r.sup_distance_ultimate - oracle).abs();
        c.check(
            format!("n = {n}: ultimate distance off oracle by {gap:.1e}"),
            gap <= 1e-10,
        );
        c.check(
            format!(
                "n = {n}: penultimate {:.5} < ultimate {:.5}, shape {:.4}",
                r.sup_distance_penultimate, r.sup_distance_ultimate, r.penultimate_shape
            ),
            r.sup_distance_penultimate < r.sup_distance_ultimate && r.penultimate_shape < 0.0,
        );
    }
    c
}

fn criterion_7() -> Checks {
    let mut c = Checks::default();
    let n = 100_000;
    let r = (n as f64).sqrt().floor() as usize;
    let thetas: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let x = frechet_series(n, 5000 + seed);
            // 99.5% quantile of the unit Frechet law.
            let u = -1.0 / 0.995f64.ln();
            blocks_ei_log(&x, r, u).unwrap().theta_hat
        })
        .collect();
    let m = median(&thetas);
    c.check(
        format!("i.i.d. blocks median {m:.4}"),
        (m - 1.0).abs() <= 0.1,
    );

    let series: Vec<Vec<f64>> = (0..10u64)
        .map(|s| armax_sample(0.5, n, 6000 + s).unwrap())
        .collect();
    let mut pooled: Vec<f64> = series.iter().flatten().copied().collect();
    pooled.sort_by(f64::total_cmp);
    let u = pooled[(pooled.len() as f64 * 0.999).ceil() as usize - 1];
    let refs: Vec<&[f64]> = series.iter().map(Vec::as_slice).collect();
    let theta = probability_ratio_ei(&refs, 1000, u).unwrap().theta_hat;
    c.check(
        format!("ARMAX(0.5) probability ratio {theta:.4}"),
        (theta - 0.5).abs() <= 0.1,
    );

    let mut hand = vec![0.0; 100];
    hand[..3].fill(1.0);
    let t = blocks_ei(&hand, 10, 0.5).unwrap().theta_hat;
    c.check(format!("hand count {t:.6}"), (t - 1.0 / 3.0).abs() < 1e-15);
    c
}

fn evtkit(args: &[&str]) -> Output {
    Command::new(common::bin())
        .args(args)
        .output()
        .expect("evtkit runs")
}

fn criterion_8() -> Checks {
    let mut c = Checks::default();
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("e.txt");
    std::fs::write(
        &data,
        format!("# powers of e\n1\n{E}\n{}\n{}\n", E * E, E * E * E),
    )
    .unwrap();
    let path = data.to_str().unwrap();

    let out = evtkit(&["estimate", path, "--method", "hill", "--k", "3"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let row = text.lines().nth(1).unwrap_or("");
    let value: f64 = row
        .split(',')
        .nth(1)
        .and_then(|v| v.parse().ok())
        .unwrap_or(f64::NAN);
    c.check(
        format!("estimate hill row '{row}'"),
        out.status.code() == Some(0) && (value - 2.0).abs() < 1e-14,
    );

    let mop = evtkit(&["estimate", path, "--method", "mop", "--p", "0", "--k", "3"]);
    let mop_row = String::from_utf8_lossy(&mop.stdout)
        .lines()
        .nth(1)
        .unwrap_or("")
        .to_string();
    c.check(
        "mop p = 0 row equals hill row",
        mop.status.code() == Some(0) && mop_row.split(',').nth(1) == row.split(',').nth(1),
    );

    let three = dir.path().join("e3.txt");
    std::fs::write(&three, format!("1\n{E}\n{}\n", E * E)).unwrap();
    let three = three.to_str().unwrap();
    for (method, expected, tol) in [("moment", -2.5, 1e-12), ("mm", 0.34193, 1e-5)] {
        let out = evtkit(&[
            "estimate", three, "--method", method, "--k", "2", "--format", "json",
        ]);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
        let got = v["rows"][0]["estimate"].as_f64().unwrap_or(f64::NAN);
        c.check(
            format!("{method} via json {got}"),
            v["schema"] == 1 && (got - expected).abs() <= tol,
        );
    }

    let campaign = [
        "simulate",
        "--model",
        "hall-welsh:1,1,-0.5",
        "--n",
        "400",
        "--replicates",
        "20",
        "--k",
        "10:100:10",
        "--seed",
        "42",
    ];
    let a = evtkit(&campaign);
    let b = evtkit(&campaign);
    c.check(
        "campaign rerun byte-identical",
        a.status.code() == Some(0) && !a.stdout.is_empty() && a.stdout == b.stdout,
    );

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1.0\n2,5\n").unwrap();
    let neg = dir.path().join("neg.txt");
    std::fs::write(&neg, "-3\n-2\n-1\n").unwrap();
    let e = evtkit(&["estimate", empty.to_str().unwrap(), "--k", "1"]);
    let b = evtkit(&["estimate", bad.to_str().unwrap(), "--k", "1"]);
    let n = evtkit(&["estimate", neg.to_str().unwrap(), "--k", "1"]);
    let s = evtkit(&["simulate", "--model", "pareto:0.5", "--n", "100"]);
    let bad_stderr = String::from_utf8_lossy(&b.stderr).to_string();
    c.check("empty input exits 2", e.status.code() == Some(2));
    c.check(
        "malformed line exits 2 naming line 2",
        b.status.code() == Some(2) && bad_stderr.contains("line 2"),
    );
    c.check("domain error exits 3", n.status.code() == Some(3));
    c.check("missing seed exits 2", s.status.code() == Some(2));
    c
}

fn main() {
    type Criterion = (&'static str, fn() -> Checks, Duration);
    let criteria: [Criterion; 8] = [
        ("exact identities", criterion_1, Duration::from_secs(1)),
        ("invariance suite", criterion_2, Duration::from_secs(10)),
        (
            "Monte Carlo consistency",
            criterion_3,
            Duration::from_secs(300),
        ),
        (
            "bootstrap sample fraction oracle",
            criterion_4,
            Duration::from_secs(600),
        ),
        ("top-i laws", criterion_5, Duration::from_secs(120)),
        (
            "penultimate dominance",
            criterion_6,
            Duration::from_secs(60),
        ),
        ("extremal index", criterion_7, Duration::from_secs(120)),
        (
            "command line contract",
            criterion_8,
            Duration::from_secs(10),
        ),
    ];
    let mut all = true;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let checks = run();
        let elapsed = start.elapsed();
        let pass = checks.passed() && elapsed <= *budget;
        all &= pass;
        let timing = if elapsed <= *budget {
            ""
        } else {
            " OVER BUDGET"
        };
        println!(
            "criterion {} ({name}): {} in {:.2}s{timing} [{}]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            checks.summary()
        );
    }
    if !all {
        std::process::exit(1);
    }
}
