use rand::Rng;
use rayon::prelude::*;

use super::args::{
    BootstrapArgs, BootstrapEstimatorArg, ChooseModelArgs, ConvergeArgs, EiArgs, EiEstimatorArg,
    EstimateArgs, PortArgs, PortBaseArg, SimulateArgs,
};
use super::input::{read_values, KRange};
use super::output::{Cell, Report};
use super::CliError;
use crate::asymptotics::{penultimate_fit, Model};
use crate::cluster::{armax_sample, blocks_ei, blocks_ei_log, empirical_quantile};
use crate::distributions::{
    gev_sample, hall_welsh_sample, pareto_sample, GevParams, HallWelshModel,
};
use crate::error::EvtError;
use crate::estimators::{
    gumbel_statistic, hill, mean_order_p_evi, mixed_moment, moment, power_mean_evi, EviEstimate,
};
use crate::port::{port_evi, PortBase, PortConfig};
use crate::reduced_bias::{estimate_second_order, mvrb_hill, SecondOrderEstimate};
use crate::resampling::{bootstrap_osf, gj_hill, BootstrapEstimator, BootstrapPlan};
use crate::rng::stream_rng;
use crate::tail_stats::{hill_path, OrderedSample};

#[derive(Debug, Clone, Copy, PartialEq)]
enum EstimatorSpec {
    Hill,
    Moment,
    MixedMoment,
    PowerMean(f64),
    MeanOrderP(f64),
    Mvrb,
    Gj(Option<f64>),
}

impl EstimatorSpec {
    /// `name` or `name:<p>`; `p` fills in a missing exponent.
    fn parse(spec: &str, p: Option<f64>, rho: Option<f64>) -> Result<Self, CliError> {
        let (name, inline) = match spec.split_once(':') {
            Some((name, value)) => {
                let value: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Input(format!("invalid exponent in method '{spec}'")))?;
                (name.trim(), Some(value))
            }
            None => (spec.trim(), None),
        };
        let exponent = |what: &str| {
            inline.or(p).ok_or_else(|| {
                CliError::Input(format!(
                    "method {what} needs an exponent (--p or {what}:<p>)"
                ))
            })
        };
        let parsed = match name.to_ascii_lowercase().as_str() {
            "hill" => Self::Hill,
            "moment" => Self::Moment,
            "mm" | "mixed-moment" => Self::MixedMoment,
            "pme" => Self::PowerMean(exponent("pme")?),
            "mop" => Self::MeanOrderP(exponent("mop")?),
            "mvrb" => Self::Mvrb,
            "gj" => Self::Gj(rho),
            _ => return Err(CliError::Input(format!("unknown method '{spec}'"))),
        };
        Ok(parsed)
    }

    fn label(&self) -> String {
        match self {
            Self::Hill => "hill".into(),
            Self::Moment => "moment".into(),
            Self::MixedMoment => "mm".into(),
            Self::PowerMean(p) => format!("pme:{p}"),
            Self::MeanOrderP(p) => format!("mop:{p}"),
            Self::Mvrb => "mvrb".into(),
            Self::Gj(_) => "gj".into(),
        }
    }

    fn needs_second_order(&self) -> bool {
        matches!(self, Self::Mvrb | Self::Gj(None))
    }

    fn evaluate(
        &self,
        s: &OrderedSample,
        k: usize,
        so: Option<&SecondOrderEstimate>,
    ) -> crate::Result<EviEstimate> {
        match *self {
            Self::Hill => hill(s, k),
            Self::Moment => moment(s, k),
            Self::MixedMoment => mixed_moment(s, k),
            Self::PowerMean(p) => power_mean_evi(s, k, p),
            Self::MeanOrderP(p) => mean_order_p_evi(s, k, p),
            Self::Mvrb => mvrb_hill(s, k, so.expect("second-order estimate prepared")),
            Self::Gj(rho) => gj_hill(
                s,
                k,
                rho.unwrap_or_else(|| so.expect("second-order estimate prepared").rho_hat()),
            ),
        }
    }
}

fn load_sample(path: &std::path::Path) -> Result<OrderedSample, CliError> {
    let values = read_values(path)?;
    OrderedSample::new(values).map_err(|e| CliError::Input(e.to_string()))
}

fn at_k(k: usize, e: EvtError) -> CliError {
    match e {
        EvtError::Domain(msg) => CliError::Eval(EvtError::Domain(format!("k = {k}: {msg}"))),
        EvtError::Singular(msg) => CliError::Eval(EvtError::Singular(format!("k = {k}: {msg}"))),
        other => CliError::Eval(other),
    }
}

pub fn estimate(args: &EstimateArgs) -> Result<Report, CliError> {
    let sample = load_sample(&args.input)?;
    let spec = EstimatorSpec::parse(&args.method, args.p, args.rho)?;
    let so = if spec.needs_second_order() || args.mvrb {
        Some(estimate_second_order(&sample, None)?)
    } else {
        None
    };
    let range = args.k.unwrap_or_else(|| KRange::default_for(sample.len()));
    let mut columns = vec!["k", "estimate", "method"];
    if args.mvrb {
        columns.push("mvrb");
    }
    let mut report = Report::new("estimate", &columns);
    if let Some(so) = &so {
        report = report
            .meta("rho_hat", so.rho_hat())
            .meta("beta_hat", so.beta_hat())
            .meta("k_high", so.k_high().get());
    }
    for k in range.values() {
        let est = spec
            .evaluate(&sample, k, so.as_ref())
            .map_err(|e| at_k(k, e))?;
        let mut row = vec![Cell::from(k), est.value.into(), spec.label().into()];
        if let Some(so) = &so.filter(|_| args.mvrb) {
            row.push(
                mvrb_hill(&sample, k, so)
                    .map_err(|e| at_k(k, e))?
                    .value
                    .into(),
            );
        }
        report.push(row);
    }
    Ok(report)
}

pub fn port(args: &PortArgs) -> Result<Report, CliError> {
    let sample = load_sample(&args.input)?;
    let cfg = PortConfig::new(args.s).map_err(|e| CliError::Input(e.to_string()))?;
    let base = match args.base {
        PortBaseArg::Hill => PortBase::Hill,
        PortBaseArg::Moment => PortBase::Moment,
        PortBaseArg::Mm => PortBase::MixedMoment,
    };
    let excess_count = sample
        .len()
        .saturating_sub(cfg.threshold_rank(sample.len()));
    let range = args.k.unwrap_or_else(|| KRange::default_for(excess_count));
    let mut report = Report::new("port", &["k", "estimate", "method"])
        .meta("s", args.s)
        .meta("threshold_rank", cfg.threshold_rank(sample.len()));
    for k in range.values() {
        let est = port_evi(&sample, &cfg, k, base).map_err(|e| at_k(k, e))?;
        report.push(vec![
            k.into(),
            est.value.into(),
            est.method.to_string().into(),
        ]);
    }
    Ok(report)
}

pub fn bootstrap_k(args: &BootstrapArgs) -> Result<Report, CliError> {
    let sample = load_sample(&args.input)?;
    let n = sample.len();
    let plan = match args.n1 {
        Some(n1) => BootstrapPlan::new(
            n,
            n1,
            args.n2.unwrap_or(n1 * n1 / n),
            args.replicates,
            args.seed,
        ),
        None if args.n2.is_some() => return Err(CliError::Input("--n2 requires --n1".into())),
        None => BootstrapPlan::default_for(n, args.replicates, args.seed),
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    let estimator = match args.estimator {
        BootstrapEstimatorArg::Hill => BootstrapEstimator::Hill,
        BootstrapEstimatorArg::Mop => BootstrapEstimator::MeanOrderP { p: args.p },
        BootstrapEstimatorArg::Mvrb => BootstrapEstimator::Mvrb,
    };
    let result = bootstrap_osf(&sample, estimator, &plan)?;
    let d = &result.diagnostics;
    let mut report = Report::new("bootstrap-k", &["k_hat", "k1_star", "k2_star", "estimate"])
        .meta("n", n)
        .meta("n1", d.n1)
        .meta("n2", d.n2)
        .meta("replicates", d.replicates)
        .meta("seed", args.seed)
        .meta("rho_hat", d.rho_hat)
        .meta("correction", d.correction);
    report.push(vec![
        result.k_hat.get().into(),
        result.k1_star.into(),
        result.k2_star.into(),
        result.estimate.into(),
    ]);
    Ok(report)
}

enum SimModel {
    HallWelsh(HallWelshModel),
    Pareto(f64),
    Frechet(GevParams),
}

impl SimModel {
    fn parse(spec: &str, truncated: bool) -> Result<Self, CliError> {
        let bad = |msg: String| CliError::Input(msg);
        let (name, params) = spec
            .split_once(':')
            .ok_or_else(|| bad(format!("model '{spec}' is not of the form name:params")))?;
        let nums = params
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad(format!("invalid parameters in model '{spec}'")))?;
        let invalid = |e: EvtError| bad(e.to_string());
        match (name.trim().to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("hall-welsh", [xi, beta, rho]) | ("hall-welsh", [xi, beta, rho, _]) => {
                let c = nums.get(3).copied().unwrap_or(1.0);
                let model = if truncated {
                    HallWelshModel::new(*xi, *beta, *rho, c)
                } else {
                    HallWelshModel::exponential(*xi, *beta, *rho, c)
                };
                Ok(Self::HallWelsh(model.map_err(invalid)?))
            }
            ("pareto", [xi]) if *xi > 0.0 && xi.is_finite() => Ok(Self::Pareto(*xi)),
            ("frechet", [alpha]) => Ok(Self::Frechet(GevParams::frechet(*alpha).map_err(invalid)?)),
            _ => Err(bad(format!("unknown or malformed model '{spec}'"))),
        }
    }

    fn xi(&self) -> f64 {
        match self {
            Self::HallWelsh(m) => m.xi(),
            Self::Pareto(xi) => *xi,
            Self::Frechet(g) => g.shape(),
        }
    }

    fn sample(&self, n: usize, seed: u64) -> crate::Result<OrderedSample> {
        match self {
            Self::HallWelsh(m) => hall_welsh_sample(m, n, seed),
            Self::Pareto(xi) => pareto_sample(*xi, n, seed),
            Self::Frechet(g) => gev_sample(g, n, seed),
        }
    }
}

/// Estimates for every `(method, k)`, NaN where undefined.
fn replicate_paths(sample: &OrderedSample, specs: &[EstimatorSpec], ks: &[usize]) -> Vec<Vec<f64>> {
    let needs_so = specs.iter().any(EstimatorSpec::needs_second_order);
    let so = if needs_so {
        estimate_second_order(sample, None).ok()
    } else {
        None
    };
    let path = hill_path(sample);
    let n = sample.len();
    specs
        .iter()
        .map(|spec| {
            ks.iter()
                .map(|&k| {
                    if k >= n {
                        return f64::NAN;
                    }
                    match spec {
                        EstimatorSpec::Hill => path[k - 1],
                        EstimatorSpec::Mvrb => {
                            so.map_or(f64::NAN, |so| path[k - 1] * so.correction_factor(n, k))
                        }
                        EstimatorSpec::Gj(rho) if k >= 2 => match rho.or(so.map(|s| s.rho_hat())) {
                            Some(rho) => {
                                let alpha = 2f64.powf(-rho);
                                (path[k - 1] - alpha * path[k / 2 - 1]) / (1.0 - alpha)
                            }
                            None => f64::NAN,
                        },
                        _ if spec.needs_second_order() && so.is_none() => f64::NAN,
                        _ => spec
                            .evaluate(sample, k, so.as_ref())
                            .map_or(f64::NAN, |e| e.value),
                    }
                })
                .collect()
        })
        .collect()
}

/// Order-statistic quantile `x_(ceil(q m))` of sorted data.
fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    let m = sorted.len();
    let rank = ((q * m as f64).ceil() as usize).clamp(1, m);
    sorted[rank - 1]
}

fn median(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    }
}

pub fn simulate(args: &SimulateArgs) -> Result<Report, CliError> {
    let model = SimModel::parse(&args.model, args.truncated)?;
    if args.n < 3 {
        return Err(CliError::Input(format!(
            "--n must be at least 3, got {}",
            args.n
        )));
    }
    if args.replicates == 0 {
        return Err(CliError::Input("--replicates must be positive".into()));
    }
    let specs = args
        .methods
        .split(',')
        .map(|m| EstimatorSpec::parse(m, None, None))
        .collect::<Result<Vec<_>, _>>()?;
    let ks: Vec<usize> = args
        .k
        .unwrap_or_else(|| KRange::default_for(args.n))
        .values()
        .collect();
    if ks.iter().any(|&k| k >= args.n) {
        return Err(CliError::Input(format!(
            "k range must stay below n = {}",
            args.n
        )));
    }

    let replicates: Vec<Vec<Vec<f64>>> = (0..args.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let sample_seed: u64 = stream_rng(args.seed, r).random();
            let sample = model.sample(args.n, sample_seed)?;
            Ok(replicate_paths(&sample, &specs, &ks))
        })
        .collect::<crate::Result<_>>()?;

    let xi = model.xi();
    let mut columns = vec!["k".to_string()];
    for spec in &specs {
        for stat in ["median", "q05", "q95", "mse"] {
            columns.push(format!("{}_{stat}", spec.label()));
        }
    }
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut report = Report::new("simulate", &column_refs)
        .meta("model", args.model.as_str())
        .meta("xi", xi)
        .meta("n", args.n)
        .meta("replicates", args.replicates)
        .meta("seed", args.seed);
    for (ki, &k) in ks.iter().enumerate() {
        let mut row = vec![Cell::from(k)];
        for si in 0..specs.len() {
            let mut values: Vec<f64> = replicates
                .iter()
                .map(|r| r[si][ki])
                .filter(|v| v.is_finite())
                .collect();
            if values.is_empty() {
                row.extend([Cell::Missing, Cell::Missing, Cell::Missing, Cell::Missing]);
                continue;
            }
            values.sort_by(f64::total_cmp);
            let mse = values.iter().map(|v| (v - xi) * (v - xi)).sum::<f64>() / values.len() as f64;
            row.extend([
                median(&values).into(),
                sorted_quantile(&values, 0.05).into(),
                sorted_quantile(&values, 0.95).into(),
                mse.into(),
            ]);
        }
        report.push(row);
    }
    Ok(report)
}

pub fn ei(args: &EiArgs) -> Result<Report, CliError> {
    let series = match (&args.input, args.armax) {
        (_, Some(alpha)) => {
            let n = args
                .n
                .ok_or_else(|| CliError::Input("--armax needs --n".into()))?;
            let seed = args
                .seed
                .ok_or_else(|| CliError::Input("--armax needs --seed".into()))?;
            armax_sample(alpha, n, seed).map_err(|e| CliError::Input(e.to_string()))?
        }
        (Some(path), None) => read_values(path)?,
        (None, None) => {
            return Err(CliError::Input(
                "an input file or --armax is required".into(),
            ))
        }
    };
    let n = series.len();
    let block_len = args
        .block_len
        .unwrap_or(((n as f64).sqrt().floor() as usize).max(1));
    let threshold = match args.threshold {
        Some(t) => t,
        None => empirical_quantile(&series, args.quantile)
            .map_err(|e| CliError::Input(e.to_string()))?,
    };
    let est = match args.estimator {
        EiEstimatorArg::Blocks => blocks_ei(&series, block_len, threshold)?,
        EiEstimatorArg::Log => blocks_ei_log(&series, block_len, threshold)?,
    };
    let mut report = Report::new(
        "ei",
        &["theta_hat", "block_len", "threshold", "exceedance_count"],
    )
    .meta("n", n);
    report.push(vec![
        est.theta_hat.into(),
        est.block_len.into(),
        est.threshold.into(),
        est.exceedance_count.into(),
    ]);
    Ok(report)
}

pub fn converge(args: &ConvergeArgs) -> Result<Report, CliError> {
    let model: Model = args
        .model
        .parse()
        .map_err(|e: EvtError| CliError::Input(e.to_string()))?;
    let mut report = Report::new(
        "converge",
        &[
            "n",
            "a_n",
            "b_n",
            "sup_distance_ultimate",
            "sup_distance_penultimate",
            "penultimate_shape",
        ],
    )
    .meta("model", model.to_string());
    for &n in &args.n {
        let constants = model
            .standard_constants(n)
            .map_err(|e| CliError::Input(e.to_string()))?;
        let r = penultimate_fit(&model, &constants)?;
        report.push(vec![
            n.into(),
            constants.a_n.into(),
            constants.b_n.into(),
            r.sup_distance_ultimate.into(),
            r.sup_distance_penultimate.into(),
            r.penultimate_shape.into(),
        ]);
    }
    Ok(report)
}

pub fn choose_model(args: &ChooseModelArgs) -> Result<Report, CliError> {
    let sample = load_sample(&args.input)?;
    let w = gumbel_statistic(&sample)?;
    let mut report = Report::new("choose-model", &["n", "gumbel_statistic"]);
    report.push(vec![sample.len().into(), w.into()]);
    Ok(report)
}
