//! Resampling schemes for bias reduction and sample fraction selection.

mod bootstrap;
mod jackknife;

pub use bootstrap::{
    bootstrap_osf, BootstrapDiagnostics, BootstrapEstimator, BootstrapPlan, BootstrapResult,
    DEFAULT_REPLICATES, MIN_REPLICATES,
};
pub use jackknife::{
    generalized_jackknife, gj_hill, jackknife_pseudo_values, pure_jackknife, Statistic,
};
