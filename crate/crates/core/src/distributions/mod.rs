//! Extreme value laws and synthetic heavy-tailed models.

mod gev;
mod hall_welsh;
mod mss;
mod normal;

pub use gev::{gev_cdf, gev_quantile, gev_sample, max_stability_defect, GevParams, SHAPE_EPS};
pub use hall_welsh::{
    hall_welsh_quantile, hall_welsh_sample, pareto_sample, HallWelshModel, SecondOrderForm,
};
pub use mss::{mss_cdf, MssParams, PeriodicFn};
pub use normal::{
    normal_attraction_constants, std_normal_cdf, std_normal_log_cdf, std_normal_pdf,
    std_normal_quantile, NormalizingConstants,
};
