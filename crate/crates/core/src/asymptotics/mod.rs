//! Joint laws of the top order statistics and the quality of extreme value
//! approximations at finite `n`.

mod convergence;
mod top_i;

pub use convergence::{
    convergence_distance, default_grid, penultimate_fit, ConvergenceReport, Model, GRID_POINTS,
    GRID_TAIL, SHAPE_TOLERANCE,
};
pub use top_i::{top_i_cdf, top_i_pdf, TopIPoint};
