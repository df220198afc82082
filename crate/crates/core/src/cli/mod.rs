//! Verification harness: each subcommand runs one experiment and emits a report.

mod args;
mod commands;
mod report;
mod slope;

pub use args::{run, Cli, Command, Format};
pub use commands::{
    cmd_coeffs, cmd_eval, cmd_laplace, cmd_verify_decay, cmd_verify_fresnel, cmd_verify_limits, cmd_verify_remainder,
    geometric_grid, DECAY_SLOPE_MAX, FRESNEL_HALF_REL_TOL, FRESNEL_REL_TOL, LIMIT_REL_TOL, LOG_LIMIT_REL_TOL, NOISE_FACTOR,
    NOISE_FLOOR, SLOPE_SLACK,
};
pub use report::{format_f64, row, ExperimentReport, Row, Verdict};
pub use slope::{slope_fit, SlopeFit};
