//! Argument parsing and dispatch for the `singosc` binary.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::commands::{
    cmd_coeffs, cmd_eval, cmd_laplace, cmd_verify_decay, cmd_verify_fresnel, cmd_verify_limits, cmd_verify_remainder,
    geometric_grid,
};
use super::report::ExperimentReport;
use crate::amplitude::{default_amplitude, Amplitude, PolyPlateau, DEFAULT_JET_LENGTH};
use crate::asymptotics::AlphaSpec;
use crate::error::{Error, Result};
use crate::quadrature::Tolerance;

#[derive(Debug, Parser)]
#[command(name = "singosc", version, about = "Small-t expansions of oscillatory integrals with a singular phase x^(-alpha)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Rational exponent as P/Q or P.
    #[arg(long, conflicts_with = "alpha_irrational")]
    pub alpha: Option<String>,
    /// Exponent flagged irrational (no log terms).
    #[arg(long, value_name = "X")]
    pub alpha_irrational: Option<f64>,
    /// Poly-plateau amplitude: a file path or inline JSON {"coeffs":[..],"inner":r,"outer":R}.
    #[arg(long, value_name = "FILE|JSON")]
    pub amplitude: Option<String>,
    #[arg(long = "tol-abs", default_value_t = Tolerance::default().abs_tol)]
    pub tol_abs: f64,
    #[arg(long = "tol-rel", default_value_t = Tolerance::default().rel_tol)]
    pub tol_rel: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Grid {
    #[arg(long)]
    pub tmin: Option<f64>,
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Number of geometric grid points.
    #[arg(long, default_value_t = 9)]
    pub points: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singular and Taylor coefficients for n = 0..N.
    ///
    /// CSV columns: n, exponent, log, a_re, a_im, b_re, b_im, b_check_re, b_check_im,
    /// a_hat, b_hat, c_re, c_im, c_hat.
    Coeffs {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        order: u64,
    },
    /// Oracle and expansion at one t.
    ///
    /// CSV columns: t, oracle_re, oracle_im, oracle_err, expansion_re, expansion_im, abs_diff.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 1)]
        order: u64,
    },
    /// Generalized Fresnel integrals against their closed form.
    ///
    /// CSV columns: alpha, sign, oracle_re, oracle_im, oracle_err, closed_re, closed_im,
    /// rel_err, explicit_rel_err, ok.
    VerifyFresnel {
        #[command(flatten)]
        common: Common,
        /// Comma-separated exponents in (0, 1).
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.4, 0.5, 0.6, 0.75])]
        alphas: Vec<f64>,
    },
    /// Normalized deviation against the regime's limit constant (default grid 1e-6..1e-2).
    ///
    /// CSV columns: t, deviation_re, deviation_im, deviation_err, ratio_re, ratio_im, rel_dev.
    VerifyLimits {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
    /// Residual growth after N singular terms (default grid 1e-6..1e-3).
    ///
    /// CSV columns: t, remainder_re, remainder_im, remainder_abs, remainder_err, used.
    VerifyRemainder {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 1)]
        order: u64,
    },
    /// Large-t decay slope (default grid 1e2..1e4).
    ///
    /// CSV columns: t, oracle_re, oracle_im, abs, oracle_err, used.
    VerifyDecay {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
    /// Limit and remainder checks for the Laplace integral (default grid 1e-6..1e-2).
    ///
    /// CSV columns: the verify-limits columns followed by the verify-remainder columns.
    Laplace {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 1)]
        order: u64,
    },
}

impl Common {
    fn alpha(&self) -> Result<AlphaSpec> {
        match (&self.alpha, self.alpha_irrational) {
            (Some(text), None) => AlphaSpec::parse(text),
            (None, Some(x)) => AlphaSpec::irrational(x),
            _ => Err(Error::Parse("pass --alpha P/Q or --alpha-irrational X".into())),
        }
    }

    fn amplitude(&self) -> Result<Amplitude> {
        let Some(arg) = &self.amplitude else {
            return Ok(default_amplitude());
        };
        let text = if arg.trim_start().starts_with('{') {
            arg.clone()
        } else {
            fs::read_to_string(arg).map_err(|e| Error::Parse(format!("amplitude file {arg}: {e}")))?
        };
        PolyPlateau::from_json(&text)?.build(DEFAULT_JET_LENGTH)
    }

    fn tolerance(&self) -> Result<Tolerance> {
        if !(self.tol_abs > 0.0 && self.tol_rel >= 0.0) {
            return Err(Error::Parse("--tol-abs must be positive and --tol-rel nonnegative".into()));
        }
        Ok(Tolerance::new(self.tol_abs, self.tol_rel))
    }
}

impl Grid {
    fn build(&self, tmin: f64, tmax: f64) -> Result<Vec<f64>> {
        geometric_grid(self.tmin.unwrap_or(tmin), self.tmax.unwrap_or(tmax), self.points)
    }
}

fn execute(command: &Command) -> Result<(ExperimentReport, &Common)> {
    let report = match command {
        Command::Coeffs { common, order } => (cmd_coeffs(&common.alpha()?, &common.amplitude()?, *order, &common.tolerance()?)?, common),
        Command::Eval { common, t, order } => {
            (cmd_eval(&common.alpha()?, &common.amplitude()?, *t, *order, &common.tolerance()?)?, common)
        }
        Command::VerifyFresnel { common, alphas } => (cmd_verify_fresnel(alphas, &common.tolerance()?)?, common),
        Command::VerifyLimits { common, grid } => (
            cmd_verify_limits(&common.alpha()?, &common.amplitude()?, &grid.build(1e-6, 1e-2)?, &common.tolerance()?)?,
            common,
        ),
        Command::VerifyRemainder { common, grid, order } => (
            cmd_verify_remainder(
                &common.alpha()?,
                &common.amplitude()?,
                *order,
                &grid.build(1e-6, 1e-3)?,
                &common.tolerance()?,
            )?,
            common,
        ),
        Command::VerifyDecay { common, grid } => (
            cmd_verify_decay(&common.alpha()?, &common.amplitude()?, &grid.build(1e2, 1e4)?, &common.tolerance()?)?,
            common,
        ),
        Command::Laplace { common, grid, order } => (
            cmd_laplace(
                &common.alpha()?,
                &common.amplitude()?,
                *order,
                &grid.build(1e-6, 1e-2)?,
                &common.tolerance()?,
            )?,
            common,
        ),
    };
    Ok(report)
}

fn emit(report: &ExperimentReport, common: &Common) -> Result<()> {
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command).and_then(|(report, common)| emit(&report, common).map(|_| report.verdict)) {
        Ok(verdict) => verdict.exit_code(),
        Err(e) => {
            eprintln!("singosc: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["singosc", "coeffs"]), 1);
        assert_eq!(run(["singosc", "coeffs", "--alpha", "x/2"]), 1);
        assert_eq!(run(["singosc", "frobnicate"]), 1);
        assert_eq!(run(["singosc", "coeffs", "--alpha", "1", "--alpha-irrational", "1.5"]), 1);
        assert_eq!(run(["singosc", "coeffs", "--alpha", "1", "--amplitude", "{\"coeffs\": 3}"]), 1);
    }
}
