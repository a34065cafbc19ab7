use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qfeedback_cli::{run_report, sweep, traces, validation, SweepSpec};
use qfeedback_core::trajectory::{uniform_grid, DEFAULT_SAMPLES_PER_STAGE};
use qfeedback_core::{Axis, Mode, ProtocolConfig};

#[derive(Parser)]
#[command(
    name = "qfeedback",
    version,
    about = "Thermodynamics of qubit feedback control"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single protocol run: stage entropies and the thermodynamic ledger.
    Run(RunArgs),
    /// Efficiencies and final purities over a range of measurement strengths.
    Sweep(SweepArgs),
    /// Mutual information along the measurement and feedback legs.
    Trajectory(TrajectoryArgs),
    /// Compare the engine with the closed forms over a parameter grid.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    X,
    Z,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::X => Axis::X,
            AxisArg::Z => Axis::Z,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Coherent,
    Explicit,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Coherent => Mode::Coherent,
            ModeArg::Explicit => Mode::Explicit,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepPreset {
    Fig3,
}

#[derive(Clone, Copy, ValueEnum)]
enum TrajectoryPreset {
    Fig4,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; `-` or absent for stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) if p.as_os_str() != "-" => {
                fs::write(p, text).with_context(|| format!("writing {}", p.display()))
            }
            _ => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    theta: f64,
    #[arg(long, value_enum, default_value = "x")]
    axis: AxisArg,
    #[arg(long, value_enum, default_value = "coherent")]
    mode: ModeArg,
    #[arg(long = "kT", default_value_t = 1.0)]
    kt: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepArgs {
    /// α = 0.4, λ = 0.8, θ ∈ [0.01, π/2] in 200 steps.
    #[arg(long, value_enum)]
    preset: Option<SweepPreset>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Mode of the z-protocol; the x-protocol is always run both ways.
    #[arg(long, value_enum, default_value = "explicit")]
    mode: ModeArg,
    #[arg(long = "kT", default_value_t = 1.0)]
    kt: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct TrajectoryArgs {
    /// θ = π/4, α = 0.4, λ = 0.8, coherent.
    #[arg(long, value_enum)]
    preset: Option<TrajectoryPreset>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, value_enum, default_value = "coherent")]
    mode: ModeArg,
    /// Samples per leg.
    #[arg(long, default_value_t = DEFAULT_SAMPLES_PER_STAGE)]
    steps: usize,
    #[arg(long = "kT", default_value_t = 1.0)]
    kt: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ValidateArgs {
    /// θ points over [0.05, π/2].
    #[arg(long, default_value_t = 40)]
    theta_steps: usize,
    /// α points over [0.1, 0.9].
    #[arg(long, default_value_t = 5)]
    alpha_steps: usize,
    /// λ points over [α, 0.95].
    #[arg(long, default_value_t = 5)]
    lambda_steps: usize,
    #[arg(long, hide = true, default_value_t = 1.0)]
    corrupt_theta_scale: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Bad flag values; exit status 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn required(value: Option<f64>, flag: &str) -> Result<f64> {
    value.ok_or_else(|| usage(format!("--{flag} is required without --preset")))
}

fn warn(config: &ProtocolConfig) {
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }
}

fn cmd_run(a: RunArgs) -> Result<ExitCode> {
    let config =
        ProtocolConfig::new(a.alpha, a.lambda, a.theta, a.axis.into(), a.mode.into()).with_kt(a.kt);
    config.validate()?;
    warn(&config);
    let report = run_report(&config)?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    a.output.write(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(a: SweepArgs) -> Result<ExitCode> {
    let (alpha, lambda, spec) = match a.preset {
        Some(SweepPreset::Fig3) => {
            let d = SweepSpec::fig3();
            (
                a.alpha.unwrap_or(0.4),
                a.lambda.unwrap_or(0.8),
                SweepSpec::new(
                    a.start.unwrap_or(d.start),
                    a.stop.unwrap_or(d.stop),
                    a.steps.unwrap_or(d.steps),
                )?,
            )
        }
        None => (
            required(a.alpha, "alpha")?,
            required(a.lambda, "lambda")?,
            SweepSpec::new(
                a.start.unwrap_or(0.0),
                a.stop.unwrap_or(FRAC_PI_2),
                a.steps.unwrap_or(200),
            )?,
        ),
    };
    let probe =
        ProtocolConfig::new(alpha, lambda, spec.start, Axis::X, a.mode.into()).with_kt(a.kt);
    probe.validate()?;
    probe.with_theta(spec.stop).validate()?;
    if lambda < alpha {
        warn(&probe);
    }
    let rows = sweep::sweep(alpha, lambda, a.kt, a.mode.into(), &spec)?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep::to_csv(&rows),
        Format::Json => sweep::to_json(&rows),
    };
    a.output.write(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_trajectory(a: TrajectoryArgs) -> Result<ExitCode> {
    let (alpha, lambda, theta) = match a.preset {
        Some(TrajectoryPreset::Fig4) => (
            a.alpha.unwrap_or(0.4),
            a.lambda.unwrap_or(0.8),
            a.theta.unwrap_or(FRAC_PI_4),
        ),
        None => (
            required(a.alpha, "alpha")?,
            required(a.lambda, "lambda")?,
            required(a.theta, "theta")?,
        ),
    };
    let config = ProtocolConfig::new(alpha, lambda, theta, Axis::X, a.mode.into()).with_kt(a.kt);
    config.validate()?;
    warn(&config);
    warn(&config.with_axis(Axis::Z));
    let rows = traces::trajectory_table(alpha, lambda, theta, a.mode.into(), a.kt, a.steps)?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => traces::to_csv(&rows),
        Format::Json => traces::to_json(&rows),
    };
    a.output.write(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(a: ValidateArgs) -> Result<ExitCode> {
    if a.theta_steps < 2 || a.alpha_steps < 2 || a.lambda_steps < 1 {
        return Err(usage(
            "grid needs at least 2 theta and alpha points and 1 lambda point",
        ));
    }
    if !(a.corrupt_theta_scale.is_finite() && a.corrupt_theta_scale >= 0.0) {
        return Err(usage(
            "--corrupt-theta-scale must be finite and non-negative",
        ));
    }
    let grid = validation::ValidationGrid {
        thetas: uniform_grid(0.05, FRAC_PI_2, a.theta_steps),
        alphas: uniform_grid(0.1, 0.9, a.alpha_steps),
        lambda_max: 0.95,
        lambda_steps: a.lambda_steps,
    };
    let hook = validation::EngineHook {
        theta_scale: a.corrupt_theta_scale,
    };
    let summary = validation::validate_grid(&grid, hook);
    let output = Output {
        format: None,
        out: a.out,
    };
    output.write(&summary.to_string())?;
    if summary.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "validation failed: {} offending checks",
            summary.offenders.len()
        );
        Ok(ExitCode::from(1))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Trajectory(a) => cmd_trajectory(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let invalid_value = e.downcast_ref::<Usage>().is_some()
                || matches!(
                    e.downcast_ref::<qfeedback_core::Error>(),
                    Some(qfeedback_core::Error::InvalidParameter { .. })
                );
            ExitCode::from(if invalid_value { 2 } else { 1 })
        }
    }
}
