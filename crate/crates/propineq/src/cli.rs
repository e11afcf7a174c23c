//! Command-line surface: `run` (JSON report), `figure` (measured-pattern CSV),
//! `sweep` (overlap-parameter CSV), and `verify` (pipeline self-checks).
//!
//! Configuration precedence: defaults, then `--config` file, then flags.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::analytic::{overlap, PatternProfile, StateSpec};
use crate::audit::{check_inequality, evaluate, AuditConfig, AuditReport, Diagnostics};
use crate::error::{Error, Result};
use crate::model::{matching_time, PhysicalScale};
use crate::spectral::{plan_aligned_grid, Grid, SampledWavefunction};
use crate::sweep::{sweep, SweepMode};

/// Audit a free-propagation probability inequality for slit and
/// momentum-filter wave packets.
#[derive(Debug, Parser)]
#[command(name = "propineq", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Audit one working point and emit a JSON report.
    Run(OutArgs),
    /// Emit measured-pattern CSV data for the default figure.
    Figure(OutArgs),
    /// Sweep the overlap parameter and emit CSV rows.
    Sweep(SweepArgs),
    /// Self-check the numerical pipeline; nonzero exit if any check fails.
    Verify(CommonArgs),
}

#[derive(Debug, Args, Clone, Default)]
struct CommonArgs {
    /// Working point BL / (2 pi hbar).
    #[arg(long = "bl")]
    bl: Option<f64>,
    /// Requested grid size; a power of two.
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    /// Requested half window, in slit widths.
    #[arg(long = "x-extent")]
    x_extent: Option<f64>,
    /// Stop refining when observables move less than this between levels.
    #[arg(long = "convergence-tol")]
    convergence_tol: Option<f64>,
    /// Cap on probability mass outside the window.
    #[arg(long = "truncation-threshold")]
    truncation_threshold: Option<f64>,
    /// JSON config file; explicit flags take precedence over it.
    #[arg(long = "config")]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OutArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Output path; stdout when absent.
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long = "u-min", default_value_t = 0.01)]
    u_min: f64,
    #[arg(long = "u-max", default_value_t = 0.25)]
    u_max: f64,
    #[arg(long = "steps", default_value_t = 25)]
    steps: usize,
    /// Run the full audit at every lattice point (slow).
    #[arg(long = "full")]
    full: bool,
    /// Output path; stdout when absent.
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

/// Keys accepted in a `--config` file; all optional, spelled as in the JSON
/// report. Unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(rename = "BL_over_2pi_hbar")]
    bl_over_2pi_hbar: Option<f64>,
    grid_n: Option<usize>,
    #[serde(rename = "x_extent_over_L")]
    x_extent_over_l: Option<f64>,
    convergence_tol: Option<f64>,
    truncation_threshold: Option<f64>,
}

fn effective_config(common: &CommonArgs) -> Result<AuditConfig> {
    let mut cfg = AuditConfig::default();
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config(format!("config file {}: {e}", path.display())))?;
        let file: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| Error::config(format!("config file {}: {e}", path.display())))?;
        if let Some(v) = file.bl_over_2pi_hbar {
            cfg.bl_over_2pi_hbar = v;
        }
        if let Some(v) = file.grid_n {
            cfg.grid_n = v;
        }
        if let Some(v) = file.x_extent_over_l {
            cfg.x_extent_over_l = v;
        }
        if let Some(v) = file.convergence_tol {
            cfg.convergence_tol = v;
        }
        if let Some(v) = file.truncation_threshold {
            cfg.truncation_threshold = v;
        }
    }
    if let Some(v) = common.bl {
        cfg.bl_over_2pi_hbar = v;
    }
    if let Some(v) = common.grid_n {
        cfg.grid_n = v;
    }
    if let Some(v) = common.x_extent {
        cfg.x_extent_over_l = v;
    }
    if let Some(v) = common.convergence_tol {
        cfg.convergence_tol = v;
    }
    if let Some(v) = common.truncation_threshold {
        cfg.truncation_threshold = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct ScaleConvention {
    units: &'static str,
    hbar: f64,
    mass: f64,
    slit_width: f64,
}

impl ScaleConvention {
    fn reduced() -> Self {
        Self {
            units: "reduced",
            hbar: 1.0,
            mass: 1.0,
            slit_width: 1.0,
        }
    }
}

#[derive(Serialize)]
struct RunDocument<'a> {
    config: &'a AuditConfig,
    scale_convention: ScaleConvention,
    results: &'a AuditReport,
    diagnostics: &'a Diagnostics,
}

/// Parse `argv` and execute; returns the process exit code.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let scale = PhysicalScale::REDUCED;
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args, &scale),
        Command::Figure(args) => cmd_figure(args, &scale),
        Command::Sweep(args) => cmd_sweep(args, &scale),
        Command::Verify(common) => {
            return match cmd_verify(common, &scale) {
                Ok(code) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn cmd_run(args: &OutArgs, scale: &PhysicalScale) -> Result<()> {
    let cfg = effective_config(&args.common)?;
    let report = evaluate(&cfg.state(scale), &cfg, scale)?;
    let doc = RunDocument {
        config: &cfg,
        scale_convention: ScaleConvention::reduced(),
        results: &report,
        diagnostics: &report.diagnostics,
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    emit(&args.out, text.as_bytes())
}

#[derive(Debug, Serialize)]
struct FigureRow {
    #[serde(rename = "x_over_L")]
    x_over_l: f64,
    #[serde(rename = "density_times_L")]
    density_times_l: f64,
    #[serde(rename = "analytic_density_times_L")]
    analytic_density_times_l: f64,
    #[serde(rename = "envelope_times_L")]
    envelope_times_l: f64,
    #[serde(rename = "rect_times_L")]
    rect_times_l: f64,
}

/// Linear interpolation of the sampled position density at `x`.
fn interpolate_density(psi: &SampledWavefunction, x: f64) -> f64 {
    let grid = psi.grid();
    let n = grid.n();
    let pos = x / grid.dx() + (n / 2) as f64;
    let j0 = (pos.floor().max(0.0) as usize).min(n - 2);
    let frac = (pos - j0 as f64).clamp(0.0, 1.0);
    let amps = psi.amplitudes();
    let lo = amps[j0].norm_sqr();
    let hi = amps[j0 + 1].norm_sqr();
    lo + frac * (hi - lo)
}

/// The figure lattice and all four density columns at the matching time.
/// The numeric column uses the planned base grid without refinement.
fn figure_rows(cfg: &AuditConfig, scale: &PhysicalScale) -> Result<Vec<FigureRow>> {
    let state = cfg.state(scale);
    let (l_width, b_width) = match state {
        StateSpec::EqualSuperposition { l_width, b_width } => (l_width, b_width),
        _ => return Err(Error::config("figure needs the superposition state")),
    };
    let s = overlap(l_width, b_width, scale)?;
    let plan = plan_aligned_grid(
        l_width,
        b_width,
        s,
        cfg.grid_n,
        cfg.x_extent_over_l * l_width,
        cfg.truncation_threshold,
        scale,
    )?;
    let grid = Grid::new(plan.n, plan.x_extent, *scale)?;
    let t_match = matching_time(l_width, b_width, scale)?;
    let psi = SampledWavefunction::discretize(&state, grid)?.free_propagate(t_match)?;
    let profile = PatternProfile::new(s, b_width, scale)?;

    let mut rows = Vec::with_capacity(2401);
    for j in 0..=2400u32 {
        let x_over_l = f64::from(j) / 100.0 - 12.0;
        let x = x_over_l * l_width;
        rows.push(FigureRow {
            x_over_l,
            density_times_l: interpolate_density(&psi, x) * l_width,
            analytic_density_times_l: profile.density(x) * l_width,
            envelope_times_l: profile.envelope(x) * l_width,
            rect_times_l: if x_over_l.abs() <= 1.0 { s / 2.0 } else { 0.0 },
        });
    }
    Ok(rows)
}

fn cmd_figure(args: &OutArgs, scale: &PhysicalScale) -> Result<()> {
    let cfg = effective_config(&args.common)?;
    let rows = figure_rows(&cfg, scale)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        writer.serialize(row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Format(e.to_string()))?;
    emit(&args.out, &bytes)
}

fn cmd_sweep(args: &SweepArgs, scale: &PhysicalScale) -> Result<()> {
    let cfg = effective_config(&args.common)?;
    let mode = if args.full {
        SweepMode::Full
    } else {
        SweepMode::Analytic
    };
    let rows = sweep(args.u_min, args.u_max, args.steps, mode, &cfg, scale)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        writer.serialize(row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Format(e.to_string()))?;
    emit(&args.out, &bytes)
}

/// Threshold for the coarse smoke grid used by the cheap `verify` checks.
const SMOKE_TAIL_THRESHOLD: f64 = 1e-2;

fn cmd_verify(common: &CommonArgs, scale: &PhysicalScale) -> Result<i32> {
    let cfg = effective_config(common)?;
    let state = cfg.state(scale);
    let (l_width, b_width) = match state {
        StateSpec::EqualSuperposition { l_width, b_width } => (l_width, b_width),
        _ => unreachable!("cfg.state is always the superposition"),
    };
    let mut all_pass = true;
    let mut check = |name: &str, pass: bool, detail: String| {
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        all_pass &= pass;
    };

    let s = overlap(l_width, b_width, scale)?;
    let plan = plan_aligned_grid(
        l_width,
        b_width,
        s,
        1 << 14,
        cfg.x_extent_over_l * l_width,
        SMOKE_TAIL_THRESHOLD.max(cfg.truncation_threshold),
        scale,
    )?;
    let grid = Grid::new(plan.n, plan.x_extent, *scale)?;
    let psi = SampledWavefunction::discretize(&state, grid)?;
    let drift = (psi.norm() - 1.0).abs();
    check("norm_unit", drift < 1e-12, format!("|norm - 1| = {drift:.2e}"));
    let drift = (psi.to_momentum().norm() - 1.0).abs();
    check(
        "parseval",
        drift < 1e-12,
        format!("momentum-space |norm - 1| = {drift:.2e}"),
    );
    let t_match = matching_time(l_width, b_width, scale)?;
    let drift = (psi.free_propagate(1.75 * t_match)?.norm() - 1.0).abs();
    check(
        "unitarity",
        drift < 1e-12,
        format!("|norm - 1| after propagation = {drift:.2e}"),
    );

    let report = evaluate(&state, &cfg, scale)?;
    let eps = 1e-9;
    let probes = [
        ("P_L", report.p_l),
        ("P_B", report.p_b),
        ("P_M", report.p_m),
    ];
    let in_range = probes
        .iter()
        .all(|(_, p)| (-eps..=1.0 + eps).contains(p));
    check(
        "probability_range",
        in_range,
        probes
            .iter()
            .map(|(n, p)| format!("{n} = {p:.6}"))
            .collect::<Vec<_>>()
            .join(", "),
    );
    let marginal = report.analytic_p_l_b;
    let dl = (report.p_l - marginal).abs();
    let db = (report.p_b - marginal).abs();
    check(
        "marginal_consistency",
        dl <= 5e-3 && db <= 5e-3,
        format!("|P_L - (1+s)/2| = {dl:.2e}, |P_B - (1+s)/2| = {db:.2e}"),
    );
    let reconstructed = report.p_l + report.p_b - 1.0 - report.p_m;
    check(
        "defect_identity",
        report.defect == reconstructed,
        format!("defect = {:.6e}", report.defect),
    );
    let truncated = report.diagnostics.truncated_mass;
    check(
        "truncation_within_threshold",
        truncated <= cfg.truncation_threshold,
        format!(
            "truncated mass {truncated:.2e} vs threshold {:.2e}",
            cfg.truncation_threshold
        ),
    );
    let margin = report.diagnostics.margin;
    check(
        "resolvability",
        margin < report.bound,
        format!("margin {margin:.2e} vs bound {:.4}", report.bound),
    );
    check(
        "verdict_consistency",
        report.verdict == check_inequality(report.p_m, report.bound, margin),
        format!("verdict = {}", report.verdict),
    );

    Ok(if all_pass { 0 } else { 1 })
}
