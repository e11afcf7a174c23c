//! The inequality audit: measure `P(L)`, `P(B)`, and the classical-interval
//! probability `P(M)` for a source state, refine until the corrected observables
//! settle, and compare `P(M)` against `max(0, P(L) + P(B) - 1)`.
//!
//! Refinement alternates two grid moves starting from the planned grid: sharpen
//! (`n -> 2n`, cells per slit `q -> 2q - 1`, window nearly fixed) and extend
//! (`n -> 2n`, `q` fixed, window doubled), sharpen first. The convergence driver
//! watches truncation-corrected observables `P/(1 + truncated_mass)` so that the
//! deltas measure discretization error alone; the window-truncation bias enters
//! the verdict margin separately, through the truncated mass itself.

use serde::Serialize;

use crate::analytic::{
    envelope_pm_bound, overlap, required_pm, StateSpec,
};
use crate::error::{Error, Result};
use crate::model::{classical_bound_interval, matching_time, Interval, PhysicalScale};
use crate::spectral::{
    converge, plan_aligned_grid, ConvergencePolicy, Grid, PlannedGrid, SampledWavefunction,
    MAX_GRID_N, MIN_GRID_N,
};

pub const DEFAULT_BL_OVER_2PI_HBAR: f64 = 0.024;
pub const MAX_REFINE_LEVELS: u32 = 8;
/// Late-time factor for the far-field proxy diagnostic.
pub const PROXY_TIME_OVER_T_MATCH: f64 = 100.0;

/// Numerics and working-point knobs, mirroring the CLI surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditConfig {
    #[serde(rename = "BL_over_2pi_hbar")]
    pub bl_over_2pi_hbar: f64,
    pub grid_n: usize,
    #[serde(rename = "x_extent_over_L")]
    pub x_extent_over_l: f64,
    pub convergence_tol: f64,
    pub truncation_threshold: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            bl_over_2pi_hbar: DEFAULT_BL_OVER_2PI_HBAR,
            grid_n: 1 << 18,
            x_extent_over_l: 400.0,
            convergence_tol: 1e-5,
            truncation_threshold: 1e-4,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.bl_over_2pi_hbar.is_finite() && self.bl_over_2pi_hbar > 0.0) {
            return Err(Error::config("BL_over_2pi_hbar must be finite and positive"));
        }
        if !self.grid_n.is_power_of_two() || self.grid_n < MIN_GRID_N || self.grid_n > MAX_GRID_N
        {
            return Err(Error::config(format!(
                "grid_n must be a power of two in [2^10, 2^24], got {}",
                self.grid_n
            )));
        }
        if !(self.x_extent_over_l.is_finite() && self.x_extent_over_l > 0.0) {
            return Err(Error::config("x_extent_over_L must be finite and positive"));
        }
        if !(self.convergence_tol.is_finite() && self.convergence_tol > 0.0) {
            return Err(Error::config("convergence_tol must be finite and positive"));
        }
        if !(self.truncation_threshold.is_finite()
            && self.truncation_threshold > 0.0
            && self.truncation_threshold < 1.0)
        {
            return Err(Error::config(
                "truncation_threshold must be finite and inside (0, 1)",
            ));
        }
        Ok(())
    }

    /// The equal superposition at this working point, in reduced units `l = 1`.
    pub fn state(&self, scale: &PhysicalScale) -> StateSpec {
        StateSpec::EqualSuperposition {
            l_width: 1.0,
            b_width: self.bl_over_2pi_hbar * std::f64::consts::TAU * scale.hbar,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Satisfied,
    Violated,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Satisfied => write!(f, "satisfied"),
            Verdict::Violated => write!(f, "violated"),
        }
    }
}

/// One refinement level of the audit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LevelDiag {
    pub level: u32,
    pub grid_n: usize,
    pub cells_per_slit: usize,
    #[serde(rename = "x_extent_over_L")]
    pub x_extent_over_l: f64,
    pub truncated_mass: f64,
    /// Max abs change of the corrected observables vs the previous level.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Diagnostics {
    pub truncated_mass: f64,
    pub convergence_delta: f64,
    pub convergence_levels: u32,
    pub grid_n: usize,
    pub cells_per_slit: usize,
    #[serde(rename = "x_extent_over_L")]
    pub x_extent_over_l: f64,
    pub margin: f64,
    pub levels: Vec<LevelDiag>,
    /// Interval probability inferred from a late-time position measurement; a
    /// far-field stand-in for `P_B`. Absent for single-condition states.
    #[serde(rename = "farfield_proxy_P_B", skip_serializing_if = "Option::is_none")]
    pub farfield_proxy_p_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farfield_proxy_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farfield_proxy_time_over_t_match: Option<f64>,
}

/// Audit outcome. Raw probabilities come from the stopping grid, renormalized to
/// the window; `defect` is exactly `P_L + P_B - 1 - P_M` and is signed.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub s: f64,
    #[serde(rename = "BL_over_2pi_hbar")]
    pub bl_over_2pi_hbar: f64,
    #[serde(rename = "P_L")]
    pub p_l: f64,
    #[serde(rename = "P_B")]
    pub p_b: f64,
    #[serde(rename = "P_M")]
    pub p_m: f64,
    /// Closed-form marginal `(1 + s)/2` of the equal superposition.
    #[serde(rename = "analytic_P_L_B")]
    pub analytic_p_l_b: f64,
    /// `max(0, P_L + P_B - 1)` from the measured marginals.
    pub bound: f64,
    #[serde(rename = "required_PM_analytic")]
    pub required_pm_analytic: f64,
    pub defect: f64,
    #[serde(rename = "envelope_PM_bound")]
    pub envelope_pm_bound: f64,
    pub verdict: Verdict,
    #[serde(skip)]
    pub diagnostics: Diagnostics,
}

/// `violated` iff `P_M < bound - margin`.
pub fn check_inequality(p_m: f64, bound: f64, margin: f64) -> Verdict {
    if p_m < bound - margin {
        Verdict::Violated
    } else {
        Verdict::Satisfied
    }
}

/// Grid at a refinement level: alternate sharpen and extend, sharpen first.
pub fn ladder_grid(base: &PlannedGrid, level: u32) -> (usize, usize) {
    let mut n = base.n;
    let mut q = base.cells_per_slit;
    for i in 0..level {
        n *= 2;
        if i % 2 == 0 {
            q = 2 * q - 1;
        }
    }
    (n, q)
}

struct LevelObservables {
    p_l: f64,
    p_b: f64,
    p_m: f64,
    truncated_mass: f64,
    diag: LevelDiag,
}

/// Run the full audit for a source state.
pub fn evaluate(
    state: &StateSpec,
    cfg: &AuditConfig,
    scale: &PhysicalScale,
) -> Result<AuditReport> {
    cfg.validate()?;
    state.validate()?;
    match *state {
        StateSpec::EqualSuperposition { l_width, b_width } => {
            evaluate_superposition(l_width, b_width, cfg, scale)
        }
        StateSpec::PositionSlit { l_width } => evaluate_pure_slit(l_width, cfg, scale),
        StateSpec::MomentumSlit { b_width } => evaluate_pure_filter(b_width, cfg, scale),
    }
}

fn evaluate_superposition(
    l_width: f64,
    b_width: f64,
    cfg: &AuditConfig,
    scale: &PhysicalScale,
) -> Result<AuditReport> {
    let s = overlap(l_width, b_width, scale)?;
    let t_match = matching_time(l_width, b_width, scale)?;
    let l_iv = Interval::centered(l_width)?;
    let b_iv = Interval::centered(b_width)?;
    let m_iv = classical_bound_interval(&l_iv, &b_iv, t_match, scale)?;
    let state = StateSpec::EqualSuperposition { l_width, b_width };

    let plan = plan_aligned_grid(
        l_width,
        b_width,
        s,
        cfg.grid_n,
        cfg.x_extent_over_l * l_width,
        cfg.truncation_threshold,
        scale,
    )?;

    let mut levels: Vec<LevelObservables> = Vec::new();
    let policy = ConvergencePolicy {
        tol: cfg.convergence_tol,
        max_levels: MAX_REFINE_LEVELS,
    };
    let conv = converge(&policy, |level| {
        let (n, q) = ladder_grid(&plan, level);
        if n > MAX_GRID_N {
            return Err(Error::convergence(format!(
                "level {level} needs grid_n = {n} beyond the 2^24 cap before \
                 reaching tol {:.1e}",
                cfg.convergence_tol
            )));
        }
        let x_extent = n as f64 * l_width / (2.0 * q as f64);
        let grid = Grid::new(n, x_extent, *scale)?;
        let psi0 = SampledWavefunction::discretize(&state, grid)?;
        let truncated_mass = psi0.truncated_mass();
        let p_l = psi0.interval_probability(&l_iv)?;
        let p_b = psi0.to_momentum().interval_probability(&b_iv)?;
        let p_m = psi0.free_propagate(t_match)?.interval_probability(&m_iv)?;
        levels.push(LevelObservables {
            p_l,
            p_b,
            p_m,
            truncated_mass,
            diag: LevelDiag {
                level,
                grid_n: n,
                cells_per_slit: q,
                x_extent_over_l: x_extent / l_width,
                truncated_mass,
                delta: None,
            },
        });
        let corr = 1.0 + truncated_mass;
        Ok(vec![p_l / corr, p_b / corr, p_m / corr])
    })?;

    let mut level_diags: Vec<LevelDiag> = levels.iter().map(|l| l.diag).collect();
    for (diag, rec) in level_diags.iter_mut().zip(&conv.history) {
        diag.delta = rec.delta;
    }
    let last = levels.last().expect("converge ran at least one level");
    let margin = conv.delta.max(cfg.convergence_tol) + last.truncated_mass;
    let bound = (last.p_l + last.p_b - 1.0).max(0.0);
    let verdict = check_inequality(last.p_m, bound, margin);

    // Far-field proxy: read the filter marginal off a late-time position
    // measurement over the ballistically scaled interval.
    let proxy_t = PROXY_TIME_OVER_T_MATCH * t_match;
    let proxy_iv = Interval::new(
        b_iv.center() * proxy_t / scale.mass,
        b_iv.width() * proxy_t / scale.mass,
    )?;
    let grid = Grid::new(last.diag.grid_n, last.diag.x_extent_over_l * l_width, *scale)?;
    let proxy = SampledWavefunction::discretize(&state, grid)?
        .free_propagate(proxy_t)?
        .interval_probability(&proxy_iv)?;

    Ok(AuditReport {
        s,
        bl_over_2pi_hbar: b_width * l_width / (std::f64::consts::TAU * scale.hbar),
        p_l: last.p_l,
        p_b: last.p_b,
        p_m: last.p_m,
        analytic_p_l_b: (1.0 + s) / 2.0,
        bound,
        required_pm_analytic: required_pm(s)?,
        defect: last.p_l + last.p_b - 1.0 - last.p_m,
        envelope_pm_bound: envelope_pm_bound(s)?,
        verdict,
        diagnostics: Diagnostics {
            truncated_mass: last.truncated_mass,
            convergence_delta: conv.delta,
            convergence_levels: conv.history.len() as u32,
            grid_n: last.diag.grid_n,
            cells_per_slit: last.diag.cells_per_slit,
            x_extent_over_l: last.diag.x_extent_over_l,
            margin,
            levels: level_diags,
            farfield_proxy_p_b: Some(proxy),
            farfield_proxy_gap: Some((proxy - last.p_b).abs()),
            farfield_proxy_time_over_t_match: Some(PROXY_TIME_OVER_T_MATCH),
        },
    })
}

// A single-condition state satisfies the inequality trivially: with only one
// marginal measured, the bound collapses to zero. The measurement interval
// degenerates to the state's own support at t = 0, so P_M = 1.
fn evaluate_pure_slit(
    l_width: f64,
    cfg: &AuditConfig,
    scale: &PhysicalScale,
) -> Result<AuditReport> {
    let q = 65usize;
    let n = cfg.grid_n;
    let x_extent = n as f64 * l_width / (2.0 * q as f64);
    let grid = Grid::new(n, x_extent, *scale)?;
    let psi = SampledWavefunction::discretize(&StateSpec::PositionSlit { l_width }, grid)?;
    let l_iv = Interval::centered(l_width)?;
    let p_l = psi.interval_probability(&l_iv)?;
    let p_m = psi.interval_probability(&l_iv)?;
    degenerate_report(0.0, p_l, 0.0, p_m, cfg, n, q, x_extent / l_width)
}

fn evaluate_pure_filter(
    b_width: f64,
    cfg: &AuditConfig,
    scale: &PhysicalScale,
) -> Result<AuditReport> {
    let mut n = cfg.grid_n;
    let mut x_extent = cfg
        .x_extent_over_l
        .max(64.0 * std::f64::consts::PI * scale.hbar / b_width);
    loop {
        let tail = crate::analytic::momentum_slit_tail_mass(b_width, x_extent, scale)?;
        if tail <= cfg.truncation_threshold {
            break;
        }
        if n >= MAX_GRID_N {
            return Err(Error::config(format!(
                "truncation threshold {:.1e} needs n > 2^24 for the filter state",
                cfg.truncation_threshold
            )));
        }
        n *= 2;
        x_extent *= 2.0;
    }
    let grid = Grid::new(n, x_extent, *scale)?;
    let psi = SampledWavefunction::discretize(&StateSpec::MomentumSlit { b_width }, grid)?;
    let p_b = psi
        .to_momentum()
        .interval_probability(&Interval::centered(b_width)?)?;
    let p_m = psi.norm();
    degenerate_report(0.0, 0.0, p_b, p_m, cfg, n, 0, x_extent)
}

#[allow(clippy::too_many_arguments)]
fn degenerate_report(
    s: f64,
    p_l: f64,
    p_b: f64,
    p_m: f64,
    cfg: &AuditConfig,
    grid_n: usize,
    cells_per_slit: usize,
    x_extent_over_l: f64,
) -> Result<AuditReport> {
    let bound = (p_l + p_b - 1.0).max(0.0);
    let margin = cfg.convergence_tol;
    Ok(AuditReport {
        s,
        bl_over_2pi_hbar: 0.0,
        p_l,
        p_b,
        p_m,
        analytic_p_l_b: 1.0,
        bound,
        required_pm_analytic: required_pm(s)?,
        defect: p_l + p_b - 1.0 - p_m,
        envelope_pm_bound: 0.0,
        verdict: check_inequality(p_m, bound, margin),
        diagnostics: Diagnostics {
            truncated_mass: 0.0,
            convergence_delta: 0.0,
            convergence_levels: 1,
            grid_n,
            cells_per_slit,
            x_extent_over_l,
            margin,
            levels: Vec::new(),
            farfield_proxy_p_b: None,
            farfield_proxy_gap: None,
            farfield_proxy_time_over_t_match: None,
        },
    })
}
