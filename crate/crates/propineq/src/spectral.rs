//! Exactly unitary free propagation on a periodic grid, with aligned-grid
//! planning, fractional-cell interval quadrature, and a refinement driver.
//!
//! The window is `[-X, X)` sampled at `n` points, `dx = 2X/n`. Momentum lives on
//! the symmetric lattice `p_k = (k - n/2) dp`, `dp = pi hbar / X`, reached by
//! conjugating the DFT with `(-1)^j`; no index rolling, and `p = 0` is always a
//! lattice point. Free evolution multiplies momentum bins by
//! `exp(-i p^2 t / (2 m hbar))`, which is unitary on the grid to rounding.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::analytic::{
    momentum_slit_tail_mass, overlap, psi_b_position, psi_l_position, superposition_coefficient,
    StateSpec,
};
use crate::error::{Error, Result};
use crate::model::{Interval, PhysicalScale};

pub const MIN_GRID_N: usize = 1 << 10;
pub const MAX_GRID_N: usize = 1 << 24;

/// Slit edges sit on cell boundaries whenever the cells-per-slit count is odd;
/// 65 is the smallest odd value satisfying `dx <= l/64`.
pub const MIN_CELLS_PER_SLIT: usize = 65;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    x_extent: f64,
    scale: PhysicalScale,
}

impl Grid {
    pub fn new(n: usize, x_extent: f64, scale: PhysicalScale) -> Result<Self> {
        if !n.is_power_of_two() || n < MIN_GRID_N {
            return Err(Error::config(format!(
                "grid_n must be a power of two >= {MIN_GRID_N}, got {n}"
            )));
        }
        if n > MAX_GRID_N {
            return Err(Error::config(format!(
                "grid_n must not exceed 2^24, got {n}"
            )));
        }
        if !(x_extent.is_finite() && x_extent > 0.0) {
            return Err(Error::config("x_extent must be finite and positive"));
        }
        Ok(Self { n, x_extent, scale })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_extent(&self) -> f64 {
        self.x_extent
    }

    pub fn scale(&self) -> &PhysicalScale {
        &self.scale
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.x_extent / self.n as f64
    }

    pub fn dp(&self) -> f64 {
        std::f64::consts::PI * self.scale.hbar / self.x_extent
    }

    /// Half-width of the momentum window, `(n/2) dp`.
    pub fn p_extent(&self) -> f64 {
        (self.n / 2) as f64 * self.dp()
    }

    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.dx()
    }

    pub fn p(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.dp()
    }
}

/// Grid produced by [`plan_aligned_grid`]: `x_extent = n l / (2 q)` with odd `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannedGrid {
    pub n: usize,
    pub cells_per_slit: usize,
    pub x_extent: f64,
}

fn round_to_odd(v: f64) -> usize {
    let k = ((v - 1.0) / 2.0).round();
    if k <= 0.0 {
        1
    } else {
        2 * k as usize + 1
    }
}

/// Pick a grid for the superposition state: odd cells-per-slit `q >= 65` (slit
/// edges on cell boundaries), `dp <= b/64`, and truncated mass at or below the
/// threshold. Starting from the requested `(n, x)` the planner doubles `n` as
/// needed, first spending any excess `q` above 65; `n` is capped at 2^24.
pub fn plan_aligned_grid(
    l_width: f64,
    b_width: f64,
    s: f64,
    n_request: usize,
    x_request: f64,
    truncation_threshold: f64,
    scale: &PhysicalScale,
) -> Result<PlannedGrid> {
    if !n_request.is_power_of_two() || n_request < MIN_GRID_N {
        return Err(Error::config(format!(
            "grid_n must be a power of two >= {MIN_GRID_N}, got {n_request}"
        )));
    }
    if !(x_request.is_finite() && x_request > 0.0) {
        return Err(Error::config("x_extent must be finite and positive"));
    }
    if !(truncation_threshold.is_finite() && truncation_threshold > 0.0) {
        return Err(Error::config("truncation_threshold must be finite and positive"));
    }
    let x_of = |n: usize, q: usize| n as f64 * l_width / (2.0 * q as f64);

    let mut q = round_to_odd(l_width * n_request as f64 / (2.0 * x_request))
        .max(MIN_CELLS_PER_SLIT);
    let mut n = n_request;

    // dp <= b/64 is x_extent >= 64 pi hbar / b.
    let x_floor = 64.0 * std::f64::consts::PI * scale.hbar / b_width;
    while x_of(n, q) < x_floor {
        n = grow(n, || {
            format!(
                "momentum resolution dp <= b/64 needs x_extent >= {x_floor:.3e} \
                 and therefore n > 2^24 at {q} cells per slit"
            )
        })?;
    }
    loop {
        let tail = momentum_slit_tail_mass(b_width, x_of(n, q), scale)? / (2.0 * (1.0 + s));
        if tail <= truncation_threshold {
            break;
        }
        if q > MIN_CELLS_PER_SLIT {
            q = round_to_odd(q as f64 / 2.0).max(MIN_CELLS_PER_SLIT);
        } else {
            n = grow(n, || {
                format!(
                    "truncation threshold {truncation_threshold:.1e} needs \
                     n > 2^24 at {MIN_CELLS_PER_SLIT} cells per slit"
                )
            })?;
        }
    }
    Ok(PlannedGrid {
        n,
        cells_per_slit: q,
        x_extent: x_of(n, q),
    })
}

fn grow(n: usize, msg: impl Fn() -> String) -> Result<usize> {
    if n >= MAX_GRID_N {
        return Err(Error::config(msg()));
    }
    Ok(n * 2)
}

/// Position-space samples of a state, with the analytically known probability
/// mass lost to the finite window.
#[derive(Debug, Clone)]
pub struct SampledWavefunction {
    grid: Grid,
    amps: Vec<Complex64>,
    truncated_mass: f64,
    time_tag: f64,
}

/// Momentum-space samples on the `p_k` lattice.
#[derive(Debug, Clone)]
pub struct MomentumSamples {
    grid: Grid,
    amps: Vec<Complex64>,
}

impl SampledWavefunction {
    /// Sample a source state on the grid and renormalize to unit mass inside the
    /// window. Preconditions: `dx <= l/64` and `dp <= b/64` for each width the
    /// state actually has, and the slit must fit inside the window.
    pub fn discretize(state: &StateSpec, grid: Grid) -> Result<Self> {
        state.validate()?;
        let scale = grid.scale;
        let (amps, truncated_mass) = match *state {
            StateSpec::PositionSlit { l_width } => {
                check_dx(&grid, l_width)?;
                check_window(&grid, l_width)?;
                let amps = sample(&grid, |x| Complex64::new(psi_l_position(x, l_width), 0.0));
                (amps, 0.0)
            }
            StateSpec::MomentumSlit { b_width } => {
                check_dp(&grid, b_width)?;
                let amps = sample(&grid, |x| {
                    Complex64::new(psi_b_position(x, b_width, &scale), 0.0)
                });
                let tail = momentum_slit_tail_mass(b_width, grid.x_extent, &scale)?;
                (amps, tail)
            }
            StateSpec::EqualSuperposition { l_width, b_width } => {
                check_dx(&grid, l_width)?;
                check_dp(&grid, b_width)?;
                check_window(&grid, l_width)?;
                let s = overlap(l_width, b_width, &scale)?;
                let c = superposition_coefficient(s)?;
                let amps = sample(&grid, |x| {
                    Complex64::new(
                        c * (psi_l_position(x, l_width) + psi_b_position(x, b_width, &scale)),
                        0.0,
                    )
                });
                let tail =
                    momentum_slit_tail_mass(b_width, grid.x_extent, &scale)? / (2.0 * (1.0 + s));
                (amps, tail)
            }
        };
        let mut out = Self {
            grid,
            amps,
            truncated_mass,
            time_tag: 0.0,
        };
        out.renormalize()?;
        Ok(out)
    }

    /// Wrap caller-supplied amplitudes, renormalizing to unit mass. The
    /// truncated mass is taken as zero; the caller owns that accounting.
    pub fn from_amplitudes(grid: Grid, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.n {
            return Err(Error::domain(format!(
                "amplitude count {} does not match grid_n {}",
                amps.len(),
                grid.n
            )));
        }
        let mut out = Self {
            grid,
            amps,
            truncated_mass: 0.0,
            time_tag: 0.0,
        };
        out.renormalize()?;
        Ok(out)
    }

    fn renormalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::domain("state has no mass inside the window"));
        }
        let inv = 1.0 / norm.sqrt();
        for a in &mut self.amps {
            *a *= inv;
        }
        Ok(())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    /// Accumulated propagation time since construction.
    pub fn time_tag(&self) -> f64 {
        self.time_tag
    }

    /// `sum |psi_j|^2 dx`.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    /// Free evolution by `t` (either sign): phase-multiply the momentum bins.
    pub fn free_propagate(&self, t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::domain("propagation time must be finite"));
        }
        let n = self.grid.n;
        let scale = self.grid.scale;
        let mut buf = self.amps.clone();
        alternate_signs(&mut buf);
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(n).process(&mut buf);
        let dp = self.grid.dp();
        let coef = t / (2.0 * scale.mass * scale.hbar);
        let half = (n / 2) as f64;
        for (k, a) in buf.iter_mut().enumerate() {
            let p = (k as f64 - half) * dp;
            *a *= Complex64::from_polar(1.0, -p * p * coef);
        }
        planner.plan_fft_inverse(n).process(&mut buf);
        let inv_n = 1.0 / n as f64;
        for a in &mut buf {
            *a *= inv_n;
        }
        alternate_signs(&mut buf);
        Ok(Self {
            grid: self.grid,
            amps: buf,
            truncated_mass: self.truncated_mass,
            time_tag: self.time_tag + t,
        })
    }

    /// Discrete momentum representation `phi_k = (-1)^k F[psi (-1)^j]_k dx / sqrt(2 pi hbar)`.
    /// Satisfies Parseval: `sum |phi_k|^2 dp = sum |psi_j|^2 dx` to rounding.
    pub fn to_momentum(&self) -> MomentumSamples {
        let n = self.grid.n;
        let mut buf = self.amps.clone();
        alternate_signs(&mut buf);
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let factor = self.grid.dx() / (std::f64::consts::TAU * self.grid.scale.hbar).sqrt();
        for a in &mut buf {
            *a *= factor;
        }
        alternate_signs(&mut buf);
        MomentumSamples {
            grid: self.grid,
            amps: buf,
        }
    }

    /// Probability in a position interval: full cells plus linear fractions of
    /// the two boundary cells. The interval must lie inside `[-X, X]`.
    pub fn interval_probability(&self, iv: &Interval) -> Result<f64> {
        let x = self.grid.x_extent;
        if iv.lo() < -x || iv.hi() > x {
            return Err(Error::domain(format!(
                "interval [{:.6e}, {:.6e}] extends outside the window [{:.6e}, {:.6e}]",
                iv.lo(),
                iv.hi(),
                -x,
                x
            )));
        }
        Ok(lattice_interval_mass(&self.amps, self.grid.dx(), iv.lo(), iv.hi()))
    }
}

impl MomentumSamples {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `sum |phi_k|^2 dp`.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dp()
    }

    /// Probability in a momentum interval, fractional boundary cells included.
    /// The interval must lie inside the momentum window.
    pub fn interval_probability(&self, iv: &Interval) -> Result<f64> {
        let p = self.grid.p_extent();
        if iv.lo() < -p || iv.hi() > p {
            return Err(Error::domain(format!(
                "interval [{:.6e}, {:.6e}] extends outside the momentum window \
                 [{:.6e}, {:.6e}]",
                iv.lo(),
                iv.hi(),
                -p,
                p
            )));
        }
        Ok(lattice_interval_mass(&self.amps, self.grid.dp(), iv.lo(), iv.hi()))
    }
}

fn sample(grid: &Grid, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
    (0..grid.n).map(|j| f(grid.x(j))).collect()
}

fn alternate_signs(buf: &mut [Complex64]) {
    for a in buf.iter_mut().skip(1).step_by(2) {
        *a = -*a;
    }
}

fn check_dx(grid: &Grid, l_width: f64) -> Result<()> {
    let dx = grid.dx();
    if dx > l_width / 64.0 {
        return Err(Error::config(format!(
            "dx = {dx:.6e} exceeds l/64 = {:.6e}; raise grid_n or shrink x_extent",
            l_width / 64.0
        )));
    }
    Ok(())
}

fn check_dp(grid: &Grid, b_width: f64) -> Result<()> {
    let dp = grid.dp();
    if dp > b_width / 64.0 {
        return Err(Error::config(format!(
            "dp = {dp:.6e} exceeds b/64 = {:.6e}; enlarge x_extent",
            b_width / 64.0
        )));
    }
    Ok(())
}

fn check_window(grid: &Grid, l_width: f64) -> Result<()> {
    if l_width / 2.0 >= grid.x_extent {
        return Err(Error::config(format!(
            "slit half-width {:.6e} does not fit inside x_extent {:.6e}",
            l_width / 2.0,
            grid.x_extent
        )));
    }
    Ok(())
}

fn lattice_interval_mass(amps: &[Complex64], spacing: f64, lo: f64, hi: f64) -> f64 {
    let n = amps.len();
    let half = (n / 2) as f64;
    let inv = 1.0 / spacing;
    let jmin = ((lo * inv + half - 0.5).floor().max(0.0)) as usize;
    let jmax = ((hi * inv + half + 0.5).ceil().min((n - 1) as f64)) as usize;
    let mut acc = 0.0;
    for (j, a) in amps.iter().enumerate().take(jmax + 1).skip(jmin) {
        let center = (j as f64 - half) * spacing;
        let cell_lo = center - 0.5 * spacing;
        let cell_hi = center + 0.5 * spacing;
        let frac = (cell_hi.min(hi) - cell_lo.max(lo)) * inv;
        if frac > 0.0 {
            acc += a.norm_sqr() * frac.min(1.0);
        }
    }
    acc * spacing
}

/// Stop when successive refinement levels agree to `tol` in every observable.
#[derive(Debug, Clone, Copy)]
pub struct ConvergencePolicy {
    pub tol: f64,
    pub max_levels: u32,
}

#[derive(Debug, Clone)]
pub struct LevelRecord {
    pub level: u32,
    pub values: Vec<f64>,
    /// Max abs difference to the previous level; `None` for level 0.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Convergence {
    pub values: Vec<f64>,
    pub delta: f64,
    pub history: Vec<LevelRecord>,
}

/// Drive `eval` over levels 0, 1, 2, ... until two successive observable vectors
/// agree within `tol`, or fail with the level history. The grid sequence behind
/// each level belongs to the closure.
pub fn converge<F>(policy: &ConvergencePolicy, mut eval: F) -> Result<Convergence>
where
    F: FnMut(u32) -> Result<Vec<f64>>,
{
    if !(policy.tol.is_finite() && policy.tol > 0.0) {
        return Err(Error::config("convergence tol must be finite and positive"));
    }
    if policy.max_levels < 2 {
        return Err(Error::config("convergence needs at least two levels"));
    }
    let mut prev = eval(0)?;
    let mut history = vec![LevelRecord {
        level: 0,
        values: prev.clone(),
        delta: None,
    }];
    for level in 1..policy.max_levels {
        let cur = eval(level)?;
        if cur.len() != prev.len() {
            return Err(Error::domain(
                "convergence closure changed its observable count between levels",
            ));
        }
        let delta = cur
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        history.push(LevelRecord {
            level,
            values: cur.clone(),
            delta: Some(delta),
        });
        if delta < policy.tol {
            return Ok(Convergence {
                values: cur,
                delta,
                history,
            });
        }
        prev = cur;
    }
    let trail = history
        .iter()
        .map(|r| match r.delta {
            Some(d) => format!("level {}: delta {d:.3e}", r.level),
            None => format!("level {}: baseline", r.level),
        })
        .collect::<Vec<_>>()
        .join("; ");
    Err(Error::convergence(format!(
        "no convergence to {:.1e} after {} levels ({trail})",
        policy.tol, policy.max_levels
    )))
}
