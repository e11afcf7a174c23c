//! Closed-form state algebra for the slit state |L>, the momentum-filter state |B>,
//! their equal superposition, and the far-field interference pattern.
//!
//! Conventions: the slit has full width `l` centered at the origin, the filter has
//! full momentum width `b` centered at zero momentum. The single dimensionless knob
//! is `u = b l / (4 hbar)`; the overlap `s = <L|B> = sqrt(2/(pi u)) Si(u)` is real.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::PhysicalScale;
use crate::specfun::{sinc, sine_integral};

/// State prepared by the source: a pure slit, a pure filter, or the equal
/// superposition of both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    PositionSlit { l_width: f64 },
    MomentumSlit { b_width: f64 },
    EqualSuperposition { l_width: f64, b_width: f64 },
}

impl StateSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = |w: f64| w.is_finite() && w > 0.0;
        match *self {
            StateSpec::PositionSlit { l_width } => {
                if !ok(l_width) {
                    return Err(Error::domain("slit width must be finite and positive"));
                }
            }
            StateSpec::MomentumSlit { b_width } => {
                if !ok(b_width) {
                    return Err(Error::domain("filter width must be finite and positive"));
                }
            }
            StateSpec::EqualSuperposition { l_width, b_width } => {
                if !ok(l_width) || !ok(b_width) {
                    return Err(Error::domain(
                        "slit and filter widths must be finite and positive",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Slit state in position space: `1/sqrt(l)` inside, half that on the edges.
pub fn psi_l_position(x: f64, l_width: f64) -> f64 {
    let a = 1.0 / l_width.sqrt();
    let d = x.abs() - l_width / 2.0;
    if d.abs() <= 1e-12 * l_width {
        0.5 * a
    } else if d < 0.0 {
        a
    } else {
        0.0
    }
}

/// Filter state in position space: `sqrt(b/(2 pi hbar)) sinc(b x / (2 hbar))`.
pub fn psi_b_position(x: f64, b_width: f64, scale: &PhysicalScale) -> f64 {
    let two_hbar = 2.0 * scale.hbar;
    (b_width / (std::f64::consts::TAU * scale.hbar)).sqrt() * sinc(b_width * x / two_hbar)
}

/// Slit state in momentum space: `sqrt(l/(2 pi hbar)) sinc(l p / (2 hbar))`.
pub fn psi_l_momentum(p: f64, l_width: f64, scale: &PhysicalScale) -> f64 {
    let two_hbar = 2.0 * scale.hbar;
    (l_width / (std::f64::consts::TAU * scale.hbar)).sqrt() * sinc(l_width * p / two_hbar)
}

/// Filter state in momentum space: `1/sqrt(b)` inside, half that on the edges.
pub fn psi_b_momentum(p: f64, b_width: f64) -> f64 {
    psi_l_position(p, b_width)
}

/// Dimensionless slit/filter product `u = b l / (4 hbar)`.
pub fn overlap_parameter(l_width: f64, b_width: f64, scale: &PhysicalScale) -> f64 {
    b_width * l_width / (4.0 * scale.hbar)
}

/// Overlap `s(u) = sqrt(2/(pi u)) Si(u)`, strictly increasing on (0, 1].
pub fn overlap_of_parameter(u: f64) -> Result<f64> {
    if !(u.is_finite() && u > 0.0) {
        return Err(Error::domain("overlap parameter must be finite and positive"));
    }
    let si = sine_integral(u)?;
    Ok((2.0 / (std::f64::consts::PI * u)).sqrt() * si.value)
}

/// Overlap `<L|B>` of the two single-condition states.
pub fn overlap(l_width: f64, b_width: f64, scale: &PhysicalScale) -> Result<f64> {
    overlap_of_parameter(overlap_parameter(l_width, b_width, scale))
}

/// Inverse of [`overlap_of_parameter`] on its monotone range `u` in (0, 1].
/// Bisection in `sqrt(u)`, where the map is uniformly well conditioned; the
/// returned `u` reproduces `s` to better than 1e-12.
pub fn invert_overlap(s: f64) -> Result<f64> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::domain("overlap must be finite and positive"));
    }
    let s_max = overlap_of_parameter(1.0)?;
    if s > s_max + 1e-14 {
        return Err(Error::domain(format!(
            "overlap {s} exceeds the attainable range (0, {s_max:.12}] for u <= 1"
        )));
    }
    if s >= s_max {
        return Ok(1.0);
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..100 {
        let v = 0.5 * (lo + hi);
        let u = v * v;
        let mid = if u == 0.0 { 0.0 } else { overlap_of_parameter(u)? };
        if mid < s {
            lo = v;
        } else {
            hi = v;
        }
    }
    let v = 0.5 * (lo + hi);
    Ok(v * v)
}

/// Normalization `1/sqrt(2 (1 + s))` of the equal superposition.
pub fn superposition_coefficient(s: f64) -> Result<f64> {
    require_overlap(s)?;
    Ok(1.0 / (2.0 * (1.0 + s)).sqrt())
}

/// Both detection marginals of the equal superposition: `P(L) = P(B) = (1 + s)/2`.
pub fn marginal_probabilities(s: f64) -> Result<(f64, f64)> {
    require_overlap(s)?;
    let p = (1.0 + s) / 2.0;
    Ok((p, p))
}

/// The inequality's requirement on the interval probability: `P(L) + P(B) - 1 = s`.
pub fn required_pm(s: f64) -> Result<f64> {
    require_overlap(s)?;
    Ok(s)
}

/// Far-field form of the evolved slit state. Valid only past the far-field time
/// `m l^2 / (2 pi hbar)`.
pub fn psi_l_farfield(
    x: f64,
    t: f64,
    l_width: f64,
    scale: &PhysicalScale,
) -> Result<Complex64> {
    if !(l_width.is_finite() && l_width > 0.0) {
        return Err(Error::domain("slit width must be finite and positive"));
    }
    let t_ff = scale.mass * l_width * l_width / (std::f64::consts::TAU * scale.hbar);
    if !(t.is_finite() && t > t_ff) {
        return Err(Error::domain(format!(
            "far-field form requires t > {t_ff:.6e}, got {t:.6e}"
        )));
    }
    let m = scale.mass;
    let hbar = scale.hbar;
    let amp = (m * l_width / (std::f64::consts::TAU * hbar * t)).sqrt()
        * sinc(m * l_width * x / (2.0 * hbar * t));
    let phase = m * x * x / (2.0 * hbar * t) - std::f64::consts::FRAC_PI_4;
    Ok(amp * Complex64::from_polar(1.0, phase))
}

/// Matching-time interference pattern and envelope, precomputed for bulk sampling.
///
/// The slit width is recovered from `(s, b)` through [`invert_overlap`], so the
/// profile is fully determined by the overlap and the filter width.
#[derive(Debug, Clone, Copy)]
pub struct PatternProfile {
    s: f64,
    u: f64,
    l_width: f64,
    inv_two_hbar_b: f64,
    prefactor: f64,
}

impl PatternProfile {
    pub fn new(s: f64, b_width: f64, scale: &PhysicalScale) -> Result<Self> {
        if !(b_width.is_finite() && b_width > 0.0) {
            return Err(Error::domain("filter width must be finite and positive"));
        }
        let u = invert_overlap(s)?;
        let l_width = 4.0 * scale.hbar * u / b_width;
        Ok(Self {
            s,
            u,
            l_width,
            inv_two_hbar_b: b_width / (2.0 * scale.hbar),
            prefactor: 2.0 * s * s / ((1.0 + s) * l_width),
        })
    }

    pub fn slit_width(&self) -> f64 {
        self.l_width
    }

    /// Density at the matching time: envelope times the chirped fringe factor
    /// `cos^2(z^2/(4u) - pi/8)` with `z = b x / (2 hbar)`.
    pub fn density(&self, x: f64) -> f64 {
        let z = self.inv_two_hbar_b * x;
        let chirp = z * z / (4.0 * self.u) - std::f64::consts::FRAC_PI_8;
        let c = chirp.cos();
        self.envelope(x) * c * c
    }

    /// Fringe envelope `2 s^2/((1+s) l) sinc^2(z)`.
    pub fn envelope(&self, x: f64) -> f64 {
        let z = self.inv_two_hbar_b * x;
        let sc = sinc(z);
        self.prefactor * sc * sc
    }

    pub fn overlap(&self) -> f64 {
        self.s
    }
}

/// Interference term density of the matched superposition at the matching time.
pub fn pattern_density(x: f64, s: f64, b_width: f64, scale: &PhysicalScale) -> Result<f64> {
    Ok(PatternProfile::new(s, b_width, scale)?.density(x))
}

/// Envelope of [`pattern_density`] with the fringe factor set to 1.
pub fn envelope_density(x: f64, s: f64, b_width: f64, scale: &PhysicalScale) -> Result<f64> {
    Ok(PatternProfile::new(s, b_width, scale)?.envelope(x))
}

/// Envelope-integral ceiling on the interval probability: `4 s^2 / (1 + s)`.
pub fn envelope_pm_bound(s: f64) -> Result<f64> {
    require_overlap(s)?;
    Ok(4.0 * s * s / (1.0 + s))
}

/// Guaranteed defect `s - 4 s^2/(1+s)`: requirement minus the envelope ceiling.
pub fn defect_lower_bound(s: f64) -> Result<f64> {
    require_overlap(s)?;
    Ok(s - 4.0 * s * s / (1.0 + s))
}

/// Overlap maximizing [`defect_lower_bound`]: the positive root of
/// `3 s^2 + 6 s - 1 = 0`, namely `2/sqrt(3) - 1`.
pub fn optimal_overlap() -> f64 {
    2.0 / 3.0f64.sqrt() - 1.0
}

/// Probability mass of the filter state outside the window `[-x_extent, x_extent]`:
/// `(2/pi) (sin^2(z)/z + pi/2 - Si(2z))` with `z = b x_extent / (2 hbar)`.
pub fn momentum_slit_tail_mass(
    b_width: f64,
    x_extent: f64,
    scale: &PhysicalScale,
) -> Result<f64> {
    if !(b_width.is_finite() && b_width > 0.0) {
        return Err(Error::domain("filter width must be finite and positive"));
    }
    if !(x_extent.is_finite() && x_extent > 0.0) {
        return Err(Error::domain("window half-width must be finite and positive"));
    }
    let z = b_width * x_extent / (2.0 * scale.hbar);
    let si_2z = sine_integral(2.0 * z)?.value;
    let s2 = z.sin().powi(2);
    let tail = (2.0 / std::f64::consts::PI)
        * (s2 / z + std::f64::consts::FRAC_PI_2 - si_2z);
    // The closed form is exact; clamp the rounding residue at large z.
    Ok(tail.max(0.0))
}

fn require_overlap(s: f64) -> Result<()> {
    if !(s.is_finite() && (0.0..=1.0).contains(&s)) {
        return Err(Error::domain("overlap must lie in [0, 1]"));
    }
    Ok(())
}
