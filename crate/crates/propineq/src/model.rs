//! Kinematics shared by every other module: units, intervals, classical transport,
//! and the characteristic timescales of a slit/filter pair.

use crate::error::{Error, Result};

/// Unit system threaded through every formula that contains `hbar` or the mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScale {
    pub hbar: f64,
    pub mass: f64,
}

impl PhysicalScale {
    /// Reduced units, `hbar = m = 1`.
    pub const REDUCED: Self = Self { hbar: 1.0, mass: 1.0 };

    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::domain("hbar must be finite and positive"));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::domain("mass must be finite and positive"));
        }
        Ok(Self { hbar, mass })
    }
}

/// Closed interval, stored as center and full width. Width must be positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    center: f64,
    width: f64,
}

impl Interval {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !(center.is_finite() && width.is_finite()) {
            return Err(Error::domain("interval center and width must be finite"));
        }
        if width <= 0.0 {
            return Err(Error::domain("interval width must be positive"));
        }
        Ok(Self { center, width })
    }

    pub fn centered(width: f64) -> Result<Self> {
        Self::new(0.0, width)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn half_width(&self) -> f64 {
        self.width / 2.0
    }

    pub fn lo(&self) -> f64 {
        self.center - self.half_width()
    }

    pub fn hi(&self) -> f64 {
        self.center + self.half_width()
    }

    /// Closed-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        self.lo() <= x && x <= self.hi()
    }
}

/// The three timescales of a slit of width `l` paired with a momentum filter of
/// width `b`. They satisfy `t_farfield_l * t_nearfield_b = t_match^2` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timescales {
    /// `m l / b`: slit and filter spreading rates coincide.
    pub t_match: f64,
    /// `m l^2 / (2 pi hbar)`: the slit state enters its far-field regime.
    pub t_farfield_l: f64,
    /// `2 pi hbar m / b^2`: the filter state stays near-field until here.
    pub t_nearfield_b: f64,
}

/// Position reached by classical straight-line motion.
pub fn straight_line_position(x0: f64, p: f64, t: f64, scale: &PhysicalScale) -> f64 {
    x0 + p * t / scale.mass
}

/// Support of straight-line motion that starts anywhere in `l` with any momentum in
/// `b`, transported forward by `t`. Backward transport is rejected.
pub fn classical_bound_interval(
    l: &Interval,
    b: &Interval,
    t: f64,
    scale: &PhysicalScale,
) -> Result<Interval> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain("classical bound interval requires t >= 0"));
    }
    Interval::new(
        l.center() + b.center() * t / scale.mass,
        l.width() + b.width() * t / scale.mass,
    )
}

/// Time at which the classically transported filter width equals the slit width.
pub fn matching_time(l_width: f64, b_width: f64, scale: &PhysicalScale) -> Result<f64> {
    require_positive(l_width, "slit width")?;
    require_positive(b_width, "filter width")?;
    Ok(scale.mass * l_width / b_width)
}

pub fn timescales(l_width: f64, b_width: f64, scale: &PhysicalScale) -> Result<Timescales> {
    require_positive(l_width, "slit width")?;
    require_positive(b_width, "filter width")?;
    let two_pi_hbar = std::f64::consts::TAU * scale.hbar;
    Ok(Timescales {
        t_match: scale.mass * l_width / b_width,
        t_farfield_l: scale.mass * l_width * l_width / two_pi_hbar,
        t_nearfield_b: two_pi_hbar * scale.mass / (b_width * b_width),
    })
}

/// Effective mass that makes massive-particle kinematics reproduce a photon of the
/// given wavelength: `2 pi hbar / (c lambda)`.
pub fn photon_effective_mass(wavelength: f64, light_speed: f64, hbar: f64) -> Result<f64> {
    require_positive(wavelength, "wavelength")?;
    require_positive(light_speed, "light speed")?;
    require_positive(hbar, "hbar")?;
    Ok(std::f64::consts::TAU * hbar / (light_speed * wavelength))
}

fn require_positive(v: f64, name: &str) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::domain(format!("{name} must be finite and positive")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn interval_accessors() {
        let iv = Interval::new(1.0, 4.0).unwrap();
        assert_eq!(iv.lo(), -1.0);
        assert_eq!(iv.hi(), 3.0);
        assert_eq!(iv.half_width(), 2.0);
        assert!(iv.contains(-1.0) && iv.contains(3.0));
        assert!(!iv.contains(3.0 + 1e-12));
    }

    #[test]
    fn interval_rejects_bad_width() {
        assert!(Interval::new(0.0, 0.0).is_err());
        assert!(Interval::new(0.0, -1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn scale_rejects_nonpositive() {
        assert!(PhysicalScale::new(0.0, 1.0).is_err());
        assert!(PhysicalScale::new(1.0, -2.0).is_err());
        assert!(PhysicalScale::new(1.0, 1.0).is_ok());
    }

    #[test]
    fn bound_interval_grows_linearly() {
        let scale = PhysicalScale::REDUCED;
        let l = Interval::centered(1.0).unwrap();
        let b = Interval::centered(0.5).unwrap();
        let m = classical_bound_interval(&l, &b, 4.0, &scale).unwrap();
        assert_eq!(m.center(), 0.0);
        assert_eq!(m.width(), 3.0);

        let b_off = Interval::new(2.0, 0.5).unwrap();
        let m = classical_bound_interval(&l, &b_off, 4.0, &scale).unwrap();
        assert_eq!(m.center(), 8.0);
    }

    #[test]
    fn bound_interval_rejects_backward_transport() {
        let scale = PhysicalScale::REDUCED;
        let l = Interval::centered(1.0).unwrap();
        let b = Interval::centered(0.5).unwrap();
        assert!(classical_bound_interval(&l, &b, -1e-9, &scale).is_err());
        assert!(classical_bound_interval(&l, &b, 0.0, &scale).is_ok());
    }

    #[test]
    fn timescale_identity_exact_at_defaults() {
        let ts = timescales(1.0, 0.024 * std::f64::consts::TAU, &PhysicalScale::REDUCED).unwrap();
        let lhs = ts.t_farfield_l * ts.t_nearfield_b;
        let rhs = ts.t_match * ts.t_match;
        assert!((lhs / rhs - 1.0).abs() < 1e-14);
    }

    #[test]
    fn photon_mass_matches_810nm_reference() {
        // 810 nm photon, SI constants.
        let hbar = 1.054_571_817e-34;
        let c = 2.997_924_58e8;
        let m = photon_effective_mass(810e-9, c, hbar).unwrap();
        assert!((m / 2.7287e-36 - 1.0).abs() < 2e-3, "m = {m:e}");
    }

    proptest! {
        // Scaling lengths by a, momenta by g/a * (mass scale), masses by g, and
        // hbar accordingly leaves every timescale ratio and transported position
        // ratio fixed: all outputs scale by their dimension alone.
        #[test]
        fn dimensional_covariance(
            a in 1e-3..1e3f64,
            bfac in 1e-3..1e3f64,
            g in 1e-3..1e3f64,
            l in 0.1..10.0f64,
            b in 0.01..1.0f64,
            x0 in -5.0..5.0f64,
            p in -2.0..2.0f64,
            t in 0.0..50.0f64,
        ) {
            let base = PhysicalScale::REDUCED;
            // x -> a x, p -> bfac p, m -> g m forces t -> (g a / bfac) t and
            // hbar -> a bfac hbar.
            let scaled = PhysicalScale { hbar: a * bfac, mass: g };
            let tfac = g * a / bfac;

            let y0 = straight_line_position(x0, p, t, &base);
            let y1 = straight_line_position(a * x0, bfac * p, tfac * t, &scaled);
            prop_assert!((y1 - a * y0).abs() <= 1e-12 * y0.abs().max(1.0) * a);

            let ts0 = timescales(l, b, &base).unwrap();
            let ts1 = timescales(a * l, bfac * b, &scaled).unwrap();
            prop_assert!((ts1.t_match / (tfac * ts0.t_match) - 1.0).abs() < 1e-12);
            prop_assert!((ts1.t_farfield_l / (tfac * ts0.t_farfield_l) - 1.0).abs() < 1e-12);
            prop_assert!((ts1.t_nearfield_b / (tfac * ts0.t_nearfield_b) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn timescale_identity(l in 0.01..100.0f64, b in 1e-4..10.0f64) {
            let ts = timescales(l, b, &PhysicalScale::REDUCED).unwrap();
            let lhs = ts.t_farfield_l * ts.t_nearfield_b;
            let rhs = ts.t_match * ts.t_match;
            prop_assert!((lhs / rhs - 1.0).abs() < 1e-12);
        }

        #[test]
        fn straight_line_stays_in_bound_interval(
            x0_frac in -0.5..0.5f64,
            p_frac in -0.5..0.5f64,
            t in 0.0..1e3f64,
            lw in 0.1..10.0f64,
            bw in 0.01..1.0f64,
        ) {
            let scale = PhysicalScale::REDUCED;
            let l = Interval::centered(lw).unwrap();
            let b = Interval::centered(bw).unwrap();
            let x0 = x0_frac * lw;
            let p = p_frac * bw;
            let m = classical_bound_interval(&l, &b, t, &scale).unwrap();
            let xt = straight_line_position(x0, p, t, &scale);
            prop_assert!(m.contains(xt));
        }
    }
}
