//! Parameter sweeps over the overlap parameter `u = BL/(4 hbar)` and searches
//! for the working point that maximizes the guaranteed defect.

use serde::Serialize;

use crate::analytic::{defect_lower_bound, invert_overlap, overlap_of_parameter};
use crate::audit::{evaluate, AuditConfig};
use crate::error::{Error, Result};
use crate::model::PhysicalScale;

/// One sweep lattice point. Numeric columns are present in full mode only.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub u: f64,
    pub s: f64,
    /// Guaranteed defect `s - 4 s^2 / (1 + s)` at this overlap.
    pub analytic_bound: f64,
    pub numeric_defect: Option<f64>,
    #[serde(rename = "numeric_PM")]
    pub numeric_pm: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Closed-form columns only; fast.
    Analytic,
    /// Additionally run the full audit at every lattice point.
    Full,
}

/// Linear lattice in `u` over `[u_min, u_max]`, strictly increasing.
pub fn sweep(
    u_min: f64,
    u_max: f64,
    steps: usize,
    mode: SweepMode,
    cfg: &AuditConfig,
    scale: &PhysicalScale,
) -> Result<Vec<SweepRow>> {
    if !(u_min.is_finite() && u_max.is_finite() && u_min > 0.0) {
        return Err(Error::config("sweep bounds must be finite with u_min > 0"));
    }
    if u_max <= u_min {
        return Err(Error::config("u_max must exceed u_min"));
    }
    if u_max > 1.0 {
        return Err(Error::config("u_max must not exceed 1.0"));
    }
    if steps < 2 {
        return Err(Error::config(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let u = if i == steps - 1 {
            u_max
        } else {
            u_min + i as f64 * (u_max - u_min) / (steps - 1) as f64
        };
        let s = overlap_of_parameter(u)?;
        let (numeric_defect, numeric_pm) = match mode {
            SweepMode::Analytic => (None, None),
            SweepMode::Full => {
                let report = evaluate(&state_for_u(u, scale), cfg, scale)?;
                (Some(report.defect), Some(report.p_m))
            }
        };
        rows.push(SweepRow {
            u,
            s,
            analytic_bound: defect_lower_bound(s)?,
            numeric_defect,
            numeric_pm,
        });
    }
    Ok(rows)
}

fn state_for_u(u: f64, scale: &PhysicalScale) -> crate::analytic::StateSpec {
    crate::analytic::StateSpec::EqualSuperposition {
        l_width: 1.0,
        b_width: 4.0 * scale.hbar * u,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundOptimum {
    pub s: f64,
    pub u: f64,
    pub value: f64,
}

/// Maximize the guaranteed defect over the overlap by golden-section search.
/// Exists as an independent numeric check of the closed-form stationary point.
pub fn maximize_bound() -> Result<BoundOptimum> {
    let f = |s: f64| defect_lower_bound(s).expect("overlap in range");
    let (s, value) = golden_max(f, 1e-6, 0.333, 200);
    Ok(BoundOptimum {
        s,
        u: invert_overlap(s)?,
        value,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct NumericOptimum {
    #[serde(rename = "BL_over_2pi_hbar")]
    pub bl_over_2pi_hbar: f64,
    pub defect: f64,
}

/// Search the working point `BL / (2 pi hbar)` that maximizes the audited
/// defect. Coarse lattice scan, then golden-section refinement on the best
/// bracket. Uses the numerics of `cfg`; pass a relaxed config, every probe is
/// a full audit.
pub fn maximize_numeric(cfg: &AuditConfig, scale: &PhysicalScale) -> Result<NumericOptimum> {
    let lattice = [0.024, 0.028, 0.032, 0.036, 0.040];
    let mut best = (0usize, f64::NEG_INFINITY);
    let mut values = [0.0f64; 5];
    for (i, &bl) in lattice.iter().enumerate() {
        let d = audit_defect(bl, cfg, scale)?;
        values[i] = d;
        if d > best.1 {
            best = (i, d);
        }
    }
    let lo = lattice[best.0.saturating_sub(1)];
    let hi = lattice[(best.0 + 1).min(lattice.len() - 1)];
    let probe = |bl: f64| audit_defect(bl, cfg, scale);
    let (mut a, mut b) = (lo, hi);
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = probe(c)?;
    let mut fd = probe(d)?;
    for _ in 0..8 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = probe(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = probe(d)?;
        }
    }
    let (bl, defect) = if fc > fd { (c, fc) } else { (d, fd) };
    if defect > best.1 {
        Ok(NumericOptimum {
            bl_over_2pi_hbar: bl,
            defect,
        })
    } else {
        Ok(NumericOptimum {
            bl_over_2pi_hbar: lattice[best.0],
            defect: best.1,
        })
    }
}

fn audit_defect(bl_over_2pi_hbar: f64, cfg: &AuditConfig, scale: &PhysicalScale) -> Result<f64> {
    let cfg = AuditConfig {
        bl_over_2pi_hbar,
        ..cfg.clone()
    };
    let report = evaluate(&cfg.state(scale), &cfg, scale)?;
    Ok(report.defect)
}

/// Golden-section maximization of a unimodal function on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}
