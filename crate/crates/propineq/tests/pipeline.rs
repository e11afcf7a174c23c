//! End-to-end pipeline checks at the published working point
//! `BL/(2 pi hbar) = 0.024`: frozen production observables, closed-form
//! duality identities, defect dominance across the overlap range, and the
//! numerically located optimum.

use std::sync::OnceLock;

use propineq::analytic::{
    defect_lower_bound, momentum_slit_tail_mass, overlap, psi_l_farfield, StateSpec,
};
use propineq::audit::{evaluate, AuditConfig, AuditReport, Verdict};
use propineq::model::{matching_time, Interval, PhysicalScale};
use propineq::spectral::{Grid, SampledWavefunction};
use propineq::sweep::maximize_numeric;

const SCALE: PhysicalScale = PhysicalScale::REDUCED;

fn default_report() -> &'static AuditReport {
    static REPORT: OnceLock<AuditReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let cfg = AuditConfig::default();
        evaluate(&cfg.state(&SCALE), &cfg, &SCALE).unwrap()
    })
}

/// Coarse numerics for the search-style tests: every probe is a full audit.
fn relaxed_config() -> AuditConfig {
    AuditConfig {
        grid_n: 1 << 14,
        x_extent_over_l: 200.0,
        convergence_tol: 3e-4,
        truncation_threshold: 1e-3,
        ..AuditConfig::default()
    }
}

#[test]
fn default_audit_reproduces_frozen_observables() {
    let report = default_report();
    assert!((report.s - 0.154_907_102_429_500_2).abs() < 1e-12);
    assert!((report.p_l - 0.577_486_019_9).abs() < 1e-8, "P_L {}", report.p_l);
    assert!((report.p_b - 0.577_347_118_6).abs() < 1e-8, "P_B {}", report.p_b);
    assert!((report.p_m - 0.071_985_314_0).abs() < 1e-8, "P_M {}", report.p_m);
    assert!((report.bound - 0.154_833_138_5).abs() < 1e-8);
    assert!((report.defect - 0.082_847_824_5).abs() < 1e-8);
    assert_eq!(report.verdict, Verdict::Violated);

    // The refinement ladder sharpens once and stops.
    assert_eq!(report.diagnostics.convergence_levels, 2);
    assert_eq!(report.diagnostics.grid_n, 1 << 23);
    assert_eq!(report.diagnostics.cells_per_slit, 129);
    assert!((report.diagnostics.x_extent_over_l - 32_513.984).abs() < 1e-2);
    let truncated = report.diagnostics.truncated_mass;
    assert!((truncated - 5.622_3e-5).abs() < 1e-8, "truncated {truncated}");

    let proxy = report.diagnostics.farfield_proxy_p_b.unwrap();
    assert!((proxy - 0.477_951_604_5).abs() < 1e-7, "proxy {proxy}");
    let gap = report.diagnostics.farfield_proxy_gap.unwrap();
    assert!((gap - 0.099_395_5).abs() < 1e-6, "gap {gap}");
}

#[test]
fn marginals_match_the_closed_form() {
    let report = default_report();
    let marginal = report.analytic_p_l_b;
    assert!((marginal - (1.0 + report.s) / 2.0).abs() < 1e-15);
    assert!((report.p_l - marginal).abs() < 5e-4);
    assert!((report.p_b - marginal).abs() < 5e-4);
    // Identity defining the defect, exactly as reported.
    assert_eq!(
        report.defect,
        report.p_l + report.p_b - 1.0 - report.p_m
    );
}

/// The filter state carries mass `1 - tail(z = u)` inside the slit interval:
/// its position profile is the same sinc^2 shape as the slit's momentum
/// profile, with matching argument.
#[test]
fn filter_in_slit_mass_matches_closed_form() {
    let b = 0.024 * std::f64::consts::TAU;
    let expected = 1.0 - momentum_slit_tail_mass(b, 0.5, &SCALE).unwrap();
    assert!((expected - 0.023_996_210_5).abs() < 1e-9, "expected {expected}");

    let grid = Grid::new(1 << 16, 2100.0, SCALE).unwrap();
    let psi = SampledWavefunction::discretize(&StateSpec::MomentumSlit { b_width: b }, grid)
        .unwrap();
    let measured = psi
        .interval_probability(&Interval::centered(1.0).unwrap())
        .unwrap();
    // Undo the window renormalization before comparing to the full-line value.
    let raw = measured * (1.0 - psi.truncated_mass());
    assert!((raw - expected).abs() < 1e-4, "raw {raw} vs {expected}");
}

/// After the matching time the slit state is deep in the far field, so its
/// mass inside `[-l, l]` equals its momentum mass inside `|p| <= b`, namely
/// `1 - tail(z = 2u)`.
#[test]
fn evolved_slit_interval_mass_matches_momentum_mass() {
    let b = 0.024 * std::f64::consts::TAU;
    let expected = 1.0 - momentum_slit_tail_mass(b, 1.0, &SCALE).unwrap();
    assert!((expected - 0.047_969_7).abs() < 5e-6, "expected {expected}");

    let n = 1 << 18;
    let grid = Grid::new(n, n as f64 / 130.0, SCALE).unwrap();
    let t_match = matching_time(1.0, b, &SCALE).unwrap();
    let measured = SampledWavefunction::discretize(&StateSpec::PositionSlit { l_width: 1.0 }, grid)
        .unwrap()
        .free_propagate(t_match)
        .unwrap()
        .interval_probability(&Interval::centered(2.0).unwrap())
        .unwrap();
    assert!((measured - expected).abs() < 1e-4, "measured {measured}");
}

/// The closed-form far-field amplitude tracks the propagated slit state inside
/// 0.8 of the first sinc zero once well past the far-field time.
#[test]
fn farfield_amplitude_matches_propagation() {
    let l = 1.0;
    let t_ff = SCALE.mass * l * l / (std::f64::consts::TAU * SCALE.hbar);
    let t = 50.0 * t_ff;
    let grid = Grid::new(1 << 21, (1 << 21) as f64 / (2.0 * 129.0), SCALE).unwrap();
    let psi = SampledWavefunction::discretize(&StateSpec::PositionSlit { l_width: l }, grid)
        .unwrap()
        .free_propagate(t)
        .unwrap();
    // First zero of the far-field sinc at x = 2 pi hbar t / (m l) = 50 l; stay
    // inside 0.8 of it, where the stationary-phase form is accurate.
    let x_max = 40.0;
    let mut worst = 0.0f64;
    let g = psi.grid();
    for (j, amp) in psi.amplitudes().iter().enumerate() {
        let x = g.x(j);
        if x.abs() > x_max {
            continue;
        }
        let ideal = psi_l_farfield(x, t, l, &SCALE).unwrap();
        let rel = (amp.norm() - ideal.norm()).abs() / ideal.norm();
        worst = worst.max(rel);
    }
    assert!(worst < 1e-3, "worst relative amplitude error {worst:.3e}");
}

/// Measured defect dominates the guaranteed envelope defect across the
/// working range, up to coarse-grid slack.
#[test]
fn measured_defect_dominates_guarantee_across_overlaps() {
    let cfg = relaxed_config();
    for u in [0.03, 0.08, 0.15] {
        let b = 4.0 * SCALE.hbar * u;
        let s = overlap(1.0, b, &SCALE).unwrap();
        let report = evaluate(
            &StateSpec::EqualSuperposition {
                l_width: 1.0,
                b_width: b,
            },
            &cfg,
            &SCALE,
        )
        .unwrap();
        let guarantee = defect_lower_bound(s).unwrap();
        assert!(
            report.defect >= guarantee - 5e-3,
            "u = {u}: defect {} vs guarantee {guarantee}",
            report.defect
        );
        assert_eq!(report.verdict, Verdict::Violated, "u = {u}");
    }
}

/// The audited defect peaks well above the working point suggested by the
/// envelope bound alone, at a larger overlap.
#[test]
fn numeric_optimum_beats_the_envelope_working_point() {
    let optimum = maximize_numeric(&relaxed_config(), &SCALE).unwrap();
    assert!(
        (0.028..=0.037).contains(&optimum.bl_over_2pi_hbar),
        "bl* = {}",
        optimum.bl_over_2pi_hbar
    );
    assert!(
        (0.083..=0.086).contains(&optimum.defect),
        "defect* = {}",
        optimum.defect
    );
    // Strictly better than the default working point's audited defect.
    assert!(optimum.defect > 0.0828);
}
