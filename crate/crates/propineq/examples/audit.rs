//! Full audit at the default working point, printed as a summary.
//!
//! Run with `cargo run --example audit`.

use propineq::audit::{evaluate, AuditConfig};
use propineq::model::PhysicalScale;

fn main() -> propineq::Result<()> {
    let scale = PhysicalScale::REDUCED;
    let cfg = AuditConfig::default();
    let report = evaluate(&cfg.state(&scale), &cfg, &scale)?;

    println!("working point BL/(2 pi hbar) = {}", report.bl_over_2pi_hbar);
    println!("overlap s                    = {:.10}", report.s);
    println!();
    println!("P_L (slit interval, t = 0)   = {:.10}", report.p_l);
    println!("P_B (filter band, momentum)  = {:.10}", report.p_b);
    println!("P_M (ballistic interval)     = {:.10}", report.p_m);
    println!("classical bound P_L+P_B-1    = {:.10}", report.bound);
    println!("defect P_L+P_B-1-P_M         = {:.10}", report.defect);
    println!("guaranteed defect (envelope) = {:.10}", report.s - report.envelope_pm_bound);
    println!();
    let d = &report.diagnostics;
    println!(
        "verdict: {} (margin {:.3e} = max(delta, tol) + truncated mass)",
        report.verdict, d.margin
    );
    println!(
        "stopped at level {} on a 2^{} grid, {} cells per slit, window {:.0} slit widths",
        d.convergence_levels - 1,
        d.grid_n.trailing_zeros(),
        d.cells_per_slit,
        d.x_extent_over_l
    );
    Ok(())
}
