//! Sweep of the guaranteed defect over the overlap parameter `u`, plus the
//! two optima: the closed-form maximizer of the guarantee and the numerically
//! audited best working point.
//!
//! Run with `cargo run --example sweep` (the numeric search does a full audit
//! per probe and takes a little while).

use propineq::audit::AuditConfig;
use propineq::model::PhysicalScale;
use propineq::sweep::{maximize_bound, maximize_numeric, sweep, SweepMode};

fn main() -> propineq::Result<()> {
    let scale = PhysicalScale::REDUCED;
    let cfg = AuditConfig::default();

    println!("{:>8} {:>10} {:>16}", "u", "s", "guaranteed defect");
    for row in sweep(0.01, 0.30, 15, SweepMode::Analytic, &cfg, &scale)? {
        println!("{:>8.3} {:>10.6} {:>16.6}", row.u, row.s, row.analytic_bound);
    }

    let opt = maximize_bound()?;
    println!();
    println!(
        "guarantee peaks at s = {:.10} (u = {:.6}), value {:.6}",
        opt.s, opt.u, opt.value
    );

    // Coarse numerics: each probe of the search runs a complete audit.
    let relaxed = AuditConfig {
        grid_n: 1 << 14,
        x_extent_over_l: 200.0,
        convergence_tol: 3e-4,
        truncation_threshold: 1e-3,
        ..cfg
    };
    let numeric = maximize_numeric(&relaxed, &scale)?;
    println!(
        "audited defect peaks near BL/(2 pi hbar) = {:.4} with defect {:.4}, \
         above the guarantee's working point",
        numeric.bl_over_2pi_hbar, numeric.defect
    );
    Ok(())
}
