//! Refinement ladder in action: one row per level showing how the grid moves
//! (sharpen, then extend) and how the truncation-corrected observables settle.
//! Starts from coarse numerics so several levels come into view, then compares
//! against the default production run.
//!
//! Run with `cargo run --example convergence`.

use propineq::audit::{evaluate, AuditConfig};
use propineq::model::PhysicalScale;

fn print_ladder(cfg: &AuditConfig, scale: &PhysicalScale) -> propineq::Result<()> {
    let report = evaluate(&cfg.state(scale), cfg, scale)?;
    println!("level  grid_n      cells/slit  window/L    truncated    delta");
    for level in &report.diagnostics.levels {
        println!(
            "{:<6} 2^{:<9} {:<11} {:<11.1} {:<12.3e} {}",
            level.level,
            level.grid_n.trailing_zeros(),
            level.cells_per_slit,
            level.x_extent_over_l,
            level.truncated_mass,
            match level.delta {
                Some(d) => format!("{d:.3e}"),
                None => "baseline".to_string(),
            }
        );
    }
    println!(
        "stopped with delta {:.3e} at tol {:.1e}; margin {:.3e}",
        report.diagnostics.convergence_delta, cfg.convergence_tol, report.diagnostics.margin
    );
    println!(
        "P_L = {:.8}, P_B = {:.8}, P_M = {:.8}, verdict {}",
        report.p_l, report.p_b, report.p_m, report.verdict
    );
    Ok(())
}

fn main() -> propineq::Result<()> {
    let scale = PhysicalScale::REDUCED;

    println!("coarse start (grid request 2^14, loose truncation):");
    let coarse = AuditConfig {
        grid_n: 1 << 14,
        x_extent_over_l: 200.0,
        convergence_tol: 1e-4,
        truncation_threshold: 1e-3,
        ..AuditConfig::default()
    };
    print_ladder(&coarse, &scale)?;

    println!();
    println!("production defaults:");
    print_ladder(&AuditConfig::default(), &scale)?;
    Ok(())
}
