//! Why the matching time works: after `t_match = m L / B` the slit state's
//! far-field profile is the same sinc as the filter state's static profile,
//! so the two halves of the superposition interfere coherently everywhere.
//! Also prints the timescale identity behind that choice and a laboratory
//! translation for a photon wavelength.
//!
//! Run with `cargo run --example matched_profiles`.

use propineq::analytic::{psi_b_position, psi_l_farfield};
use propineq::model::{photon_effective_mass, timescales, PhysicalScale};

fn main() -> propineq::Result<()> {
    let scale = PhysicalScale::REDUCED;
    let l = 1.0;
    let b = 0.024 * std::f64::consts::TAU * scale.hbar;

    let times = timescales(l, b, &scale)?;
    println!("t_match       = m L / B           = {:.6}", times.t_match);
    println!("t_farfield_L  = m L^2 / (2 pi hbar) = {:.6}", times.t_farfield_l);
    println!("t_nearfield_B = 2 pi hbar m / B^2 = {:.6}", times.t_nearfield_b);
    println!(
        "identity t_match^2 = t_farfield_L * t_nearfield_B: {:.3e} vs {:.3e}",
        times.t_match * times.t_match,
        times.t_farfield_l * times.t_nearfield_b
    );
    println!();

    // At t_match the evolved slit amplitude and the static filter amplitude
    // share the sinc argument and the same normalization, so the moduli
    // coincide; only the quadratic chirp phase distinguishes the states.
    println!("amplitude moduli at t_match (ratio 1 expected):");
    println!("{:>8} {:>14} {:>14} {:>10}", "x/L", "|slit(t_m)|", "|filter|", "ratio");
    for x in [0.0, 5.0, 10.0, 20.0, 40.0] {
        let evolved = psi_l_farfield(x, times.t_match, l, &scale)?.norm();
        let filter = psi_b_position(x, b, &scale).abs();
        println!(
            "{:>8.1} {:>14.8} {:>14.8} {:>10.6}",
            x,
            evolved,
            filter,
            evolved / filter
        );
    }
    println!();

    // Laboratory scale: a photon in a guide disperses like a massive particle
    // with m_eff = 2 pi hbar / (c lambda).
    let hbar = 1.054_571_817e-34;
    let c = 2.997_924_58e8;
    let lambda = 810e-9;
    let m_eff = photon_effective_mass(lambda, c, hbar)?;
    println!("photon at {} nm: effective mass {m_eff:.4e} kg", lambda * 1e9);
    let slit = 1e-3;
    let t_ff = m_eff * slit * slit / (std::f64::consts::TAU * hbar);
    println!(
        "with a {} mm slit the far-field dispersion time is {:.3e} s",
        slit * 1e3,
        t_ff
    );
    Ok(())
}
