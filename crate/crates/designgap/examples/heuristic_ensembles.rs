//! Discrete gate ensembles: maximize the spectral gap of the Hadamard+phase
//! family over its parameters and convert the gap into a design depth.

use designgap::ensembles::{ensemble_gap, hadamard_phase_family, optimize_gap};
use designgap::spectra::design_depth;

fn main() {
    // the T-gate angle fixed, optimize the mixing probability
    let theta = std::f64::consts::FRAC_PI_4;
    for t in 1..=3 {
        let opt = optimize_gap(
            |p: &[f64]| ensemble_gap(&hadamard_phase_family(theta, p[0]), t).unwrap().gap,
            &[(0.0, 1.0)],
            101,
            true,
        );
        let depth = design_depth(opt.gap, 1, t, 0.01).unwrap();
        println!(
            "H+T ensemble, t={t}: best p = {:.4}, gap = {:.7}, depth(ε=0.01) = {depth}",
            opt.params[0], opt.gap
        );
    }
    // optimize over the phase angle as well
    let opt = optimize_gap(
        |v: &[f64]| ensemble_gap(&hadamard_phase_family(v[0], v[1]), 2).unwrap().gap,
        &[(0.0, std::f64::consts::PI), (0.0, 1.0)],
        101,
        true,
    );
    println!(
        "H+phase, t=2, optimized over (θ, p): θ = {:.4}, p = {:.4}, gap = {:.6}",
        opt.params[0], opt.params[1], opt.gap
    );
}
