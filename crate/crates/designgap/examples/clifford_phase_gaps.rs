//! Clifford + phase ensembles: closed-form 4-design gap, the optimal mixing
//! probability, and the finite-n subspace oracle approaching the closed form.

use designgap::clifford_phase::{gap_formula, optimum, subspace_oracle, CliffordPhaseParams};

fn main() {
    for c in [-1.0, -0.5, 0.0] {
        let (gap, p) = optimum(c).unwrap();
        println!("c = {c:+.1}: optimal gap {gap:.7} at p = {p:.6}");
    }
    let (_, p_star) = optimum(-1.0).unwrap();
    let params = CliffordPhaseParams::from_c(p_star, -1.0);
    println!("closed-form gap at the optimum: {:.9}", gap_formula(&params));
    for n in 3..=5 {
        let rep = subspace_oracle(n, &params).unwrap();
        println!("exact subspace gap at n = {n}: {:.9}", rep.gap);
    }
}
