//! Monte-Carlo baseline: spectral gaps of ensembles made of two Haar-random
//! gates (with their inverses), per moment order.

use designgap::ensembles::{ensemble_gap, two_gate_haar_ensemble};
use rand::SeedableRng;

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for (qubits, orders) in [(1usize, vec![1usize, 2, 3]), (2, vec![1, 2])] {
        for t in orders {
            let samples = 50;
            let gaps: Vec<f64> = (0..samples)
                .map(|_| {
                    let e = two_gate_haar_ensemble(&mut rng, qubits);
                    ensemble_gap(&e, t).unwrap().gap
                })
                .collect();
            let mean = gaps.iter().sum::<f64>() / samples as f64;
            let max = gaps.iter().copied().fold(0.0_f64, f64::max);
            println!("{qubits} qubit(s), t={t}: mean gap {mean:.6}, largest {max:.6}");
        }
    }
}
