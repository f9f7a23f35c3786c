//! KAK-decompose a dressed iSWAP and a Haar-random unitary: canonical
//! coefficients are invariant under 1-qubit dressings and the factorization
//! reconstructs the input.

use designgap::ensembles::haar_random_unitary;
use designgap::kak::{gate_matrix, kak_decompose, NamedGate};
use designgap::linalg::{kron, max_abs_diff};
use rand::SeedableRng;

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let iswap = gate_matrix(NamedGate::Iswap);
    let r1 = haar_random_unitary(1, &mut rng);
    let r2 = haar_random_unitary(1, &mut rng);
    let dressed = kron(&r1, &r2) * &iswap;
    for (label, u) in [("iSWAP", iswap.clone()), ("dressed iSWAP", dressed)] {
        let d = kak_decompose(&u).unwrap();
        let k = d.coefficients;
        println!(
            "{label}: (kx, ky, kz) = ({:.6}, {:.6}, {:.6}), reconstruction error {:.2e}",
            k.kx,
            k.ky,
            k.kz,
            max_abs_diff(&d.reconstruct(), &u)
        );
    }
    let random = haar_random_unitary(2, &mut rng);
    let d = kak_decompose(&random).unwrap();
    println!(
        "random U(4): ({:.6}, {:.6}, {:.6}), reconstruction error {:.2e}",
        d.coefficients.kx,
        d.coefficients.ky,
        d.coefficients.kz,
        max_abs_diff(&d.reconstruct(), &random)
    );
}
