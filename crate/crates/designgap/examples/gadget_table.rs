//! The canonical table of named 2-qubit gate families: KAK coefficients,
//! closed-form gadget parameters, restricted moment matrix spectrum and gap.

use designgap::gadget::{gadget_abc, gadget_t2_matrix};
use designgap::kak::NamedGate;
use designgap::linalg::hermitian_spectrum;
use designgap::spectra::{spectral_gap_with_expected, UNIT_TOL};

fn main() {
    println!(
        "{:<6} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}  spectrum / gap",
        "gate", "kx", "ky", "kz", "a", "b", "c"
    );
    for gate in NamedGate::ALL {
        let k = gate.coefficients();
        let abc = gadget_abc(&k);
        let local = gadget_t2_matrix(&k);
        let spec = hermitian_spectrum(&local.matrix, UNIT_TOL).unwrap();
        let gap = spectral_gap_with_expected(&spec, 2).unwrap().gap;
        let vals: Vec<String> = spec.eigenvalues.iter().map(|v| format!("{v:+.4}")).collect();
        println!(
            "{:<6} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}  ({}) gap {:.4}",
            gate.name(),
            k.kx,
            k.ky,
            k.kz,
            abc.a,
            abc.b,
            abc.c,
            vals.join(", "),
            gap
        );
    }
}
