//! Moment spectra of named 3-qubit gates on the Hamming-ordered restricted
//! basis; the Margolus family has the widest gap.

use designgap::gadget::{three_local_matrix, ThreeQubitGate};
use designgap::linalg::hermitian_spectrum;
use designgap::spectra::{spectral_gap_with_expected, UNIT_TOL};

fn main() {
    for gate in ThreeQubitGate::ALL {
        let local = three_local_matrix(&gate.matrix(), true).unwrap();
        let spec = hermitian_spectrum(&local.matrix, UNIT_TOL).unwrap();
        let gap = spectral_gap_with_expected(&spec, 2).unwrap().gap;
        let vals: Vec<String> = spec.eigenvalues.iter().map(|v| format!("{v:+.3}")).collect();
        println!("{:<9} spectrum ({}) gap {:.3}", gate.name(), vals.join(", "), gap);
    }
}
