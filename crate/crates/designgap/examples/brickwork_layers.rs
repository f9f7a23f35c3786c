//! Brickwork circuits: the product operator √L1·L0·√L1 when the off layer is
//! PSD, eigenvalue moduli of L0·L1 otherwise, and the layer-sum variant.

use designgap::architectures::{brickwork_moment, BrickworkVariant};
use designgap::gadget::gadget_t2_matrix;
use designgap::kak::NamedGate;

fn main() {
    for gate in [NamedGate::Chi, NamedGate::Sqisw, NamedGate::Iswap, NamedGate::Cnot] {
        let local = gadget_t2_matrix(&gate.coefficients());
        for n in [6usize, 8, 10] {
            let prod = brickwork_moment(&local, n, BrickworkVariant::Product).unwrap();
            let sum = brickwork_moment(&local, n, BrickworkVariant::Sum).unwrap();
            println!(
                "{:<6} n={n:>2}: product gap {:.6} ({}), sum gap {:.6}",
                gate.name(),
                prod.gap,
                prod.context,
                sum.gap
            );
        }
    }
}
