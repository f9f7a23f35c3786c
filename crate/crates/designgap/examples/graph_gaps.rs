//! Spectral gaps of gadget circuits over standard graphs: the complete graph
//! always wins, and iSWAP leads every column.

use designgap::architectures::{gap_of_global, graph_moment, make_graph, GraphKind};
use designgap::gadget::gadget_t2_matrix;
use designgap::kak::NamedGate;

fn main() {
    let gates =
        [NamedGate::Iswap, NamedGate::Cnot, NamedGate::B, NamedGate::Sqisw, NamedGate::Qft, NamedGate::Chi];
    for n in 4..=7 {
        for kind in [GraphKind::Complete, GraphKind::Star, GraphKind::Ring] {
            let graph = make_graph(kind, n).unwrap();
            print!("n={n} {kind:?}:");
            for gate in gates {
                let local = gadget_t2_matrix(&gate.coefficients());
                let op = graph_moment(&local, &graph).unwrap();
                let rep = gap_of_global(&op).unwrap();
                print!(" {}={:.6}", gate.name(), rep.gap);
            }
            println!();
        }
    }
}
