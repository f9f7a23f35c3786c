//! Whole-layer model: a single layer of Haar 1-qubit gates around repeated
//! raw gate applications. One repetition reproduces the gadget circuit.

use designgap::architectures::{gap_of_global, graph_moment, make_graph, whole_layer_moment, GraphKind};
use designgap::gadget::gadget_local_matrix;
use designgap::kak::{gate_matrix, NamedGate};

fn main() {
    let u = gate_matrix(NamedGate::Iswap);
    let graph = make_graph(GraphKind::Complete, 4).unwrap();
    let local = gadget_local_matrix(&u, 2, true).unwrap();
    let gadget = gap_of_global(&graph_moment(&local, &graph).unwrap()).unwrap();
    println!("gadget circuit:        λ2 = {:.9}", gadget.lambda2);
    for reps in 1..=4 {
        let rep = whole_layer_moment(&u, &graph, reps).unwrap();
        println!("whole layer, reps = {reps}: λ2 = {:.9}, gap = {:.6}", rep.lambda2, rep.gap);
    }
}
