//! The sparse states behind the Clifford + phase analysis: the magic-state
//! superpositions, their coset structure, and linear independence.

use designgap::clifford_phase::build_design_states;

fn main() {
    for (n, t) in [(3usize, 4usize), (4, 5)] {
        let st = build_design_states(n, t).unwrap();
        let gram = st.invariant_gram();
        let vals = designgap::linalg::real_symmetric_eigenvalues(&gram);
        println!(
            "t={t}, n={n}: {} permutation states, {} magic-orbit states, one-sided stabilizer {}, Gram λmin {:.3e}",
            st.psi.len(),
            st.phi.len(),
            st.stabilizer_order,
            vals[0]
        );
    }
    let st = build_design_states(3, 4).unwrap();
    let t_state = st.phi_state(0);
    println!(
        "|T>^⊗3 support: {} strings of {} bits, norm {:.12}",
        t_state.amplitudes.len(),
        t_state.n_bits,
        t_state.norm()
    );
}
