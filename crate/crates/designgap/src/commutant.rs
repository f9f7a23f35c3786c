//! Commutant bases of U(2) at order t, permutation operators of S_t, and
//! small Haar-moment projectors.
//!
//! By Schur–Weyl duality the fixed space of the t-th Haar moment operator is
//! spanned by the permutation actions of S_t on the t-fold Hilbert space.
//! For a single qubit the span has the Catalan-type dimension
//! (2t)!/(t!(t+1)!); an orthonormal operator basis u_0, ..., u_{D-1} is
//! obtained by Gram–Schmidt over the permutation operators in a fixed
//! enumeration order (identity first, then lexicographic), so the output is
//! deterministic and u_0 is always the normalized identity.

use crate::linalg::{self, CMatrix, LinalgError, ONE, ZERO};
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CommutantError {
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("order t={0} not supported (numeric commutant bases stop at t=4)")]
    UnsupportedOrder(usize),
    #[error("projector dimension 2^{0} exceeds the desk-scale cap")]
    TooLarge(u32),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// dim Comm_t(U(2)) = (2t)!/(t!(t+1)!).
pub fn catalan_dim(t: usize) -> usize {
    // binomial(2t, t)/(t+1), exact in u128 for any t we ever touch
    let mut binom: u128 = 1;
    for k in 0..t {
        binom = binom * (2 * t - k) as u128 / (k + 1) as u128;
    }
    (binom / (t as u128 + 1)) as usize
}

/// A permutation of {0..t-1} in one-line notation together with its operator
/// on (C^local_dim)^⊗t.
#[derive(Debug, Clone)]
pub struct PermutationOperator {
    pub permutation: Vec<usize>,
    pub operator: CMatrix,
}

/// All t! permutations in lexicographic one-line order (identity first).
pub fn permutations(t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..t).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..t.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..t).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Number of cycles of a permutation in one-line notation.
pub fn cycle_count(sigma: &[usize]) -> usize {
    let mut seen = vec![false; sigma.len()];
    let mut cycles = 0;
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = sigma[k];
        }
    }
    cycles
}

/// Convert cycle notation (1-based, e.g. &[&[1,4],&[2,3]]) to one-line form.
pub fn cycles_to_one_line(t: usize, cycles: &[&[usize]]) -> Vec<usize> {
    let mut sigma: Vec<usize> = (0..t).collect();
    for cycle in cycles {
        for w in 0..cycle.len() {
            let from = cycle[w] - 1;
            let to = cycle[(w + 1) % cycle.len()] - 1;
            sigma[from] = to;
        }
    }
    sigma
}

/// The operator |i_1 .. i_t> -> |i_{σ^{-1}(1)} .. i_{σ^{-1}(t)}> on
/// (C^local_dim)^⊗t, as a 0/1 permutation matrix.
pub fn permutation_operator(
    sigma: &[usize],
    t: usize,
    local_dim: usize,
) -> Result<PermutationOperator, CommutantError> {
    if sigma.len() != t {
        return Err(CommutantError::InvalidPermutation(sigma.to_vec()));
    }
    let mut check = sigma.to_vec();
    check.sort_unstable();
    if check != (0..t).collect::<Vec<_>>() {
        return Err(CommutantError::InvalidPermutation(sigma.to_vec()));
    }
    let mut inv = vec![0usize; t];
    for (k, &s) in sigma.iter().enumerate() {
        inv[s] = k;
    }
    let dim = local_dim.pow(t as u32);
    let mut op = CMatrix::zeros(dim, dim);
    let digit = |idx: usize, pos: usize| (idx / local_dim.pow((t - 1 - pos) as u32)) % local_dim;
    for col in 0..dim {
        let mut row = 0usize;
        for k in 0..t {
            row += digit(col, inv[k]) * local_dim.pow((t - 1 - k) as u32);
        }
        op[(row, col)] = ONE;
    }
    Ok(PermutationOperator { permutation: sigma.to_vec(), operator: op })
}

/// Orthonormal basis of Comm_t(U(2)) for t = 1..4.
#[derive(Debug, Clone)]
pub struct CommutantBasis {
    pub order_t: usize,
    pub local_dim: usize,
    pub dimension_d: usize,
    /// Orthonormal operators on (C^2)^⊗t under Tr(A†B); basis[0] = I/2^{t/2}.
    pub basis: Vec<CMatrix>,
}

/// Gram–Schmidt over all t! permutation operators on (C²)^⊗t in the fixed
/// enumeration order, yielding exactly catalan_dim(t) orthonormal operators.
pub fn commutant_basis(t: usize) -> Result<CommutantBasis, CommutantError> {
    if t == 0 || t > 4 {
        return Err(CommutantError::UnsupportedOrder(t));
    }
    let ops: Vec<CMatrix> =
        permutations(t).iter().map(|s| permutation_operator(s, t, 2).unwrap().operator).collect();
    let basis = linalg::gram_schmidt(&ops, linalg::DROP_TOL)?;
    let d = catalan_dim(t);
    debug_assert_eq!(basis.len(), d);
    Ok(CommutantBasis { order_t: t, local_dim: 2, dimension_d: d, basis })
}

/// Orthogonal projector onto span{σ ∈ S_t} acting on ((C^{2^n}))^⊗t, built by
/// Gram-matrix pseudo-inversion. Idempotent and Hermitian to 1e-9.
pub fn haar_moment_projector(t: usize, n: usize) -> Result<CMatrix, CommutantError> {
    let bits = 4 * t as u32 * n as u32;
    if bits > 20 {
        return Err(CommutantError::TooLarge(bits));
    }
    let local_dim = 1usize << n;
    let dim = local_dim.pow(t as u32); // states; the operator space has dim^2
    let perms = permutations(t);
    let vecs: Vec<CMatrix> =
        perms.iter().map(|s| permutation_operator(s, t, local_dim).unwrap().operator).collect();
    // Gram matrix of permutation operators: Tr(σ†τ) = local_dim^{cycles(σ^{-1}τ)}
    let k = perms.len();
    let mut gram = linalg::RMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            let mut inv_a = vec![0usize; t];
            for (i, &s) in perms[a].iter().enumerate() {
                inv_a[s] = i;
            }
            let prod: Vec<usize> = (0..t).map(|i| inv_a[perms[b][i]]).collect();
            gram[(a, b)] = (local_dim as f64).powi(cycle_count(&prod) as i32);
        }
    }
    let pinv = pseudo_inverse(&gram, 1e-10);
    let odim = dim * dim;
    let mut proj = CMatrix::zeros(odim, odim);
    // P = Σ_{a,b} pinv[a,b] |vec σ_a >< vec σ_b|
    let vecd: Vec<Vec<Complex64>> = vecs
        .iter()
        .map(|m| {
            let mut v = Vec::with_capacity(odim);
            for r in 0..dim {
                for c in 0..dim {
                    v.push(m[(r, c)]);
                }
            }
            v
        })
        .collect();
    for a in 0..k {
        for b in 0..k {
            let w = pinv[(a, b)];
            if w.abs() < 1e-15 {
                continue;
            }
            for (i, &va) in vecd[a].iter().enumerate() {
                if va == ZERO {
                    continue;
                }
                for (j, &vb) in vecd[b].iter().enumerate() {
                    if vb == ZERO {
                        continue;
                    }
                    proj[(i, j)] += Complex64::new(w, 0.0) * va * vb.conj();
                }
            }
        }
    }
    Ok(proj)
}

/// Pseudo-inverse of a symmetric PSD matrix with relative eigenvalue cutoff.
fn pseudo_inverse(g: &linalg::RMatrix, rel_tol: f64) -> linalg::RMatrix {
    let eig = SymmetricEigen::new(g.clone());
    let lmax = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let n = g.nrows();
    let mut d = linalg::RMatrix::zeros(n, n);
    for i in 0..n {
        let lam = eig.eigenvalues[i];
        if lam > rel_tol * lmax {
            d[(i, i)] = 1.0 / lam;
        }
    }
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eye, hs_inner, kron, max_abs_diff};

    #[test]
    fn catalan_dims() {
        assert_eq!(catalan_dim(1), 1);
        assert_eq!(catalan_dim(2), 2);
        assert_eq!(catalan_dim(3), 5);
        assert_eq!(catalan_dim(4), 14);
    }

    #[test]
    fn permutation_enumeration_identity_first() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[1], vec![0, 2, 1]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }

    #[test]
    fn identity_permutation_operator() {
        let op = permutation_operator(&[0, 1], 2, 2).unwrap();
        assert_eq!(max_abs_diff(&op.operator, &eye(4)), 0.0);
    }

    #[test]
    fn transposition_is_swap_and_pauli_sum() {
        let swap = permutation_operator(&[1, 0], 2, 2).unwrap().operator;
        // SWAP = 1/2 Σ_P P ⊗ P† over Paulis
        let paulis = [
            eye(2),
            crate::kak::pauli(1),
            crate::kak::pauli(2),
            crate::kak::pauli(3),
        ];
        let mut acc = CMatrix::zeros(4, 4);
        for p in &paulis {
            acc += kron(p, &p.adjoint());
        }
        acc.unscale_mut(2.0);
        assert!(max_abs_diff(&swap, &acc) < 1e-14);
    }

    #[test]
    fn cycle_cubes_to_identity() {
        let c = permutation_operator(&[1, 2, 0], 3, 2).unwrap().operator;
        let cube = &c * &c * &c;
        assert!(max_abs_diff(&cube, &eye(8)) < 1e-14);
    }

    #[test]
    fn group_law() {
        // operator(σ)·operator(τ) = operator(σ∘τ) with (σ∘τ)(x) = σ(τ(x))
        let sigma = [2usize, 0, 1];
        let tau = [1usize, 2, 0];
        let comp: Vec<usize> = (0..3).map(|x| sigma[tau[x]]).collect();
        let a = permutation_operator(&sigma, 3, 2).unwrap().operator;
        let b = permutation_operator(&tau, 3, 2).unwrap().operator;
        let c = permutation_operator(&comp, 3, 2).unwrap().operator;
        assert!(max_abs_diff(&(&a * &b), &c) < 1e-14);
    }

    #[test]
    fn basis_t1_is_normalized_identity() {
        let b = commutant_basis(1).unwrap();
        assert_eq!(b.basis.len(), 1);
        let expected = eye(2).scale(1.0 / 2.0_f64.sqrt());
        assert!(max_abs_diff(&b.basis[0], &expected) < 1e-14);
    }

    #[test]
    fn basis_t2_matches_closed_form() {
        let b = commutant_basis(2).unwrap();
        assert_eq!(b.basis.len(), 2);
        let id = eye(4);
        let s = permutation_operator(&[1, 0], 2, 2).unwrap().operator;
        let u0 = id.scale(0.5);
        let u1 = (&s - id.scale(0.5)).scale(1.0 / 3.0_f64.sqrt());
        assert!(max_abs_diff(&b.basis[0], &u0) < 1e-12);
        assert!(max_abs_diff(&b.basis[1], &u1) < 1e-12);
    }

    #[test]
    fn basis_counts() {
        for t in 1..=4 {
            let b = commutant_basis(t).unwrap();
            assert_eq!(b.basis.len(), catalan_dim(t));
            for (i, x) in b.basis.iter().enumerate() {
                for (j, y) in b.basis.iter().enumerate() {
                    let g = hs_inner(x, y);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g.re - want).abs() < 1e-10 && g.im.abs() < 1e-10);
                }
            }
        }
        assert!(commutant_basis(5).is_err());
    }

    #[test]
    fn projector_t1_n1() {
        let p = haar_moment_projector(1, 1).unwrap();
        let rank = crate::linalg::numerical_rank(&p, 1e-9);
        assert_eq!(rank, 1);
    }

    #[test]
    fn projector_idempotent_and_fixes_permutations() {
        // rank = dim Comm_t(U(2^n)) = t! once t <= 2^n
        for (t, n, rank) in [(2usize, 1usize, 2usize), (2, 2, 2)] {
            let p = haar_moment_projector(t, n).unwrap();
            assert!(max_abs_diff(&(&p * &p), &p) < 1e-9);
            assert!(crate::linalg::hermiticity_defect(&p) < 1e-9);
            assert_eq!(crate::linalg::numerical_rank(&p, 1e-9), rank);
            let local_dim = 1usize << n;
            for sigma in permutations(t) {
                let op = permutation_operator(&sigma, t, local_dim).unwrap().operator;
                let dim = op.nrows();
                let mut v = CMatrix::zeros(dim * dim, 1);
                for r in 0..dim {
                    for c in 0..dim {
                        v[(r * dim + c, 0)] = op[(r, c)];
                    }
                }
                let pv = &p * &v;
                assert!(max_abs_diff(&pv, &v) < 1e-9);
            }
        }
    }
}
