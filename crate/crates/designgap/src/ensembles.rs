//! Discrete gate ensembles on 1–2 qubits, Haar-random baselines, full moment
//! operators, and grid/golden-section gap optimization.
//!
//! An ensemble is a finite weighted set of unitaries; its t-th moment
//! operator is Σ w · U^⊗t ⊗ conj(U)^⊗t. Hermiticity is arranged by sampling
//! each gate together with its inverse at equal weight. Mixing the identity
//! at weight 1/2 shifts every eigenvalue x to (x+1)/2, making the spectrum
//! non-negative without changing eigenvectors.

use crate::linalg::{self, CMatrix, LinalgError, ONE};
use crate::spectra::{self, GapReport, SpectraError};
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("moment operator dimension 2^{0} exceeds the desk-scale cap")]
    TooLarge(u32),
    #[error("ensemble weights invalid: {0}")]
    BadWeights(String),
    #[error("member dimension {got} does not match 2^{qubits}")]
    BadDimension { got: usize, qubits: usize },
    #[error("weights p1 + p2 = {0} exceed 1")]
    WeightOverflow(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Finite weighted set of unitaries defining one circuit step's distribution.
#[derive(Debug, Clone)]
pub struct GateEnsemble {
    pub members: Vec<(f64, CMatrix)>,
    pub system_qubits: usize,
}

impl GateEnsemble {
    pub fn new(members: Vec<(f64, CMatrix)>, system_qubits: usize) -> Result<Self, EnsembleError> {
        let dim = 1usize << system_qubits;
        let mut total = 0.0;
        for (w, u) in &members {
            if *w < 0.0 {
                return Err(EnsembleError::BadWeights(format!("negative weight {w}")));
            }
            if u.nrows() != dim || u.ncols() != dim {
                return Err(EnsembleError::BadDimension { got: u.nrows(), qubits: system_qubits });
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(EnsembleError::BadWeights(format!("weights sum to {total}")));
        }
        Ok(Self { members, system_qubits })
    }
}

fn kron_power(u: &CMatrix, t: usize) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for _ in 0..t {
        out = linalg::kron(&out, u);
    }
    out
}

/// Σ w · U^⊗t ⊗ conj(U)^⊗t as a full (unrestricted) matrix.
pub fn ensemble_moment(ensemble: &GateEnsemble, t: usize) -> Result<CMatrix, EnsembleError> {
    let bits = 2 * t as u32 * ensemble.system_qubits as u32;
    if bits > 16 {
        return Err(EnsembleError::TooLarge(bits));
    }
    let dim = 1usize << bits;
    let mut acc = CMatrix::zeros(dim, dim);
    for (w, u) in &ensemble.members {
        let ut = kron_power(u, t);
        let term = linalg::kron(&ut, &ut.conjugate());
        acc += term.map(|z| z * Complex64::new(*w, 0.0));
    }
    Ok(acc)
}

/// dim Comm_t(U(2^q)): t! once t ≤ 2^q, the Catalan-type count for one qubit.
pub fn commutant_dimension(qubits: usize, t: usize) -> usize {
    if t <= (1usize << qubits) {
        (1..=t).product()
    } else {
        assert_eq!(qubits, 1, "commutant dimension beyond t <= 2^q needs q = 1");
        crate::commutant::catalan_dim(t)
    }
}

/// Spectral gap of the ensemble's t-th moment operator. The unit cluster is
/// measured against the commutant dimension, so reducible ensembles (whose
/// fixed space is strictly larger) report gap 0.
pub fn ensemble_gap(ensemble: &GateEnsemble, t: usize) -> Result<GapReport, EnsembleError> {
    let m = ensemble_moment(ensemble, t)?;
    let spec = linalg::hermitian_spectrum(&m, 1e-9)?;
    let expected = commutant_dimension(ensemble.system_qubits, t);
    Ok(spectra::spectral_gap_with_expected(&spec, expected)?)
}

fn hadamard() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ONE, ONE, -ONE]).scale(std::f64::consts::FRAC_1_SQRT_2)
}

fn phase_gate(theta: f64) -> CMatrix {
    let mut m = CMatrix::identity(2, 2);
    m[(1, 1)] = Complex64::from_polar(1.0, theta);
    m
}

/// 1-qubit family: weight p/2 on H, (1−p)/4 on each of diag(1, e^{±iθ}), and
/// 1/2 on the identity.
pub fn hadamard_phase_family(theta: f64, p: f64) -> GateEnsemble {
    let members = vec![
        (p / 2.0, hadamard()),
        ((1.0 - p) / 4.0, phase_gate(theta)),
        ((1.0 - p) / 4.0, phase_gate(-theta)),
        (0.5, linalg::eye(2)),
    ];
    GateEnsemble::new(members, 1).expect("weights sum to 1 by construction")
}

/// 2-qubit family: p1/4 for H on each qubit, p2/8 for diag(1, e^{±iθ}) on
/// each qubit, (1−p1−p2)/4 for CNOT with each qubit as control, 1/2 identity.
pub fn cnot_hadamard_phase_family(
    theta: f64,
    p1: f64,
    p2: f64,
) -> Result<GateEnsemble, EnsembleError> {
    if p1 < 0.0 || p2 < 0.0 || p1 + p2 > 1.0 + 1e-12 {
        return Err(EnsembleError::WeightOverflow(p1 + p2));
    }
    let h = hadamard();
    let id2 = linalg::eye(2);
    let cnot01 = crate::kak::gate_matrix(crate::kak::NamedGate::Cnot);
    // CNOT with qubit 1 as control: swap-conjugate the standard one
    let swap = crate::kak::gate_matrix(crate::kak::NamedGate::Swap);
    let cnot10 = &swap * &cnot01 * &swap;
    let pc = (1.0 - p1 - p2) / 4.0;
    let members = vec![
        (p1 / 4.0, linalg::kron(&h, &id2)),
        (p1 / 4.0, linalg::kron(&id2, &h)),
        (p2 / 8.0, linalg::kron(&phase_gate(theta), &id2)),
        (p2 / 8.0, linalg::kron(&phase_gate(-theta), &id2)),
        (p2 / 8.0, linalg::kron(&id2, &phase_gate(theta))),
        (p2 / 8.0, linalg::kron(&id2, &phase_gate(-theta))),
        (pc, cnot01),
        (pc, cnot10),
        (0.5, linalg::eye(4)),
    ];
    GateEnsemble::new(members, 2)
}

fn standard_normal(rng: &mut impl Rng) -> f64 {
    // Box–Muller
    let u1: f64 = loop {
        let x = rng.random::<f64>();
        if x > 0.0 {
            break x;
        }
    };
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Haar-distributed 2^q-dimensional unitary: orthonormalize a complex
/// Gaussian matrix; the positive-diagonal R of the decomposition is exactly
/// the phase correction required for Haar measure.
pub fn haar_random_unitary(q: usize, rng: &mut impl Rng) -> CMatrix {
    let n = 1usize << q;
    let g = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(standard_normal(rng), standard_normal(rng))
    });
    // modified Gram–Schmidt on columns
    let mut qmat = g;
    for j in 0..n {
        for k in 0..j {
            let qk = qmat.column(k).into_owned();
            let r = qk.dotc(&qmat.column(j).into_owned());
            let update = qk.map(|z| z * r);
            let col = qmat.column(j) - update;
            qmat.set_column(j, &col);
        }
        let norm = qmat.column(j).norm();
        let col = qmat.column(j).unscale(norm);
        qmat.set_column(j, &col);
    }
    qmat
}

/// Hermitized two-gate Haar baseline ensemble: {U, U†, V, V†} at weight 1/4.
pub fn two_gate_haar_ensemble(rng: &mut impl Rng, qubits: usize) -> GateEnsemble {
    let u = haar_random_unitary(qubits, rng);
    let v = haar_random_unitary(qubits, rng);
    let members = vec![
        (0.25, u.adjoint()),
        (0.25, u),
        (0.25, v.adjoint()),
        (0.25, v),
    ];
    GateEnsemble::new(members, qubits).expect("weights sum to 1")
}

/// Result of a parameter-box optimization.
#[derive(Debug, Clone)]
pub struct Optimum {
    pub params: Vec<f64>,
    pub gap: f64,
}

/// Coarse grid scan over a bounded parameter box, optionally followed by
/// golden-section refinement per coordinate. Deterministic.
pub fn optimize_gap<F>(family: F, box_: &[(f64, f64)], grid: usize, refine: bool) -> Optimum
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    use rayon::prelude::*;
    assert!(grid >= 2);
    let dims = box_.len();
    let total: usize = grid.pow(dims as u32);
    let point = |flat: usize| -> Vec<f64> {
        let mut p = Vec::with_capacity(dims);
        let mut rest = flat;
        for d in 0..dims {
            let idx = rest % grid;
            rest /= grid;
            let (lo, hi) = box_[d];
            p.push(lo + (hi - lo) * idx as f64 / (grid - 1) as f64);
        }
        p
    };
    let evals: Vec<(usize, f64)> = (0..total)
        .into_par_iter()
        .map(|flat| (flat, family(&point(flat))))
        .collect();
    let (best_flat, mut best_gap) = evals
        .iter()
        .copied()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let mut best = point(best_flat);
    if refine {
        let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        for _ in 0..3 {
            for d in 0..dims {
                let (blo, bhi) = box_[d];
                let span = (bhi - blo) / (grid - 1) as f64;
                let mut lo = (best[d] - span).max(blo);
                let mut hi = (best[d] + span).min(bhi);
                let mut x1 = hi - phi * (hi - lo);
                let mut x2 = lo + phi * (hi - lo);
                let eval_at = |x: f64, best: &[f64]| {
                    let mut p = best.to_vec();
                    p[d] = x;
                    family(&p)
                };
                let mut f1 = eval_at(x1, &best);
                let mut f2 = eval_at(x2, &best);
                while hi - lo > 1e-7 {
                    if f1 < f2 {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + phi * (hi - lo);
                        f2 = eval_at(x2, &best);
                    } else {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - phi * (hi - lo);
                        f1 = eval_at(x1, &best);
                    }
                }
                let xm = 0.5 * (lo + hi);
                let fm = eval_at(xm, &best);
                if fm > best_gap {
                    best_gap = fm;
                    best[d] = xm;
                }
            }
        }
    }
    Optimum { params: best, gap: best_gap }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use rand::SeedableRng;

    #[test]
    fn identity_ensemble_moment_is_identity() {
        let e = GateEnsemble::new(vec![(1.0, linalg::eye(2))], 1).unwrap();
        let m = ensemble_moment(&e, 2).unwrap();
        assert!(max_abs_diff(&m, &linalg::eye(16)) < 1e-15);
    }

    #[test]
    fn inverse_pair_is_hermitian() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let u = haar_random_unitary(1, &mut rng);
        let e = GateEnsemble::new(vec![(0.5, u.clone()), (0.5, u.adjoint())], 1).unwrap();
        let m = ensemble_moment(&e, 3).unwrap();
        assert!(linalg::hermiticity_defect(&m) < 1e-12);
    }

    #[test]
    fn haar_unitary_is_unitary_and_seeded() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let u = haar_random_unitary(2, &mut rng);
        assert!(linalg::unitarity_defect(&u) < 1e-12);
        let mut rng2 = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let u2 = haar_random_unitary(2, &mut rng2);
        assert_eq!(max_abs_diff(&u, &u2), 0.0);
    }

    #[test]
    fn identity_mixing_shift() {
        // spectrum(with identity 1/2) = (spectrum(without) + 1)/2 elementwise
        let theta = std::f64::consts::FRAC_PI_4;
        let p = 0.7;
        let with = hadamard_phase_family(theta, p);
        let without = GateEnsemble::new(
            vec![
                (p, hadamard()),
                ((1.0 - p) / 2.0, phase_gate(theta)),
                ((1.0 - p) / 2.0, phase_gate(-theta)),
            ],
            1,
        )
        .unwrap();
        let s_with = linalg::hermitian_spectrum(&ensemble_moment(&with, 2).unwrap(), 1e-9).unwrap();
        let s_without =
            linalg::hermitian_spectrum(&ensemble_moment(&without, 2).unwrap(), 1e-9).unwrap();
        for (a, b) in s_with.eigenvalues.iter().zip(s_without.eigenvalues.iter()) {
            assert!((a - (b + 1.0) / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn no_hadamard_means_zero_gap() {
        let e = hadamard_phase_family(std::f64::consts::FRAC_PI_4, 0.0);
        for t in 1..=3 {
            let gap = ensemble_gap(&e, t).unwrap();
            assert!(gap.gap.abs() < 1e-9, "t={t} gap={}", gap.gap);
        }
    }

    #[test]
    fn cnot_family_weight_overflow() {
        assert!(matches!(
            cnot_hadamard_phase_family(0.1, 0.7, 0.5),
            Err(EnsembleError::WeightOverflow(_))
        ));
    }

    #[test]
    fn cnot_only_family_zero_gap_at_t1() {
        let e = cnot_hadamard_phase_family(std::f64::consts::FRAC_PI_4, 0.0, 0.0).unwrap();
        let gap = ensemble_gap(&e, 1).unwrap();
        assert!(gap.gap.abs() < 1e-9);
    }

    #[test]
    fn moment_operator_norm_bounded() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let e = two_gate_haar_ensemble(&mut rng, 1);
        let m = ensemble_moment(&e, 2).unwrap();
        let spec = linalg::hermitian_spectrum(&m, 1e-9).unwrap();
        assert!(spec.eigenvalues[0] <= 1.0 + 1e-10);
        assert!(*spec.eigenvalues.last().unwrap() >= -1.0 - 1e-10);
    }

    #[test]
    fn optimizer_on_constant_family() {
        let opt = optimize_gap(|_| 0.25, &[(0.0, 1.0)], 11, true);
        assert!((opt.gap - 0.25).abs() < 1e-12);
    }

    #[test]
    fn h_t_gap_at_pi_over_4() {
        // max over p of the t=3 gap for the {H, T} family
        let f = |p: &[f64]| {
            ensemble_gap(&hadamard_phase_family(std::f64::consts::FRAC_PI_4, p[0]), 3)
                .unwrap()
                .gap
        };
        let opt = optimize_gap(f, &[(0.0, 1.0)], 41, true);
        assert!((opt.gap - 0.0433879).abs() < 1e-5, "gap {}", opt.gap);
    }
}
