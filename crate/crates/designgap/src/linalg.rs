//! Dense complex linear algebra kernel shared by every other module.
//!
//! Everything here is a pure function over immutable matrices: Hermitian
//! eigensolves, tensor embedding of local operators, Gram–Schmidt under the
//! Hilbert–Schmidt inner product, principal matrix square roots and
//! numerical rank. Spectra are computed by dense eigensolvers; the
//! restricted bases used elsewhere keep dimensions small enough that no
//! sparse machinery is needed.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;
/// Dense real matrix, used on the real fast paths (t = 2 operators are real).
pub type RMatrix = DMatrix<f64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hermiticity defects above this are an error, not something to fix silently:
/// a non-Hermitian ensemble operator means the caller forgot Hermitization.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Default drop tolerance for Gram–Schmidt, relative to the vector norm.
pub const DROP_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.3e}")]
    NonHermitian { defect: f64, tol: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("duplicate site index {0}")]
    DuplicateSite(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("matrix is numerically defective: residual {0:.3e}")]
    DefectiveMatrix(f64),
}

/// All real eigenvalues of a Hermitian matrix, with unit-eigenvalue bookkeeping.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Eigenvalues sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Number of eigenvalues within `unit_tol` of 1.
    pub unit_multiplicity: usize,
    /// max |M - M†| entry before symmetrization.
    pub hermiticity_defect: f64,
}

/// Max entrywise |M - M†|.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let mut defect = 0.0_f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > defect {
                defect = d;
            }
        }
    }
    defect
}

/// Largest |Im| entry; a matrix below 1e-13 is treated as real.
pub fn imag_magnitude(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()))
}

/// Eigenvalues (ascending) of a real symmetric matrix.
pub fn real_symmetric_eigenvalues(m: &RMatrix) -> Vec<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Eigendecomposition of a real symmetric matrix: (eigenvalues asc, vectors as columns).
pub fn real_symmetric_eigen(m: &RMatrix) -> (Vec<f64>, RMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let n = m.nrows();
    let mut vecs = RMatrix::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for (k, &i) in idx.iter().enumerate() {
        vals.push(eig.eigenvalues[i]);
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// All real eigenvalues of the symmetrized matrix (M + M†)/2, sorted
/// descending. Errors if M is not square or its hermiticity defect exceeds
/// [`HERMITICITY_TOL`].
pub fn hermitian_spectrum(m: &CMatrix, unit_tol: f64) -> Result<SpectrumReport, LinalgError> {
    if m.nrows() != m.ncols() {
        return Err(LinalgError::NonSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let defect = hermiticity_defect(m);
    if defect > HERMITICITY_TOL {
        return Err(LinalgError::NonHermitian { defect, tol: HERMITICITY_TOL });
    }
    let mut vals = if imag_magnitude(m) < 1e-13 {
        // Real symmetric fast path: ~4x cheaper than the complex solver.
        let n = m.nrows();
        let mut re = RMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                re[(i, j)] = 0.5 * (m[(i, j)].re + m[(j, i)].re);
            }
        }
        real_symmetric_eigenvalues(&re)
    } else {
        let sym = (m + m.adjoint()).scale(0.5);
        let eig = SymmetricEigen::new(sym);
        let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    };
    vals.reverse();
    Ok(spectrum_report_from_sorted(vals, unit_tol, defect))
}

/// Spectrum report for an already-real symmetric matrix.
pub fn real_spectrum(m: &RMatrix, unit_tol: f64) -> Result<SpectrumReport, LinalgError> {
    if m.nrows() != m.ncols() {
        return Err(LinalgError::NonSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let mut defect = 0.0_f64;
    for i in 0..m.nrows() {
        for j in 0..i {
            defect = defect.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if defect > HERMITICITY_TOL {
        return Err(LinalgError::NonHermitian { defect, tol: HERMITICITY_TOL });
    }
    let sym = (m + m.transpose()).scale(0.5);
    let mut vals = real_symmetric_eigenvalues(&sym);
    vals.reverse();
    Ok(spectrum_report_from_sorted(vals, unit_tol, defect))
}

fn spectrum_report_from_sorted(vals: Vec<f64>, unit_tol: f64, defect: f64) -> SpectrumReport {
    let unit_multiplicity =
        vals.iter().filter(|&&v| v >= 1.0 - unit_tol && v <= 1.0 + unit_tol).count();
    SpectrumReport { eigenvalues: vals, unit_multiplicity, hermiticity_defect: defect }
}

/// Embed a local operator on the given sites of an n-site system with local
/// dimension `local_dim`, acting as the identity elsewhere. Site 0 is the
/// most significant tensor factor; the order of `sites` fixes which factor
/// of `local` lands on which site.
pub fn kron_embed(
    local: &CMatrix,
    sites: &[usize],
    n: usize,
    local_dim: usize,
) -> Result<CMatrix, LinalgError> {
    let m = sites.len();
    let ldim = local_dim.pow(m as u32);
    if local.nrows() != ldim || local.ncols() != ldim {
        return Err(LinalgError::DimensionMismatch(format!(
            "local operator is {}x{}, expected {ldim}x{ldim}",
            local.nrows(),
            local.ncols()
        )));
    }
    for (i, &s) in sites.iter().enumerate() {
        if s >= n {
            return Err(LinalgError::DimensionMismatch(format!("site {s} out of range for n={n}")));
        }
        if sites[..i].contains(&s) {
            return Err(LinalgError::DuplicateSite(s));
        }
    }
    let dim = local_dim.pow(n as u32);
    let mut out = CMatrix::zeros(dim, dim);
    // digit strides, site 0 most significant
    let stride = |site: usize| local_dim.pow((n - 1 - site) as u32);
    let rest_sites: Vec<usize> = (0..n).filter(|s| !sites.contains(s)).collect();
    let rest_count = local_dim.pow(rest_sites.len() as u32);
    for lr in 0..ldim {
        for lc in 0..ldim {
            let v = local[(lr, lc)];
            if v == ZERO {
                continue;
            }
            // distribute local digits onto their sites
            let mut base_r = 0usize;
            let mut base_c = 0usize;
            for (k, &s) in sites.iter().enumerate() {
                let digit_r = (lr / local_dim.pow((m - 1 - k) as u32)) % local_dim;
                let digit_c = (lc / local_dim.pow((m - 1 - k) as u32)) % local_dim;
                base_r += digit_r * stride(s);
                base_c += digit_c * stride(s);
            }
            for rest in 0..rest_count {
                let mut offset = 0usize;
                let mut r = rest;
                for &s in rest_sites.iter().rev() {
                    offset += (r % local_dim) * stride(s);
                    r /= local_dim;
                }
                out[(base_r + offset, base_c + offset)] += v;
            }
        }
    }
    Ok(out)
}

/// Hilbert–Schmidt inner product Tr(A†B), with no normalization.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut acc = ZERO;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj() * y;
    }
    acc
}

pub fn hs_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Gram–Schmidt under the Hilbert–Schmidt inner product. Inputs whose
/// residual norm after projection falls below `drop_tol` (relative to the
/// input norm) are dropped as linearly dependent.
pub fn gram_schmidt(vectors: &[CMatrix], drop_tol: f64) -> Result<Vec<CMatrix>, LinalgError> {
    if vectors.is_empty() {
        return Err(LinalgError::EmptyInput);
    }
    let shape = vectors[0].shape();
    for v in vectors {
        if v.shape() != shape {
            return Err(LinalgError::DimensionMismatch(format!(
                "mixed shapes {:?} and {:?}",
                shape,
                v.shape()
            )));
        }
    }
    let mut basis: Vec<CMatrix> = Vec::new();
    for v in vectors {
        let scale = hs_norm(v);
        if scale == 0.0 {
            continue;
        }
        let mut w = v.clone();
        // two passes of classical GS for numerical stability
        for _ in 0..2 {
            for b in &basis {
                let c = hs_inner(b, &w);
                w -= b.map(|z| z * c);
            }
        }
        let norm = hs_norm(&w);
        if norm < drop_tol * scale {
            continue;
        }
        w.unscale_mut(norm);
        basis.push(w);
    }
    Ok(basis)
}

/// Principal square root of a Hermitian matrix via eigendecomposition, using
/// the principal complex branch on negative eigenvalues. For PSD input the
/// result is Hermitian PSD.
pub fn principal_sqrt(m: &CMatrix) -> Result<CMatrix, LinalgError> {
    if m.nrows() != m.ncols() {
        return Err(LinalgError::NonSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let defect = hermiticity_defect(m);
    if defect > HERMITICITY_TOL {
        return Err(LinalgError::DefectiveMatrix(defect));
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let n = m.nrows();
    let mut d = CMatrix::zeros(n, n);
    for k in 0..n {
        let lam = eig.eigenvalues[k];
        d[(k, k)] = if lam >= 0.0 {
            Complex64::new(lam.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-lam).sqrt())
        };
    }
    let v = &eig.eigenvectors;
    let root = v * d * v.adjoint();
    let residual = (&root * &root - m).iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    if residual > 1e-7 * scale {
        return Err(LinalgError::DefectiveMatrix(residual));
    }
    Ok(root)
}

/// Principal square root of a real symmetric PSD matrix (real output).
pub fn real_psd_sqrt(m: &RMatrix) -> Result<RMatrix, LinalgError> {
    let (vals, vecs) = real_symmetric_eigen(m);
    let n = m.nrows();
    let mut d = RMatrix::zeros(n, n);
    for k in 0..n {
        if vals[k] < -1e-10 {
            return Err(LinalgError::DefectiveMatrix(vals[k]));
        }
        d[(k, k)] = vals[k].max(0.0).sqrt();
    }
    Ok(&vecs * d * vecs.transpose())
}

/// Number of singular values above `tol` times the largest singular value.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> usize {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    match sv.first() {
        None => 0,
        Some(&s0) if s0 == 0.0 => 0,
        Some(&s0) => sv.iter().filter(|&&s| s > tol * s0).count(),
    }
}

/// Kronecker product with the left factor most significant.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_real(a: &RMatrix, b: &RMatrix) -> RMatrix {
    a.kronecker(b)
}

/// Identity of the given dimension.
pub fn eye(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Lift a real matrix into the complex carrier type.
pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Real part, for matrices known to be real up to roundoff.
pub fn to_real(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

/// Max entrywise |A - B|.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0_f64, f64::max)
}

/// ||A†A - I||_max, the unitarity defect.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &eye(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn cm(re: &RMatrix) -> CMatrix {
        to_complex(re)
    }

    fn pauli_x() -> CMatrix {
        to_complex(&dmatrix![0.0, 1.0; 1.0, 0.0])
    }

    #[test]
    fn spectrum_of_identity() {
        let m = eye(2);
        let rep = hermitian_spectrum(&m, 1e-9).unwrap();
        assert_eq!(rep.eigenvalues, vec![1.0, 1.0]);
        assert_eq!(rep.unit_multiplicity, 2);
    }

    #[test]
    fn spectrum_of_diagonal() {
        let m = cm(&RMatrix::from_diagonal(&nalgebra::dvector![1.0, 1.0 / 3.0, -1.0 / 9.0]));
        let rep = hermitian_spectrum(&m, 1e-9).unwrap();
        assert!((rep.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((rep.eigenvalues[1] - 1.0 / 3.0).abs() < 1e-14);
        assert!((rep.eigenvalues[2] + 1.0 / 9.0).abs() < 1e-14);
        assert_eq!(rep.unit_multiplicity, 1);
    }

    #[test]
    fn spectrum_rejects_non_hermitian() {
        let m = cm(&dmatrix![0.0, 1.0; 0.0, 0.0]);
        assert!(matches!(hermitian_spectrum(&m, 1e-9), Err(LinalgError::NonHermitian { .. })));
    }

    #[test]
    fn spectrum_rejects_non_square() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(hermitian_spectrum(&m, 1e-9), Err(LinalgError::NonSquare { .. })));
    }

    #[test]
    fn spectrum_invariant_under_unitary_conjugation() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let h = {
            let a = random_complex(4, &mut rng);
            (&a + a.adjoint()).scale(0.5)
        };
        let u = crate::ensembles::haar_random_unitary(2, &mut rng);
        let conj = &u * &h * u.adjoint();
        let s1 = hermitian_spectrum(&h, 1e-9).unwrap().eigenvalues;
        let s2 = hermitian_spectrum(&conj, 1e-9).unwrap().eigenvalues;
        for (a, b) in s1.iter().zip(s2.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    fn random_complex(n: usize, rng: &mut impl rand::Rng) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn kron_embed_definition() {
        let x = pauli_x();
        let id2 = eye(2);
        let on0 = kron_embed(&x, &[0], 2, 2).unwrap();
        assert_eq!(max_abs_diff(&on0, &kron(&x, &id2)), 0.0);
        let on1 = kron_embed(&x, &[1], 2, 2).unwrap();
        assert_eq!(max_abs_diff(&on1, &kron(&id2, &x)), 0.0);
    }

    #[test]
    fn kron_embed_swap_site_order() {
        let swap = cm(&dmatrix![
            1.0, 0.0, 0.0, 0.0;
            0.0, 0.0, 1.0, 0.0;
            0.0, 1.0, 0.0, 0.0;
            0.0, 0.0, 0.0, 1.0
        ]);
        let a = kron_embed(&swap, &[0, 1], 2, 2).unwrap();
        let b = kron_embed(&swap, &[1, 0], 2, 2).unwrap();
        assert!(max_abs_diff(&a, &b) < 1e-15);
    }

    #[test]
    fn kron_embed_disjoint_commute() {
        let x = pauli_x();
        let h = cm(&dmatrix![1.0, 1.0; 1.0, -1.0]).scale(std::f64::consts::FRAC_1_SQRT_2);
        let a = kron_embed(&x, &[0], 3, 2).unwrap();
        let b = kron_embed(&h, &[2], 3, 2).unwrap();
        assert!(max_abs_diff(&(&a * &b), &(&b * &a)) < 1e-14);
    }

    #[test]
    fn kron_embed_rejects_duplicates() {
        let swap = eye(4);
        assert!(matches!(kron_embed(&swap, &[1, 1], 3, 2), Err(LinalgError::DuplicateSite(1))));
    }

    #[test]
    fn gram_schmidt_duplicate_dropped() {
        let v = eye(2);
        let out = gram_schmidt(&[v.clone(), v.clone()], DROP_TOL).unwrap();
        assert_eq!(out.len(), 1);
        assert!((hs_norm(&out[0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_orthonormal() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let vecs: Vec<CMatrix> = (0..5).map(|_| random_complex(3, &mut rng)).collect();
        let basis = gram_schmidt(&vecs, DROP_TOL).unwrap();
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let g = hs_inner(a, b);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((g - Complex64::new(expected, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn principal_sqrt_diagonal() {
        let m = cm(&RMatrix::from_diagonal(&nalgebra::dvector![4.0, 1.0]));
        let r = principal_sqrt(&m).unwrap();
        assert!((r[(0, 0)] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((r[(1, 1)] - ONE).norm() < 1e-12);
    }

    #[test]
    fn principal_sqrt_negative_branch() {
        let m = cm(&RMatrix::from_diagonal(&nalgebra::dvector![-1.0]));
        let r = principal_sqrt(&m).unwrap();
        assert!((r[(0, 0)] - I).norm() < 1e-12);
    }

    #[test]
    fn principal_sqrt_squares_back() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let a = random_complex(5, &mut rng);
        let h = (&a + a.adjoint()).scale(0.5);
        let r = principal_sqrt(&h).unwrap();
        assert!(max_abs_diff(&(&r * &r), &h) < 1e-8);
    }

    #[test]
    fn numerical_rank_cases() {
        assert_eq!(numerical_rank(&CMatrix::zeros(3, 3), 1e-10), 0);
        let mut outer = CMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                outer[(i, j)] = Complex64::new(((i + 1) * (j + 1)) as f64, 0.0);
            }
        }
        assert_eq!(numerical_rank(&outer, 1e-10), 1);
    }
}
