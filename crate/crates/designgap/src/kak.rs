//! KAK (Cartan) decomposition of 2-qubit unitaries, canonicalization into the
//! Weyl chamber, the named-gate table, and Weyl-chamber grids.
//!
//! Any U ∈ U(4) factors as (A1⊗A2) · exp(i(kx XX + ky YY + kz ZZ)) · (B1⊗B2)
//! up to a global phase. The coefficient triple is unique once reduced to the
//! canonical region π/2 > kx ≥ ky ≥ kz ≥ 0, kx + ky ≤ π/2, and kx ≤ π/4
//! whenever kz = 0. The reduction moves are π/2 shifts of a single
//! coefficient, sign flips of a pair, and swaps of a pair; each move has an
//! exact realization by 1-qubit dressings, which we track so the
//! decomposition always reconstructs its input.

use crate::linalg::{self, CMatrix, ONE, ZERO};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};
use thiserror::Error;

const BOUNDARY_SNAP: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum KakError {
    #[error("matrix is not unitary: defect {0:.3e}")]
    NotUnitary(f64),
    #[error("matrix is not 4x4")]
    WrongSize,
    #[error("unknown gate name {0:?}")]
    UnknownName(String),
    #[error("simultaneous diagonalization failed: off-diagonal residual {0:.3e}")]
    Diagonalization(f64),
}

/// The triple (kx, ky, kz) parameterizing a 2-qubit gate family up to local
/// gates, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KakCoefficients {
    pub kx: f64,
    pub ky: f64,
    pub kz: f64,
}

impl KakCoefficients {
    pub fn new(kx: f64, ky: f64, kz: f64) -> Self {
        Self { kx, ky, kz }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.kx, self.ky, self.kz]
    }

    /// Canonical-region membership with the boundary tolerance used by
    /// [`canonicalize`].
    pub fn is_canonical(&self) -> bool {
        let t = BOUNDARY_SNAP;
        let Self { kx, ky, kz } = *self;
        kx < FRAC_PI_2 - t
            && kx >= ky - t
            && ky >= kz - t
            && kz >= -t
            && kx + ky <= FRAC_PI_2 + t
            && (kz > t || kx <= FRAC_PI_4 + t)
    }
}

/// Full decomposition: canonical coefficients plus the local dressings and
/// global phase that reconstruct the input.
#[derive(Debug, Clone)]
pub struct KakDecomposition {
    pub coefficients: KakCoefficients,
    pub a1: CMatrix,
    pub a2: CMatrix,
    pub b1: CMatrix,
    pub b2: CMatrix,
    pub global_phase: Complex64,
}

impl KakDecomposition {
    /// (a1⊗a2) · exp(i(kx XX + ky YY + kz ZZ)) · (b1⊗b2) · phase
    pub fn reconstruct(&self) -> CMatrix {
        let v = canonical_unitary(&self.coefficients);
        let left = linalg::kron(&self.a1, &self.a2);
        let right = linalg::kron(&self.b1, &self.b2);
        (left * v * right).scale_phase(self.global_phase)
    }
}

trait ScalePhase {
    fn scale_phase(self, phase: Complex64) -> Self;
}

impl ScalePhase for CMatrix {
    fn scale_phase(self, phase: Complex64) -> Self {
        self.map(|z| z * phase)
    }
}

/// Pauli matrices; index 0..3 = I, X, Y, Z.
pub fn pauli(i: usize) -> CMatrix {
    let i_ = Complex64::new(0.0, 1.0);
    match i {
        0 => CMatrix::identity(2, 2),
        1 => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => CMatrix::from_row_slice(2, 2, &[ZERO, -i_, i_, ZERO]),
        3 => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => panic!("pauli index out of range"),
    }
}

fn pauli_pair(i: usize) -> CMatrix {
    let p = pauli(i + 1);
    linalg::kron(&p, &p)
}

/// exp(i(kx XX + ky YY + kz ZZ)), computed as the product of the three
/// commuting factors cos(k) I + i sin(k) PP.
pub fn canonical_unitary(k: &KakCoefficients) -> CMatrix {
    let mut u = linalg::eye(4);
    for (i, &kc) in k.as_array().iter().enumerate() {
        let factor = linalg::eye(4).scale(kc.cos())
            + pauli_pair(i).map(|z| z * Complex64::new(0.0, kc.sin()));
        u = u * factor;
    }
    u
}

/// One equivalence move on the coefficient triple.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Move {
    /// k[i] += s * π/2
    Shift(usize, i32),
    /// (k[i], k[j]) -> (-k[i], -k[j])
    Flip(usize, usize),
    /// (k[i], k[j]) -> (k[j], k[i])
    Swap(usize, usize),
}

fn apply_move_coeffs(k: &mut [f64; 3], mv: Move) {
    match mv {
        Move::Shift(i, s) => k[i] += s as f64 * FRAC_PI_2,
        Move::Flip(i, j) => {
            k[i] = -k[i];
            k[j] = -k[j];
        }
        Move::Swap(i, j) => k.swap(i, j),
    }
}

/// Plan the move sequence that carries `k` into the canonical region.
fn canonical_moves(k: &KakCoefficients) -> Vec<Move> {
    let mut v = k.as_array();
    let mut moves = Vec::new();
    let mut push = |v: &mut [f64; 3], mv: Move| {
        apply_move_coeffs(v, mv);
        moves.push(mv);
    };
    // reduce each coordinate into [0, π/2)
    for i in 0..3 {
        let shifts = -(v[i] / FRAC_PI_2).floor() as i32;
        if shifts != 0 {
            push(&mut v, Move::Shift(i, shifts));
        }
        if v[i] > FRAC_PI_2 - BOUNDARY_SNAP {
            push(&mut v, Move::Shift(i, -1));
            // lands within snap distance of 0; sign cleaned by a flip below if needed
        }
    }
    for _ in 0..16 {
        // sort descending (bubble with explicit swaps)
        if v[0] < v[1] {
            push(&mut v, Move::Swap(0, 1));
        }
        if v[1] < v[2] {
            push(&mut v, Move::Swap(1, 2));
        }
        if v[0] < v[1] {
            push(&mut v, Move::Swap(0, 1));
        }
        // negatives can only be snap-sized here; flip the bottom pair to clean them
        if v[2] < -BOUNDARY_SNAP {
            push(&mut v, Move::Flip(1, 2));
            continue;
        }
        if v[0] + v[1] > FRAC_PI_2 + BOUNDARY_SNAP {
            // (kx, ky) -> (π/2 - kx, π/2 - ky)
            push(&mut v, Move::Shift(0, -1));
            push(&mut v, Move::Flip(0, 1));
            push(&mut v, Move::Shift(1, 1));
            continue;
        }
        if v[2].abs() <= BOUNDARY_SNAP && v[0] > FRAC_PI_4 + BOUNDARY_SNAP {
            // kz = 0 allows the reflection kx -> π/2 - kx
            push(&mut v, Move::Shift(0, -1));
            push(&mut v, Move::Flip(0, 2));
            continue;
        }
        break;
    }
    moves
}

fn snap(k: &mut [f64; 3]) {
    for x in k.iter_mut() {
        if x.abs() <= BOUNDARY_SNAP {
            *x = 0.0;
        }
        if (*x - FRAC_PI_4).abs() <= BOUNDARY_SNAP {
            *x = FRAC_PI_4;
        }
        if (*x - FRAC_PI_2).abs() <= BOUNDARY_SNAP {
            *x = 0.0;
        }
    }
    if k[0] < k[1] {
        k.swap(0, 1);
    }
    if k[1] < k[2] {
        k.swap(1, 2);
    }
    if k[0] < k[1] {
        k.swap(0, 1);
    }
}

/// Apply π/2 shifts, pairwise sign flips, and coordinate swaps until the
/// canonical-region invariants hold. The output is the unique representative.
pub fn canonicalize(k: &KakCoefficients) -> KakCoefficients {
    let mut v = k.as_array();
    for mv in canonical_moves(k) {
        apply_move_coeffs(&mut v, mv);
    }
    snap(&mut v);
    KakCoefficients::new(v[0], v[1], v[2])
}

/// Dressed state while canonicalizing a decomposition:
/// U = phase · (a1⊗a2) · V(k) · (b1⊗b2) is maintained across moves.
struct DressedKak {
    k: [f64; 3],
    a1: CMatrix,
    a2: CMatrix,
    b1: CMatrix,
    b2: CMatrix,
    phase: Complex64,
}

impl DressedKak {
    fn apply(&mut self, mv: Move) {
        match mv {
            Move::Shift(i, s) => {
                // V(k + sπ/2 on axis i) absorbs (i P⊗P)^s; compensate on the right
                self.k[i] += s as f64 * FRAC_PI_2;
                let p = pauli(i + 1);
                let s_mod = s.rem_euclid(4);
                // (i P⊗P)^{-s} = i^{-s} (P⊗P)^{s mod 2}
                let phase = match s_mod {
                    0 => ONE,
                    1 => Complex64::new(0.0, -1.0),
                    2 => -ONE,
                    _ => Complex64::new(0.0, 1.0),
                };
                self.phase *= phase;
                if s_mod % 2 == 1 {
                    self.b1 = &p * &self.b1;
                    self.b2 = &p * &self.b2;
                }
            }
            Move::Flip(i, j) => {
                // conjugation by P⊗I with P the Pauli complementary to {i, j}
                self.k[i] = -self.k[i];
                self.k[j] = -self.k[j];
                let axis = 3 - i - j; // complementary axis index in {0,1,2}
                let p = pauli(axis + 1);
                self.a1 = &self.a1 * &p;
                self.b1 = &p * &self.b1;
            }
            Move::Swap(i, j) => {
                // conjugation by e^{iπ/4 P} ⊗ e^{iπ/4 P}, P complementary to {i, j}
                self.k.swap(i, j);
                let axis = 3 - i - j;
                let p = pauli(axis + 1);
                let c = rot_quarter(&p);
                let cd = c.adjoint();
                self.a1 = &self.a1 * &cd;
                self.a2 = &self.a2 * &cd;
                self.b1 = &c * &self.b1;
                self.b2 = &c * &self.b2;
            }
        }
    }
}

/// e^{iπ/4 P} = (I + iP)/√2 for a Pauli P.
fn rot_quarter(p: &CMatrix) -> CMatrix {
    (linalg::eye(2) + p.map(|z| z * Complex64::new(0.0, 1.0)))
        .scale(std::f64::consts::FRAC_1_SQRT_2)
}

/// Magic basis: columns are Bell states in which SU(2)⊗SU(2) acts as SO(4)
/// and XX, YY, ZZ are simultaneously diagonal.
fn magic_basis() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let i_ = Complex64::new(0.0, 1.0);
    let mut m = CMatrix::zeros(4, 4);
    // |m0> = (|00> + |11>)/√2
    m[(0, 0)] = ONE.scale(s);
    m[(3, 0)] = ONE.scale(s);
    // |m1> = i(|01> + |10>)/√2
    m[(1, 1)] = i_.scale(s);
    m[(2, 1)] = i_.scale(s);
    // |m2> = (|01> - |10>)/√2
    m[(1, 2)] = ONE.scale(s);
    m[(2, 2)] = -ONE.scale(s);
    // |m3> = i(|00> - |11>)/√2
    m[(0, 3)] = i_.scale(s);
    m[(3, 3)] = -i_.scale(s);
    m
}

/// Simultaneously diagonalize the commuting real symmetric parts of a complex
/// symmetric unitary g, returning a real orthogonal O with Oᵀ g O diagonal.
fn diag_complex_symmetric(g: &CMatrix) -> Result<linalg::RMatrix, KakError> {
    let n = g.nrows();
    let re_r: linalg::RMatrix = g.map(|z| z.re);
    let im_r: linalg::RMatrix = g.map(|z| z.im);
    let (vals, vecs) = linalg::real_symmetric_eigen(&re_r);
    let mut o = vecs.clone();
    // within each eigenvalue cluster of Re(g), diagonalize Im(g)
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (vals[end] - vals[start]).abs() < 1e-7 {
            end += 1;
        }
        if end - start > 1 {
            let q = o.columns(start, end - start).into_owned();
            let sub = q.transpose() * &im_r * &q;
            let (_, subvecs) = linalg::real_symmetric_eigen(&sub);
            let rotated = q * subvecs;
            for (c, col) in (start..end).enumerate() {
                o.set_column(col, &rotated.column(c));
            }
        }
        start = end;
    }
    // check the result really diagonalizes g
    let oc = linalg::to_complex(&o);
    let d = oc.transpose() * g * &oc;
    let mut offdiag = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                offdiag = offdiag.max(d[(i, j)].norm());
            }
        }
    }
    if offdiag > 1e-8 {
        return Err(KakError::Diagonalization(offdiag));
    }
    Ok(o)
}

/// Factor a 4×4 tensor product T = A⊗B into unitary 2×2 factors.
fn kron_factor(t: &CMatrix) -> (CMatrix, CMatrix) {
    let (mut pr, mut pc) = (0, 0);
    let mut best = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            let v = t[(r, c)].norm();
            if v > best {
                best = v;
                pr = r;
                pc = c;
            }
        }
    }
    let (r1, r2, c1, c2) = (pr / 2, pr % 2, pc / 2, pc % 2);
    let mut b = CMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            b[(i, j)] = t[(r1 * 2 + i, c1 * 2 + j)];
        }
    }
    let det_b = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
    let scale = det_b.sqrt();
    b.iter_mut().for_each(|z| *z /= scale);
    let mut a = CMatrix::zeros(2, 2);
    let pivot = b[(r2, c2)];
    for i in 0..2 {
        for j in 0..2 {
            a[(i, j)] = t[(i * 2 + r2, j * 2 + c2)] / pivot;
        }
    }
    (a, b)
}

/// KAK decomposition of a 4×4 unitary via the magic basis. The returned
/// coefficients are canonical and invariant under pre/post multiplication by
/// 1-qubit unitaries.
pub fn kak_decompose(u: &CMatrix) -> Result<KakDecomposition, KakError> {
    if u.nrows() != 4 || u.ncols() != 4 {
        return Err(KakError::WrongSize);
    }
    let defect = linalg::unitarity_defect(u);
    if defect > 1e-9 {
        return Err(KakError::NotUnitary(defect));
    }
    // normalize to SU(4)
    let det = u.determinant();
    let alpha = Complex64::from_polar(1.0, det.arg() / 4.0);
    let u1 = u.map(|z| z / alpha);

    let m = magic_basis();
    let md = m.adjoint();
    let mm = &md * &u1 * &m;
    let g = mm.transpose() * &mm;
    let o2 = diag_complex_symmetric(&g)?;
    let mut o2 = o2;
    if o2.determinant() < 0.0 {
        let col = -o2.column(0).into_owned();
        o2.set_column(0, &col);
    }
    let o2c = linalg::to_complex(&o2);
    let d = o2c.transpose() * &g * &o2c;
    let mut theta: Vec<f64> = (0..4).map(|i| d[(i, i)].arg() / 2.0).collect();
    // Σθ must vanish (mod 2π it is 0 for SU(4)); fold π excesses back
    loop {
        let s: f64 = theta.iter().sum();
        if s > FRAC_PI_2 + 1e-9 {
            let imax =
                (0..4).max_by(|&a, &b| theta[a].partial_cmp(&theta[b]).unwrap()).unwrap();
            theta[imax] -= std::f64::consts::PI;
        } else if s < -FRAC_PI_2 - 1e-9 {
            let imin =
                (0..4).min_by(|&a, &b| theta[a].partial_cmp(&theta[b]).unwrap()).unwrap();
            theta[imin] += std::f64::consts::PI;
        } else {
            break;
        }
    }
    let w = CMatrix::from_fn(4, 4, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, theta[i])
        } else {
            ZERO
        }
    });
    let w_inv = w.adjoint();
    let k1 = &mm * &o2c * &w_inv;

    // interaction coefficients from the magic-basis eigenphases
    let kx = 0.5 * (theta[0] + theta[1]);
    let ky = 0.5 * (theta[1] + theta[3]);
    let kz = 0.5 * (theta[0] + theta[3]);

    let left = &m * &k1 * &md;
    let right = &m * o2c.transpose() * &md;
    let (a1, a2) = kron_factor(&left);
    let (b1, b2) = kron_factor(&right);

    let mut dressed = DressedKak {
        k: [kx, ky, kz],
        a1,
        a2,
        b1,
        b2,
        phase: alpha,
    };
    // fold the residual scalar from the SO(4) -> SU(2)⊗SU(2) factorizations
    // into the global phase, measured against the input
    let probe = KakDecomposition {
        coefficients: KakCoefficients::new(kx, ky, kz),
        a1: dressed.a1.clone(),
        a2: dressed.a2.clone(),
        b1: dressed.b1.clone(),
        b2: dressed.b2.clone(),
        global_phase: dressed.phase,
    };
    let recon = probe.reconstruct();
    let mut num = ZERO;
    let mut den = 0.0;
    for (x, y) in recon.iter().zip(u.iter()) {
        num += x.conj() * y;
        den += x.norm_sqr();
    }
    dressed.phase *= num / Complex64::new(den, 0.0);

    for mv in canonical_moves(&KakCoefficients::new(kx, ky, kz)) {
        dressed.apply(mv);
    }
    let mut kf = dressed.k;
    snap(&mut kf);
    Ok(KakDecomposition {
        coefficients: KakCoefficients::new(kf[0], kf[1], kf[2]),
        a1: dressed.a1,
        a2: dressed.a2,
        b1: dressed.b1,
        b2: dressed.b2,
        global_phase: dressed.phase,
    })
}

/// The named 2-qubit gate families of the canonical table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedGate {
    Swap,
    Chi,
    Qft,
    Sqsw,
    Iswap,
    B,
    Sqisw,
    Cnot,
}

impl NamedGate {
    pub const ALL: [NamedGate; 8] = [
        NamedGate::Swap,
        NamedGate::Chi,
        NamedGate::Qft,
        NamedGate::Sqsw,
        NamedGate::Iswap,
        NamedGate::B,
        NamedGate::Sqisw,
        NamedGate::Cnot,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NamedGate::Swap => "SWAP",
            NamedGate::Chi => "CHI",
            NamedGate::Qft => "QFT",
            NamedGate::Sqsw => "SQSW",
            NamedGate::Iswap => "ISWAP",
            NamedGate::B => "B",
            NamedGate::Sqisw => "SQISW",
            NamedGate::Cnot => "CNOT",
        }
    }

    pub fn parse(s: &str) -> Result<Self, KakError> {
        let up = s.to_ascii_uppercase();
        Self::ALL
            .iter()
            .copied()
            .find(|g| g.name() == up)
            .ok_or(KakError::UnknownName(s.to_string()))
    }

    pub fn coefficients(&self) -> KakCoefficients {
        let chi_angle = 0.125 * (0.2_f64).acos();
        match self {
            NamedGate::Swap => KakCoefficients::new(FRAC_PI_4, FRAC_PI_4, FRAC_PI_4),
            NamedGate::Chi => KakCoefficients::new(FRAC_PI_4 - chi_angle, FRAC_PI_8, chi_angle),
            NamedGate::Qft => KakCoefficients::new(FRAC_PI_4, FRAC_PI_4, FRAC_PI_8),
            NamedGate::Sqsw => KakCoefficients::new(FRAC_PI_8, FRAC_PI_8, FRAC_PI_8),
            NamedGate::Iswap => KakCoefficients::new(FRAC_PI_4, FRAC_PI_4, 0.0),
            NamedGate::B => KakCoefficients::new(FRAC_PI_4, FRAC_PI_8, 0.0),
            NamedGate::Sqisw => KakCoefficients::new(FRAC_PI_8, FRAC_PI_8, 0.0),
            NamedGate::Cnot => KakCoefficients::new(FRAC_PI_4, 0.0, 0.0),
        }
    }
}

/// Canonical coefficients of a named gate.
pub fn named_gate(name: &str) -> Result<KakCoefficients, KakError> {
    NamedGate::parse(name).map(|g| g.coefficients())
}

/// Deterministic lattice of canonical coefficients covering the Weyl chamber
/// (tetrahedron vertices included), deduplicated under [`canonicalize`].
/// Lattice spacing is π/(2·resolution).
pub fn weyl_grid(resolution: usize) -> Vec<KakCoefficients> {
    assert!(resolution >= 2, "weyl_grid needs resolution >= 2");
    let step = FRAC_PI_2 / resolution as f64;
    let mut seen: Vec<[i64; 3]> = Vec::new();
    let mut out = Vec::new();
    for jx in 0..=resolution {
        for jy in 0..=jx.min(resolution - jx) {
            for jz in 0..=jy {
                let k = KakCoefficients::new(
                    jx as f64 * step,
                    jy as f64 * step,
                    jz as f64 * step,
                );
                let c = canonicalize(&k);
                let key = [
                    (c.kx / step).round() as i64,
                    (c.ky / step).round() as i64,
                    (c.kz / step).round() as i64,
                ];
                if !seen.contains(&key) {
                    seen.push(key);
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Computational-basis matrices for gates with standard definitions; the
/// remaining families are produced from their canonical coefficients.
pub fn gate_matrix(gate: NamedGate) -> CMatrix {
    let i_ = Complex64::new(0.0, 1.0);
    match gate {
        NamedGate::Swap => CMatrix::from_row_slice(
            4,
            4,
            &[
                ONE, ZERO, ZERO, ZERO, //
                ZERO, ZERO, ONE, ZERO, //
                ZERO, ONE, ZERO, ZERO, //
                ZERO, ZERO, ZERO, ONE,
            ],
        ),
        NamedGate::Iswap => CMatrix::from_row_slice(
            4,
            4,
            &[
                ONE, ZERO, ZERO, ZERO, //
                ZERO, ZERO, i_, ZERO, //
                ZERO, i_, ZERO, ZERO, //
                ZERO, ZERO, ZERO, ONE,
            ],
        ),
        NamedGate::Cnot => CMatrix::from_row_slice(
            4,
            4,
            &[
                ONE, ZERO, ZERO, ZERO, //
                ZERO, ONE, ZERO, ZERO, //
                ZERO, ZERO, ZERO, ONE, //
                ZERO, ZERO, ONE, ZERO,
            ],
        ),
        NamedGate::Qft => {
            let w = |p: i32| Complex64::from_polar(0.5, std::f64::consts::FRAC_PI_2 * p as f64);
            CMatrix::from_fn(4, 4, |r, c| w(((r * c) % 4) as i32))
        }
        _ => canonical_unitary(&gate.coefficients()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use rand::SeedableRng;

    fn close(a: &KakCoefficients, b: &KakCoefficients, tol: f64) -> bool {
        (a.kx - b.kx).abs() < tol && (a.ky - b.ky).abs() < tol && (a.kz - b.kz).abs() < tol
    }

    #[test]
    fn canonical_unitary_identity() {
        let u = canonical_unitary(&KakCoefficients::new(0.0, 0.0, 0.0));
        assert!(max_abs_diff(&u, &linalg::eye(4)) < 1e-15);
    }

    #[test]
    fn canonical_unitary_swap_up_to_phase() {
        let u = canonical_unitary(&NamedGate::Swap.coefficients());
        let swap = gate_matrix(NamedGate::Swap);
        // equal up to a global phase
        let phase = u[(0, 0)] / swap[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!(max_abs_diff(&u, &swap.scale_phase(phase)) < 1e-12);
    }

    #[test]
    fn canonicalize_examples() {
        let got = canonicalize(&KakCoefficients::new(FRAC_PI_4 + FRAC_PI_2, FRAC_PI_4, 0.0));
        assert!(close(&got, &KakCoefficients::new(FRAC_PI_4, FRAC_PI_4, 0.0), 1e-12));
        let got = canonicalize(&KakCoefficients::new(-FRAC_PI_8, -FRAC_PI_8, 0.0));
        assert!(close(&got, &KakCoefficients::new(FRAC_PI_8, FRAC_PI_8, 0.0), 1e-12));
        let got = canonicalize(&KakCoefficients::new(0.0, 0.0, 3.0 * FRAC_PI_8));
        assert!(close(&got, &KakCoefficients::new(FRAC_PI_8, 0.0, 0.0), 1e-12));
    }

    /// Brute-force orbit search over the equivalence moves: enumerate
    /// permutations × even sign patterns × π/2 reductions and pick the
    /// canonical representative.
    fn brute_force_canonical(k: &KakCoefficients) -> KakCoefficients {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let signs: [[f64; 3]; 4] = [
            [1.0, 1.0, 1.0],
            [-1.0, -1.0, 1.0],
            [-1.0, 1.0, -1.0],
            [1.0, -1.0, -1.0],
        ];
        let v = k.as_array();
        let mut best: Option<[f64; 3]> = None;
        for p in perms {
            for s in signs {
                let mut w = [0.0; 3];
                for i in 0..3 {
                    w[i] = (s[i] * v[p[i]]).rem_euclid(FRAC_PI_2);
                    if w[i] > FRAC_PI_2 - 1e-12 {
                        w[i] = 0.0;
                    }
                }
                // chamber reflections with a zero coordinate are also reachable
                let mut candidates = vec![w];
                for i in 0..3 {
                    if w[i] < 1e-12 {
                        let mut r = w;
                        for j in 0..3 {
                            if j != i && r[j] > 1e-12 {
                                let mut rr = r;
                                rr[j] = FRAC_PI_2 - rr[j];
                                candidates.push(rr);
                            }
                        }
                        r = w;
                        for j in 0..3 {
                            if j != i {
                                r[j] = if r[j] > 1e-12 { FRAC_PI_2 - r[j] } else { r[j] };
                            }
                        }
                        candidates.push(r);
                    }
                }
                for mut cand in candidates {
                    cand.sort_by(|a, b| b.partial_cmp(a).unwrap());
                    let ok = cand[0] < FRAC_PI_2 - 1e-12
                        && cand[0] + cand[1] <= FRAC_PI_2 + 1e-12
                        && (cand[2] > 1e-12 || cand[0] <= FRAC_PI_4 + 1e-12);
                    if ok {
                        match &best {
                            None => best = Some(cand),
                            Some(b) => {
                                // orbit may touch the region at equivalent boundary
                                // points; prefer lexicographically smallest
                                let lt = cand
                                    .iter()
                                    .zip(b.iter())
                                    .find(|(x, y)| (*x - *y).abs() > 1e-9)
                                    .map(|(x, y)| x < y)
                                    .unwrap_or(false);
                                if lt {
                                    best = Some(cand);
                                }
                            }
                        }
                    }
                }
            }
        }
        let b = best.expect("orbit must intersect the canonical region");
        KakCoefficients::new(b[0], b[1], b[2])
    }

    #[test]
    fn canonicalize_matches_orbit_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        use rand::Rng;
        for _ in 0..200 {
            let k = KakCoefficients::new(
                rng.random::<f64>() * 4.0 - 2.0,
                rng.random::<f64>() * 4.0 - 2.0,
                rng.random::<f64>() * 4.0 - 2.0,
            );
            let fast = canonicalize(&k);
            let brute = brute_force_canonical(&k);
            assert!(
                close(&fast, &brute, 1e-9),
                "mismatch for {:?}: fast {:?} vs brute {:?}",
                k,
                fast,
                brute
            );
            assert!(fast.is_canonical());
            // idempotent
            assert!(close(&canonicalize(&fast), &fast, 1e-12));
        }
    }

    #[test]
    fn canonicalize_equivalence_moves_agree() {
        let k = KakCoefficients::new(0.3, 0.2, 0.1);
        let base = canonicalize(&k);
        let shifted = canonicalize(&KakCoefficients::new(0.3 + FRAC_PI_2, 0.2, 0.1));
        let flipped = canonicalize(&KakCoefficients::new(-0.3, -0.2, 0.1));
        let swapped = canonicalize(&KakCoefficients::new(0.2, 0.3, 0.1));
        assert!(close(&base, &shifted, 1e-12));
        assert!(close(&base, &flipped, 1e-12));
        assert!(close(&base, &swapped, 1e-12));
    }

    #[test]
    fn decompose_named_gates() {
        let d = kak_decompose(&gate_matrix(NamedGate::Iswap)).unwrap();
        assert!(close(&d.coefficients, &NamedGate::Iswap.coefficients(), 1e-9));
        let d = kak_decompose(&gate_matrix(NamedGate::Cnot)).unwrap();
        assert!(close(&d.coefficients, &NamedGate::Cnot.coefficients(), 1e-9));
        let d = kak_decompose(&gate_matrix(NamedGate::Qft)).unwrap();
        assert!(close(&d.coefficients, &NamedGate::Qft.coefficients(), 1e-9));
        let d = kak_decompose(&gate_matrix(NamedGate::Swap)).unwrap();
        assert!(close(&d.coefficients, &NamedGate::Swap.coefficients(), 1e-9));
    }

    #[test]
    fn decompose_reconstructs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let u = crate::ensembles::haar_random_unitary(2, &mut rng);
            let d = kak_decompose(&u).unwrap();
            assert!(d.coefficients.is_canonical());
            assert!(
                max_abs_diff(&d.reconstruct(), &u) < 1e-8,
                "reconstruction failed"
            );
        }
    }

    #[test]
    fn decompose_dressing_invariance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let iswap = gate_matrix(NamedGate::Iswap);
        for _ in 0..20 {
            let r1 = crate::ensembles::haar_random_unitary(1, &mut rng);
            let r2 = crate::ensembles::haar_random_unitary(1, &mut rng);
            let s1 = crate::ensembles::haar_random_unitary(1, &mut rng);
            let s2 = crate::ensembles::haar_random_unitary(1, &mut rng);
            let dressed = linalg::kron(&r1, &r2) * &iswap * linalg::kron(&s1, &s2);
            let d = kak_decompose(&dressed).unwrap();
            assert!(close(&d.coefficients, &NamedGate::Iswap.coefficients(), 1e-8));
            assert!(max_abs_diff(&d.reconstruct(), &dressed) < 1e-8);
        }
    }

    #[test]
    fn round_trip_over_grid() {
        for k in weyl_grid(6) {
            let u = canonical_unitary(&k);
            let d = kak_decompose(&u).unwrap();
            assert!(
                close(&d.coefficients, &canonicalize(&k), 1e-8),
                "round trip failed at {:?} -> {:?}",
                k,
                d.coefficients
            );
            assert!(max_abs_diff(&d.reconstruct(), &u) < 1e-8);
        }
    }

    #[test]
    fn named_gate_table() {
        assert!(close(
            &named_gate("ISWAP").unwrap(),
            &KakCoefficients::new(FRAC_PI_4, FRAC_PI_4, 0.0),
            1e-15
        ));
        assert!(close(
            &named_gate("B").unwrap(),
            &KakCoefficients::new(FRAC_PI_4, FRAC_PI_8, 0.0),
            1e-15
        ));
        let chi = named_gate("CHI").unwrap();
        let angle = 0.125 * (0.2_f64).acos();
        assert!(close(
            &chi,
            &KakCoefficients::new(FRAC_PI_4 - angle, FRAC_PI_8, angle),
            1e-15
        ));
        assert!(named_gate("XSWAP").is_err());
    }

    #[test]
    fn weyl_grid_properties() {
        let g2 = weyl_grid(2);
        let has = |k: KakCoefficients| g2.iter().any(|p| close(p, &k, 1e-12));
        assert!(has(KakCoefficients::new(0.0, 0.0, 0.0)));
        assert!(has(NamedGate::Swap.coefficients()));
        assert!(has(NamedGate::Iswap.coefficients()));
        for p in &g2 {
            assert!(close(&canonicalize(p), p, 1e-12));
        }
        // a resolution-10 grid passes within L∞ distance π/40 of the χ point
        let g10 = weyl_grid(10);
        let chi = NamedGate::Chi.coefficients();
        let dist = g10
            .iter()
            .map(|p| {
                (p.kx - chi.kx).abs().max((p.ky - chi.ky).abs()).max((p.kz - chi.kz).abs())
            })
            .fold(f64::INFINITY, f64::min);
        assert!(dist <= std::f64::consts::PI / 40.0 + 1e-12, "dist {dist}");
    }

    #[test]
    fn magic_basis_diagonalizes_interaction() {
        let k = KakCoefficients::new(0.31, 0.17, 0.05);
        let v = canonical_unitary(&k);
        let m = magic_basis();
        let d = m.adjoint() * v * &m;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(d[(i, j)].norm() < 1e-12);
                }
            }
        }
        // eigenphase pattern θ = (kx−ky+kz, kx+ky−kz, −kx−ky−kz, −kx+ky+kz)
        let th: Vec<f64> = (0..4).map(|i| d[(i, i)].arg()).collect();
        assert!((th[0] - (k.kx - k.ky + k.kz)).abs() < 1e-12);
        assert!((th[1] - (k.kx + k.ky - k.kz)).abs() < 1e-12);
        assert!((th[2] - (-k.kx - k.ky - k.kz)).abs() < 1e-12);
        assert!((th[3] - (-k.kx + k.ky + k.kz)).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_unitary() {
        let mut m = linalg::eye(4);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        assert!(matches!(kak_decompose(&m), Err(KakError::NotUnitary(_))));
    }
}
