//! Clifford + phase-gate ensembles: the 2×2 reduced matrix, closed-form gap
//! and optimal mixing probability for 4-designs, and the sparse
//! invariant-subspace oracle that verifies the closed form exactly at finite
//! n. The 5-design state construction ships for structural checks.
//!
//! The ensemble draws an n-qubit Clifford with probability p/2, the diagonal
//! gate diag(1, e^{±iθ}) on the first qubit with probability (1−p)/4 each,
//! and the identity with probability 1/2. The Clifford average projects onto
//! a known 30-dimensional span; adding the phase gate closes an invariant
//! subspace spanned by 36 product states whose blocks are small sparse
//! superpositions, so everything reduces to Gram-matrix algebra on
//! per-block inner products — no Clifford enumeration anywhere.

use crate::linalg::RMatrix;
use crate::spectra::GapReport;
use num_complex::Complex64;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliffordPhaseError {
    #[error("phase parameter c = 1 makes the diagonal gate trivial")]
    DegeneratePhase,
    #[error("n = {0} is too small: the invariant states need n >= {1}")]
    TooSmallN(usize, usize),
    #[error("n = {0} exceeds the oracle's sparse-support budget")]
    TooLargeN(usize),
    #[error("order t = {0} not supported (state constructions exist for t = 4, 5)")]
    UnsupportedOrder(usize),
    #[error("Gram matrix is numerically singular")]
    GramSingular,
}

/// Ensemble parameters: Clifford weight p and phase angle θ with c = cos(4θ).
#[derive(Debug, Clone, Copy)]
pub struct CliffordPhaseParams {
    pub p: f64,
    pub theta: f64,
    pub c: f64,
}

impl CliffordPhaseParams {
    pub fn new(p: f64, theta: f64) -> Self {
        Self { p, theta, c: (4.0 * theta).cos() }
    }

    /// Parameters from c = cos(4θ) directly.
    pub fn from_c(p: f64, c: f64) -> Self {
        assert!((-1.0..=1.0).contains(&c));
        Self { p, theta: c.acos() / 4.0, c }
    }
}

/// The 2×2 symmetric block of the 4-th moment operator on the (Φπ, Φπ')
/// pair of directions.
pub fn reduced_matrix(params: &CliffordPhaseParams) -> RMatrix {
    let (p, c) = (params.p, params.c);
    let m11 = 0.5 + 0.5 * (p + (1.0 - p) * (c + 7.0) / 8.0);
    let m22 = 0.5 + (1.0 - p) * (1.0 + 7.0 * c) / 16.0;
    let m12 = -7.0_f64.sqrt() * (p - 1.0) * (c - 1.0) / 16.0;
    RMatrix::from_row_slice(2, 2, &[m11, m12, m12, m22])
}

/// Closed-form subspace gap Δ(p, c) of the 4-th moment operator.
pub fn gap_formula(params: &CliffordPhaseParams) -> f64 {
    let (p, c) = (params.p, params.c);
    let disc = 4.0 * c * c * (p - 1.0) * (p - 1.0) - 2.0 * c * (p - 4.0) * (p - 1.0)
        + 2.0 * p * (p - 1.0)
        + 4.0;
    0.25 - 0.25 * c * (1.0 - p) - 0.125 * disc.sqrt()
}

/// 1 − λmax of the reduced 2×2 block (the subspace gap, by diagonalization).
pub fn reduced_matrix_gap(params: &CliffordPhaseParams) -> f64 {
    let m = reduced_matrix(params);
    let half_trace = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let half_diff = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let disc = (half_diff * half_diff + m[(0, 1)] * m[(0, 1)]).sqrt();
    1.0 - (half_trace + disc)
}

/// Optimal gap and mixing probability at fixed c:
/// Δ̃(c) = (1−c)/(8(−2c + √(14(1−c)) + 4)),
/// p̃(c) = (4c² + √(14(1−c))·c − 5c + 1)/(4c² − 2c + 2).
pub fn optimum(c: f64) -> Result<(f64, f64), CliffordPhaseError> {
    if c >= 1.0 {
        return Err(CliffordPhaseError::DegeneratePhase);
    }
    let root = (14.0 * (1.0 - c)).sqrt();
    let gap = (1.0 - c) / (8.0 * (-2.0 * c + root + 4.0));
    let p = (4.0 * c * c + root * c - 5.0 * c + 1.0) / (4.0 * c * c - 2.0 * c + 2.0);
    Ok((gap, p))
}

/// Certifies that the subspace gap is the global gap: eigenvalues outside
/// the invariant span are at most 1 − p/2, so the subspace's λmax = 1 − Δ
/// dominates exactly when Δ(p, c) ≤ p/2.
pub fn global_gap_bound_check(params: &CliffordPhaseParams) -> bool {
    gap_formula(params) <= params.p / 2.0 + 1e-12
}

/// A sparse state over bit strings, keyed by the string's integer value.
#[derive(Debug, Clone)]
pub struct SparseState {
    pub n_bits: usize,
    pub amplitudes: HashMap<u64, Complex64>,
}

impl SparseState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &SparseState) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in &self.amplitudes {
            if let Some(b) = other.amplitudes.get(k) {
                acc += a.conj() * b;
            }
        }
        acc
    }
}

/// One qubit-block of a design state: a small real superposition over
/// 2t-bit strings (t ket bits then t bra bits).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockState {
    pub bits: usize,
    /// sorted by string value
    pub terms: Vec<(u32, f64)>,
}

impl BlockState {
    fn from_map(bits: usize, map: HashMap<u32, f64>) -> Self {
        let mut terms: Vec<(u32, f64)> =
            map.into_iter().filter(|(_, v)| v.abs() > 1e-15).collect();
        terms.sort_unstable_by_key(|(k, _)| *k);
        Self { bits, terms }
    }

    pub fn dot(&self, other: &BlockState) -> f64 {
        let mut acc = 0.0;
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.terms[i].1 * other.terms[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    fn axpy(&self, scale: f64, other: &BlockState) -> BlockState {
        let mut map: HashMap<u32, f64> = self.terms.iter().copied().collect();
        for (k, v) in &other.terms {
            *map.entry(*k).or_insert(0.0) += scale * v;
        }
        BlockState::from_map(self.bits, map)
    }

    fn scaled(&self, s: f64) -> BlockState {
        BlockState {
            bits: self.bits,
            terms: self.terms.iter().map(|(k, v)| (*k, v * s)).collect(),
        }
    }

    /// Weight difference (ket ones − bra ones) of a string in this block.
    fn weight_split(bits: usize, s: u32) -> i32 {
        let t = bits / 2;
        let ket = (s >> t).count_ones() as i32;
        let bra = (s & ((1 << t) - 1)).count_ones() as i32;
        ket - bra
    }

    /// Diagonal phase-gate average: each string picks cos(θ·(wket − wbra)).
    fn phase_averaged(&self, theta: f64) -> BlockState {
        BlockState {
            bits: self.bits,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    let w = Self::weight_split(self.bits, *k);
                    (*k, v * (theta * w as f64).cos())
                })
                .collect(),
        }
    }
}

fn apply_perm_to_bits(t: usize, perm: &[usize], value: u32) -> u32 {
    // position 0 is the most significant of the t bits; output bit k takes
    // input bit perm^{-1}(k), matching the operator convention
    let mut inv = vec![0usize; t];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    let mut out = 0u32;
    for k in 0..t {
        let bit = (value >> (t - 1 - inv[k])) & 1;
        out |= bit << (t - 1 - k);
    }
    out
}

/// ψπ = 2^{-t/2} Σ_i |i, π(i)> on 2t bits.
fn psi_block(t: usize, perm: &[usize]) -> BlockState {
    let amp = 1.0 / (1u64 << t) as f64;
    let amp = amp.sqrt();
    let mut map = HashMap::new();
    for i in 0..(1u32 << t) {
        let j = apply_perm_to_bits(t, perm, i);
        map.insert((i << t) | j, amp);
    }
    BlockState::from_map(2 * t, map)
}

/// Uniform superposition over the F2-span of the generator strings.
fn span_block(bits: usize, generators: &[u32]) -> BlockState {
    let k = generators.len();
    let amp = (1.0 / (1u64 << k) as f64).sqrt();
    let mut map = HashMap::new();
    for x in 0..(1u32 << k) {
        let mut s = 0u32;
        for (b, g) in generators.iter().enumerate() {
            if (x >> b) & 1 == 1 {
                s ^= g;
            }
        }
        map.insert(s, amp);
    }
    debug_assert_eq!(map.len(), 1 << k, "generator strings must be independent");
    BlockState::from_map(bits, map)
}

/// (π ⊗ I) applied to a block state: permute the ket bits.
fn permute_ket(t: usize, perm: &[usize], state: &BlockState) -> BlockState {
    let mask = (1u32 << t) - 1;
    let map = state
        .terms
        .iter()
        .map(|(s, v)| {
            let ket = s >> t;
            let bra = s & mask;
            ((apply_perm_to_bits(t, perm, ket) << t) | bra, *v)
        })
        .collect();
    BlockState::from_map(state.bits, map)
}

/// (I ⊗ π) applied to a block state: permute the bra bits.
fn permute_bra(t: usize, perm: &[usize], state: &BlockState) -> BlockState {
    let mask = (1u32 << t) - 1;
    let map = state
        .terms
        .iter()
        .map(|(s, v)| ((s & !mask) | apply_perm_to_bits(t, perm, s & mask), *v))
        .collect();
    BlockState::from_map(state.bits, map)
}

fn parse_bits(s: &str) -> u32 {
    u32::from_str_radix(s, 2).unwrap()
}

fn magic_generators(t: usize) -> Vec<u32> {
    match t {
        4 => ["10011001", "01010101", "11110000", "00001111"]
            .iter()
            .map(|s| parse_bits(s))
            .collect(),
        5 => ["1001010010", "0101001010", "0000100001", "0000011110", "1111000000"]
            .iter()
            .map(|s| parse_bits(s))
            .collect(),
        _ => panic!("no magic-state generators at order {t}"),
    }
}

/// The collections of invariant states for the Clifford + phase analysis,
/// kept per-block; the full 8n- or 10n-bit states are products and are
/// materialized on demand.
#[derive(Debug, Clone)]
pub struct DesignStates {
    pub t: usize,
    pub n: usize,
    /// ψπ blocks, one per permutation of S_t in lexicographic order.
    pub psi: Vec<BlockState>,
    /// The distinct states of the two-sided orbit {(σ⊗π)|T>}; 6 at t = 4.
    pub phi: Vec<BlockState>,
    /// The orthogonal complements φπ' within each phase-coupled pair.
    pub phi_prime: Vec<BlockState>,
    /// Order of the one-sided stabilizer {π : (π⊗I)|T> = |T>}.
    pub stabilizer_order: usize,
}

/// Build the invariant design states at order t ∈ {4, 5}.
pub fn build_design_states(n: usize, t: usize) -> Result<DesignStates, CliffordPhaseError> {
    if t != 4 && t != 5 {
        return Err(CliffordPhaseError::UnsupportedOrder(t));
    }
    if n < t - 1 {
        return Err(CliffordPhaseError::TooSmallN(n, t - 1));
    }
    let bits = 2 * t;
    let magic = span_block(bits, &magic_generators(t));
    let perms = crate::commutant::permutations(t);
    let psi: Vec<BlockState> = perms.iter().map(|p| psi_block(t, p)).collect();
    // the coset structure of the one-sided orbit comes from
    // {π : (π⊗I)|T> = |T>}; at t = 4 this is the order-4 pair-product group
    let stab: Vec<Vec<usize>> =
        perms.iter().filter(|p| permute_ket(t, p, &magic) == magic).cloned().collect();
    let stab_order = stab.len();
    // the full family is the two-sided orbit {(σ⊗π)|T>}; at t = 4 the span
    // is invariant under simultaneous ket/bra permutations, so this
    // collapses to the 4!/4 = 6 one-sided cosets, while at t = 5 the
    // two-sided orbit is genuinely larger
    let mut phi: Vec<BlockState> = Vec::new();
    let mut keys: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    for sigma in &perms {
        let ket_side = permute_ket(t, sigma, &magic);
        for pi in &perms {
            let state = permute_bra(t, pi, &ket_side);
            let key: Vec<u32> = state.terms.iter().map(|(s, _)| *s).collect();
            if keys.insert(key) {
                phi.push(state);
            }
        }
    }
    // φ' = normalize(φ − κ Q) with Q the sum of the ±4-phase strings of φ
    let mut phi_prime = Vec::with_capacity(phi.len());
    for f in &phi {
        let q_terms: Vec<(u32, f64)> = f
            .terms
            .iter()
            .filter(|(s, _)| BlockState::weight_split(bits, *s).abs() == 4)
            .map(|(s, _)| (*s, 1.0))
            .collect();
        let q = BlockState { bits, terms: q_terms };
        let overlap = f.dot(&q);
        assert!(overlap.abs() > 1e-12, "no phase-sensitive strings in the support");
        let raw = f.axpy(-1.0 / overlap, &q);
        let norm = raw.dot(&raw).sqrt();
        phi_prime.push(raw.scaled(1.0 / norm));
    }
    Ok(DesignStates { t, n, psi, phi, phi_prime, stabilizer_order: stab_order })
}

impl DesignStates {
    /// Materialize a product state (first block possibly special) into the
    /// full 2tn-bit sparse map.
    fn materialize_product(&self, first: &BlockState, rest: &BlockState) -> SparseState {
        let bits = first.bits;
        let mut amps: HashMap<u64, Complex64> = HashMap::new();
        let mut stack: Vec<(u64, f64, usize)> = vec![(0, 1.0, 0)];
        while let Some((prefix, amp, depth)) = stack.pop() {
            if depth == self.n {
                amps.insert(prefix, Complex64::new(amp, 0.0));
                continue;
            }
            let block = if depth == 0 { first } else { rest };
            for (s, v) in &block.terms {
                stack.push(((prefix << bits) | *s as u64, amp * v, depth + 1));
            }
        }
        SparseState { n_bits: bits * self.n, amplitudes: amps }
    }

    pub fn psi_state(&self, idx: usize) -> SparseState {
        self.materialize_product(&self.psi[idx], &self.psi[idx])
    }

    pub fn phi_state(&self, idx: usize) -> SparseState {
        self.materialize_product(&self.phi[idx], &self.phi[idx])
    }

    pub fn phi_prime_state(&self, idx: usize) -> SparseState {
        self.materialize_product(&self.phi_prime[idx], &self.phi[idx])
    }

    /// Gram matrix of the Clifford-invariant span {Ψπ} ∪ {Φπ} from block
    /// inner products.
    pub fn invariant_gram(&self) -> RMatrix {
        let blocks: Vec<&BlockState> = self.psi.iter().chain(self.phi.iter()).collect();
        let k = blocks.len();
        RMatrix::from_fn(k, k, |i, j| blocks[i].dot(blocks[j]).powi(self.n as i32))
    }
}

/// Exact finite-n gap of the Clifford + phase ensemble on the invariant
/// subspace, via Gram-matrix algebra on the 36 spanning states. This is the
/// independent oracle for the closed-form gap.
pub fn subspace_oracle(
    n: usize,
    params: &CliffordPhaseParams,
) -> Result<GapReport, CliffordPhaseError> {
    if n < 3 {
        return Err(CliffordPhaseError::TooSmallN(n, 3));
    }
    if n > 5 {
        return Err(CliffordPhaseError::TooLargeN(n));
    }
    let t = 4usize;
    let states = build_design_states(n, t)?;
    let n_psi = states.psi.len();
    let n_phi = states.phi.len();
    let total = n_psi + 2 * n_phi;
    let block_pair = |f: usize| -> (&BlockState, &BlockState) {
        if f < n_psi {
            (&states.psi[f], &states.psi[f])
        } else if f < n_psi + n_phi {
            (&states.phi[f - n_psi], &states.phi[f - n_psi])
        } else {
            let i = f - n_psi - n_phi;
            (&states.phi_prime[i], &states.phi[i])
        }
    };
    let pair_gram = |fa: usize, fb: usize| -> f64 {
        let (a1, ar) = block_pair(fa);
        let (b1, br) = block_pair(fb);
        a1.dot(b1) * ar.dot(br).powi(n as i32 - 1)
    };
    let gram = RMatrix::from_fn(total, total, |i, j| pair_gram(i, j));

    // Coordinates of the phase-averaged first block in the (φ, φ') frame;
    // the diagonal gate acts on the first qubit only, so only the first
    // block moves and it must stay inside its pair.
    let theta = params.theta;
    let mut d_coords: Vec<[f64; 2]> = Vec::new(); // φ entries then φ' per i
    for i in 0..n_phi {
        for src in [&states.phi[i], &states.phi_prime[i]] {
            let dsrc = src.phase_averaged(theta);
            let a = states.phi[i].dot(&dsrc);
            let b = states.phi_prime[i].dot(&dsrc);
            let residual = dsrc.dot(&dsrc) - a * a - b * b;
            assert!(residual.abs() < 1e-10, "phase action left the (φ, φ') pair");
            d_coords.push([a, b]);
        }
    }
    for (i, psi) in states.psi.iter().enumerate() {
        let d = psi.phase_averaged(theta);
        let diff = d.axpy(-1.0, psi);
        assert!(diff.dot(&diff) < 1e-20, "ψ block {i} is not phase-invariant");
    }

    // Clifford projector needs the 30-state Gram system for the Φ' columns
    let g30 = gram.view((0, 0), (n_psi + n_phi, n_psi + n_phi)).into_owned();
    let chol30 = g30.cholesky().ok_or(CliffordPhaseError::GramSingular)?;

    let p = params.p;
    let mut tc = RMatrix::zeros(total, total);
    for f in 0..total {
        tc[(f, f)] += 0.5; // identity part
        if f < n_psi {
            tc[(f, f)] += (1.0 - p) / 2.0;
        } else {
            let (i, which) = if f < n_psi + n_phi {
                (f - n_psi, 0usize)
            } else {
                (f - n_psi - n_phi, 1usize)
            };
            let [a, b] = d_coords[2 * i + which];
            tc[(n_psi + i, f)] += (1.0 - p) / 2.0 * a;
            tc[(n_psi + n_phi + i, f)] += (1.0 - p) / 2.0 * b;
        }
        if f < n_psi + n_phi {
            tc[(f, f)] += p / 2.0;
        } else {
            let g = RMatrix::from_fn(n_psi + n_phi, 1, |k, _| gram[(k, f)]);
            let beta = chol30.solve(&g);
            for k in 0..n_psi + n_phi {
                tc[(k, f)] += p / 2.0 * beta[(k, 0)];
            }
        }
    }
    // generalized symmetric eigenproblem A x = λ G x with A = G·Tc,
    // Cholesky-whitened
    let a = &gram * &tc;
    let defect = (&a - a.transpose()).abs().max();
    assert!(defect < 1e-8, "restricted operator lost Hermiticity: {defect}");
    let a_sym = (&a + a.transpose()).scale(0.5);
    let chol = gram.clone().cholesky().ok_or(CliffordPhaseError::GramSingular)?;
    let l = chol.l();
    // W = L^{-1} A L^{-T}: two triangular solves
    let linv_a = l
        .clone()
        .solve_lower_triangular(&a_sym)
        .ok_or(CliffordPhaseError::GramSingular)?;
    let w_t = l
        .solve_lower_triangular(&linv_a.transpose())
        .ok_or(CliffordPhaseError::GramSingular)?;
    let spec = crate::linalg::real_spectrum(&w_t.transpose(), crate::spectra::UNIT_TOL)
        .map_err(|_| CliffordPhaseError::GramSingular)?;
    let mut rep = crate::spectra::spectral_gap_with_expected(&spec, n_psi)
        .map_err(|_| CliffordPhaseError::GramSingular)?;
    rep.context = format!("clifford+phase oracle n={n}");
    Ok(rep)
}
