//! Many-body moment operators on graphs and hypergraphs, assembled on the
//! restricted commutant tensor subspace, plus brickwork and whole-layer
//! variants and the SU(2)-irrep tridiagonal fast path for complete graphs.
//!
//! A graph circuit samples an edge uniformly and applies the gadget there, so
//! its moment operator is the edge average of embedded local matrices. The
//! operators are assembled directly in the D^n restricted basis; 16^n
//! superoperators are never materialized (the whole-layer model, which needs
//! the raw gate action, works matrix-free instead).

use crate::gadget::LocalMomentMatrix;
use crate::linalg::{self, CMatrix, RMatrix};
use crate::spectra::{self, GapReport, SpectraError};
use num_complex::Complex64;
use thiserror::Error;

/// Restricted dimensions are capped at 2^13: COMPLETE(12) at t = 2 and
/// PATH(5) at t = 3 both fit.
pub const DIM_CAP: usize = 1 << 13;

#[derive(Debug, Error)]
pub enum ArchitectureError {
    #[error("graph too small: kind {kind:?} needs at least {min} vertices, got {n}")]
    TooSmall { kind: GraphKind, min: usize, n: usize },
    #[error("restricted dimension {0} exceeds the desk-scale cap")]
    TooLarge(usize),
    #[error("local matrix arity {local} does not match edge arity {edge}")]
    ArityMismatch { local: usize, edge: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("ensemble with λmin = -1 can never converge (degenerate)")]
    DegenerateEnsemble,
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Path,
    Ring,
    Complete,
    Star,
    Custom,
}

/// Vertex count plus edge list (2-local) or hyperedge list (3-local).
#[derive(Debug, Clone)]
pub struct CircuitGraph {
    pub n: usize,
    pub edges: Vec<Vec<usize>>,
    pub kind: GraphKind,
}

impl CircuitGraph {
    pub fn new(
        n: usize,
        edges: Vec<Vec<usize>>,
        kind: GraphKind,
    ) -> Result<Self, ArchitectureError> {
        let g = Self { n, edges, kind };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), ArchitectureError> {
        if self.edges.is_empty() {
            return Err(ArchitectureError::InvalidGraph("no edges".into()));
        }
        let arity = self.edges[0].len();
        if arity != 2 && arity != 3 {
            return Err(ArchitectureError::InvalidGraph(format!("edge arity {arity}")));
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.edges {
            if e.len() != arity {
                return Err(ArchitectureError::InvalidGraph("mixed edge arities".into()));
            }
            let mut s = e.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != arity {
                return Err(ArchitectureError::InvalidGraph(format!("repeated vertex in {e:?}")));
            }
            if *s.last().unwrap() >= self.n {
                return Err(ArchitectureError::InvalidGraph(format!(
                    "vertex out of range in {e:?}"
                )));
            }
            if !seen.insert(s) {
                return Err(ArchitectureError::InvalidGraph(format!("duplicate edge {e:?}")));
            }
        }
        let mut reach = vec![false; self.n];
        let mut stack = vec![self.edges[0][0]];
        reach[self.edges[0][0]] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                if e.contains(&v) {
                    for &w in e {
                        if !reach[w] {
                            reach[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
        }
        if reach.iter().any(|r| !r) {
            return Err(ArchitectureError::Disconnected);
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.edges[0].len()
    }

    /// Minimal vertex degree (number of edges containing the vertex).
    pub fn min_degree(&self) -> usize {
        (0..self.n)
            .map(|v| self.edges.iter().filter(|e| e.contains(&v)).count())
            .min()
            .unwrap_or(0)
    }

    /// Parse the plain-text edge-list format: first line "n=<count>",
    /// subsequent lines "i j" or "i j k" (0-based).
    pub fn parse(text: &str) -> Result<Self, ArchitectureError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| ArchitectureError::InvalidGraph("empty file".into()))?;
        let n: usize = header
            .trim()
            .strip_prefix("n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| ArchitectureError::InvalidGraph(format!("bad header {header:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let verts: Result<Vec<usize>, _> =
                line.split_whitespace().map(|w| w.parse::<usize>()).collect();
            let verts = verts
                .map_err(|_| ArchitectureError::InvalidGraph(format!("bad edge line {line:?}")))?;
            edges.push(verts);
        }
        Self::new(n, edges, GraphKind::Custom)
    }
}

/// Standard graphs; STAR is centered at vertex 0.
pub fn make_graph(kind: GraphKind, n: usize) -> Result<CircuitGraph, ArchitectureError> {
    let min = match kind {
        GraphKind::Ring => 3,
        GraphKind::Custom => {
            return Err(ArchitectureError::InvalidGraph(
                "custom graphs come from explicit edge lists".into(),
            ))
        }
        _ => 2,
    };
    if n < min {
        return Err(ArchitectureError::TooSmall { kind, min, n });
    }
    let edges: Vec<Vec<usize>> = match kind {
        GraphKind::Path => (0..n - 1).map(|i| vec![i, i + 1]).collect(),
        GraphKind::Ring => (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                vec![i.min(j), i.max(j)]
            })
            .collect(),
        GraphKind::Complete => {
            let mut e = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    e.push(vec![i, j]);
                }
            }
            e
        }
        GraphKind::Star => (1..n).map(|i| vec![0, i]).collect(),
        GraphKind::Custom => unreachable!(),
    };
    CircuitGraph::new(n, edges, kind)
}

/// Real or complex carrier for assembled global operators.
#[derive(Debug, Clone)]
pub enum GlobalMatrix {
    Real(RMatrix),
    Complex(CMatrix),
}

impl GlobalMatrix {
    pub fn dim(&self) -> usize {
        match self {
            GlobalMatrix::Real(m) => m.nrows(),
            GlobalMatrix::Complex(m) => m.nrows(),
        }
    }

    pub fn spectrum(&self, unit_tol: f64) -> Result<linalg::SpectrumReport, linalg::LinalgError> {
        match self {
            GlobalMatrix::Real(m) => linalg::real_spectrum(m, unit_tol),
            GlobalMatrix::Complex(m) => linalg::hermitian_spectrum(m, unit_tol),
        }
    }
}

/// A moment operator on the D^n restricted basis.
#[derive(Debug, Clone)]
pub struct RestrictedGlobalOperator {
    pub order_t: usize,
    pub n: usize,
    pub dimension: usize,
    pub matrix: GlobalMatrix,
    pub graph: CircuitGraph,
    /// λmin of the local matrix, for the small-n caution threshold.
    pub local_lambda_min: f64,
}

fn site_digit_strides(n: usize, d: usize) -> Vec<usize> {
    (0..n).map(|s| d.pow((n - 1 - s) as u32)).collect()
}

fn accumulate_real(
    out: &mut RMatrix,
    local: &RMatrix,
    sites: &[usize],
    n: usize,
    d: usize,
    w: f64,
) {
    let m = sites.len();
    let ldim = d.pow(m as u32);
    let strides = site_digit_strides(n, d);
    let rest_sites: Vec<usize> = (0..n).filter(|s| !sites.contains(s)).collect();
    let rest_count = d.pow(rest_sites.len() as u32);
    for lr in 0..ldim {
        for lc in 0..ldim {
            let v = local[(lr, lc)] * w;
            if v == 0.0 {
                continue;
            }
            let mut base_r = 0usize;
            let mut base_c = 0usize;
            for (k, &s) in sites.iter().enumerate() {
                let shift = d.pow((m - 1 - k) as u32);
                base_r += ((lr / shift) % d) * strides[s];
                base_c += ((lc / shift) % d) * strides[s];
            }
            for rest in 0..rest_count {
                let mut offset = 0usize;
                let mut r = rest;
                for &s in rest_sites.iter().rev() {
                    offset += (r % d) * strides[s];
                    r /= d;
                }
                out[(base_r + offset, base_c + offset)] += v;
            }
        }
    }
}

fn accumulate_complex(
    out: &mut CMatrix,
    local: &CMatrix,
    sites: &[usize],
    n: usize,
    d: usize,
    w: f64,
) {
    let m = sites.len();
    let ldim = d.pow(m as u32);
    let strides = site_digit_strides(n, d);
    let rest_sites: Vec<usize> = (0..n).filter(|s| !sites.contains(s)).collect();
    let rest_count = d.pow(rest_sites.len() as u32);
    for lr in 0..ldim {
        for lc in 0..ldim {
            let v = local[(lr, lc)] * Complex64::new(w, 0.0);
            if v == linalg::ZERO {
                continue;
            }
            let mut base_r = 0usize;
            let mut base_c = 0usize;
            for (k, &s) in sites.iter().enumerate() {
                let shift = d.pow((m - 1 - k) as u32);
                base_r += ((lr / shift) % d) * strides[s];
                base_c += ((lc / shift) % d) * strides[s];
            }
            for rest in 0..rest_count {
                let mut offset = 0usize;
                let mut r = rest;
                for &s in rest_sites.iter().rev() {
                    offset += (r % d) * strides[s];
                    r /= d;
                }
                out[(base_r + offset, base_c + offset)] += v;
            }
        }
    }
}

/// Average of embedded local matrices over an explicit edge set, with each
/// edge carrying its own local matrix. `norm` is the normalizing edge count,
/// so sub-sums of a graph keep the parent normalization.
pub fn assemble_edge_average(
    locals: &[(&[usize], &LocalMomentMatrix)],
    n: usize,
    norm: usize,
) -> Result<GlobalMatrix, ArchitectureError> {
    assert!(!locals.is_empty());
    let d = locals[0].1.site_dim();
    let dim = d
        .checked_pow(n as u32)
        .filter(|&x| x <= DIM_CAP)
        .ok_or(ArchitectureError::TooLarge(d.pow(n as u32)))?;
    let w = 1.0 / norm as f64;
    let all_real = locals.iter().all(|(_, l)| l.is_real());
    if all_real {
        let mut out = RMatrix::zeros(dim, dim);
        for (sites, local) in locals {
            let re: RMatrix = local.site_major_matrix().map(|z| z.re);
            accumulate_real(&mut out, &re, sites, n, d, w);
        }
        Ok(GlobalMatrix::Real(out))
    } else {
        let mut out = CMatrix::zeros(dim, dim);
        for (sites, local) in locals {
            accumulate_complex(&mut out, &local.site_major_matrix(), sites, n, d, w);
        }
        Ok(GlobalMatrix::Complex(out))
    }
}

/// Uniform average of the embedded local matrix over the graph's edges, on
/// the D^n restricted basis.
pub fn graph_moment(
    local: &LocalMomentMatrix,
    graph: &CircuitGraph,
) -> Result<RestrictedGlobalOperator, ArchitectureError> {
    if local.arity != graph.arity() {
        return Err(ArchitectureError::ArityMismatch { local: local.arity, edge: graph.arity() });
    }
    let locals: Vec<(&[usize], &LocalMomentMatrix)> =
        graph.edges.iter().map(|e| (e.as_slice(), local)).collect();
    let matrix = assemble_edge_average(&locals, graph.n, graph.edges.len())?;
    Ok(RestrictedGlobalOperator {
        order_t: local.order_t,
        n: graph.n,
        dimension: matrix.dim(),
        matrix,
        graph: graph.clone(),
        local_lambda_min: local.lambda_min(),
    })
}

fn factorial(t: usize) -> usize {
    (1..=t).product()
}

/// Gap report of a restricted global operator: unit multiplicity, λ2, λmin
/// and gap = 1 − max(λ2, |λmin|). When n is below 2/(1 + λmin(local)) the
/// report carries a caution flag: λmin may live outside the restricted
/// subspace the spectrum was computed on.
pub fn gap_of_global(op: &RestrictedGlobalOperator) -> Result<GapReport, ArchitectureError> {
    let spec = op.matrix.spectrum(spectra::UNIT_TOL)?;
    let expected = factorial(op.order_t);
    let mut report = spectra::spectral_gap_with_expected(&spec, expected)?;
    let denom = 1.0 + op.local_lambda_min;
    report.caution_subspace = denom <= 1e-12 || (op.n as f64) < 2.0 / denom - 1e-9;
    Ok(report)
}

/// Brickwork layer variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrickworkVariant {
    /// Gap of (L0 + L1)/2.
    Sum,
    /// Gap of √L1 · L0 · √L1; when L1 is indefinite, the eigenvalue moduli
    /// of L0·L1 are reported instead (same spectrum by similarity whenever
    /// L1 is invertible).
    Product,
}

/// Brickwork moment operator on n sites at t = 2. L0 is the product of local
/// matrices on edges (0,1), (2,3), ...; L1 covers (1,2), (3,4), ...;
/// uncovered boundary sites carry the identity.
pub fn brickwork_moment(
    local: &LocalMomentMatrix,
    n: usize,
    variant: BrickworkVariant,
) -> Result<GapReport, ArchitectureError> {
    assert_eq!(local.order_t, 2, "brickwork analysis is built for t = 2");
    assert_eq!(local.arity, 2);
    if n < 4 {
        return Err(ArchitectureError::TooSmall { kind: GraphKind::Path, min: 4, n });
    }
    let dim = 1usize << n;
    if dim > DIM_CAP {
        return Err(ArchitectureError::TooLarge(dim));
    }
    debug_assert!(local.is_real());
    let t2: RMatrix = local.matrix.map(|z| z.re);
    let id2 = RMatrix::identity(2, 2);
    let layer = |offset: usize| -> RMatrix {
        let mut m = RMatrix::identity(1, 1);
        let mut site = 0usize;
        if offset == 1 {
            m = linalg::kron_real(&m, &id2);
            site = 1;
        }
        while site + 1 < n {
            m = linalg::kron_real(&m, &t2);
            site += 2;
        }
        while site < n {
            m = linalg::kron_real(&m, &id2);
            site += 1;
        }
        m
    };
    let l0 = layer(0);
    let l1 = layer(1);
    match variant {
        BrickworkVariant::Sum => {
            let m = (&l0 + &l1).scale(0.5);
            let spec = linalg::real_spectrum(&m, spectra::UNIT_TOL)?;
            let mut rep = spectra::spectral_gap_with_expected(&spec, 2)?;
            rep.context = format!("brickwork sum n={n}");
            Ok(rep)
        }
        BrickworkVariant::Product => {
            let l1_min = linalg::real_symmetric_eigenvalues(&l1)[0];
            if l1_min >= -1e-10 {
                let s = linalg::real_psd_sqrt(&l1)?;
                let m = &s * &l0 * &s;
                let spec = linalg::real_spectrum(&m, spectra::UNIT_TOL)?;
                let mut rep = spectra::spectral_gap_with_expected(&spec, 2)?;
                rep.context = format!("brickwork product (psd sqrt) n={n}");
                Ok(rep)
            } else {
                let prod = &l0 * &l1;
                let eig = prod.complex_eigenvalues();
                let mut moduli: Vec<f64> = eig.iter().map(|z| z.norm()).collect();
                moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
                let unit = eig
                    .iter()
                    .filter(|z| (*z - Complex64::new(1.0, 0.0)).norm() <= 1e-7)
                    .count();
                let lambda2 = moduli.get(2).copied().unwrap_or(0.0);
                let lambda_min = eig.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
                Ok(GapReport {
                    unit_multiplicity: unit,
                    lambda2,
                    lambda_min,
                    gap: (1.0 - lambda2).clamp(0.0, 1.0),
                    caution_subspace: false,
                    context: format!("brickwork product (similarity) n={n}"),
                })
            }
        }
    }
}

/// Whole-layer moment operator: P · T^reps · P with P the all-sites Haar
/// projector restriction and T the Hermitized edge-averaged raw gate
/// superoperator, computed matrix-free on (C^16)^⊗n.
pub fn whole_layer_moment(
    u: &CMatrix,
    graph: &CircuitGraph,
    reps: usize,
) -> Result<GapReport, ArchitectureError> {
    assert_eq!(graph.arity(), 2);
    assert!(reps >= 1);
    let n = graph.n;
    if n > 6 {
        return Err(ArchitectureError::TooLarge(1 << (4 * n)));
    }
    // two-site Hermitized superoperator on (C^16)^⊗2: copies 1,2 carry U and
    // copies 3,4 carry conj(U), interleaved site-major
    let uc = u.conjugate();
    let e_pair = {
        let e1 = linalg::kron_embed(u, &[0, 4], 8, 2).unwrap();
        let e2 = linalg::kron_embed(u, &[1, 5], 8, 2).unwrap();
        let e3 = linalg::kron_embed(&uc, &[2, 6], 8, 2).unwrap();
        let e4 = linalg::kron_embed(&uc, &[3, 7], 8, 2).unwrap();
        let s = e1 * e2 * e3 * e4;
        (&s + s.adjoint()).scale(0.5)
    };
    let dim = 1usize << (4 * n);
    let w = 1.0 / graph.edges.len() as f64;
    let strides: Vec<usize> = (0..n).map(|s| 1usize << (4 * (n - 1 - s))).collect();
    let apply_t = |x: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![linalg::ZERO; dim];
        for e in &graph.edges {
            let (si, sj) = (strides[e[0]], strides[e[1]]);
            // enumerate bases with zero digits at both pair sites
            for flat in 0..dim {
                if (flat / si) % 16 != 0 || (flat / sj) % 16 != 0 {
                    continue;
                }
                for r in 0..256 {
                    let (ri, rj) = (r / 16, r % 16);
                    let mut acc = linalg::ZERO;
                    for c in 0..256 {
                        let v = e_pair[(r, c)];
                        if v == linalg::ZERO {
                            continue;
                        }
                        acc += v * x[flat + (c / 16) * si + (c % 16) * sj];
                    }
                    out[flat + ri * si + rj * sj] += acc * Complex64::new(w, 0.0);
                }
            }
        }
        out
    };
    let basis = crate::commutant::commutant_basis(2).unwrap().basis;
    let site_vecs: Vec<Vec<Complex64>> = basis
        .iter()
        .map(|m| {
            let mut v = Vec::with_capacity(16);
            for r in 0..4 {
                for c in 0..4 {
                    v.push(m[(r, c)]);
                }
            }
            v
        })
        .collect();
    let nstates = 1usize << n;
    let mut restricted = CMatrix::zeros(nstates, nstates);
    for col in 0..nstates {
        let mut x = vec![Complex64::new(1.0, 0.0)];
        for s in 0..n {
            let pick = (col >> (n - 1 - s)) & 1;
            let mut next = vec![linalg::ZERO; x.len() * 16];
            for (i, xv) in x.iter().enumerate() {
                for (dg, bv) in site_vecs[pick].iter().enumerate() {
                    next[i * 16 + dg] = xv * bv;
                }
            }
            x = next;
        }
        for _ in 0..reps {
            x = apply_t(&x);
        }
        // project back: contract each site with the basis adjoints
        let mut y = x;
        let mut width = dim;
        for _ in 0..n {
            width /= 16;
            let blocks = y.len() / (16 * width);
            let mut next = vec![linalg::ZERO; blocks * 2 * width];
            for b in 0..blocks {
                for pick in 0..2 {
                    for inner in 0..width {
                        let mut acc = linalg::ZERO;
                        for dg in 0..16 {
                            acc += site_vecs[pick][dg].conj() * y[(b * 16 + dg) * width + inner];
                        }
                        next[(b * 2 + pick) * width + inner] = acc;
                    }
                }
            }
            y = next;
        }
        debug_assert_eq!(y.len(), nstates);
        for (row, v) in y.into_iter().enumerate() {
            restricted[(row, col)] = v;
        }
    }
    let spec = linalg::hermitian_spectrum(&restricted, spectra::UNIT_TOL)?;
    let mut rep = spectra::spectral_gap_with_expected(&spec, 2)?;
    rep.context = format!("whole-layer reps={reps}");
    Ok(rep)
}

/// The (n+1)×(n+1) symmetric tridiagonal restriction of the complete-graph
/// gadget operator to the highest-spin irrep, a function of a alone.
pub fn irrep_tridiagonal(a: f64, n: usize) -> RMatrix {
    assert!(n >= 2);
    let nf = n as f64;
    let mut m = RMatrix::zeros(n + 1, n + 1);
    for p in 0..=n {
        let pf = p as f64;
        m[(p, p)] = (1.0 - a) / (2.0 * nf * (nf - 1.0))
            * (2.0 * nf - 2.0 * pf - 1.0)
            * (nf - 2.0 * pf)
            - (1.0 + 1.0 / (2.0 * (nf - 1.0))) * (1.0 - a)
            + 1.0;
    }
    for p in 0..n {
        let pf = p as f64;
        let off = 3.0_f64.sqrt() * (1.0 - a) / (2.0 * nf * (nf - 1.0))
            * 2.0
            * pf
            * ((nf - pf) * (pf + 1.0)).sqrt();
        m[(p, p + 1)] = off;
        m[(p + 1, p)] = off;
    }
    m
}

/// λ2 of the complete-graph gadget operator from the tridiagonal restriction.
pub fn tridiagonal_lambda2(a: f64, n: usize) -> f64 {
    let tri = irrep_tridiagonal(a, n);
    let spec = linalg::real_spectrum(&tri, spectra::UNIT_TOL).expect("tridiagonal is symmetric");
    spec.eigenvalues
        .iter()
        .copied()
        .find(|&v| v < 1.0 - spectra::UNIT_TOL)
        .unwrap_or(1.0)
}

/// Smallest n at which the gap is guaranteed to be set by λ2 rather than
/// |λmin|: ceil(2/(1+λmin)) for t = 2 gadgets, ceil(2(1−λmin)/(1+λmin)) for
/// generic ensembles.
pub fn min_n_for_dominance(local: &LocalMomentMatrix) -> Result<usize, ArchitectureError> {
    let lmin = local.lambda_min();
    if lmin <= -1.0 + 1e-12 {
        return Err(ArchitectureError::DegenerateEnsemble);
    }
    let bound = if local.order_t == 2 && local.arity == 2 {
        2.0 / (1.0 + lmin)
    } else {
        2.0 * (1.0 - lmin) / (1.0 + lmin)
    };
    Ok((bound - 1e-9).ceil().max(2.0) as usize)
}

/// Upper bound 2·d_min/|E| on the spectral gap of any ensemble on this
/// (hyper)graph.
pub fn hypergraph_gap_bound(graph: &CircuitGraph) -> f64 {
    2.0 * graph.min_degree() as f64 / graph.edges.len() as f64
}

/// Unit eigenvectors of every gadget graph operator in the restricted basis:
/// ε0 = |u0...u0> and ε1 ∝ Σ_{s≠0} 3^{(|s|−1)/2} |u_s>.
pub fn unit_eigenvectors(n: usize) -> (Vec<f64>, Vec<f64>) {
    let dim = 1usize << n;
    let mut e0 = vec![0.0; dim];
    e0[0] = 1.0;
    let mut e1 = vec![0.0; dim];
    let norm = ((4.0_f64.powi(n as i32) - 1.0) / 3.0).sqrt();
    for (s, slot) in e1.iter_mut().enumerate().skip(1) {
        let w = (s as u64).count_ones() as f64;
        *slot = 3.0_f64.powf((w - 1.0) / 2.0) / norm;
    }
    (e0, e1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{gadget_t2_matrix, three_local_matrix, ThreeQubitGate};
    use crate::kak::{KakCoefficients, NamedGate};

    fn gate_local(g: NamedGate) -> LocalMomentMatrix {
        gadget_t2_matrix(&g.coefficients())
    }

    #[test]
    fn standard_graphs() {
        let p = make_graph(GraphKind::Path, 3).unwrap();
        assert_eq!(p.edges, vec![vec![0, 1], vec![1, 2]]);
        let k = make_graph(GraphKind::Complete, 4).unwrap();
        assert_eq!(k.edges.len(), 6);
        let r = make_graph(GraphKind::Ring, 3).unwrap();
        let mut re = r.edges.clone();
        re.sort();
        let mut ke = make_graph(GraphKind::Complete, 3).unwrap().edges;
        ke.sort();
        assert_eq!(re, ke);
        let s = make_graph(GraphKind::Star, 5).unwrap();
        assert!(s.edges.iter().all(|e| e[0] == 0));
        assert!(make_graph(GraphKind::Ring, 2).is_err());
    }

    #[test]
    fn parse_custom_graph() {
        let g = CircuitGraph::parse("n=4\n0 1\n1 2\n2 3\n").unwrap();
        assert_eq!(g.n, 4);
        assert_eq!(g.edges.len(), 3);
        assert!(CircuitGraph::parse("n=4\n0 1\n2 3\n").is_err()); // disconnected
        assert!(CircuitGraph::parse("n=2\n0 5\n").is_err());
    }

    #[test]
    fn table_graph_gaps_spot_values() {
        let cases = [
            (NamedGate::Iswap, GraphKind::Complete, 4, 0.273634),
            (NamedGate::Iswap, GraphKind::Ring, 7, 0.095746),
            (NamedGate::Chi, GraphKind::Complete, 5, 0.183023),
            (NamedGate::B, GraphKind::Star, 6, 0.124479),
        ];
        for (gate, kind, n, expected) in cases {
            let local = gate_local(gate);
            let graph = make_graph(kind, n).unwrap();
            let op = graph_moment(&local, &graph).unwrap();
            let rep = gap_of_global(&op).unwrap();
            assert!(
                (rep.gap - expected).abs() < 1e-5,
                "{gate:?} {kind:?} n={n}: gap {} vs {expected}",
                rep.gap
            );
        }
    }

    #[test]
    fn identity_gadget_zero_gap() {
        let local = gadget_t2_matrix(&KakCoefficients::new(0.0, 0.0, 0.0));
        let graph = make_graph(GraphKind::Ring, 5).unwrap();
        let op = graph_moment(&local, &graph).unwrap();
        let rep = gap_of_global(&op).unwrap();
        assert!(rep.gap.abs() < 1e-12);
    }

    #[test]
    fn iswap_complete3_restricted_lambda_min() {
        let local = gate_local(NamedGate::Iswap);
        let graph = make_graph(GraphKind::Complete, 3).unwrap();
        let op = graph_moment(&local, &graph).unwrap();
        let spec = op.matrix.spectrum(1e-9).unwrap();
        let lmin = *spec.eigenvalues.last().unwrap();
        assert!((lmin + 1.0 / 27.0).abs() < 1e-12, "λmin {lmin}");
        assert_eq!(spec.unit_multiplicity, 2);
    }

    #[test]
    fn unit_eigenvectors_are_fixed() {
        for gate in [NamedGate::Iswap, NamedGate::Chi, NamedGate::Sqisw] {
            let local = gate_local(gate);
            for (kind, n) in [(GraphKind::Path, 5), (GraphKind::Star, 4)] {
                let graph = make_graph(kind, n).unwrap();
                let op = graph_moment(&local, &graph).unwrap();
                let m = match &op.matrix {
                    GlobalMatrix::Real(m) => m.clone(),
                    GlobalMatrix::Complex(_) => unreachable!(),
                };
                let (e0, e1) = unit_eigenvectors(n);
                for v in [e0, e1] {
                    let vv = nalgebra::DVector::from_vec(v);
                    let res = (&m * &vv - &vv).norm();
                    assert!(res < 1e-9, "{gate:?} {kind:?} residual {res}");
                }
            }
        }
    }

    #[test]
    fn brickwork_spot_values() {
        // PSD layers take the exact √L1·L0·√L1 path
        let chi = gate_local(NamedGate::Chi);
        let rep = brickwork_moment(&chi, 6, BrickworkVariant::Product).unwrap();
        assert!((rep.gap - 0.520000).abs() < 1e-6, "chi n=6: {}", rep.gap);
        assert!(rep.context.contains("psd sqrt"));
        let sqisw = gate_local(NamedGate::Sqisw);
        let rep = brickwork_moment(&sqisw, 6, BrickworkVariant::Product).unwrap();
        assert!((rep.gap - 0.306094).abs() < 1e-6, "sqisw n=6: {}", rep.gap);
        // indefinite layers fall back to eigenvalue moduli of L0·L1
        let b = gate_local(NamedGate::B);
        let rep = brickwork_moment(&b, 6, BrickworkVariant::Product).unwrap();
        assert!(rep.context.contains("similarity"));
        assert_eq!(rep.unit_multiplicity, 2);
        assert!(rep.gap > 0.0 && rep.gap < 1.0);
    }

    #[test]
    fn brickwork_requires_minimum_size() {
        let chi = gate_local(NamedGate::Chi);
        assert!(matches!(
            brickwork_moment(&chi, 3, BrickworkVariant::Sum),
            Err(ArchitectureError::TooSmall { .. })
        ));
    }

    #[test]
    fn whole_layer_reps1_matches_graph_moment() {
        let u = crate::kak::gate_matrix(NamedGate::Iswap);
        let graph = make_graph(GraphKind::Complete, 4).unwrap();
        let wl = whole_layer_moment(&u, &graph, 1).unwrap();
        let local = crate::gadget::gadget_local_matrix(&u, 2, true).unwrap();
        let op = graph_moment(&local, &graph).unwrap();
        let direct = gap_of_global(&op).unwrap();
        assert!(
            (wl.lambda2 - direct.lambda2).abs() < 1e-9,
            "wl {} vs direct {}",
            wl.lambda2,
            direct.lambda2
        );
    }

    #[test]
    fn whole_layer_identity_gate_zero_gap() {
        let graph = make_graph(GraphKind::Path, 4).unwrap();
        for reps in [1, 2] {
            let rep = whole_layer_moment(&linalg::eye(4), &graph, reps).unwrap();
            assert!(rep.gap.abs() < 1e-9);
        }
    }

    #[test]
    fn tridiagonal_matches_dense_complete_graph() {
        for n in [3usize, 5, 7] {
            let local = gate_local(NamedGate::Iswap);
            let graph = make_graph(GraphKind::Complete, n).unwrap();
            let op = graph_moment(&local, &graph).unwrap();
            let dense = gap_of_global(&op).unwrap();
            let tri_l2 = tridiagonal_lambda2(5.0 / 9.0, n);
            assert!(
                (dense.lambda2 - tri_l2).abs() < 1e-9,
                "n={n}: dense {} tri {}",
                dense.lambda2,
                tri_l2
            );
        }
        assert!((tridiagonal_lambda2(5.0 / 9.0, 5) - (1.0 - 0.203359)).abs() < 1e-5);
    }

    #[test]
    fn tridiagonal_identity_gate() {
        let tri = irrep_tridiagonal(1.0, 6);
        let diff = &tri - RMatrix::identity(7, 7);
        assert!(diff.iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn tridiagonal_iswap_first_row_entries() {
        // action on e1: diagonal 1 - 4/(3n), off-diagonal (4/3)√(2/3)/(n√(n-1))
        for n in [4usize, 6, 9] {
            let nf = n as f64;
            let tri = irrep_tridiagonal(5.0 / 9.0, n);
            assert!((tri[(1, 1)] - (1.0 - 4.0 / (3.0 * nf))).abs() < 1e-12);
            let expected = (4.0 / 3.0) * (2.0_f64 / 3.0).sqrt() / (nf * (nf - 1.0).sqrt());
            assert!((tri[(1, 2)] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn min_n_values() {
        assert_eq!(min_n_for_dominance(&gate_local(NamedGate::Iswap)).unwrap(), 3);
        assert_eq!(min_n_for_dominance(&gate_local(NamedGate::Chi)).unwrap(), 2);
        assert!(matches!(
            min_n_for_dominance(&gate_local(NamedGate::Swap)),
            Err(ArchitectureError::DegenerateEnsemble)
        ));
    }

    #[test]
    fn hypergraph_bound_values() {
        for n in [4usize, 6, 9] {
            let k = make_graph(GraphKind::Complete, n).unwrap();
            assert!((hypergraph_gap_bound(&k) - 4.0 / n as f64).abs() < 1e-12);
            let p = make_graph(GraphKind::Path, n).unwrap();
            assert!((hypergraph_gap_bound(&p) - 2.0 / (n as f64 - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn sn_character_scalars() {
        // edge-average of site swaps: top two distinct eigenvalues 1, (n-3)/(n-1)
        for n in [4usize, 5, 6, 7, 8] {
            let dim = 1usize << n;
            let mut avg = RMatrix::zeros(dim, dim);
            let count = n * (n - 1) / 2;
            for i in 0..n {
                for j in i + 1..n {
                    for b in 0..dim {
                        let bi = (b >> (n - 1 - i)) & 1;
                        let bj = (b >> (n - 1 - j)) & 1;
                        let t = if bi != bj {
                            b ^ (1 << (n - 1 - i)) ^ (1 << (n - 1 - j))
                        } else {
                            b
                        };
                        avg[(t, b)] += 1.0 / count as f64;
                    }
                }
            }
            let vals = linalg::real_symmetric_eigenvalues(&avg);
            let mut distinct: Vec<f64> = Vec::new();
            for v in vals.into_iter().rev() {
                if distinct.last().map(|l| (l - v).abs() > 1e-9).unwrap_or(true) {
                    distinct.push(v);
                }
            }
            assert!((distinct[0] - 1.0).abs() < 1e-12);
            let expect = (n as f64 - 3.0) / (n as f64 - 1.0);
            assert!((distinct[1] - expect).abs() < 1e-9, "n={n}: {} vs {expect}", distinct[1]);
        }
    }

    #[test]
    fn three_local_graph_moment() {
        let local = three_local_matrix(&ThreeQubitGate::Ccz.matrix(), true).unwrap();
        let graph = CircuitGraph::new(
            4,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 2, 3]],
            GraphKind::Custom,
        )
        .unwrap();
        let op = graph_moment(&local, &graph).unwrap();
        let rep = gap_of_global(&op).unwrap();
        assert_eq!(rep.unit_multiplicity, 2);
        assert!(rep.gap > 0.0 && rep.gap < 1.0);
    }

    #[test]
    fn arity_mismatch_detected() {
        let local = gate_local(NamedGate::Iswap);
        let graph = CircuitGraph::new(3, vec![vec![0, 1, 2]], GraphKind::Custom).unwrap();
        assert!(matches!(
            graph_moment(&local, &graph),
            Err(ArchitectureError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn dimension_cap_enforced() {
        let local = gate_local(NamedGate::Iswap);
        let graph = make_graph(GraphKind::Path, 14).unwrap();
        assert!(matches!(graph_moment(&local, &graph), Err(ArchitectureError::TooLarge(_))));
    }
}
