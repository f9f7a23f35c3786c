//! Gap-to-depth conversion and report shaping.
//!
//! The spectral gap of a Hermitian moment operator is
//! 1 − max(λ2, |λmin|), where λ2 is the largest eigenvalue strictly below
//! the unit cluster. A gap Δ yields an ε-approximate t-design on n qubits
//! at depth ceil((1/Δ)(2nt·ln2 + ln(1/ε))).

use crate::linalg::SpectrumReport;
use serde::Serialize;
use thiserror::Error;

/// Absolute tolerance identifying the unit eigenvalue cluster.
pub const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("no unit eigenvalue found (largest is {0}); ensemble weights are malformed")]
    NoUnitEigenvalue(f64),
    #[error("zero spectral gap cannot reach any design accuracy")]
    ZeroGap,
}

/// Unit-eigenvalue multiplicity, λ2, λmin, the spectral gap, and context.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub unit_multiplicity: usize,
    pub lambda2: f64,
    pub lambda_min: f64,
    pub gap: f64,
    /// Set when λmin may live outside the restricted subspace the spectrum
    /// was computed on (small-n regime).
    pub caution_subspace: bool,
    pub context: String,
}

impl GapReport {
    pub fn with_context(mut self, context: impl Into<String>) -> Self {
        self.context = context.into();
        self
    }
}

/// Gap of a spectrum: λ2 is the largest eigenvalue strictly below the unit
/// cluster, and gap = 1 − max(λ2, |λmin|), clamped into [0, 1].
pub fn spectral_gap(spec: &SpectrumReport) -> Result<GapReport, SpectraError> {
    if spec.unit_multiplicity < 1 {
        return Err(SpectraError::NoUnitEigenvalue(
            spec.eigenvalues.first().copied().unwrap_or(f64::NAN),
        ));
    }
    let lambda2 = spec
        .eigenvalues
        .iter()
        .copied()
        .find(|&v| v < 1.0 - UNIT_TOL)
        .unwrap_or(1.0);
    let lambda_min = *spec.eigenvalues.last().unwrap();
    let gap = (1.0 - lambda2.max(lambda_min.abs())).clamp(0.0, 1.0);
    Ok(GapReport {
        unit_multiplicity: spec.unit_multiplicity,
        lambda2,
        lambda_min,
        gap,
        caution_subspace: false,
        context: String::new(),
    })
}

/// Gap relative to the expected unit multiplicity (the commutant dimension):
/// λ2 is the largest eigenvalue after the first `expected_units` slots, so an
/// ensemble with excess unit eigenvalues (a reducible one that can never
/// reach the design) reports gap 0 instead of a spurious positive gap.
pub fn spectral_gap_with_expected(
    spec: &SpectrumReport,
    expected_units: usize,
) -> Result<GapReport, SpectraError> {
    if spec.unit_multiplicity < 1 {
        return Err(SpectraError::NoUnitEigenvalue(
            spec.eigenvalues.first().copied().unwrap_or(f64::NAN),
        ));
    }
    if spec.unit_multiplicity <= expected_units {
        return spectral_gap(spec);
    }
    let lambda2 = spec.eigenvalues.get(expected_units).copied().unwrap_or(1.0);
    let lambda_min = *spec.eigenvalues.last().unwrap();
    let gap = (1.0 - lambda2.max(lambda_min.abs())).clamp(0.0, 1.0);
    Ok(GapReport {
        unit_multiplicity: spec.unit_multiplicity,
        lambda2,
        lambda_min,
        gap,
        caution_subspace: false,
        context: format!(
            "unit multiplicity {} exceeds the commutant dimension {}",
            spec.unit_multiplicity, expected_units
        ),
    })
}

/// Depth bound ceil((1/gap)(2nt·ln2 + ln(1/ε))) for an ε-approximate t-design.
pub fn design_depth(gap: f64, n: usize, t: usize, epsilon: f64) -> Result<u64, SpectraError> {
    if !(gap > 0.0) {
        return Err(SpectraError::ZeroGap);
    }
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must be in (0,1)");
    let raw = (2.0 * n as f64 * t as f64 * std::f64::consts::LN_2 + (1.0 / epsilon).ln()) / gap;
    Ok(raw.ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(vals: Vec<f64>) -> SpectrumReport {
        let unit = vals.iter().filter(|&&v| (v - 1.0).abs() <= UNIT_TOL).count();
        SpectrumReport { eigenvalues: vals, unit_multiplicity: unit, hermiticity_defect: 0.0 }
    }

    #[test]
    fn swap_gadget_spectrum_gap_zero() {
        let g = spectral_gap(&spec(vec![1.0, 1.0, 1.0, -1.0])).unwrap();
        assert_eq!(g.gap, 0.0);
        assert_eq!(g.unit_multiplicity, 3);
    }

    #[test]
    fn chi_spectrum_gap_one() {
        let g = spectral_gap(&spec(vec![1.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(g.gap, 1.0);
    }

    #[test]
    fn gap_driven_by_lambda_min() {
        let g = spectral_gap(&spec(vec![1.0, 0.9, -0.95])).unwrap();
        assert!((g.gap - 0.05).abs() < 1e-12);
    }

    #[test]
    fn projector_spectrum_gap_one() {
        let g = spectral_gap(&spec(vec![1.0, 1.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(g.gap, 1.0);
    }

    #[test]
    fn no_unit_eigenvalue_is_error() {
        assert!(matches!(
            spectral_gap(&spec(vec![0.9, 0.5])),
            Err(SpectraError::NoUnitEigenvalue(_))
        ));
    }

    #[test]
    fn depth_formula() {
        // ceil(8 ln2 + ln 100) at gap 1
        assert_eq!(design_depth(1.0, 2, 2, 0.01).unwrap(), 11);
        // inverse proportionality
        let d1 = design_depth(0.5, 3, 2, 0.01).unwrap();
        let d2 = design_depth(0.25, 3, 2, 0.01).unwrap();
        assert_eq!(d2, 2 * d1);
        assert!(design_depth(0.0, 1, 1, 0.5).is_err());
    }

    #[test]
    fn depth_monotonicity() {
        let d = |gap, n, t, e| design_depth(gap, n, t, e).unwrap();
        assert!(d(0.1, 2, 2, 0.01) >= d(0.2, 2, 2, 0.01));
        assert!(d(0.1, 3, 2, 0.01) >= d(0.1, 2, 2, 0.01));
        assert!(d(0.1, 2, 3, 0.01) >= d(0.1, 2, 2, 0.01));
        assert!(d(0.1, 2, 2, 0.001) >= d(0.1, 2, 2, 0.01));
    }
}
