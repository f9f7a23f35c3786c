//! Spectral gaps of moment operators for stochastic quantum circuits.
//!
//! A stochastic quantum circuit applies, at each step, a gate drawn from a
//! fixed ensemble. How fast the resulting distribution converges to a unitary
//! t-design is governed by the spectral gap of the t-th moment operator of
//! the ensemble. This crate computes those gaps exactly at desk scale:
//!
//! - discrete 1- and 2-qubit gate ensembles ([`ensembles`]),
//! - "ironed gadgets" (a fixed 2-qubit gate sandwiched between Haar-random
//!   1-qubit gates), parameterized by KAK coefficients ([`kak`], [`gadget`]),
//! - many-body circuits on graphs and hypergraphs, brickwork and whole-layer
//!   architectures ([`architectures`]),
//! - the Clifford + phase-gate family ([`clifford_phase`]),
//! - robustness of gaps under gate perturbation ([`perturb`]).
//!
//! See the `examples/` directory for one runnable example per capability, and
//! the `designgap` binary for a batch CLI that emits CSV/JSON reports.

pub mod architectures;
pub mod cli;
pub mod clifford_phase;
pub mod commutant;
pub mod ensembles;
pub mod gadget;
pub mod kak;
pub mod linalg;
pub mod perturb;
pub mod spectra;

pub use gadget::{AbcParams, LocalMomentMatrix};
pub use kak::{KakCoefficients, KakDecomposition, NamedGate};
pub use linalg::{CMatrix, RMatrix, SpectrumReport};
pub use spectra::GapReport;
