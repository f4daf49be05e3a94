//! Phase-space analysis of one-degree-of-freedom quantum states.
//!
//! The crate computes Wigner functions and chord (characteristic) functions
//! on exactly Fourier-dual grids, phase-space translation correlations and
//! their purity diagnostics, parity decompositions about a phase-space
//! point, and semiclassical approximations to the chord function of states
//! quantized on convex invariant curves.
//!
//! Everything is organized around one convention set:
//!
//! * phase points are `(p, q)`; the skew product is `a∧b = a_p b_q - a_q b_p`;
//! * the chord function is `χ(ξ) = tr(T_{-ξ} ρ) / 2πħ` and the Wigner
//!   function its symplectic Fourier transform
//!   `W(X) = (1/2πħ) ∫ dξ e^{-i X∧ξ/ħ} χ(ξ)`;
//! * grids are origin-centred with even `n` and obey `Δξ·ΔX·n = 2πħ`
//!   exactly, which makes the discrete transform between the two spaces an
//!   involution.

pub mod analytic;
pub mod correlations;
pub mod error;
pub mod fft;
pub mod geometry;
pub mod io;
pub mod numerics;
pub mod parity;
pub mod recipes;
pub mod semiclassical;
pub mod states;
pub mod transforms;
pub mod validate;

pub use error::{Error, Result};
pub use geometry::{skew_product, DualGridPair, PhaseVector, PlanckContext, Space};
pub use states::{DensityMatrixRep, PositionWavefunction, StateRep};
