//! Parity decomposition about a phase-space point: Royer reflection
//! projectors, parity-projected chord functions, the Wigner↔chord rescaling
//! identity for parity-symmetric states, and the reality criterion.
//!
//! The reflection about `X = (X_p, X_q)` acts on wavefunctions as
//! `(Π_X ψ)(q) = e^{2iX_p(q - X_q)/ħ} ψ(2X_q - q)`; it is the unitary
//! involution whose expectation gives the Wigner function,
//! `W(X) = ⟨Π_X⟩/πħ`. On the grid it permutes samples exactly when `X_q`
//! is a grid multiple, which is required rather than interpolated.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::correlations::translate_density;
use crate::error::{Error, Result};
use crate::geometry::{DualGridPair, PhaseVector, Space};
use crate::states::{DensityMatrixRep, StateRep};
use crate::transforms::{chord_of, wigner_of, ChordField, WignerField};

/// Summary of a parity decomposition about one centre.
#[derive(Debug, Clone, Serialize)]
pub struct ParityReport {
    pub centre: PhaseVector,
    pub even_weight: f64,
    pub odd_weight: f64,
    pub reality_defect: f64,
}

/// Reflection centre resolved onto the grid: `X_q` must be a grid multiple.
struct GridReflection {
    n: usize,
    /// sample index of the reflected position, or None if it falls outside
    flip: Vec<Option<usize>>,
    /// momentum phase e^{2iX_p(q_i - X_q)/ħ}
    phase: Vec<C64>,
}

impl GridReflection {
    fn new(grid: &DualGridPair, centre: PhaseVector) -> Result<Self> {
        let n = grid.n();
        let d = grid.centre_spacing();
        let m = centre.q / d;
        if (m - m.round()).abs() > 1e-9 {
            return Err(Error::OffGridCentre { q: centre.q });
        }
        let m = m.round() as isize;
        let hbar = grid.hbar();
        let flip = (0..n)
            .map(|i| {
                let j = 2 * m + n as isize - i as isize;
                (j >= 0 && j < n as isize).then_some(j as usize)
            })
            .collect();
        let phase = (0..n)
            .map(|i| {
                let q = grid.coord(Space::Centre, i);
                C64::from_polar(1.0, 2.0 * centre.p * (q - centre.q) / hbar)
            })
            .collect();
        Ok(Self { n, flip, phase })
    }

    /// `Π ρ Π`
    fn conjugate(&self, rho: &Array2<C64>) -> Array2<C64> {
        let n = self.n;
        Array2::from_shape_fn((n, n), |(i, j)| match (self.flip[i], self.flip[j]) {
            (Some(fi), Some(fj)) => {
                self.phase[i] * rho[(fi, fj)] * self.phase[j].conj()
            }
            _ => C64::new(0.0, 0.0),
        })
    }

    /// `Π ρ`
    fn left(&self, rho: &Array2<C64>) -> Array2<C64> {
        let n = self.n;
        Array2::from_shape_fn((n, n), |(i, j)| match self.flip[i] {
            Some(fi) => self.phase[i] * rho[(fi, j)],
            None => C64::new(0.0, 0.0),
        })
    }

    /// `ρ Π`
    fn right(&self, rho: &Array2<C64>) -> Array2<C64> {
        let n = self.n;
        Array2::from_shape_fn((n, n), |(i, j)| match self.flip[j] {
            Some(fj) => rho[(i, fj)] * self.phase[fj],
            None => C64::new(0.0, 0.0),
        })
    }

    /// `tr(ρ Π) · Δq`
    fn expectation(&self, rho: &DensityMatrixRep) -> f64 {
        let m = rho.matrix();
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..self.n {
            if let Some(fk) = self.flip[k] {
                acc += m[(fk, k)] * self.phase[k];
            }
        }
        (acc * rho.spacing()).re
    }
}

/// Expectation of the reflection about `centre`, `tr(ρ Π_X) = πħ W(X)`.
pub fn reflection_expectation(rho: &DensityMatrixRep, centre: PhaseVector) -> Result<f64> {
    let refl = GridReflection::new(rho.grid(), centre)?;
    Ok(refl.expectation(rho))
}

/// Even/odd weights `tr(ρ P_±^X) = (1 ± ⟨Π_X⟩)/2`.
pub fn parity_weights(rho: &DensityMatrixRep, centre: PhaseVector) -> Result<(f64, f64)> {
    let e = reflection_expectation(rho, centre)?;
    Ok(((1.0 + e) / 2.0, (1.0 - e) / 2.0))
}

/// Project onto the even (`sign = +1`) or odd (`sign = -1`) subspace of
/// the reflection about `centre`: returns `P ρ P / tr(ρ P)` and the weight.
pub fn parity_project(
    rho: &DensityMatrixRep,
    centre: PhaseVector,
    sign: i8,
) -> Result<(DensityMatrixRep, f64)> {
    let s = match sign {
        1 => 1.0,
        -1 => -1.0,
        _ => return Err(Error::Parse(format!("parity sign must be +1 or -1, got {sign}"))),
    };
    let refl = GridReflection::new(rho.grid(), centre)?;
    let weight = 0.5 * (1.0 + s * refl.expectation(rho));
    if weight < 1e-10 {
        return Err(Error::ZeroWeightProjection { weight });
    }
    let m = rho.matrix();
    let pp = refl.conjugate(m);
    let pl = refl.left(m);
    let pr = refl.right(m);
    let n = rho.grid().n();
    let projected = Array2::from_shape_fn((n, n), |(i, j)| {
        (m[(i, j)] + s * pl[(i, j)] + s * pr[(i, j)] + pp[(i, j)]) / (4.0 * weight)
    });
    Ok((DensityMatrixRep::from_matrix(*rho.grid(), projected)?, weight))
}

/// `(ρ + Π ρ Π)/2`, the parity-diagonal part of the state; discarding the
/// off-diagonal block kills the imaginary part of the chord function.
pub fn parity_diagonal_part(
    rho: &DensityMatrixRep,
    centre: PhaseVector,
) -> Result<DensityMatrixRep> {
    let refl = GridReflection::new(rho.grid(), centre)?;
    let conj = refl.conjugate(rho.matrix());
    let n = rho.grid().n();
    let m = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (rho.matrix()[(i, j)] + conj[(i, j)]));
    DensityMatrixRep::from_matrix(*rho.grid(), m)
}

/// Max-norm of `[ρ, Π_X]`; zero exactly when the state is reflection
/// symmetric about `centre`.
pub fn reflection_commutator_norm(rho: &DensityMatrixRep, centre: PhaseVector) -> Result<f64> {
    let refl = GridReflection::new(rho.grid(), centre)?;
    let l = refl.left(rho.matrix());
    let r = refl.right(rho.matrix());
    let mut worst: f64 = 0.0;
    for (a, b) in l.iter().zip(r.iter()) {
        worst = worst.max((a - b).norm());
    }
    Ok(worst)
}

/// `max|Im χ| / max|χ|` over the chord grid.
pub fn reality_defect(chi: &ChordField) -> f64 {
    let peak = chi.field().max_modulus();
    if peak == 0.0 {
        return 0.0;
    }
    chi.field().max_abs_imag() / peak
}

/// Whether the state commutes with the reflection about `centre`
/// (commutator max-norm below `1e-8`), together with the norm itself.
pub fn reality_criterion(state: &StateRep, centre: PhaseVector) -> Result<(bool, f64)> {
    let rho = state.to_density();
    let norm = reflection_commutator_norm(&rho, centre)?;
    Ok((norm < 1e-8, norm))
}

/// Translate the state so that `centre` moves to the origin.
fn recentre(state: &StateRep, centre: PhaseVector) -> Result<StateRep> {
    if centre.p == 0.0 && centre.q == 0.0 {
        return Ok(state.clone());
    }
    Ok(match state {
        StateRep::Pure(psi) => {
            StateRep::Pure(crate::states::translate_state(psi, centre.scale(-1.0))?)
        }
        StateRep::Mixed(rho) => StateRep::Mixed(translate_density(rho, centre.scale(-1.0))),
    })
}

/// Residual of the rescaling identity `W(X) = ±2 χ(-2X)` for a state that
/// is reflection symmetric about `centre`, after moving that centre to the
/// origin. Requires a chord-halved grid pair (`Δξ = 2ΔX`) so that `-2X`
/// lands exactly on the chord lattice; the parity sign is read off the
/// reflection expectation. Returns the max-abs residual normalized by
/// `max|W|`.
pub fn parity_rescaling_check(state: &StateRep, centre: PhaseVector) -> Result<f64> {
    let grid = *state.grid();
    if !grid.is_chord_halved() {
        return Err(Error::GridMismatch);
    }
    let centred = recentre(state, centre)?;
    let rho = centred.to_density();
    let comm = reflection_commutator_norm(&rho, PhaseVector::ZERO)?;
    if comm > 1e-8 {
        return Err(Error::NotParitySymmetric { norm: comm });
    }
    let expectation = reflection_expectation(&rho, PhaseVector::ZERO)?;
    let sign = if expectation >= 0.0 { 1.0 } else { -1.0 };

    let w = wigner_of(&centred, &grid)?;
    let chi = chord_of(&centred, &grid)?;
    let n = grid.n();
    let peak = w.field().max_modulus().max(1e-300);
    let mut worst: f64 = 0.0;
    for i in 1..n {
        for j in 1..n {
            // -2X at centre index (i, j) is chord index (n-i, n-j)
            let lhs = w.field().values()[(i, j)];
            let rhs = chi.value(n - i, n - j) * 2.0 * sign;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst / peak)
}

/// Parity-projected chord function about the origin straight from the two
/// fields:
/// `χ_±(ξ) = [χ(ξ) + χ(-ξ) ± (W(ξ/2) + W(-ξ/2))/2] / (2[1 ± πħ W(0)])`.
///
/// This follows from `tr(T_{-ξ}Π₀ρ) = πħ W(-ξ/2)` together with the
/// projector expansion `P_± ρ P_± = (ρ ± Π₀ρ ± ρΠ₀ + Π₀ρΠ₀)/4`; applying
/// it to a parity eigenstate returns the input unchanged, which pins the
/// prefactors.
///
/// Requires a chord-halved pair so `ξ/2` lies exactly on the centre grid.
pub fn projected_chord(chi: &ChordField, w: &WignerField, sign: i8) -> Result<ChordField> {
    let s = match sign {
        1 => 1.0,
        -1 => -1.0,
        _ => return Err(Error::Parse(format!("parity sign must be +1 or -1, got {sign}"))),
    };
    let grid = *chi.field().grid();
    if w.field().grid() != &grid {
        return Err(Error::GridMismatch);
    }
    if !grid.is_chord_halved() {
        return Err(Error::GridMismatch);
    }
    let n = grid.n();
    let hbar = grid.hbar();
    let o = grid.origin_index();
    let denom = 2.0 * (1.0 + s * PI * hbar * w.value(o, o));
    if denom.abs() < 1e-8 {
        return Err(Error::SingularDenominator { denom });
    }
    let mut out = crate::transforms::ComplexField::zeros(grid, Space::Chord);
    for i in 0..n {
        for j in 0..n {
            let direct = chi.value(i, j);
            // mirror samples where they exist; Hermitian symmetry of χ and
            // evenness of the edge treatment cover the boundary row/column
            let mirrored = if i >= 1 && j >= 1 {
                chi.value(n - i, n - j)
            } else {
                direct.conj()
            };
            // on a chord-halved pair, ξ/2 of chord index (i, j) is centre
            // index (i, j) and -ξ/2 is (n-i, n-j)
            let w_plus = w.field().values()[(i, j)];
            let w_minus = if i >= 1 && j >= 1 {
                w.field().values()[(n - i, n - j)]
            } else {
                w_plus
            };
            out.values_mut()[(i, j)] =
                (direct + mirrored + s * 0.5 * (w_plus + w_minus)) / denom;
        }
    }
    Ok(ChordField(out))
}

/// Full parity report about one centre: projection weights plus the
/// reality defect of the chord function computed with that centre moved to
/// the origin.
pub fn parity_report(state: &StateRep, centre: PhaseVector) -> Result<ParityReport> {
    let rho = state.to_density();
    let (even_weight, odd_weight) = parity_weights(&rho, centre)?;
    let centred = recentre(state, centre)?;
    let chi = chord_of(&centred, centred.grid())?;
    Ok(ParityReport { centre, even_weight, odd_weight, reality_defect: reality_defect(&chi) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{density_from_pure, make_cat, make_coherent, make_fock, mix};

    fn grid() -> DualGridPair {
        DualGridPair::chord_halved(256, 1.0).unwrap()
    }

    #[test]
    fn projector_algebra_on_interior() {
        // P± built from the sample permutation are exact projectors on the
        // interior block (the reflection of sample 0 falls off the grid)
        let g = DualGridPair::new(64, 5.0, 1.0).unwrap();
        let refl = GridReflection::new(&g, PhaseVector::new(0.7, 0.0)).unwrap();
        let n = g.n();
        let mut pi = Array2::from_elem((n, n), C64::new(0.0, 0.0));
        for i in 0..n {
            if let Some(fi) = refl.flip[i] {
                pi[(i, fi)] = refl.phase[i];
            }
        }
        // Π² = 1 and Π = Π† on the interior
        for i in 1..n {
            for j in 1..n {
                let mut sq = C64::new(0.0, 0.0);
                for k in 0..n {
                    sq += pi[(i, k)] * pi[(k, j)];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((sq - C64::new(expect, 0.0)).norm() < 1e-12);
                assert!((pi[(i, j)] - pi[(j, i)].conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn off_grid_centre_rejected() {
        let g = grid();
        let rho = density_from_pure(&make_fock(0, &g).unwrap());
        let d = g.centre_spacing();
        assert!(matches!(
            parity_weights(&rho, PhaseVector::new(0.0, 0.37 * d)),
            Err(Error::OffGridCentre { .. })
        ));
        // momentum component of the centre is unconstrained
        assert!(parity_weights(&rho, PhaseVector::new(0.37, 0.0)).is_ok());
    }

    #[test]
    fn fock_parities() {
        let g = grid();
        for n in 0..4 {
            let rho = density_from_pure(&make_fock(n, &g).unwrap());
            let (even, odd) = parity_weights(&rho, PhaseVector::ZERO).unwrap();
            if n % 2 == 0 {
                assert!((even - 1.0).abs() < 1e-9, "fock {n}: even {even}");
            } else {
                assert!((odd - 1.0).abs() < 1e-9, "fock {n}: odd {odd}");
            }
        }
    }

    #[test]
    fn even_projection_of_even_state_is_identity() {
        let g = grid();
        let rho = density_from_pure(&make_fock(2, &g).unwrap());
        let (proj, weight) = parity_project(&rho, PhaseVector::ZERO, 1).unwrap();
        assert!((weight - 1.0).abs() < 1e-9);
        let mut worst: f64 = 0.0;
        for (a, b) in proj.matrix().iter().zip(rho.matrix().iter()) {
            worst = worst.max((a - b).norm());
        }
        assert!(worst < 1e-9, "projection changed an even state by {worst}");
    }

    #[test]
    fn odd_projection_of_even_state_fails() {
        let g = grid();
        let rho = density_from_pure(&make_fock(2, &g).unwrap());
        assert!(matches!(
            parity_project(&rho, PhaseVector::ZERO, -1),
            Err(Error::ZeroWeightProjection { .. })
        ));
    }

    #[test]
    fn coherent_weights_from_gaussian_overlap() {
        // ⟨Π_0⟩ for |η⟩ is ⟨η|-η⟩ = e^{-|2η|²/4ħ}: even weight (1+e^{-4})/2
        let g = grid();
        let rho =
            density_from_pure(&make_coherent(PhaseVector::new(0.0, 2.0), 1.0, &g).unwrap());
        let (even, odd) = parity_weights(&rho, PhaseVector::ZERO).unwrap();
        let expect = (1.0 + (-4.0f64).exp()) / 2.0;
        assert!((even - expect).abs() < 1e-9, "{even} vs {expect}");
        assert!((even + odd - 1.0).abs() < 1e-12);
        // projected state commutes with the reflection
        let (proj, _) = parity_project(&rho, PhaseVector::ZERO, 1).unwrap();
        assert!(reflection_commutator_norm(&proj, PhaseVector::ZERO).unwrap() < 1e-9);
    }

    #[test]
    fn reflection_expectation_matches_wigner() {
        // tr(ρ Π_X) = πħ W(X): two independent routes to the same number
        let g = grid();
        let state: StateRep = make_coherent(PhaseVector::new(0.3, 0.6), 1.0, &g).unwrap().into();
        let rho = state.to_density();
        let w = wigner_of(&state, &g).unwrap();
        let o = g.origin_index();
        let d = g.centre_spacing();
        for (di, dj) in [(0isize, 0isize), (5, -3), (-10, 8)] {
            let x = PhaseVector::new(di as f64 * d, dj as f64 * d);
            let lhs = reflection_expectation(&rho, x).unwrap();
            let rhs = PI * g.hbar() * w.value((o as isize + di) as usize, (o as isize + dj) as usize);
            assert!((lhs - rhs).abs() < 1e-9, "at {x:?}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn rescaling_identity_for_symmetric_states() {
        let g = grid();
        for n in 0..4 {
            let state: StateRep = make_fock(n, &g).unwrap().into();
            let r = parity_rescaling_check(&state, PhaseVector::ZERO).unwrap();
            assert!(r < 1e-8, "fock {n} residual {r}");
        }
        let cat: StateRep = make_cat(PhaseVector::new(0.0, 2.0), 1, &g).unwrap().into();
        let r = parity_rescaling_check(&cat, PhaseVector::ZERO).unwrap();
        assert!(r < 1e-8, "even cat residual {r}");
        // coherent state about its own centre
        let eta = PhaseVector::new(0.0, 16.0 * g.centre_spacing());
        let coh: StateRep = make_coherent(eta, 1.0, &g).unwrap().into();
        let r = parity_rescaling_check(&coh, eta).unwrap();
        assert!(r < 1e-7, "displaced coherent residual {r}");
    }

    #[test]
    fn rescaling_check_rejects_asymmetric_state() {
        let g = grid();
        let coh: StateRep =
            make_coherent(PhaseVector::new(0.0, 32.0 * g.centre_spacing()), 1.0, &g)
                .unwrap()
                .into();
        assert!(matches!(
            parity_rescaling_check(&coh, PhaseVector::ZERO),
            Err(Error::NotParitySymmetric { .. })
        ));
    }

    #[test]
    fn projected_chord_routes_agree() {
        let g = grid();
        let state: StateRep =
            make_coherent(PhaseVector::new(0.0, 2.0), 1.0, &g).unwrap().into();
        let chi = chord_of(&state, &g).unwrap();
        let w = wigner_of(&state, &g).unwrap();
        for sign in [1i8, -1] {
            let via_fields = projected_chord(&chi, &w, sign).unwrap();
            let (proj, _) = parity_project(&state.to_density(), PhaseVector::ZERO, sign).unwrap();
            let via_transform = chord_of(&proj.into(), &g).unwrap();
            let mut worst: f64 = 0.0;
            for i in 1..g.n() {
                for j in 1..g.n() {
                    worst = worst.max((via_fields.value(i, j) - via_transform.value(i, j)).norm());
                }
            }
            assert!(worst < 1e-7, "sign {sign}: routes differ by {worst}");
        }
    }

    #[test]
    fn projected_chord_even_input_unchanged() {
        let g = grid();
        let state: StateRep = make_fock(2, &g).unwrap().into();
        let chi = chord_of(&state, &g).unwrap();
        let w = wigner_of(&state, &g).unwrap();
        let even = projected_chord(&chi, &w, 1).unwrap();
        let mut worst: f64 = 0.0;
        for i in 1..g.n() {
            for j in 1..g.n() {
                worst = worst.max((even.value(i, j) - chi.value(i, j)).norm());
            }
        }
        assert!(worst < 1e-8, "even projection changed χ by {worst}");
    }

    #[test]
    fn projected_chord_fock1_denominator_blows_up() {
        // W(0) = -1/πħ for the first excited state: 1 + πħW(0) = 0
        let g = grid();
        let state: StateRep = make_fock(1, &g).unwrap().into();
        let chi = chord_of(&state, &g).unwrap();
        let w = wigner_of(&state, &g).unwrap();
        assert!(matches!(
            projected_chord(&chi, &w, 1),
            Err(Error::SingularDenominator { .. })
        ));
    }

    #[test]
    fn reality_defect_and_criterion() {
        let g = grid();
        // Fock states: real chord function, commuting with Π_0
        for n in [0usize, 1, 3] {
            let state: StateRep = make_fock(n, &g).unwrap().into();
            let chi = chord_of(&state, &g).unwrap();
            assert!(reality_defect(&chi) < 1e-9, "fock {n}");
            let (sym, _) = reality_criterion(&state, PhaseVector::ZERO).unwrap();
            assert!(sym);
        }
        // displaced coherent state: complex chord function, no symmetry
        let state: StateRep =
            make_coherent(PhaseVector::new(0.0, 2.0), 1.0, &g).unwrap().into();
        let chi = chord_of(&state, &g).unwrap();
        assert!(reality_defect(&chi) > 0.5);
        let (sym, _) = reality_criterion(&state, PhaseVector::ZERO).unwrap();
        assert!(!sym);
    }

    #[test]
    fn mixture_of_definite_parities_is_real() {
        let g = DualGridPair::chord_halved(128, 1.0).unwrap();
        let r0 = density_from_pure(&make_fock(0, &g).unwrap());
        let r1 = density_from_pure(&make_fock(1, &g).unwrap());
        let m: StateRep = mix(&[0.5, 0.5], &[r0, r1]).unwrap().into();
        let chi = chord_of(&m, &g).unwrap();
        assert!(reality_defect(&chi) < 1e-8);
    }

    #[test]
    fn parity_diagonal_part_kills_imaginary_chord() {
        let g = DualGridPair::chord_halved(128, 1.0).unwrap();
        // generic asymmetric state
        let state: StateRep =
            make_coherent(PhaseVector::new(0.5, 1.0), 1.0, &g).unwrap().into();
        let rho = state.to_density();
        let diag = parity_diagonal_part(&rho, PhaseVector::ZERO).unwrap();
        let chi = chord_of(&diag.into(), &g).unwrap();
        assert!(
            chi.field().max_abs_imag() < 1e-8,
            "imag residue {}",
            chi.field().max_abs_imag()
        );
    }

    #[test]
    fn parity_report_for_fock1() {
        let g = grid();
        let state: StateRep = make_fock(1, &g).unwrap().into();
        let rep = parity_report(&state, PhaseVector::ZERO).unwrap();
        assert!(rep.even_weight.abs() < 1e-9);
        assert!((rep.odd_weight - 1.0).abs() < 1e-9);
        assert!(rep.reality_defect < 1e-9);
    }
}
