//! Semiclassical chord functions of states quantized on convex invariant
//! curves: the small-chord curve integral, the two-realization
//! stationary-phase sum with its validity window, conjugate-chord geometry,
//! the squared-amplitude correlation, and the ergodic energy-shell formula.

mod chords;
mod contour;
mod curves;
mod ergodic;

pub use chords::{
    action_difference, chord_action, chord_amplitude, conjugate_chord, diameter,
    find_chord_realizations, max_parallel_chord, near_diameter_action, ChordRealization,
};
pub use contour::extract_contour;
pub use curves::{
    curvature, enclosed_area, is_convex, CircleCurve, EllipseCurve, SplineCurve, TorusCurve,
};
pub use ergodic::{ergodic_chi, EnergyContour};

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{skew_product, PhaseVector};

/// Chord function in the small-chord regime, as the curve average
/// `χ(ξ) ≈ (1/2πħ) ∮ (dθ/2π) e^{i X(θ)∧ξ/ħ}`,
/// by the periodic trapezoidal rule with at least 16 samples per phase
/// oscillation.
pub fn small_chord_chi(curve: &dyn TorusCurve, xi: PhaseVector, hbar: f64) -> C64 {
    let n = oscillation_samples(curve, xi, hbar);
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        let t = 2.0 * PI * i as f64 / n as f64;
        acc += C64::from_polar(1.0, skew_product(curve.point(t), xi) / hbar);
    }
    acc / (n as f64 * 2.0 * PI * hbar)
}

fn oscillation_samples(curve: &dyn TorusCurve, xi: PhaseVector, hbar: f64) -> usize {
    let mut vmax: f64 = 0.0;
    for i in 0..64 {
        let t = 2.0 * PI * i as f64 / 64.0;
        vmax = vmax.max(curve.velocity(t).norm());
    }
    let oscillations = vmax * xi.norm() / (2.0 * PI * hbar);
    ((16.0 * oscillations).ceil() as usize).max(512).next_multiple_of(2)
}

/// Overlap window of the small-chord and stationary-phase approximations in
/// a given direction: `(ħ/|ζ|, (ħ/a)^{1/3})` with `ζ` the parallel-tangent
/// diameter and `a` the larger half-curvature at the two tangency points.
/// A window with `min ≥ max` is reported as-is (it closes for large ħ).
pub fn validity_window(
    curve: &dyn TorusCurve,
    direction: PhaseVector,
    hbar: f64,
) -> Result<(f64, f64)> {
    let zeta = diameter(curve, direction)?;
    // tangency points carry the curvature that bounds the corner error
    let (t_co, t_counter) = chords::tangency_angles(curve, direction)?;
    let a = (0.5 * curvature(curve, t_co)).max(0.5 * curvature(curve, t_counter));
    if a < 1e-12 {
        return Err(Error::NonConvex);
    }
    Ok((hbar / zeta.norm(), (hbar / a).powf(1.0 / 3.0)))
}

/// Stationary-phase chord function with a fitted global normalization.
///
/// Each realization contributes `A_j e^{i(S_j/ħ + σ_j π/4)}`; the one free
/// overall constant is fixed by a least-squares match against
/// [`small_chord_chi`] over the middle of the validity window along the
/// calibration direction. Beyond the longest parallel chord the function
/// is zero; close to it the caustic flag is set.
pub struct SemiclassicalChi<'a> {
    curve: &'a dyn TorusCurve,
    hbar: f64,
    norm: C64,
}

/// One evaluation of the stationary-phase chord function.
#[derive(Debug, Clone, Copy)]
pub struct SemiclassicalValue {
    pub value: C64,
    /// set when the realizations are close to coalescing (near the chord
    /// caustic) and the plain stationary-phase amplitudes are unreliable
    pub caustic: bool,
}

impl<'a> SemiclassicalChi<'a> {
    /// Build the evaluator and calibrate the global constant along
    /// `calibration_direction`.
    pub fn new(
        curve: &'a dyn TorusCurve,
        hbar: f64,
        calibration_direction: PhaseVector,
    ) -> Result<Self> {
        let (w_lo, w_hi) = validity_window(curve, calibration_direction, hbar)?;
        if !(w_lo < w_hi) {
            return Err(Error::RootFind("validity window is empty at this ħ"));
        }
        let mut engine = Self { curve, hbar, norm: C64::new(1.0, 0.0) };
        // middle decade of the window, biased upward where the asymptotic
        // amplitudes are accurate
        let lo = (3.0 * w_lo).max(0.15 * w_hi);
        let hi = 0.6 * w_hi;
        if !(lo < hi) {
            return Err(Error::RootFind("validity window too narrow to calibrate"));
        }
        let d = calibration_direction.scale(1.0 / calibration_direction.norm());
        let mut num = C64::new(0.0, 0.0);
        let mut den = 0.0;
        let points = 24;
        for k in 0..points {
            let t = lo * (hi / lo).powf(k as f64 / (points - 1) as f64);
            let xi = d.scale(t);
            let raw = engine.raw_sum(xi)?;
            if raw.caustic {
                continue;
            }
            let target = small_chord_chi(curve, xi, hbar);
            num += target * raw.value.conj();
            den += raw.value.norm_sqr();
        }
        if den == 0.0 {
            return Err(Error::RootFind("no usable calibration points"));
        }
        engine.norm = num / den;
        Ok(engine)
    }

    /// The fitted global constant (its modulus is close to
    /// `sqrt(2/πħ)/4π` for the harmonic circle).
    pub fn normalization(&self) -> C64 {
        self.norm
    }

    fn raw_sum(&self, xi: PhaseVector) -> Result<SemiclassicalValue> {
        let reals = find_chord_realizations(self.curve, xi)?;
        if reals.is_empty() {
            return Ok(SemiclassicalValue { value: C64::new(0.0, 0.0), caustic: false });
        }
        // the chord caustic is where the two realizations coalesce
        let mut caustic = reals.len() < 2;
        if reals.len() == 2 {
            let gap = (reals[0].theta_minus - reals[1].theta_minus).abs();
            let gap = gap.min(2.0 * PI - gap);
            if gap < 0.25 {
                caustic = true;
            }
        }
        let mut acc = C64::new(0.0, 0.0);
        for re in &reals {
            match chord_amplitude(self.curve, re) {
                Ok((a, sigma)) => {
                    let s = chord_action(self.curve, re, xi)?;
                    acc += a * C64::from_polar(
                        1.0,
                        s / self.hbar + sigma as f64 * PI / 4.0,
                    );
                }
                Err(Error::CausticProximity) => {
                    caustic = true;
                }
                Err(e) => return Err(e),
            }
        }
        Ok(SemiclassicalValue { value: acc, caustic })
    }

    pub fn evaluate(&self, xi: PhaseVector) -> Result<SemiclassicalValue> {
        let raw = self.raw_sum(xi)?;
        Ok(SemiclassicalValue { value: self.norm * raw.value, caustic: raw.caustic })
    }
}

/// The squared stationary-phase chord function split into its parts:
/// `(2πħ)² C_η = N²[A₁² + A₂² + 2A₁A₂ cos(ΔS/ħ + Δσ·π/4)]`.
#[derive(Debug, Clone, Copy)]
pub struct SemiclassicalCorrelation {
    /// the two smooth inverse-Poisson-bracket terms
    pub smooth: f64,
    /// amplitude of the oscillatory cross term
    pub cross_amplitude: f64,
    /// phase of the cross term, `ΔS/ħ + Δσ·π/4`
    pub cross_phase: f64,
    /// full value `smooth + cross_amplitude · cos(cross_phase)`
    pub total: f64,
}

/// Correlation `(2πħ)² C_η ≈ |χ_sc(η)|² (2πħ)²` from the two realizations,
/// exposing the smooth background and the oscillatory part separately.
pub fn semiclassical_correlation(
    engine: &SemiclassicalChi<'_>,
    eta: PhaseVector,
) -> Result<SemiclassicalCorrelation> {
    let reals = find_chord_realizations(engine.curve, eta)?;
    if reals.len() != 2 {
        return Err(Error::CausticProximity);
    }
    let (a1, s1) = chord_amplitude(engine.curve, &reals[0])?;
    let (a2, s2) = chord_amplitude(engine.curve, &reals[1])?;
    let ds = action_difference(engine.curve, eta)?;
    let scale = (2.0 * PI * engine.hbar).powi(2) * engine.norm.norm_sqr();
    let smooth = scale * (a1 * a1 + a2 * a2);
    let cross_amplitude = scale * 2.0 * a1 * a2;
    let cross_phase = ds / engine.hbar + (s1 - s2) as f64 * PI / 4.0;
    Ok(SemiclassicalCorrelation {
        smooth,
        cross_amplitude,
        cross_phase,
        total: smooth + cross_amplitude * cross_phase.cos(),
    })
}

/// Small-chord translation correlation
/// `C_ξ ≈ ∬ (dθ₊ dθ₋ / 4π²) e^{iξ∧[x(θ₊)-x(θ₋)]/ħ}`,
/// evaluated as the product of the two factorized trapezoidal sums.
pub fn small_chord_correlation(curve: &dyn TorusCurve, xi: PhaseVector, hbar: f64) -> f64 {
    let n = oscillation_samples(curve, xi, hbar);
    let mut plus = C64::new(0.0, 0.0);
    let mut minus = C64::new(0.0, 0.0);
    for i in 0..n {
        let t = 2.0 * PI * i as f64 / n as f64;
        let phase = skew_product(xi, curve.point(t)) / hbar;
        plus += C64::from_polar(1.0, phase);
        minus += C64::from_polar(1.0, -phase);
    }
    (plus * minus).re / (n as f64 * n as f64)
}

/// Fraction of the small-chord integral's value carried by the angular
/// windows of half-width `window` around the two tangent-parallel points of
/// the chord direction. In the stationary-phase regime this approaches 1.
pub fn small_chord_mass_fraction(
    curve: &dyn TorusCurve,
    xi: PhaseVector,
    hbar: f64,
    window: f64,
) -> Result<f64> {
    let d = xi.scale(1.0 / xi.norm());
    // tangent parallel to ξ
    let (ta, tb) = chords::tangency_angles(curve, d)?;
    let roots = [ta, tb];
    let n = oscillation_samples(curve, xi, hbar);
    let mut total = C64::new(0.0, 0.0);
    let mut windowed = C64::new(0.0, 0.0);
    for i in 0..n {
        let t = 2.0 * PI * i as f64 / n as f64;
        let v = C64::from_polar(1.0, skew_product(curve.point(t), xi) / hbar);
        total += v;
        let near = roots.iter().any(|&r| {
            let mut dt = (t - r).abs();
            dt = dt.min(2.0 * PI - dt);
            dt <= window
        });
        if near {
            windowed += v;
        }
    }
    if total.norm() == 0.0 {
        return Ok(0.0);
    }
    Ok(windowed.norm() / total.norm())
}
