//! Chord geometry on convex curves: realizations of a prescribed chord,
//! diameters (parallel-tangent chords), stationary-phase actions and
//! amplitudes, conjugate chords, and the near-caustic fold expansion.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{skew_product, PhaseVector};
use crate::numerics::bisect;

use super::curves::{curvature, enclosed_area, is_convex, TorusCurve};

/// One realization of a chord: a pair of curve points whose difference is
/// the prescribed chord. `theta_plus` always exceeds `theta_minus` (the
/// increasing-parameter arc may wrap past 2π).
#[derive(Debug, Clone, Copy)]
pub struct ChordRealization {
    pub theta_minus: f64,
    pub theta_plus: f64,
    pub x_minus: PhaseVector,
    pub x_plus: PhaseVector,
    pub centre: PhaseVector,
}

impl ChordRealization {
    pub fn chord(&self) -> PhaseVector {
        self.x_plus.sub(self.x_minus)
    }
}

const SCAN_POINTS: usize = 720;

fn normalize_angle(t: f64) -> f64 {
    t.rem_euclid(2.0 * PI)
}

/// All roots of a continuous 2π-periodic function located by a uniform scan
/// plus bisection, wrap-safe (the seam interval is evaluated through the
/// periodized argument so a root at t = 0 is not lost).
pub(super) fn periodic_roots<F: Fn(f64) -> f64>(g: F, scan: usize) -> Vec<f64> {
    let wrapped = |t: f64| g(normalize_angle(t));
    let step = 2.0 * PI / scan as f64;
    let samples: Vec<f64> = (0..scan).map(|i| wrapped(step * i as f64)).collect();
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..scan {
        let a = samples[i];
        let b = samples[(i + 1) % scan];
        let ta = step * i as f64;
        let tb = step * (i + 1) as f64;
        if a == 0.0 {
            roots.push(normalize_angle(ta));
        } else if a.signum() != b.signum() && b != 0.0 {
            if let Ok(r) = bisect(&wrapped, ta, tb, 1e-13) {
                roots.push(normalize_angle(r));
            }
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    if roots.len() >= 2 {
        let first = roots[0];
        let last = *roots.last().unwrap();
        if first + 2.0 * PI - last < 1e-9 {
            roots.pop();
        }
    }
    roots
}

/// Second intersection, besides `θ₋` itself, of the curve with the line
/// through `x(θ₋)` parallel to `dir`. Returns the parameter in
/// `(θ₋, θ₋ + 2π)`.
fn opposite_intersection(
    curve: &dyn TorusCurve,
    theta_minus: f64,
    dir: PhaseVector,
) -> Option<f64> {
    let x0 = curve.point(theta_minus);
    let s = |t: f64| skew_product(curve.point(t).sub(x0), dir);
    let m = 96;
    // tiny margins exclude only the first-order zero at θ₋ itself; the
    // genuine intersection can sit arbitrarily close to it (θ₋ near a
    // tangency supports very short parallel chords)
    let lo = theta_minus + 1e-9;
    let hi = theta_minus + 2.0 * PI - 1e-9;
    let step = (hi - lo) / m as f64;
    let mut prev_t = lo;
    let mut prev_s = s(lo);
    for i in 1..=m {
        let t = lo + step * i as f64;
        let cur = s(t);
        if prev_s == 0.0 {
            return Some(prev_t);
        }
        if prev_s.signum() != cur.signum() {
            return bisect(&s, prev_t, t, 1e-13).ok();
        }
        prev_t = t;
        prev_s = cur;
    }
    None
}

/// Newton refinement of `x(θ₊) - x(θ₋) = ξ` in both angles.
fn polish_realization(
    curve: &dyn TorusCurve,
    mut tm: f64,
    mut tp: f64,
    xi: PhaseVector,
) -> Option<(f64, f64)> {
    let scale = xi.norm().max(1.0);
    for _ in 0..60 {
        let f = curve.point(tp).sub(curve.point(tm)).sub(xi);
        if f.norm() < 1e-13 * scale {
            return Some((tm, tp));
        }
        let vm = curve.velocity(tm);
        let vp = curve.velocity(tp);
        // jacobian [-vm | vp]
        let det = -vm.p * vp.q + vm.q * vp.p;
        if det.abs() < 1e-14 {
            return None;
        }
        // solve [-vm | vp]·(dm, dp)ᵀ = -f
        let dm = (-f.p * vp.q + f.q * vp.p) / det;
        let dp = (vm.p * f.q - vm.q * f.p) / det;
        tm += dm;
        tp += dp;
    }
    let f = curve.point(tp).sub(curve.point(tm)).sub(xi);
    (f.norm() < 1e-10 * scale).then_some((tm, tp))
}

/// All realizations of the chord `xi` on a convex curve, ordered by `θ₋`.
/// Empty when `|ξ|` exceeds the longest parallel chord.
pub fn find_chord_realizations(
    curve: &dyn TorusCurve,
    xi: PhaseVector,
) -> Result<Vec<ChordRealization>> {
    if !is_convex(curve) {
        return Err(Error::NonConvex);
    }
    let len = xi.norm();
    if !(len > 0.0) {
        return Err(Error::NoRealizations);
    }
    let dir = xi.scale(1.0 / len);

    // signed length of the parallel chord through x(θ₋), minus the target
    let h = |tm: f64| -> Option<f64> {
        let tp = opposite_intersection(curve, tm, dir)?;
        Some(curve.point(tp).sub(curve.point(tm)).dot(dir) - len)
    };

    // h is continuous but undefined exactly at the two tangency parameters;
    // bracket sign changes across the last defined sample so an unlucky
    // scan point landing on a tangency does not lose a root
    let mut candidates: Vec<f64> = Vec::new();
    let step = 2.0 * PI / SCAN_POINTS as f64;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=SCAN_POINTS {
        let t = step * i as f64;
        let Some(v1) = h(t) else { continue };
        if let Some((t0, v0)) = prev {
            if v0 == 0.0 {
                candidates.push(t0);
            } else if v0.signum() != v1.signum() {
                if let Ok(root) = bisect(|t| h(t).unwrap_or(f64::NAN), t0, t, 1e-12) {
                    candidates.push(root);
                }
            }
        }
        prev = Some((t, v1));
    }

    let mut out: Vec<ChordRealization> = Vec::new();
    for tm0 in candidates {
        let Some(tp0) = opposite_intersection(curve, tm0, dir) else { continue };
        let Some((tm, tp)) = polish_realization(curve, tm0, tp0, xi) else { continue };
        let tm = normalize_angle(tm);
        let mut tp = normalize_angle(tp);
        if tp <= tm {
            tp += 2.0 * PI;
        }
        if out.iter().any(|r: &ChordRealization| {
            (r.theta_minus - tm).abs() < 1e-7
                || (r.theta_minus - tm).abs() > 2.0 * PI - 1e-7
        }) {
            continue;
        }
        let x_minus = curve.point(tm);
        let x_plus = curve.point(tp);
        out.push(ChordRealization {
            theta_minus: tm,
            theta_plus: tp,
            x_minus,
            x_plus,
            centre: x_minus.add(x_plus).scale(0.5),
        });
    }
    out.sort_by(|a, b| a.theta_minus.partial_cmp(&b.theta_minus).unwrap());
    Ok(out)
}

/// Both parameters where the tangent is parallel to `direction`; the first
/// has the tangent co-directed with `direction`.
pub(super) fn tangency_angles(
    curve: &dyn TorusCurve,
    direction: PhaseVector,
) -> Result<(f64, f64)> {
    let d = direction.scale(1.0 / direction.norm());
    let roots = periodic_roots(|t| skew_product(curve.velocity(t), d), 512);
    if roots.len() != 2 {
        return Err(Error::NonConvex);
    }
    let co = curve.velocity(roots[0]).dot(d);
    if co > 0.0 {
        Ok((roots[0], roots[1]))
    } else {
        Ok((roots[1], roots[0]))
    }
}

/// Diameter in a given direction: the chord joining the two points whose
/// tangents are parallel to `direction`, oriented from the co-directed
/// tangency to the counter-directed one.
pub fn diameter(curve: &dyn TorusCurve, direction: PhaseVector) -> Result<PhaseVector> {
    if !is_convex(curve) {
        return Err(Error::NonConvex);
    }
    let (t_co, t_counter) = tangency_angles(curve, direction)?;
    Ok(curve.point(t_counter).sub(curve.point(t_co)))
}

/// The longest chord parallel to `direction`, refined to the stationary
/// configuration where the two tip tangents are mutually parallel. Returns
/// `(length, θ₋, θ₊)` with the chord pointing along `+direction`.
pub fn max_parallel_chord(
    curve: &dyn TorusCurve,
    direction: PhaseVector,
) -> Result<(f64, f64, f64)> {
    if !is_convex(curve) {
        return Err(Error::NonConvex);
    }
    let d = direction.scale(1.0 / direction.norm());
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 0..SCAN_POINTS {
        let tm = 2.0 * PI * i as f64 / SCAN_POINTS as f64;
        if let Some(tp) = opposite_intersection(curve, tm, d) {
            let len = curve.point(tp).sub(curve.point(tm)).dot(d);
            if best.map_or(true, |(l, _, _)| len > l) {
                best = Some((len, tm, tp));
            }
        }
    }
    let (_, mut tm, mut tp) = best.ok_or(Error::NoRealizations)?;
    // Newton on the stationarity system: chord parallel to d, tangents
    // mutually parallel
    for _ in 0..60 {
        let xm = curve.point(tm);
        let xp = curve.point(tp);
        let vm = curve.velocity(tm);
        let vp = curve.velocity(tp);
        let f1 = skew_product(xp.sub(xm), d);
        let f2 = skew_product(vm, vp);
        if f1.abs() + f2.abs() < 1e-13 {
            break;
        }
        let am = curve.acceleration(tm);
        let ap = curve.acceleration(tp);
        // d f1 = [-vm∧d, vp∧d], d f2 = [am∧vp, vm∧ap]
        let j11 = -skew_product(vm, d);
        let j12 = skew_product(vp, d);
        let j21 = skew_product(am, vp);
        let j22 = skew_product(vm, ap);
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-14 {
            break;
        }
        tm -= (f1 * j22 - f2 * j12) / det;
        tp -= (j11 * f2 - j21 * f1) / det;
    }
    let len = curve.point(tp).sub(curve.point(tm)).dot(d);
    let tm = normalize_angle(tm);
    let mut tp = normalize_angle(tp);
    if tp <= tm {
        tp += 2.0 * PI;
    }
    Ok((len, tm, tp))
}

/// Simpson quadrature of `f` over `[a, b]`.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n_half: usize) -> f64 {
    let n = 2 * n_half.max(8);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// Area of the region bounded by the curve arc from `t0` to `t1`
/// (parametrized monotonically, either orientation) and the straight chord
/// closing it, as a positive number.
fn segment_area(curve: &dyn TorusCurve, t0: f64, t1: f64) -> f64 {
    let arc = simpson(
        |t| {
            let x = curve.point(t);
            let v = curve.velocity(t);
            x.q * v.p - x.p * v.q
        },
        t0,
        t1,
        ((t1 - t0).abs() / (2.0 * PI) * 4096.0).max(256.0) as usize,
    ) * 0.5;
    let a = curve.point(t1);
    let b = curve.point(t0);
    let chord = 0.5 * (a.q * b.p - a.p * b.q);
    (arc + chord).abs()
}

/// Stationary-phase action of one chord realization:
/// the signed area between the chord and the arc on which the chord-aligned
/// coordinate is monotonic, plus the Legendre term `X ∧ ξ`.
///
/// Sign convention: the segment area enters with the sign of
/// `(arc midpoint - centre) ∧ ξ`, which reproduces the branch action
/// `∫ p_I dq` of the generating function (verified against the circle,
/// where the upper-branch realization has `S = R²(α + sin α cos α)` for a
/// chord subtending half-angle `α`).
pub fn chord_action(
    curve: &dyn TorusCurve,
    realization: &ChordRealization,
    xi: PhaseVector,
) -> Result<f64> {
    let (perp_a, perp_b) = {
        // tangent ⟂ ξ, i.e. the turning points of the chord-aligned
        // coordinate x·ξ̂
        let d = xi.scale(1.0 / xi.norm());
        let roots = periodic_roots(|t| curve.velocity(t).dot(d), 512);
        if roots.len() != 2 {
            return Err(Error::NonConvex);
        }
        (roots[0], roots[1])
    };

    let tm = realization.theta_minus;
    let tp = realization.theta_plus; // > tm, possibly past 2π
    let contains = |a: f64, b: f64, t: f64| -> bool {
        // does (a, b) with b > a contain t mod 2π?
        let mut t = t;
        while t <= a {
            t += 2.0 * PI;
        }
        t < b
    };
    let increasing_clean = !contains(tm, tp, perp_a) && !contains(tm, tp, perp_b);
    let decreasing_clean = !contains(tp, tm + 2.0 * PI, perp_a)
        && !contains(tp, tm + 2.0 * PI, perp_b);
    let (t0, t1) = if increasing_clean {
        (tm, tp)
    } else if decreasing_clean {
        // traverse the complementary arc backwards from θ₋
        (tm, tp - 2.0 * PI)
    } else {
        // tips on different monotone branches (possible for oblique chords
        // on non-circular curves): neither arc is turning-point free; the
        // two choices differ by the full enclosed area, so fix the
        // increasing arc deterministically
        (tm, tp)
    };

    let area = segment_area(curve, t0, t1);
    let mid = curve.point(0.5 * (t0 + t1));
    let orient = skew_product(mid.sub(realization.centre), xi);
    let s = if orient >= 0.0 { 1.0 } else { -1.0 };
    Ok(s * area + skew_product(realization.centre, xi))
}

/// Amplitude and stationary-phase signature of one realization:
/// `A = |ẋ₊ ∧ ẋ₋|^{-1/2}` and `σ = sign(m₊ - m₋)`, where `m` is the slope
/// of the transverse symplectic coordinate `x∧ξ̂` against the chord-aligned
/// coordinate `x·ξ̂` at each tip. The realization's contribution to the
/// chord function is `A e^{i(S/ħ + σπ/4)}`.
pub fn chord_amplitude(
    curve: &dyn TorusCurve,
    realization: &ChordRealization,
) -> Result<(f64, i8)> {
    let vm = curve.velocity(realization.theta_minus);
    let vp = curve.velocity(realization.theta_plus);
    let denom = skew_product(vp, vm).abs();
    if denom < 1e-10 {
        return Err(Error::CausticProximity);
    }
    let xi = realization.chord();
    let d = xi.scale(1.0 / xi.norm());
    let slope = |v: PhaseVector| skew_product(v, d) / v.dot(d);
    let diff = slope(vp) - slope(vm);
    Ok((denom.powf(-0.5), if diff >= 0.0 { 1 } else { -1 }))
}

/// Conjugate chord of `xi`: the other side of the parallelogram inscribed
/// in the curve by the two realizations of `xi`, canonically oriented so
/// that `ξ ∧ η ≤ 0` (both orientations are geometrically equivalent; this
/// one makes the area bookkeeping identity hold with a plus sign).
pub fn conjugate_chord(curve: &dyn TorusCurve, xi: PhaseVector) -> Result<PhaseVector> {
    let reals = find_chord_realizations(curve, xi)?;
    if reals.len() != 2 {
        return Err(Error::CausticProximity);
    }
    let eta = reals[1].x_minus.sub(reals[0].x_minus);
    // parallelogram closure: the two tips must give the same difference
    let eta_plus = reals[1].x_plus.sub(reals[0].x_plus);
    debug_assert!(eta.sub(eta_plus).norm() < 1e-9 * eta.norm().max(1.0));
    if skew_product(xi, eta) > 0.0 {
        Ok(eta.scale(-1.0))
    } else {
        Ok(eta)
    }
}

/// `ΔS(ξ) = S₁ - S₂` between the two realizations, ordered by `θ₋` and
/// reduced to the principal range `[0, A)` (the two arc choices behind each
/// action differ by the enclosed area `A`, so the difference is only
/// defined modulo `A`; the principal value is the one entering the
/// inscribed-parallelogram area bookkeeping).
pub fn action_difference(curve: &dyn TorusCurve, xi: PhaseVector) -> Result<f64> {
    let reals = find_chord_realizations(curve, xi)?;
    if reals.len() != 2 {
        return Err(Error::CausticProximity);
    }
    let raw = chord_action(curve, &reals[0], xi)? - chord_action(curve, &reals[1], xi)?;
    Ok(raw.rem_euclid(enclosed_area(curve, 4096)))
}

/// Near-caustic (fold) expansion of the chord action for `|ξ|` close to the
/// longest parallel chord `L`:
/// `S(ξ) = S_diam - (2/3)(L - |ξ|)^{3/2} / sqrt(γ)`,
/// with `γ` assembled from the curvatures at the coalescence tips in the
/// chord-aligned frame. Returns the action of the realization on the
/// positive-orientation side (the one whose `chord_action` is larger).
pub fn near_diameter_action(curve: &dyn TorusCurve, xi: PhaseVector) -> Result<f64> {
    let len = xi.norm();
    if !(len > 0.0) {
        return Err(Error::NoRealizations);
    }
    let d = xi.scale(1.0 / len);
    let (l_max, tm, tp) = max_parallel_chord(curve, d)?;
    if len > l_max {
        return Err(Error::NoRealizations);
    }
    if len < 0.9 * l_max {
        return Err(Error::RootFind("chord not within 10% of the maximal parallel chord"));
    }

    // fold coefficient from the tip curvatures in the orthonormal frame
    // aligned with the chord: ℓ(δ) = L - γ δ², γ = (κ₁+κ₂)(1+m²)^{3/2}/2
    // with m the common tangent slope against the transverse coordinate
    let nvec = d.rotate90();
    let v = curve.velocity(tm);
    let m_slope = v.dot(d) / v.dot(nvec);
    let gamma = 0.5
        * (curvature(curve, tm) + curvature(curve, tp))
        * (1.0 + m_slope * m_slope).powf(1.5);
    if gamma < 1e-12 {
        return Err(Error::NonConvex);
    }

    // actions of the two coalescing branches at the diameter itself: the
    // segment areas of the two arcs cut off by the maximal chord, with the
    // orientation rule of chord_action
    let x_lo = curve.point(tm);
    let x_hi = curve.point(tp);
    let centre = x_lo.add(x_hi).scale(0.5);
    let zeta = x_hi.sub(x_lo);
    let legendre = skew_product(centre, zeta);
    let area_inc = segment_area(curve, tm, tp);
    let area_dec = enclosed_area(curve, 4096) - area_inc;
    let orient_inc = {
        let mid = curve.point(0.5 * (tm + tp));
        if skew_product(mid.sub(centre), zeta) >= 0.0 { 1.0 } else { -1.0 }
    };
    let s_branch_inc = orient_inc * area_inc + legendre;
    let s_branch_dec = -orient_inc * area_dec + legendre;
    let s_diam_high = s_branch_inc.max(s_branch_dec);

    let fold = (2.0 / 3.0) * (l_max - len).powf(1.5) / gamma.sqrt();
    Ok(s_diam_high - fold)
}
