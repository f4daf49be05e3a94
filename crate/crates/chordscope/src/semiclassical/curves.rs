//! Closed convex curves in the phase plane, parametrized over `[0, 2π)`.
//!
//! Curves are oriented counterclockwise in the `(q, p)` plane (positive
//! enclosed area `(1/2)∮(q dp - p dq)`). For the built-in circle and
//! ellipse the parameter coincides (up to sign) with the canonical angle of
//! the natural quadratic foliation, which is what the stationary-phase
//! amplitudes require; user-supplied spline curves are taken to be given in
//! canonical-angle parametrization.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{skew_product, PhaseVector};
use crate::numerics::PeriodicSpline;

/// A smooth closed curve `x(θ)` with derivative access and a fixed action
/// (enclosed area / 2π).
pub trait TorusCurve: Sync {
    fn point(&self, theta: f64) -> PhaseVector;
    /// `dx/dθ`
    fn velocity(&self, theta: f64) -> PhaseVector;
    /// `d²x/dθ²`
    fn acceleration(&self, theta: f64) -> PhaseVector;
    /// Enclosed area divided by 2π.
    fn action(&self) -> f64;
}

/// Signed enclosed area `(1/2)∮(q dp - p dq)` by the periodic trapezoidal
/// rule (spectrally accurate for smooth curves).
pub fn enclosed_area(curve: &dyn TorusCurve, samples: usize) -> f64 {
    let n = samples.max(64);
    let mut acc = 0.0;
    for i in 0..n {
        let t = 2.0 * PI * i as f64 / n as f64;
        let x = curve.point(t);
        let v = curve.velocity(t);
        acc += x.q * v.p - x.p * v.q;
    }
    0.5 * acc * 2.0 * PI / n as f64
}

/// Strict convexity check: the signed curvature `ẋ∧ẍ` must keep one sign
/// (and stay away from zero) on a 1024-point scan.
pub fn is_convex(curve: &dyn TorusCurve) -> bool {
    let n = 1024;
    let mut max_mag: f64 = 0.0;
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        let t = 2.0 * PI * i as f64 / n as f64;
        let s = skew_product(curve.velocity(t), curve.acceleration(t));
        max_mag = max_mag.max(s.abs());
        signs.push(s);
    }
    if max_mag == 0.0 {
        return false;
    }
    signs.iter().all(|&s| s > 1e-9 * max_mag) || signs.iter().all(|&s| s < -1e-9 * max_mag)
}

/// Unsigned curvature `|ẋ∧ẍ| / |ẋ|³` at one parameter value.
pub fn curvature(curve: &dyn TorusCurve, theta: f64) -> f64 {
    let v = curve.velocity(theta);
    let a = curve.acceleration(theta);
    skew_product(v, a).abs() / v.norm().powi(3)
}

/// Circle of action `I`: radius `sqrt(2I)`, the invariant curve of the
/// harmonic oscillator `(p² + q²)/2 = I`.
#[derive(Debug, Clone, Copy)]
pub struct CircleCurve {
    radius: f64,
    action: f64,
}

impl CircleCurve {
    pub fn new(action: f64) -> Result<Self> {
        if !(action > 0.0) {
            return Err(Error::NonPositive { what: "action", value: action });
        }
        Ok(Self { radius: (2.0 * action).sqrt(), action })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl TorusCurve for CircleCurve {
    fn point(&self, t: f64) -> PhaseVector {
        PhaseVector::new(self.radius * t.sin(), self.radius * t.cos())
    }

    fn velocity(&self, t: f64) -> PhaseVector {
        PhaseVector::new(self.radius * t.cos(), -self.radius * t.sin())
    }

    fn acceleration(&self, t: f64) -> PhaseVector {
        PhaseVector::new(-self.radius * t.sin(), -self.radius * t.cos())
    }

    fn action(&self) -> f64 {
        self.action
    }
}

/// Ellipse of action `I` with semi-axis ratio `a : b` (momentum : position),
/// the invariant curve of `(b/a·p² + a/b·q²)/2`. Semi-axes are
/// `sqrt(2I·a/b)` in `p` and `sqrt(2I·b/a)` in `q`.
#[derive(Debug, Clone, Copy)]
pub struct EllipseCurve {
    semi_p: f64,
    semi_q: f64,
    action: f64,
}

impl EllipseCurve {
    pub fn new(a: f64, b: f64, action: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::NonPositive { what: "a", value: a });
        }
        if !(b > 0.0) {
            return Err(Error::NonPositive { what: "b", value: b });
        }
        if !(action > 0.0) {
            return Err(Error::NonPositive { what: "action", value: action });
        }
        let s = (2.0 * action / (a * b)).sqrt();
        Ok(Self { semi_p: s * a, semi_q: s * b, action })
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        (self.semi_p, self.semi_q)
    }
}

impl TorusCurve for EllipseCurve {
    fn point(&self, t: f64) -> PhaseVector {
        PhaseVector::new(self.semi_p * t.sin(), self.semi_q * t.cos())
    }

    fn velocity(&self, t: f64) -> PhaseVector {
        PhaseVector::new(self.semi_p * t.cos(), -self.semi_q * t.sin())
    }

    fn acceleration(&self, t: f64) -> PhaseVector {
        PhaseVector::new(-self.semi_p * t.sin(), -self.semi_q * t.cos())
    }

    fn action(&self) -> f64 {
        self.action
    }
}

/// Curve interpolated from `(θ_i, p_i, q_i)` samples with periodic cubic
/// splines. The parametrization is taken at face value (canonical angle).
#[derive(Debug, Clone)]
pub struct SplineCurve {
    p: PeriodicSpline,
    q: PeriodicSpline,
    action: f64,
}

impl SplineCurve {
    pub fn new(theta: &[f64], p: &[f64], q: &[f64]) -> Result<Self> {
        let ps = PeriodicSpline::new(theta, p)?;
        let qs = PeriodicSpline::new(theta, q)?;
        let mut curve = Self { p: ps, q: qs, action: 0.0 };
        let area = enclosed_area(&curve, 4096);
        if area <= 0.0 {
            return Err(Error::Parse(
                "curve must be oriented counterclockwise (positive enclosed area)".into(),
            ));
        }
        curve.action = area / (2.0 * PI);
        Ok(curve)
    }
}

impl TorusCurve for SplineCurve {
    fn point(&self, t: f64) -> PhaseVector {
        PhaseVector::new(self.p.eval(t), self.q.eval(t))
    }

    fn velocity(&self, t: f64) -> PhaseVector {
        PhaseVector::new(self.p.deriv(t), self.q.deriv(t))
    }

    fn acceleration(&self, t: f64) -> PhaseVector {
        PhaseVector::new(self.p.second_deriv(t), self.q.second_deriv(t))
    }

    fn action(&self) -> f64 {
        self.action
    }
}
