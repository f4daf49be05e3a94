//! Phase-space geometry primitives shared by every other module: points and
//! chords in the plane, the skew (symplectic) product, Planck-scale context,
//! and the Fourier-dual grid pair used to sample centre and chord space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point, chord or centre in the phase plane, stored as `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseVector {
    pub p: f64,
    pub q: f64,
}

impl PhaseVector {
    pub const ZERO: PhaseVector = PhaseVector { p: 0.0, q: 0.0 };

    pub fn new(p: f64, q: f64) -> Self {
        Self { p, q }
    }

    pub fn norm(&self) -> f64 {
        self.p.hypot(self.q)
    }

    pub fn is_finite(&self) -> bool {
        self.p.is_finite() && self.q.is_finite()
    }

    /// Counterclockwise quarter turn `(p, q) -> (-q, p)`.
    pub fn rotate90(&self) -> PhaseVector {
        PhaseVector::new(-self.q, self.p)
    }

    pub fn scale(&self, s: f64) -> PhaseVector {
        PhaseVector::new(self.p * s, self.q * s)
    }

    pub fn add(&self, other: PhaseVector) -> PhaseVector {
        PhaseVector::new(self.p + other.p, self.q + other.q)
    }

    pub fn sub(&self, other: PhaseVector) -> PhaseVector {
        PhaseVector::new(self.p - other.p, self.q - other.q)
    }

    pub fn dot(&self, other: PhaseVector) -> f64 {
        self.p * other.p + self.q * other.q
    }
}

/// Skew product `a ∧ b = a_p b_q - a_q b_p`, the symplectic area form that
/// replaces the dot product in all phase-space Fourier kernels.
pub fn skew_product(a: PhaseVector, b: PhaseVector) -> f64 {
    a.p * b.q - a.q * b.p
}

/// Planck-scale context: the value of ħ and the number of degrees of freedom.
///
/// All numerics in this crate are for a single degree of freedom; `dof` is
/// kept so that the `2^L` and `(2πħ)^L` factors appearing in normalizations
/// are written generically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanckContext {
    hbar: f64,
    dof: u32,
}

impl PlanckContext {
    pub fn new(hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::NonPositive {
                what: "hbar",
                value: hbar,
            });
        }
        Ok(Self { hbar, dof: 1 })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dof(&self) -> u32 {
        self.dof
    }

    /// `(2πħ)^L`
    pub fn planck_cell(&self) -> f64 {
        (2.0 * std::f64::consts::PI * self.hbar).powi(self.dof as i32)
    }
}

/// Matched centre-space and chord-space sampling grids.
///
/// Both grids are square, uniform, origin-centred with `n` samples per axis
/// (`n` even, so the origin is a sample point), and their spacings satisfy
/// the exact Fourier-duality relation
///
/// ```text
///     Δξ · ΔX · n = 2πħ        (per axis)
/// ```
///
/// which makes the discrete symplectic Fourier transform between the two
/// grids an exact involution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualGridPair {
    n: usize,
    centre_extent: f64,
    chord_extent: f64,
    hbar: f64,
}

/// Which member of a [`DualGridPair`] a sampled field lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    Centre,
    Chord,
}

impl Space {
    pub fn toggled(self) -> Space {
        match self {
            Space::Centre => Space::Chord,
            Space::Chord => Space::Centre,
        }
    }
}

impl DualGridPair {
    /// Build the pair from the centre-grid half-width. The chord half-width
    /// follows from duality: `chord_extent = n·πħ/(2·centre_extent)`.
    pub fn new(n: usize, centre_extent: f64, hbar: f64) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::BadGridSize { n });
        }
        if !(centre_extent > 0.0) || !centre_extent.is_finite() {
            return Err(Error::NonPositive {
                what: "centre_extent",
                value: centre_extent,
            });
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::NonPositive {
                what: "hbar",
                value: hbar,
            });
        }
        let chord_extent = n as f64 * std::f64::consts::PI * hbar / (2.0 * centre_extent);
        Ok(Self {
            n,
            centre_extent,
            chord_extent,
            hbar,
        })
    }

    /// Pair whose chord spacing equals its centre spacing (`Δξ = ΔX`), i.e.
    /// `ΔX = sqrt(2πħ/n)`. On this grid the symplectic Fourier transform of
    /// a chord-space field lands back on the same lattice, which permits
    /// exact pointwise self-duality checks.
    pub fn self_dual(n: usize, hbar: f64) -> Result<Self> {
        let dx = (2.0 * std::f64::consts::PI * hbar / n as f64).sqrt();
        Self::new(n, 0.5 * n as f64 * dx, hbar)
    }

    /// Pair with `Δξ = 2·ΔX`, i.e. `ΔX = sqrt(πħ/n)`. Here every half-chord
    /// `ξ/2` of a chord-grid point lies exactly on the centre grid and every
    /// doubled centre `2X` on the chord grid, as the parity identities need.
    pub fn chord_halved(n: usize, hbar: f64) -> Result<Self> {
        let dx = (std::f64::consts::PI * hbar / n as f64).sqrt();
        Self::new(n, 0.5 * n as f64 * dx, hbar)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn centre_extent(&self) -> f64 {
        self.centre_extent
    }

    pub fn chord_extent(&self) -> f64 {
        self.chord_extent
    }

    pub fn centre_spacing(&self) -> f64 {
        2.0 * self.centre_extent / self.n as f64
    }

    pub fn chord_spacing(&self) -> f64 {
        2.0 * self.chord_extent / self.n as f64
    }

    pub fn spacing(&self, space: Space) -> f64 {
        match space {
            Space::Centre => self.centre_spacing(),
            Space::Chord => self.chord_spacing(),
        }
    }

    pub fn extent(&self, space: Space) -> f64 {
        match space {
            Space::Centre => self.centre_extent,
            Space::Chord => self.chord_extent,
        }
    }

    /// Coordinate of sample `i` on the given axis: `(i - n/2)·Δ`.
    pub fn coord(&self, space: Space, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.spacing(space)
    }

    /// Grid point `(p, q)` for indices `(i, j)` where `i` runs along the
    /// momentum axis and `j` along the position axis.
    pub fn point(&self, space: Space, i: usize, j: usize) -> PhaseVector {
        PhaseVector::new(self.coord(space, i), self.coord(space, j))
    }

    /// Index of the origin sample on either axis.
    pub fn origin_index(&self) -> usize {
        self.n / 2
    }

    pub fn is_self_dual(&self) -> bool {
        (self.chord_spacing() - self.centre_spacing()).abs() < 1e-12 * self.centre_spacing()
    }

    pub fn is_chord_halved(&self) -> bool {
        (self.chord_spacing() - 2.0 * self.centre_spacing()).abs()
            < 1e-12 * self.centre_spacing()
    }

    /// `Δξ·ΔX·n`, which equals `2πħ` exactly by construction.
    pub fn duality_product(&self) -> f64 {
        self.chord_spacing() * self.centre_spacing() * self.n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn skew_product_unit_area() {
        let a = PhaseVector::new(1.0, 0.0);
        let b = PhaseVector::new(0.0, 1.0);
        assert_eq!(skew_product(a, b), 1.0);
    }

    #[test]
    fn skew_product_self_is_zero() {
        let a = PhaseVector::new(2.0, 3.0);
        assert_eq!(skew_product(a, a), 0.0);
    }

    #[test]
    fn skew_product_direct_value() {
        let a = PhaseVector::new(1.0, 2.0);
        let b = PhaseVector::new(3.0, 4.0);
        assert_eq!(skew_product(a, b), 1.0 * 4.0 - 2.0 * 3.0);
    }

    #[test]
    fn skew_product_antisymmetric() {
        for (ap, aq, bp, bq) in [
            (0.3, -1.2, 4.5, 0.01),
            (1e-8, 2e3, -7.7, 0.0),
            (-1.0, -2.0, -3.0, -4.0),
        ] {
            let a = PhaseVector::new(ap, aq);
            let b = PhaseVector::new(bp, bq);
            assert_eq!(skew_product(a, b), -skew_product(b, a));
        }
    }

    #[test]
    fn skew_with_quarter_turn_is_norm_squared() {
        let x = PhaseVector::new(-1.5, 2.25);
        let r = x.rotate90();
        assert!((skew_product(x, r) - (x.p * x.p + x.q * x.q)).abs() < 1e-15);
    }

    #[test]
    fn dual_grid_spacing_example() {
        let g = DualGridPair::new(256, 8.0, 1.0).unwrap();
        assert!((g.chord_spacing() - 2.0 * PI / 16.0).abs() < 1e-14);
        assert!((g.duality_product() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn dual_grid_small_example() {
        let g = DualGridPair::new(8, PI, 1.0).unwrap();
        assert!((g.centre_spacing() - 2.0 * PI / 8.0).abs() < 1e-15);
        assert!((g.chord_spacing() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dual_grid_rejects_odd_n() {
        assert!(DualGridPair::new(7, 1.0, 1.0).is_err());
        assert!(DualGridPair::new(0, 1.0, 1.0).is_err());
    }

    #[test]
    fn dual_grid_rejects_nonpositive() {
        assert!(DualGridPair::new(64, -1.0, 1.0).is_err());
        assert!(DualGridPair::new(64, 1.0, 0.0).is_err());
    }

    #[test]
    fn duality_holds_for_many_pairs() {
        for &(n, ext, hb) in &[
            (8usize, 1.0, 1.0),
            (64, 8.0, 0.5),
            (512, 8.0, 1.0),
            (128, 12.7, 0.25),
            (96, 0.3, 3.0),
        ] {
            let g = DualGridPair::new(n, ext, hb).unwrap();
            let rel = (g.duality_product() - 2.0 * PI * hb).abs() / (2.0 * PI * hb);
            assert!(rel < 1e-14, "duality violated for n={n} ext={ext} hb={hb}");
        }
    }

    #[test]
    fn origin_is_a_sample() {
        let g = DualGridPair::new(64, 5.0, 1.0).unwrap();
        assert_eq!(g.coord(Space::Centre, g.origin_index()), 0.0);
        assert_eq!(g.coord(Space::Chord, g.origin_index()), 0.0);
    }

    #[test]
    fn special_pairs() {
        let sd = DualGridPair::self_dual(512, 1.0).unwrap();
        assert!(sd.is_self_dual());
        let ch = DualGridPair::chord_halved(512, 0.5).unwrap();
        assert!(ch.is_chord_halved());
        assert!((ch.duality_product() - 2.0 * PI * 0.5).abs() < 1e-14);
    }
}
