//! Construction of the built-in state families as position-grid
//! wavefunctions and density matrices, and phase-space translations.
//!
//! The position grid is always the q-axis of a [`DualGridPair`]'s centre
//! grid. Wavefunctions are normalized so that `Σ|ψ(q_j)|²·Δq = 1`; density
//! matrices carry the kernel `ρ(q_i, q_j)` so that traces are `Σ·Δq`.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft::PaddedShifter;
use crate::geometry::{DualGridPair, PhaseVector};

/// Largest tolerated |ψ| at the outermost grid samples. Truncation enters
/// all sampled observables quadratically, so 1e-6 at the edge keeps field
/// errors below 1e-12.
pub const EDGE_TOL: f64 = 1e-6;

/// A pure state sampled on the position grid.
#[derive(Debug, Clone)]
pub struct PositionWavefunction {
    grid: DualGridPair,
    amplitudes: Array1<C64>,
}

/// A density operator kernel `ρ(q_i, q_j)` on the position grid.
#[derive(Debug, Clone)]
pub struct DensityMatrixRep {
    grid: DualGridPair,
    matrix: Array2<C64>,
}

/// Either representation of a state.
#[derive(Debug, Clone)]
pub enum StateRep {
    Pure(PositionWavefunction),
    Mixed(DensityMatrixRep),
}

impl From<PositionWavefunction> for StateRep {
    fn from(psi: PositionWavefunction) -> Self {
        StateRep::Pure(psi)
    }
}

impl From<DensityMatrixRep> for StateRep {
    fn from(rho: DensityMatrixRep) -> Self {
        StateRep::Mixed(rho)
    }
}

impl StateRep {
    pub fn grid(&self) -> &DualGridPair {
        match self {
            StateRep::Pure(s) => s.grid(),
            StateRep::Mixed(s) => s.grid(),
        }
    }

    pub fn to_density(&self) -> DensityMatrixRep {
        match self {
            StateRep::Pure(s) => density_from_pure(s),
            StateRep::Mixed(s) => s.clone(),
        }
    }
}

impl PositionWavefunction {
    /// Wrap raw samples, normalizing and checking that the state fits.
    pub fn from_samples(grid: DualGridPair, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != grid.n() {
            return Err(Error::GridMismatch);
        }
        let mut s = Self { grid, amplitudes };
        let norm = s.norm();
        if norm < 1e-8 {
            return Err(Error::DegenerateSuperposition { norm });
        }
        s.amplitudes.mapv_inplace(|a| a / norm);
        let edge = s.edge_amplitude();
        if edge > EDGE_TOL {
            return Err(Error::GridTooNarrow { edge, limit: EDGE_TOL });
        }
        Ok(s)
    }

    pub fn grid(&self) -> &DualGridPair {
        &self.grid
    }

    pub fn hbar(&self) -> f64 {
        self.grid.hbar()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn spacing(&self) -> f64 {
        self.grid.centre_spacing()
    }

    /// Position of sample `j`.
    pub fn coord(&self, j: usize) -> f64 {
        self.grid.coord(crate::geometry::Space::Centre, j)
    }

    pub fn norm(&self) -> f64 {
        (self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.spacing()).sqrt()
    }

    pub fn edge_amplitude(&self) -> f64 {
        let n = self.amplitudes.len();
        self.amplitudes[0].norm().max(self.amplitudes[n - 1].norm())
    }

    /// `⟨self|other⟩ = Σ ψ*φ Δq`.
    pub fn inner(&self, other: &PositionWavefunction) -> Result<C64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            * self.spacing())
    }
}

impl DensityMatrixRep {
    pub fn from_matrix(grid: DualGridPair, matrix: Array2<C64>) -> Result<Self> {
        if matrix.nrows() != grid.n() || matrix.ncols() != grid.n() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, matrix })
    }

    pub fn grid(&self) -> &DualGridPair {
        &self.grid
    }

    pub fn hbar(&self) -> f64 {
        self.grid.hbar()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut Array2<C64> {
        &mut self.matrix
    }

    pub fn spacing(&self) -> f64 {
        self.grid.centre_spacing()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diag().sum() * self.spacing()
    }

    /// `tr ρ² = Δq² Σ_ij |ρ_ij|²` for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spacing().powi(2)
    }

    /// `tr(ρσ)` with the grid measure.
    pub fn trace_product(&self, other: &DensityMatrixRep) -> Result<C64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let n = self.grid.n();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.matrix[(i, j)] * other.matrix[(j, i)];
            }
        }
        Ok(acc * self.spacing().powi(2))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.grid.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

/// Normalized Hermite function `h_n(x)` (oscillator eigenfunction at ħ = ω = 1)
/// by the stable upward recurrence.
fn hermite_function(n: usize, x: f64) -> f64 {
    let h0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return h0;
    }
    let mut prev = h0;
    let mut cur = 2.0f64.sqrt() * x * h0;
    for k in 2..=n {
        let next = (2.0 / k as f64).sqrt() * x * cur - ((k - 1) as f64 / k as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Gaussian wavepacket of frequency `omega` centred at `centre`, with real
/// positive amplitude at the packet centre:
/// `ψ(q) = (ω/πħ)^{1/4} e^{-ω(q-η_q)²/2ħ} e^{iη_p(q-η_q)/ħ}`.
pub fn make_coherent(
    centre: PhaseVector,
    omega: f64,
    grid: &DualGridPair,
) -> Result<PositionWavefunction> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::NonPositive { what: "omega", value: omega });
    }
    let hbar = grid.hbar();
    let n = grid.n();
    let amp = (omega / (PI * hbar)).powf(0.25);
    let samples = Array1::from_iter((0..n).map(|j| {
        let dq = grid.coord(crate::geometry::Space::Centre, j) - centre.q;
        C64::from_polar(amp * (-0.5 * omega * dq * dq / hbar).exp(), centre.p * dq / hbar)
    }));
    PositionWavefunction::from_samples(*grid, samples)
}

/// `n`-th harmonic-oscillator eigenfunction (ω = 1).
pub fn make_fock(n_level: usize, grid: &DualGridPair) -> Result<PositionWavefunction> {
    let hbar = grid.hbar();
    let scale = hbar.powf(-0.25);
    let samples = Array1::from_iter((0..grid.n()).map(|j| {
        let q = grid.coord(crate::geometry::Space::Centre, j);
        C64::new(scale * hermite_function(n_level, q / hbar.sqrt()), 0.0)
    }));
    PositionWavefunction::from_samples(*grid, samples)
}

/// Raw displaced ground state `T_η|0⟩` with the symmetric-ordering phase
/// `(T_η ψ)(q) = e^{i(η_p q - η_p η_q / 2)/ħ} ψ(q - η_q)`; used internally
/// for superpositions, where the relative translation phases matter.
fn displaced_ground(centre: PhaseVector, grid: &DualGridPair) -> Array1<C64> {
    let hbar = grid.hbar();
    let amp = (1.0 / (PI * hbar)).powf(0.25);
    Array1::from_iter((0..grid.n()).map(|j| {
        let q = grid.coord(crate::geometry::Space::Centre, j);
        let dq = q - centre.q;
        C64::from_polar(
            amp * (-0.5 * dq * dq / hbar).exp(),
            (centre.p * q - 0.5 * centre.p * centre.q) / hbar,
        )
    }))
}

/// Normalized superposition of a pair of displaced ground states,
/// `N (T_η|0⟩ ± T_{-η}|0⟩)`.
pub fn make_cat(
    centre: PhaseVector,
    sign: i8,
    grid: &DualGridPair,
) -> Result<PositionWavefunction> {
    let s = match sign {
        1 => 1.0,
        -1 => -1.0,
        _ => return Err(Error::Parse(format!("cat sign must be +1 or -1, got {sign}"))),
    };
    let plus = displaced_ground(centre, grid);
    let minus = displaced_ground(centre.scale(-1.0), grid);
    let samples = Array1::from_iter(plus.iter().zip(minus.iter()).map(|(a, b)| a + s * b));
    PositionWavefunction::from_samples(*grid, samples)
}

/// Normalized `Σ_j a_j T_{η_j}|0⟩`, with the global phase fixed so that a
/// single-term superposition reproduces [`make_coherent`] exactly.
pub fn superpose_coherent(
    terms: &[(C64, PhaseVector)],
    grid: &DualGridPair,
) -> Result<PositionWavefunction> {
    if terms.is_empty() {
        return Err(Error::DegenerateSuperposition { norm: 0.0 });
    }
    let n = grid.n();
    let mut acc = Array1::from_elem(n, C64::new(0.0, 0.0));
    for &(coeff, centre) in terms {
        let comp = displaced_ground(centre, grid);
        acc.zip_mut_with(&comp, |a, &c| *a += coeff * c);
    }
    let (c0, eta0) = terms[0];
    let global =
        C64::from_polar(1.0, -0.5 * eta0.p * eta0.q / grid.hbar() - c0.arg());
    acc.mapv_inplace(|a| a * global);
    PositionWavefunction::from_samples(*grid, acc)
}

/// Apply the phase-space translation `T_shift` to a wavefunction:
/// `(T_ξ ψ)(q) = e^{i(ξ_p q - ξ_p ξ_q / 2)/ħ} ψ(q - ξ_q)`.
///
/// The position shift is performed in the momentum representation (exact for
/// grid-resolved states), so `ξ_q` need not be a multiple of the spacing.
pub fn translate_state(
    psi: &PositionWavefunction,
    shift: PhaseVector,
) -> Result<PositionWavefunction> {
    let grid = psi.grid;
    let n = grid.n();
    let hbar = grid.hbar();
    let shifter = PaddedShifter::new(n, grid.centre_spacing(), 2);
    let spec = shifter.spectrum(psi.amplitudes.as_slice().unwrap());
    let moved = shifter.shifted(&spec, -shift.q);
    let samples = Array1::from_iter(moved.iter().enumerate().map(|(j, &v)| {
        let q = grid.coord(crate::geometry::Space::Centre, j);
        v * C64::from_polar(1.0, (shift.p * q - 0.5 * shift.p * shift.q) / hbar)
    }));
    let out = PositionWavefunction { grid, amplitudes: samples };
    let edge = out.edge_amplitude();
    if edge > EDGE_TOL {
        return Err(Error::GridOverflow { edge });
    }
    Ok(out)
}

/// `ρ(q_i, q_j) = ψ(q_i) ψ*(q_j)`.
pub fn density_from_pure(psi: &PositionWavefunction) -> DensityMatrixRep {
    let n = psi.grid.n();
    let a = &psi.amplitudes;
    let mut m = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[i] * a[j].conj();
        }
    }
    DensityMatrixRep { grid: psi.grid, matrix: m }
}

/// Convex mixture `Σ w_k ρ_k`.
pub fn mix(weights: &[f64], parts: &[DensityMatrixRep]) -> Result<DensityMatrixRep> {
    if weights.len() != parts.len() || parts.is_empty() {
        return Err(Error::BadWeights { sum: f64::NAN });
    }
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w < 0.0) || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::BadWeights { sum });
    }
    let grid = parts[0].grid;
    let n = grid.n();
    let mut m = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for (w, part) in weights.iter().zip(parts) {
        if part.grid != grid {
            return Err(Error::GridMismatch);
        }
        m.zip_mut_with(&part.matrix, |acc, &v| *acc += *w * v);
    }
    Ok(DensityMatrixRep { grid, matrix: m })
}
