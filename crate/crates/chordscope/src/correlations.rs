//! Intrinsic phase-space correlations: the normalized state overlap, the
//! translation correlation `C_ξ = tr(ρ T_ξ ρ T_ξ†)/tr ρ²` evaluated by three
//! independent routes, Fourier-invariance and purity diagnostics for pure
//! states, and the small-parameter expansion of unitary orbits.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft::PaddedShifter;
use crate::geometry::{skew_product, DualGridPair, PhaseVector, Space};
use crate::numerics::hermitian_eigen;
use crate::states::{DensityMatrixRep, StateRep};
use crate::transforms::{chord_of, wigner_of, symplectic_fourier, ChordField, WignerField};

/// `tr(ρ_A ρ_B) / sqrt(tr ρ_A² · tr ρ_B²)`; for pure states the squared
/// overlap `|⟨ψ_A|ψ_B⟩|²`.
pub fn state_correlation(a: &DensityMatrixRep, b: &DensityMatrixRep) -> Result<f64> {
    let num = a.trace_product(b)?.re;
    Ok(num / (a.purity() * b.purity()).sqrt())
}

/// `T_ξ ρ T_ξ†` on the grid. Translations are exact spectral shifts plus
/// momentum phases; state weight carried outside the grid is dropped, which
/// is the correct limit for decaying states.
pub fn translate_density(rho: &DensityMatrixRep, xi: PhaseVector) -> DensityMatrixRep {
    let grid = *rho.grid();
    let n = grid.n();
    let hbar = grid.hbar();
    let shifter = PaddedShifter::new(n, grid.centre_spacing(), 2);

    // apply T_ξ to every column (first index)
    let apply_cols = |m: &Array2<C64>| -> Array2<C64> {
        let mut out = Array2::from_elem((n, n), C64::new(0.0, 0.0));
        for j in 0..n {
            let col: Vec<C64> = (0..n).map(|i| m[(i, j)]).collect();
            let spec = shifter.spectrum(&col);
            let moved = shifter.shifted(&spec, -xi.q);
            for (i, &v) in moved.iter().enumerate() {
                let q = grid.coord(Space::Centre, i);
                out[(i, j)] =
                    v * C64::from_polar(1.0, (xi.p * q - 0.5 * xi.p * xi.q) / hbar);
            }
        }
        out
    };
    let adjoint = |m: &Array2<C64>| Array2::from_shape_fn((n, n), |(i, j)| m[(j, i)].conj());

    // TρT† = (T (Tρ)†)†
    let a = apply_cols(rho.matrix());
    let c = adjoint(&apply_cols(&adjoint(&a)));
    DensityMatrixRep::from_matrix(grid, c).expect("shape preserved")
}

/// The translation correlation at one chord, evaluated three ways.
#[derive(Debug, Clone, Copy)]
pub struct TranslationCorrelation {
    /// `tr(ρ ρ_ξ)/tr ρ²` with the explicitly translated density matrix.
    pub direct: f64,
    /// `2πħ ∫ W(X) W(X-ξ) dX / tr ρ²`.
    pub wigner_route: f64,
    /// `2πħ ∫ dη e^{iη∧ξ/ħ} |χ(η)|² / tr ρ²`.
    pub chord_route: f64,
}

impl TranslationCorrelation {
    pub fn value(&self) -> f64 {
        self.direct
    }

    pub fn max_spread(&self) -> f64 {
        let vals = [self.direct, self.wigner_route, self.chord_route];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in vals {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        hi - lo
    }
}

/// Real nonnegative samples of `C_ξ` over chord space, on the lattice of
/// centre-grid lags (spacing `ΔX`), plus the purity used to normalize.
#[derive(Debug, Clone)]
pub struct CorrelationField {
    spacing: f64,
    hbar: f64,
    purity: f64,
    values: Array2<f64>,
}

impl CorrelationField {
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn purity(&self) -> f64 {
        self.purity
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn at_origin(&self) -> f64 {
        let o = self.n() / 2;
        self.values[(o, o)]
    }

    pub fn extent(&self) -> f64 {
        0.5 * self.n() as f64 * self.spacing
    }
}

/// Precomputed fields for repeated correlation queries against one state.
pub struct CorrelationEngine {
    grid: DualGridPair,
    rho: DensityMatrixRep,
    wigner: WignerField,
    chord: ChordField,
    purity: f64,
}

impl CorrelationEngine {
    pub fn new(state: &StateRep, grids: &DualGridPair) -> Result<Self> {
        let rho = state.to_density();
        let wigner = wigner_of(state, grids)?;
        let chord = chord_of(state, grids)?;
        let purity = rho.purity();
        Ok(Self { grid: *grids, rho, wigner, chord, purity })
    }

    pub fn purity(&self) -> f64 {
        self.purity
    }

    pub fn wigner(&self) -> &WignerField {
        &self.wigner
    }

    pub fn chord(&self) -> &ChordField {
        &self.chord
    }

    /// `C_ξ` by all three routes.
    pub fn translation_correlation(&self, xi: PhaseVector) -> TranslationCorrelation {
        let direct = {
            let moved = translate_density(&self.rho, xi);
            self.rho.trace_product(&moved).expect("same grid").re / self.purity
        };
        let wigner_route = self.wigner_autocorrelation(xi) / self.purity;
        let chord_route = self.chord_power_integral(xi) / self.purity;
        TranslationCorrelation { direct, wigner_route, chord_route }
    }

    /// `2πħ ∫ W(X)W(X-ξ) dX` by an exact spectral shift of the Wigner field.
    fn wigner_autocorrelation(&self, xi: PhaseVector) -> f64 {
        let n = self.grid.n();
        let d = self.grid.centre_spacing();
        let hbar = self.grid.hbar();
        let w = self.wigner.field().values();

        // shift along the momentum axis, then the position axis
        let shifter = PaddedShifter::new(n, d, 2);
        let mut shifted = Array2::from_elem((n, n), C64::new(0.0, 0.0));
        for j in 0..n {
            let col: Vec<C64> = (0..n).map(|i| w[(i, j)]).collect();
            let spec = shifter.spectrum(&col);
            let moved = shifter.shifted(&spec, -xi.p);
            for (i, &v) in moved.iter().enumerate() {
                shifted[(i, j)] = v;
            }
        }
        for i in 0..n {
            let row: Vec<C64> = (0..n).map(|j| shifted[(i, j)]).collect();
            let spec = shifter.spectrum(&row);
            let moved = shifter.shifted(&spec, -xi.q);
            for (j, &v) in moved.iter().enumerate() {
                shifted[(i, j)] = v;
            }
        }
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += w[(i, j)].re * shifted[(i, j)].re;
            }
        }
        2.0 * PI * hbar * acc * d * d
    }

    /// `2πħ ∫ dη e^{iη∧ξ/ħ} |χ(η)|²` as a separable phase sum.
    fn chord_power_integral(&self, xi: PhaseVector) -> f64 {
        let n = self.grid.n();
        let d = self.grid.chord_spacing();
        let hbar = self.grid.hbar();
        let chi = self.chord.field().values();
        let half = (n / 2) as f64;
        // η∧ξ = η_p ξ_q - η_q ξ_p
        let row_phase: Vec<C64> = (0..n)
            .map(|a| C64::from_polar(1.0, (a as f64 - half) * d * xi.q / hbar))
            .collect();
        let col_phase: Vec<C64> = (0..n)
            .map(|b| C64::from_polar(1.0, -(b as f64 - half) * d * xi.p / hbar))
            .collect();
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..n {
            let mut inner = C64::new(0.0, 0.0);
            for b in 0..n {
                inner += chi[(a, b)].norm_sqr() * col_phase[b];
            }
            acc += row_phase[a] * inner;
        }
        2.0 * PI * hbar * acc.re * d * d
    }

    /// The whole correlation field on the lattice of centre-grid lags,
    /// computed as the cyclic FFT autocorrelation of the Wigner field.
    pub fn correlation_field(&self) -> CorrelationField {
        let n = self.grid.n();
        let d = self.grid.centre_spacing();
        let hbar = self.grid.hbar();
        let w = self.wigner.field().values();

        let mut planner = rustfft::FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);

        let mut buf: Vec<C64> = w.iter().map(|v| C64::new(v.re, 0.0)).collect();
        // 2-D forward
        for row in buf.chunks_mut(n) {
            fwd.process(row);
        }
        let mut col = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = buf[i * n + j];
            }
            fwd.process(&mut col);
            for i in 0..n {
                buf[i * n + j] = col[i];
            }
        }
        // power spectrum, then 2-D inverse
        for v in buf.iter_mut() {
            *v = C64::new(v.norm_sqr(), 0.0);
        }
        for row in buf.chunks_mut(n) {
            inv.process(row);
        }
        for j in 0..n {
            for i in 0..n {
                col[i] = buf[i * n + j];
            }
            inv.process(&mut col);
            for i in 0..n {
                buf[i * n + j] = col[i];
            }
        }
        let norm = 2.0 * PI * hbar * d * d / (n as f64 * n as f64);
        // centred lag layout
        let o = n / 2;
        let values = Array2::from_shape_fn((n, n), |(a, b)| {
            let di = (a + n - o) % n;
            let dj = (b + n - o) % n;
            buf[di * n + dj].re * norm / self.purity
        });
        CorrelationField { spacing: d, hbar, purity: self.purity, values }
    }
}

/// Largest deviation between `|χ|²` and its symplectic Fourier transform,
/// normalized by `max |χ|²`; near zero exactly when the state is pure.
///
/// On a self-dual grid pair (`Δξ = ΔX`, see [`DualGridPair::self_dual`]) the
/// transform lands back on the input lattice and the comparison runs over
/// the whole field. On any other pair only the origin can be compared
/// exactly, where the residual reduces to the purity defect `1 - tr ρ²`
/// (scaled); callers wanting the full field check should build a self-dual
/// pair.
pub fn fourier_invariance_residual(chi: &ChordField) -> f64 {
    let grid = *chi.field().grid();
    let n = grid.n();
    let power = {
        let mut f = chi.field().clone();
        for v in f.values_mut().iter_mut() {
            *v = C64::new(v.norm_sqr(), 0.0);
        }
        f
    };
    let peak = power.values().iter().map(|v| v.re).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let transformed = symplectic_fourier(&power);
    if grid.is_self_dual() {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((power.values()[(i, j)] - transformed.values()[(i, j)]).norm());
            }
        }
        worst / peak
    } else {
        (power.at_origin() - transformed.at_origin()).norm() / peak
    }
}

/// Deviation of the twisted convolution
/// `∫ dη χ(η) χ(ξ-η) e^{iξ∧η/2ħ}` from `χ(ξ)` at the given sample chords
/// (snapped to the chord lattice), normalized by `|χ(0)|`. Zero for pure
/// states.
pub fn purity_convolution_residual(chi: &ChordField, sample_xis: &[PhaseVector]) -> f64 {
    let grid = *chi.field().grid();
    let n = grid.n() as isize;
    let o = grid.origin_index() as isize;
    let d = grid.chord_spacing();
    let hbar = grid.hbar();
    let v = chi.field().values();
    let chi0 = chi.at_origin().norm().max(1e-300);

    let mut worst: f64 = 0.0;
    for xi in sample_xis {
        let ia = (xi.p / d).round() as isize + o;
        let jb = (xi.q / d).round() as isize + o;
        if ia < 0 || ia >= n || jb < 0 || jb >= n {
            continue;
        }
        let snapped = PhaseVector::new((ia - o) as f64 * d, (jb - o) as f64 * d);
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                let ra = ia - a + o;
                let rb = jb - b + o;
                if ra < 0 || ra >= n || rb < 0 || rb >= n {
                    continue;
                }
                let eta = PhaseVector::new((a - o) as f64 * d, (b - o) as f64 * d);
                let phase = skew_product(snapped, eta) / (2.0 * hbar);
                acc += v[(a as usize, b as usize)]
                    * v[(ra as usize, rb as usize)]
                    * C64::from_polar(1.0, phase);
            }
        }
        acc *= d * d;
        let target = v[(ia as usize, jb as usize)];
        worst = worst.max((acc - target).norm() / chi0);
    }
    worst
}

/// Result of sweeping `ρ_α = e^{-iαK/ħ} ρ e^{iαK/ħ}`.
#[derive(Debug, Clone)]
pub struct GeneratorExpansion {
    /// `(α, C(α))` over the requested sweep.
    pub curve: Vec<(f64, f64)>,
    /// Quadratic coefficient fitted on points with `C(α) > 0.9`.
    pub c2_fit: f64,
    /// Same fit with every α halved (step-halving consistency check).
    pub c2_fit_halved: f64,
    /// Richardson combination `(4·c2_fit_halved - c2_fit)/3`, which cancels
    /// the quartic bias of the plain fit.
    pub c2_richardson: f64,
    /// `-tr[ρ,K]² / (2ħ² tr ρ²)`, the exact small-α coefficient.
    pub c2_commutator: f64,
    /// `(⟨K²⟩-⟨K⟩²)/ħ²`, defined for (numerically) pure states.
    pub c2_dispersion: Option<f64>,
}

/// Position operator `diag(q_i)` as a sample-space matrix.
pub fn q_operator(grid: &DualGridPair) -> Array2<C64> {
    let n = grid.n();
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            C64::new(grid.coord(Space::Centre, i), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Sweep the unitary orbit generated by the Hermitian sample-space matrix
/// `k` and extract the quadratic decay coefficient of
/// `C(α) = tr(ρ ρ_α)/tr ρ²`.
pub fn generator_expansion(
    state: &StateRep,
    k: &Array2<C64>,
    alphas: &[f64],
) -> Result<GeneratorExpansion> {
    let rho = state.to_density();
    let grid = *rho.grid();
    let n = grid.n();
    if k.nrows() != n || k.ncols() != n {
        return Err(Error::GridMismatch);
    }
    let kscale = k.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    let mut herm_dev: f64 = 0.0;
    let mut offdiag: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            herm_dev = herm_dev.max((k[(i, j)] - k[(j, i)].conj()).norm());
            if i != j {
                offdiag = offdiag.max(k[(i, j)].norm());
            }
        }
    }
    if herm_dev > 1e-10 * kscale {
        return Err(Error::NotHermitian { dev: herm_dev });
    }

    let hbar = grid.hbar();
    let dq = grid.centre_spacing();
    // dimensionless sample-space operator R = ρ_kernel · Δq
    let r = rho.matrix().mapv(|v| v * dq);

    // eigenbasis of K (identity for diagonal K)
    let (lambda, rho_eig): (Array1<f64>, Array2<C64>) = if offdiag <= 1e-12 * kscale {
        (Array1::from_iter((0..n).map(|i| k[(i, i)].re)), r)
    } else {
        let (vals, vecs) = hermitian_eigen(k)?;
        // ρ̃ = U† R U
        let mut tmp = Array2::from_elem((n, n), C64::new(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for l in 0..n {
                    acc += r[(i, l)] * vecs[(l, j)];
                }
                tmp[(i, j)] = acc;
            }
        }
        let mut rot = Array2::from_elem((n, n), C64::new(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for l in 0..n {
                    acc += vecs[(l, i)].conj() * tmp[(l, j)];
                }
                rot[(i, j)] = acc;
            }
        }
        (vals, rot)
    };

    // C(α) = Σ_ij |ρ̃_ij|² e^{iα(λ_i-λ_j)/ħ} / tr ρ̃² — collapse onto the
    // spectrum of level differences
    let mut weights: Vec<(f64, f64)> = Vec::new();
    let mut norm = 0.0;
    for i in 0..n {
        for j in 0..n {
            let w = rho_eig[(i, j)].norm_sqr();
            if w > 0.0 {
                weights.push(((lambda[i] - lambda[j]) / hbar, w));
                norm += w;
            }
        }
    }
    let c_of = |alpha: f64| -> f64 {
        weights.iter().map(|&(dl, w)| w * (alpha * dl).cos()).sum::<f64>() / norm
    };

    let curve: Vec<(f64, f64)> = alphas.iter().map(|&a| (a, c_of(a))).collect();
    let fit = |pts: &[(f64, f64)]| -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for &(a, c) in pts {
            if c > 0.9 && a != 0.0 {
                num += a * a * (1.0 - c);
                den += a.powi(4);
            }
        }
        if den > 0.0 { num / den } else { 0.0 }
    };
    let c2_fit = fit(&curve);
    let halved: Vec<(f64, f64)> = alphas.iter().map(|&a| (0.5 * a, c_of(0.5 * a))).collect();
    let c2_fit_halved = fit(&halved);
    let c2_richardson = (4.0 * c2_fit_halved - c2_fit) / 3.0;

    let c2_commutator =
        weights.iter().map(|&(dl, w)| w * dl * dl).sum::<f64>() / (2.0 * norm);

    let purity = rho.purity();
    let c2_dispersion = if purity > 1.0 - 1e-9 {
        let trk: f64 = (0..n).map(|i| (rho_eig[(i, i)] * lambda[i]).re).sum();
        let trk2: f64 = (0..n).map(|i| (rho_eig[(i, i)] * lambda[i] * lambda[i]).re).sum();
        Some((trk2 - trk * trk) / (hbar * hbar))
    } else {
        None
    };

    Ok(GeneratorExpansion {
        curve,
        c2_fit,
        c2_fit_halved,
        c2_richardson,
        c2_commutator,
        c2_dispersion,
    })
}
