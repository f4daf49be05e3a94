//! Discrete Fourier helpers for origin-centred grids.
//!
//! All grids in this crate place the origin at sample `n/2` and use
//! coordinates `(i - n/2)·Δ`. The transforms here carry the exact phase
//! factors for that convention, so there is no `fftshift` ambiguity:
//!
//! ```text
//!   forward:  X[m] = Σ_c x[c] · exp(-2πi (m - n/2)(c - n/2) / n)
//!   inverse:  x[c] = (1/n) Σ_m X[m] · exp(+2πi (m - n/2)(c - n/2) / n)
//! ```
//!
//! Expanding the quadratic phase turns either sum into a plain FFT with
//! `(-1)^c` / `(-1)^m` pre- and post-factors and a global sign `(-1)^{n/2}`.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

/// Planned forward/inverse pair for one transform length.
pub struct CenteredFft {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    sign: f64,
}

impl CenteredFft {
    pub fn new(n: usize) -> Self {
        assert!(n % 2 == 0, "centred grids need even n");
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
        Self { n, fwd, inv, sign }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// In-place forward transform with centred-grid phases.
    pub fn forward(&self, buf: &mut [C64]) {
        debug_assert_eq!(buf.len(), self.n);
        for (c, v) in buf.iter_mut().enumerate() {
            if c % 2 == 1 {
                *v = -*v;
            }
        }
        self.fwd.process(buf);
        for (m, v) in buf.iter_mut().enumerate() {
            let s = if m % 2 == 1 { -self.sign } else { self.sign };
            *v *= s;
        }
    }

    /// In-place inverse transform with centred-grid phases (includes 1/n).
    pub fn inverse(&self, buf: &mut [C64]) {
        debug_assert_eq!(buf.len(), self.n);
        for (m, v) in buf.iter_mut().enumerate() {
            if m % 2 == 1 {
                *v = -*v;
            }
        }
        self.inv.process(buf);
        let scale = 1.0 / self.n as f64;
        for (c, v) in buf.iter_mut().enumerate() {
            let s = if c % 2 == 1 { -self.sign } else { self.sign };
            *v *= s * scale;
        }
    }
}

/// Momentum-like coordinate of bin `m` for grid spacing `delta`:
/// `k_m = (m - n/2) · 2π/(n·Δ)`.
pub fn wavenumber(n: usize, delta: f64, m: usize) -> f64 {
    (m as f64 - (n / 2) as f64) * 2.0 * std::f64::consts::PI / (n as f64 * delta)
}

/// Evaluate the zero-padded band-limited translate `f(x + shift)` of samples
/// given on an origin-centred grid, returned on the same grid.
///
/// The samples are embedded in a grid `pad` times longer before the spectral
/// shift, so translates up to `(pad - 1)/2` grid widths do not wrap around.
pub struct PaddedShifter {
    n: usize,
    big: usize,
    delta: f64,
    plan: CenteredFft,
}

impl PaddedShifter {
    pub fn new(n: usize, delta: f64, pad: usize) -> Self {
        let big = n * pad.max(1);
        Self {
            n,
            big,
            delta,
            plan: CenteredFft::new(big),
        }
    }

    /// Spectrum of the zero-padded samples; feed to [`Self::shifted`].
    pub fn spectrum(&self, samples: &[C64]) -> Vec<C64> {
        debug_assert_eq!(samples.len(), self.n);
        let mut buf = vec![C64::new(0.0, 0.0); self.big];
        let off = (self.big - self.n) / 2;
        buf[off..off + self.n].copy_from_slice(samples);
        self.plan.forward(&mut buf);
        buf
    }

    /// `f(x_c + shift)` for every sample index `c` of the original grid.
    pub fn shifted(&self, spectrum: &[C64], shift: f64) -> Vec<C64> {
        let mut buf: Vec<C64> = spectrum
            .iter()
            .enumerate()
            .map(|(m, &v)| {
                let k = wavenumber(self.big, self.delta, m);
                v * C64::from_polar(1.0, k * shift)
            })
            .collect();
        self.plan.inverse(&mut buf);
        let off = (self.big - self.n) / 2;
        buf[off..off + self.n].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_samples(n: usize, delta: f64, centre: f64) -> Vec<C64> {
        (0..n)
            .map(|c| {
                let x = (c as f64 - (n / 2) as f64) * delta;
                C64::new((-(x - centre).powi(2) / 2.0).exp(), 0.0)
            })
            .collect()
    }

    #[test]
    fn roundtrip_identity() {
        let n = 128;
        let plan = CenteredFft::new(n);
        let orig = gaussian_samples(n, 0.2, 0.7);
        let mut buf = orig.clone();
        plan.forward(&mut buf);
        plan.inverse(&mut buf);
        for (a, b) in orig.iter().zip(&buf) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn forward_matches_direct_sum() {
        let n = 16;
        let plan = CenteredFft::new(n);
        let x = gaussian_samples(n, 0.5, 0.3);
        let mut buf = x.clone();
        plan.forward(&mut buf);
        for m in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for (c, &v) in x.iter().enumerate() {
                let ph = -2.0 * std::f64::consts::PI * (m as f64 - 8.0) * (c as f64 - 8.0)
                    / n as f64;
                acc += v * C64::from_polar(1.0, ph);
            }
            assert!((acc - buf[m]).norm() < 1e-12, "bin {m}");
        }
    }

    #[test]
    fn odd_half_length_sign() {
        // n/2 odd exercises the (-1)^{n/2} factor
        let n = 10;
        let plan = CenteredFft::new(n);
        let x = gaussian_samples(n, 0.7, 0.0);
        let mut buf = x.clone();
        plan.forward(&mut buf);
        let mut acc = C64::new(0.0, 0.0);
        for (c, &v) in x.iter().enumerate() {
            let ph = -2.0 * std::f64::consts::PI * (0.0 - 5.0) * (c as f64 - 5.0) / n as f64;
            acc += v * C64::from_polar(1.0, ph);
        }
        assert!((acc - buf[0]).norm() < 1e-12);
    }

    #[test]
    fn padded_shift_tracks_gaussian() {
        let n = 256;
        let delta = 0.1;
        let shifter = PaddedShifter::new(n, delta, 4);
        let samples = gaussian_samples(n, delta, 0.0);
        let spec = shifter.spectrum(&samples);
        for &s in &[0.35, -1.2, 7.03] {
            let moved = shifter.shifted(&spec, s);
            for c in 0..n {
                let x = (c as f64 - (n / 2) as f64) * delta;
                let expect = (-(x + s).powi(2) / 2.0).exp();
                assert!(
                    (moved[c].re - expect).abs() < 1e-10,
                    "shift {s} sample {c}: {} vs {expect}",
                    moved[c].re
                );
                assert!(moved[c].im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn padded_shift_does_not_wrap() {
        // shift by more than the base grid width: with padding the samples
        // leave the window instead of reappearing on the far side
        let n = 128;
        let delta = 0.1;
        let shifter = PaddedShifter::new(n, delta, 4);
        let samples = gaussian_samples(n, delta, 0.0);
        let spec = shifter.spectrum(&samples);
        let moved = shifter.shifted(&spec, 20.0);
        for v in &moved {
            assert!(v.norm() < 1e-12);
        }
    }
}
