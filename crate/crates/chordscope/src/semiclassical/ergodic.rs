//! Chord function of an ergodic energy eigenstate: the microcanonical
//! average `χ(ξ) = (1/2πħ) ∮ δ(H-E) e^{i x∧ξ/ħ} dx / ∮ δ(H-E) dx`, i.e. a
//! line integral along the energy contour weighted by `1/|∇H|`.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{skew_product, PhaseVector};
use crate::numerics::bisect;

use super::contour::extract_contour;
use super::curves::TorusCurve;

/// How to acquire the energy contour `H(x) = E`.
pub enum EnergyContour<'a> {
    /// A user-supplied parametrization of the contour.
    Parametrized(&'a dyn TorusCurve),
    /// Radial solve about the origin for star-shaped contours with
    /// `H(0) < E`; `n_theta` quadrature rays.
    Radial { n_theta: usize },
    /// Marching-squares extraction on a `resolution²` sample grid over
    /// `[-half_width, half_width]²`, for black-box Hamiltonians.
    MarchingSquares { half_width: f64, resolution: usize },
}

fn numeric_gradient(h: &dyn Fn(PhaseVector) -> f64, x: PhaseVector) -> PhaseVector {
    let eps = 1e-6 * (1.0 + x.norm());
    PhaseVector::new(
        (h(PhaseVector::new(x.p + eps, x.q)) - h(PhaseVector::new(x.p - eps, x.q))) / (2.0 * eps),
        (h(PhaseVector::new(x.p, x.q + eps)) - h(PhaseVector::new(x.p, x.q - eps))) / (2.0 * eps),
    )
}

/// Energy-shell chord function. `grad` may supply the analytic gradient;
/// otherwise central differences are used.
pub fn ergodic_chi(
    h: &dyn Fn(PhaseVector) -> f64,
    grad: Option<&dyn Fn(PhaseVector) -> PhaseVector>,
    energy: f64,
    xi: PhaseVector,
    hbar: f64,
    contour: &EnergyContour<'_>,
) -> Result<C64> {
    let gradient = |x: PhaseVector| -> PhaseVector {
        match grad {
            Some(g) => g(x),
            None => numeric_gradient(h, x),
        }
    };

    let (num, den) = match contour {
        EnergyContour::Parametrized(curve) => {
            let n = 4096;
            let mut num = C64::new(0.0, 0.0);
            let mut den = 0.0;
            for i in 0..n {
                let t = 2.0 * PI * i as f64 / n as f64;
                let x = curve.point(t);
                let speed = curve.velocity(t).norm();
                let gnorm = gradient(x).norm();
                if gnorm < 1e-14 {
                    return Err(Error::OpenContour);
                }
                let w = speed / gnorm;
                num += w * C64::from_polar(1.0, skew_product(x, xi) / hbar);
                den += w;
            }
            (num, den)
        }
        EnergyContour::Radial { n_theta } => {
            let h0 = h(PhaseVector::ZERO);
            if h0 >= energy {
                return Err(Error::OpenContour);
            }
            let n = (*n_theta).max(256);
            let mut num = C64::new(0.0, 0.0);
            let mut den = 0.0;
            for i in 0..n {
                let phi = 2.0 * PI * i as f64 / n as f64;
                let dir = PhaseVector::new(phi.sin(), phi.cos());
                let f = |r: f64| h(dir.scale(r)) - energy;
                // expand the bracket until the ray leaves the shell
                let mut hi = 1.0;
                let mut tries = 0;
                while f(hi) < 0.0 {
                    hi *= 2.0;
                    tries += 1;
                    if tries > 60 {
                        return Err(Error::OpenContour);
                    }
                }
                let r = bisect(f, 0.0, hi, 1e-13 * hi.max(1.0))?;
                let x = dir.scale(r);
                let g = gradient(x);
                let gnorm = g.norm();
                if gnorm < 1e-14 {
                    return Err(Error::OpenContour);
                }
                // dl/dφ = sqrt(r'² + r²) with r' = -r (∇H·φ̂)/(∇H·r̂)
                let phi_hat = PhaseVector::new(phi.cos(), -phi.sin());
                let dh_dr = g.dot(dir);
                if dh_dr.abs() < 1e-14 {
                    return Err(Error::OpenContour);
                }
                let r_prime = -r * g.dot(phi_hat) / dh_dr;
                let dl = (r_prime * r_prime + r * r).sqrt();
                let w = dl / gnorm;
                num += w * C64::from_polar(1.0, skew_product(x, xi) / hbar);
                den += w;
            }
            (num, den)
        }
        EnergyContour::MarchingSquares { half_width, resolution } => {
            let loops = extract_contour(h, energy, *half_width, *resolution)?;
            let polyline = loops
                .into_iter()
                .max_by(|a, b| a.len().cmp(&b.len()))
                .ok_or(Error::OpenContour)?;
            if polyline.len() < 8 {
                return Err(Error::OpenContour);
            }
            let mut num = C64::new(0.0, 0.0);
            let mut den = 0.0;
            for k in 0..polyline.len() {
                let a = polyline[k];
                let b = polyline[(k + 1) % polyline.len()];
                let mid = a.add(b).scale(0.5);
                let seg = b.sub(a).norm();
                let gnorm = gradient(mid).norm();
                if gnorm < 1e-14 {
                    continue;
                }
                let w = seg / gnorm;
                num += w * C64::from_polar(1.0, skew_product(mid, xi) / hbar);
                den += w;
            }
            (num, den)
        }
    };

    if den <= 0.0 {
        return Err(Error::OpenContour);
    }
    Ok(num / den / (2.0 * PI * hbar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::bessel_j0;
    use crate::semiclassical::curves::CircleCurve;

    fn harmonic(x: PhaseVector) -> f64 {
        0.5 * (x.p * x.p + x.q * x.q)
    }

    fn harmonic_grad(x: PhaseVector) -> PhaseVector {
        x
    }

    fn quartic(x: PhaseVector) -> f64 {
        0.5 * x.p * x.p + 0.25 * x.q.powi(4)
    }

    fn quartic_grad(x: PhaseVector) -> PhaseVector {
        PhaseVector::new(x.p, x.q.powi(3))
    }

    #[test]
    fn harmonic_shell_reduces_to_bessel() {
        let energy = 3.0;
        let hbar = 1.0;
        for xi in [PhaseVector::new(0.0, 0.7), PhaseVector::new(0.5, 0.5)] {
            let got = ergodic_chi(
                &harmonic,
                Some(&harmonic_grad),
                energy,
                xi,
                hbar,
                &EnergyContour::Radial { n_theta: 2048 },
            )
            .unwrap();
            let expect = bessel_j0((2.0 * energy).sqrt() * xi.norm() / hbar)
                / (2.0 * PI * hbar);
            assert!((got.re - expect).abs() < 1e-6, "{:?}: {} vs {expect}", xi, got.re);
            assert!(got.im.abs() < 1e-9);
        }
    }

    #[test]
    fn normalization_at_zero_chord() {
        let got = ergodic_chi(
            &quartic,
            Some(&quartic_grad),
            1.0,
            PhaseVector::ZERO,
            0.5,
            &EnergyContour::Radial { n_theta: 1024 },
        )
        .unwrap();
        assert!((got.re - 1.0 / (2.0 * PI * 0.5)).abs() < 1e-10);
    }

    #[test]
    fn parametrized_route_matches_radial_for_harmonic() {
        let energy = 2.0;
        let hbar = 1.0;
        let circle = CircleCurve::new(energy).unwrap();
        let xi = PhaseVector::new(0.3, -0.4);
        let via_param = ergodic_chi(
            &harmonic,
            Some(&harmonic_grad),
            energy,
            xi,
            hbar,
            &EnergyContour::Parametrized(&circle),
        )
        .unwrap();
        let via_radial = ergodic_chi(
            &harmonic,
            Some(&harmonic_grad),
            energy,
            xi,
            hbar,
            &EnergyContour::Radial { n_theta: 4096 },
        )
        .unwrap();
        assert!((via_param - via_radial).norm() < 1e-8);
    }

    #[test]
    fn quartic_shell_is_anisotropic() {
        let energy = 1.0;
        let hbar = 0.1;
        let along_p = ergodic_chi(
            &quartic,
            Some(&quartic_grad),
            energy,
            PhaseVector::new(1.0, 0.0),
            hbar,
            &EnergyContour::Radial { n_theta: 4096 },
        )
        .unwrap();
        let along_q = ergodic_chi(
            &quartic,
            Some(&quartic_grad),
            energy,
            PhaseVector::new(0.0, 1.0),
            hbar,
            &EnergyContour::Radial { n_theta: 4096 },
        )
        .unwrap();
        let rel = (along_p.norm() - along_q.norm()).abs()
            / along_p.norm().max(along_q.norm());
        assert!(rel > 0.05, "anisotropy {rel}");
    }

    #[test]
    fn numeric_gradient_fallback_agrees() {
        let energy = 1.2;
        let xi = PhaseVector::new(0.4, 0.3);
        let with_grad = ergodic_chi(
            &quartic,
            Some(&quartic_grad),
            energy,
            xi,
            1.0,
            &EnergyContour::Radial { n_theta: 1024 },
        )
        .unwrap();
        let without = ergodic_chi(
            &quartic,
            None,
            energy,
            xi,
            1.0,
            &EnergyContour::Radial { n_theta: 1024 },
        )
        .unwrap();
        assert!((with_grad - without).norm() < 1e-7);
    }

    #[test]
    fn empty_shell_errors() {
        assert!(matches!(
            ergodic_chi(
                &harmonic,
                None,
                -1.0,
                PhaseVector::ZERO,
                1.0,
                &EnergyContour::Radial { n_theta: 256 },
            ),
            Err(Error::OpenContour)
        ));
    }
}
