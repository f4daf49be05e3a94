//! Small numerical building blocks: a complex Hermitian eigensolver,
//! bracketed root finding, and periodic cubic splines for user-supplied
//! curves.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns ascending eigenvalues and the matching unitary column basis.
///
/// O(n³) per sweep with a handful of sweeps; intended for the moderate
/// matrix sizes used here (n ≤ ~512), where its determinism and freedom
/// from external BLAS conventions outweigh speed.
pub fn hermitian_eigen(a: &Array2<C64>) -> Result<(Array1<f64>, Array2<C64>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::GridMismatch);
    }
    let mut m = a.clone();
    let mut u = Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    });
    let scale: f64 = m.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    let tol = 1e-14 * scale;

    for _sweep in 0..60 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() < tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m[(p, q)];
                let gn = g.norm();
                if gn < 1e-300 {
                    continue;
                }
                let phase = g / gn;
                let alpha = m[(p, p)].re;
                let beta = m[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * gn);
                // smaller root of t² - 2τt - 1 = 0
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let se_pos = s * phase; // s e^{iφ}
                let se_neg = s * phase.conj(); // s e^{-iφ}

                // A <- J† A (rows p, q)
                for k in 0..n {
                    let ap = m[(p, k)];
                    let aq = m[(q, k)];
                    m[(p, k)] = c * ap + se_pos * aq;
                    m[(q, k)] = -se_neg * ap + c * aq;
                }
                // A <- A J (columns p, q)
                for k in 0..n {
                    let ap = m[(k, p)];
                    let aq = m[(k, q)];
                    m[(k, p)] = c * ap + se_neg * aq;
                    m[(k, q)] = -se_pos * ap + c * aq;
                }
                // U <- U J
                for k in 0..n {
                    let up = u[(k, p)];
                    let uq = u[(k, q)];
                    u[(k, p)] = c * up + se_neg * uq;
                    u[(k, q)] = -se_pos * up + c * uq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let evals: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| evals[i].partial_cmp(&evals[j]).unwrap());
    let sorted_vals = Array1::from_iter(order.iter().map(|&i| evals[i]));
    let mut sorted_vecs = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            sorted_vecs[(row, col)] = u[(row, src)];
        }
    }
    Ok((sorted_vals, sorted_vecs))
}

/// Bisection on a bracketed sign change. `f(a)` and `f(b)` must differ in
/// sign; returns the midpoint once the bracket shrinks below `xtol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::RootFind("bisection bracket does not straddle a root"));
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 || (b - a).abs() < xtol {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Periodic cubic spline through `(theta_i, value_i)` with period `2π`.
///
/// Knots need not be uniform but must be strictly increasing inside
/// `[0, 2π)`. Natural periodic closure (continuous first and second
/// derivative across the seam).
#[derive(Debug, Clone)]
pub struct PeriodicSpline {
    theta: Vec<f64>,
    value: Vec<f64>,
    second: Vec<f64>,
}

impl PeriodicSpline {
    pub fn new(theta: &[f64], value: &[f64]) -> Result<Self> {
        let n = theta.len();
        if n < 3 || value.len() != n {
            return Err(Error::Parse("periodic spline needs at least 3 knots".into()));
        }
        for w in theta.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Parse("spline knots must be strictly increasing".into()));
            }
        }
        if theta[0] < 0.0 || *theta.last().unwrap() >= 2.0 * std::f64::consts::PI {
            return Err(Error::Parse("spline knots must lie in [0, 2π)".into()));
        }

        // interval lengths, wrapping the seam
        let tau = 2.0 * std::f64::consts::PI;
        let h: Vec<f64> = (0..n)
            .map(|i| {
                if i + 1 < n {
                    theta[i + 1] - theta[i]
                } else {
                    theta[0] + tau - theta[n - 1]
                }
            })
            .collect();

        // cyclic tridiagonal system for the second derivatives
        let mut diag = vec![0.0; n];
        let mut sub = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            diag[i] = 2.0 * (h[prev] + h[i]);
            sub[i] = h[prev];
            sup[i] = h[i];
            let d1 = (value[next] - value[i]) / h[i];
            let d0 = (value[i] - value[prev]) / h[prev];
            rhs[i] = 6.0 * (d1 - d0);
        }
        let second = solve_cyclic_tridiag(&sub, &diag, &sup, &rhs)?;
        Ok(Self { theta: theta.to_vec(), value: value.to_vec(), second })
    }

    fn locate(&self, t: f64) -> (usize, usize, f64, f64) {
        let tau = 2.0 * std::f64::consts::PI;
        let t = t.rem_euclid(tau);
        let n = self.theta.len();
        // find the interval [theta_i, theta_{i+1}) containing t
        let i = match self.theta.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i,
            Err(0) => n - 1,
            Err(i) => i - 1,
        };
        let next = (i + 1) % n;
        let h = if i + 1 < n {
            self.theta[i + 1] - self.theta[i]
        } else {
            self.theta[0] + tau - self.theta[n - 1]
        };
        let local = if t >= self.theta[i] { t - self.theta[i] } else { t + tau - self.theta[i] };
        (i, next, h, local)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (i, next, h, x) = self.locate(t);
        let a = (h - x) / h;
        let b = x / h;
        a * self.value[i]
            + b * self.value[next]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[next]) * h * h
                / 6.0
    }

    pub fn deriv(&self, t: f64) -> f64 {
        let (i, next, h, x) = self.locate(t);
        let a = (h - x) / h;
        let b = x / h;
        (self.value[next] - self.value[i]) / h
            + ((3.0 * b * b - 1.0) * self.second[next] - (3.0 * a * a - 1.0) * self.second[i]) * h
                / 6.0
    }

    pub fn second_deriv(&self, t: f64) -> f64 {
        let (i, next, h, x) = self.locate(t);
        let a = (h - x) / h;
        let b = x / h;
        a * self.second[i] + b * self.second[next]
    }
}

/// Cyclic tridiagonal solve by Sherman–Morrison on the standard Thomas
/// algorithm. `sub[i]` couples row `i` to `i-1` (wrapping), `sup[i]` to
/// `i+1`.
fn solve_cyclic_tridiag(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n < 3 {
        return Err(Error::Parse("cyclic system needs n >= 3".into()));
    }
    let gamma = -diag[0];
    let mut dmod = diag.to_vec();
    dmod[0] -= gamma;
    dmod[n - 1] -= sub[0] * sup[n - 1] / gamma;

    let solve = |d: &[f64], r: &[f64]| -> Result<Vec<f64>> {
        let mut c = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut beta = d[0];
        if beta == 0.0 {
            return Err(Error::RootFind("singular tridiagonal system"));
        }
        x[0] = r[0] / beta;
        for i in 1..n {
            c[i] = sup[i - 1] / beta;
            beta = d[i] - sub[i] * c[i];
            if beta == 0.0 {
                return Err(Error::RootFind("singular tridiagonal system"));
            }
            x[i] = (r[i] - sub[i] * x[i - 1]) / beta;
        }
        for i in (0..n - 1).rev() {
            x[i] -= c[i + 1] * x[i + 1];
        }
        Ok(x)
    };

    let x = solve(&dmod, rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = sup[n - 1];
    let z = solve(&dmod, &u)?;
    let factor = (x[0] + sub[0] * x[n - 1] / gamma) / (1.0 + z[0] + sub[0] * z[n - 1] / gamma);
    Ok((0..n).map(|i| x[i] - factor * z[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn jacobi_reconstructs_random_hermitian() {
        let n = 24;
        // deterministic pseudo-random Hermitian matrix
        let mut seed = 0x12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut a = Array2::from_elem((n, n), C64::new(0.0, 0.0));
        for i in 0..n {
            for j in i..n {
                let v = if i == j {
                    C64::new(next(), 0.0)
                } else {
                    C64::new(next(), next())
                };
                a[(i, j)] = v;
                a[(j, i)] = v.conj();
            }
        }
        let (vals, vecs) = hermitian_eigen(&a).unwrap();
        // reconstruct and compare
        let mut recon = Array2::from_elem((n, n), C64::new(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += vecs[(i, k)] * vals[k] * vecs[(j, k)].conj();
                }
                recon[(i, j)] = acc;
            }
        }
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((recon[(i, j)] - a[(i, j)]).norm());
            }
        }
        assert!(worst < 1e-12, "reconstruction error {worst}");
        // eigenvalues ascending
        for w in vals.as_slice().unwrap().windows(2) {
            assert!(w[0] <= w[1]);
        }
        // unitarity
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += vecs[(k, i)].conj() * vecs[(k, j)];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((acc - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_known_two_by_two() {
        let mut a = Array2::from_elem((2, 2), C64::new(0.0, 0.0));
        a[(0, 0)] = C64::new(1.0, 0.0);
        a[(1, 1)] = C64::new(-1.0, 0.0);
        a[(0, 1)] = C64::new(0.0, 1.0);
        a[(1, 0)] = C64::new(0.0, -1.0);
        let (vals, _) = hermitian_eigen(&a).unwrap();
        let s = 2f64.sqrt();
        assert!((vals[0] + s).abs() < 1e-14);
        assert!((vals[1] - s).abs() < 1e-14);
    }

    #[test]
    fn bisect_finds_cosine_root() {
        let r = bisect(|x| x.cos(), 1.0, 2.0, 1e-14).unwrap();
        assert!((r - PI / 2.0).abs() < 1e-12);
        assert!(bisect(|x| x.cos(), 0.1, 0.2, 1e-14).is_err());
    }

    #[test]
    fn periodic_spline_tracks_trig() {
        let m = 64;
        let theta: Vec<f64> = (0..m).map(|i| 2.0 * PI * i as f64 / m as f64).collect();
        let vals: Vec<f64> = theta.iter().map(|t| (2.0 * t).sin() + 0.3 * t.cos()).collect();
        let sp = PeriodicSpline::new(&theta, &vals).unwrap();
        for &t in &[0.0f64, 0.31, 1.7, 3.9, 6.2, -0.5, 9.0] {
            let exact = (2.0 * t).sin() + 0.3 * t.cos();
            let dexact = 2.0 * (2.0 * t).cos() - 0.3 * t.sin();
            assert!((sp.eval(t) - exact).abs() < 2e-5, "eval at {t}");
            assert!((sp.deriv(t) - dexact).abs() < 2e-3, "deriv at {t}");
        }
    }

    #[test]
    fn spline_seam_is_smooth() {
        let m = 48;
        let theta: Vec<f64> = (0..m).map(|i| 2.0 * PI * i as f64 / m as f64).collect();
        let vals: Vec<f64> = theta.iter().map(|t| t.sin().powi(2)).collect();
        let sp = PeriodicSpline::new(&theta, &vals).unwrap();
        let eps = 1e-9;
        let below = sp.deriv(2.0 * PI - eps);
        let above = sp.deriv(eps);
        assert!((below - above).abs() < 1e-5, "seam derivative jump {below} vs {above}");
    }
}

