//! Marching-squares level-set extraction for black-box Hamiltonians.
//!
//! Samples `H` on a uniform grid, finds the cells straddling the level,
//! places crossing points on cell edges by linear interpolation, and links
//! the segments into closed polylines.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::PhaseVector;

/// A crossing point lives on one grid edge: `(i, j)` indexes the edge's
/// lower-left corner, `horizontal` tells whether it runs along `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct EdgeId {
    i: usize,
    j: usize,
    horizontal: bool,
}

/// Extract the closed level curves of `h = level` inside
/// `[-half_width, half_width]²`. Returns the loops as vertex polylines
/// (each implicitly closed), longest first is NOT guaranteed — callers
/// pick what they need.
pub fn extract_contour(
    h: &dyn Fn(PhaseVector) -> f64,
    level: f64,
    half_width: f64,
    resolution: usize,
) -> Result<Vec<Vec<PhaseVector>>> {
    let n = resolution.max(16);
    let step = 2.0 * half_width / n as f64;
    let coord = |k: usize| -> f64 { -half_width + k as f64 * step };
    // samples[i][j] = H(p_i, q_j) - level
    let mut samples = vec![0.0f64; (n + 1) * (n + 1)];
    for i in 0..=n {
        for j in 0..=n {
            samples[i * (n + 1) + j] = h(PhaseVector::new(coord(i), coord(j))) - level;
        }
    }
    let at = |i: usize, j: usize| samples[i * (n + 1) + j];

    // crossing point on an edge, by linear interpolation
    let crossing = |id: EdgeId| -> PhaseVector {
        let (a, b) = if id.horizontal {
            (at(id.i, id.j), at(id.i, id.j + 1))
        } else {
            (at(id.i, id.j), at(id.i + 1, id.j))
        };
        let t = a / (a - b);
        if id.horizontal {
            PhaseVector::new(coord(id.i), coord(id.j) + t * step)
        } else {
            PhaseVector::new(coord(id.i) + t * step, coord(id.j))
        }
    };

    // segments between edges, cell by cell
    let mut adjacency: HashMap<EdgeId, Vec<EdgeId>> = HashMap::new();
    let mut link = |a: EdgeId, b: EdgeId| {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    };
    for i in 0..n {
        for j in 0..n {
            let corners = [at(i, j), at(i, j + 1), at(i + 1, j + 1), at(i + 1, j)];
            let mut code = 0usize;
            for (k, &c) in corners.iter().enumerate() {
                if c > 0.0 {
                    code |= 1 << k;
                }
            }
            if code == 0 || code == 15 {
                continue;
            }
            // edges: bottom (hor at i), right (vert at j+1), top (hor at
            // i+1), left (vert at j) — "bottom/top" along the q axis
            let bottom = EdgeId { i, j, horizontal: true };
            let right = EdgeId { i, j: j + 1, horizontal: false };
            let top = EdgeId { i: i + 1, j, horizontal: true };
            let left = EdgeId { i, j, horizontal: false };
            let pairs: &[(EdgeId, EdgeId)] = match code {
                1 | 14 => &[(bottom, left)],
                2 | 13 => &[(bottom, right)],
                3 | 12 => &[(left, right)],
                4 | 11 => &[(top, right)],
                6 | 9 => &[(bottom, top)],
                7 | 8 => &[(top, left)],
                5 | 10 => {
                    // saddle: disambiguate with the cell-centre value
                    let centre = 0.25 * corners.iter().sum::<f64>();
                    let flip = (centre > 0.0) == (code == 5);
                    if flip {
                        &[(bottom, right), (top, left)]
                    } else {
                        &[(bottom, left), (top, right)]
                    }
                }
                _ => &[],
            };
            for &(a, b) in pairs {
                link(a, b);
            }
        }
    }

    // walk closed loops
    let mut visited: HashMap<EdgeId, bool> = HashMap::new();
    let mut loops = Vec::new();
    let starts: Vec<EdgeId> = adjacency.keys().copied().collect();
    for start in starts {
        if *visited.get(&start).unwrap_or(&false) {
            continue;
        }
        let mut path = vec![start];
        visited.insert(start, true);
        let mut prev = start;
        let mut current = match adjacency.get(&start).and_then(|v| v.first()) {
            Some(&e) => e,
            None => continue,
        };
        let mut closed = false;
        for _ in 0..adjacency.len() + 1 {
            if current == start {
                closed = true;
                break;
            }
            visited.insert(current, true);
            path.push(current);
            let nexts = &adjacency[&current];
            let next = nexts.iter().copied().find(|&e| e != prev);
            match next {
                Some(e) => {
                    prev = current;
                    current = e;
                }
                None => break,
            }
        }
        if closed && path.len() >= 8 {
            loops.push(path.iter().map(|&e| crossing(e)).collect());
        }
    }
    if loops.is_empty() {
        return Err(Error::OpenContour);
    }
    Ok(loops)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_contour_radius_and_length() {
        let h = |x: PhaseVector| 0.5 * (x.p * x.p + x.q * x.q);
        let loops = extract_contour(&h, 2.0, 4.0, 512).unwrap();
        assert_eq!(loops.len(), 1);
        let poly = &loops[0];
        let r_expect = 2.0f64;
        for v in poly {
            assert!((v.norm() - r_expect).abs() < 1e-3, "radius {}", v.norm());
        }
        let mut len = 0.0;
        for k in 0..poly.len() {
            len += poly[(k + 1) % poly.len()].sub(poly[k]).norm();
        }
        assert!((len - 2.0 * std::f64::consts::PI * r_expect).abs() < 0.01);
    }

    #[test]
    fn empty_level_errors() {
        let h = |x: PhaseVector| x.p * x.p + x.q * x.q;
        assert!(extract_contour(&h, -1.0, 3.0, 128).is_err());
    }

    #[test]
    fn two_wells_give_two_loops() {
        let h = |x: PhaseVector| {
            let a = (x.q - 2.0).powi(2) + x.p * x.p;
            let b = (x.q + 2.0).powi(2) + x.p * x.p;
            a.min(b)
        };
        let loops = extract_contour(&h, 1.0, 5.0, 256).unwrap();
        assert_eq!(loops.len(), 2);
    }
}
