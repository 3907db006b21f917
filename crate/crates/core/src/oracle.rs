//! Reference solvers for verifying projections and the stump learner.
//!
//! Nothing here shares code with [`crate::projection`] or
//! [`crate::weaklearn`]: the simplex-type projections are solved by
//! enumerating every active set, the separable sets by bisection on the
//! one-dimensional derivative, and stumps by evaluating every candidate
//! directly. They are slow and meant for small dimensions.

use crate::data::Dataset;
use crate::geometry::{Geometry, GeometryKind};
use crate::weaklearn::Stump;

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Lower,
    Upper,
    Free,
}

/// Minimizes `B(w, z)` over `{Σw = 1, 0 ≤ w_i ≤ caps_i}` by enumerating
/// every assignment of coordinates to lower bound, upper bound or free
/// (`3^N` candidates). Free coordinates satisfy stationarity of the
/// Lagrangian: `w_i = z_i − θ` (quadratic) or `w_i = c·z_i` (entropy).
/// Returns `None` when no candidate is feasible.
pub fn capped_simplex_by_enumeration(g: &Geometry, z: &[f64], caps: &[f64]) -> Option<Vec<f64>> {
    let n = z.len();
    assert!(
        n <= 12,
        "enumeration oracle is exponential in the dimension"
    );
    let total = 3usize.pow(n as u32);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut slots = vec![Slot::Lower; n];
    for code in 0..total {
        let mut c = code;
        for s in slots.iter_mut() {
            *s = match c % 3 {
                0 => Slot::Lower,
                1 => Slot::Upper,
                _ => Slot::Free,
            };
            c /= 3;
        }
        if slots
            .iter()
            .zip(caps)
            .any(|(s, cap)| *s == Slot::Upper && !cap.is_finite())
        {
            continue;
        }
        let fixed: f64 = slots
            .iter()
            .zip(caps)
            .filter(|(s, _)| **s == Slot::Upper)
            .map(|(_, c)| *c)
            .sum();
        let free: Vec<usize> = (0..n).filter(|&i| slots[i] == Slot::Free).collect();
        let mut w: Vec<f64> = (0..n)
            .map(|i| match slots[i] {
                Slot::Lower => 0.0,
                Slot::Upper => caps[i],
                Slot::Free => f64::NAN,
            })
            .collect();
        if free.is_empty() {
            if (fixed - 1.0).abs() > 1e-12 {
                continue;
            }
        } else {
            let remaining = 1.0 - fixed;
            match g.kind() {
                GeometryKind::Quadratic => {
                    let s: f64 = free.iter().map(|&i| z[i]).sum();
                    let theta = (s - remaining) / free.len() as f64;
                    for &i in &free {
                        w[i] = z[i] - theta;
                    }
                }
                GeometryKind::NegativeEntropy => {
                    let s: f64 = free.iter().map(|&i| z[i]).sum();
                    let scale = remaining / s;
                    for &i in &free {
                        w[i] = scale * z[i];
                    }
                }
            }
            if free
                .iter()
                .any(|&i| w[i] < -1e-12 || w[i] > caps[i] + 1e-12)
            {
                continue;
            }
        }
        let obj = g
            .divergence(&w, z)
            .map(|d| d.value())
            .unwrap_or(f64::INFINITY);
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, w));
        }
    }
    best.map(|(_, w)| w)
}

/// Smallest point of `[lo, hi]` where the non-decreasing `deriv` changes
/// sign, i.e. the minimizer of a convex 1-D function on that interval.
pub fn minimize_1d_by_derivative(deriv: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    if deriv(lo) >= 0.0 {
        return lo;
    }
    if deriv(hi) <= 0.0 {
        return hi;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if deriv(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Coordinate-wise minimizer of `½(y − z)² + λy` over `y ≥ 0`.
pub fn orthant_l1_by_bisection(z: &[f64], lambda: f64) -> Vec<f64> {
    z.iter()
        .map(|&zi| {
            let hi = zi.abs() + lambda + 1.0;
            minimize_1d_by_derivative(|y| y - zi + lambda, 0.0, hi)
        })
        .collect()
}

/// Coordinate-wise minimizer of the generalized KL `B(y, z)` over `[0, 1]`,
/// using `∂/∂y B(y, z) = log(y / z)`.
pub fn hypercube_entropic_by_bisection(z: &[f64]) -> Vec<f64> {
    z.iter()
        .map(|&zi| minimize_1d_by_derivative(|y| (y / zi).ln(), 0.0, 1.0))
        .collect()
}

/// Every stump the learner could return: each feature, thresholds at
/// `−∞` and at midpoints of consecutive distinct values, both polarities.
pub fn all_stumps(ds: &Dataset) -> Vec<Stump> {
    let mut out = Vec::new();
    for f in 0..ds.d() {
        let mut values: Vec<f64> = (0..ds.n()).map(|i| ds.feature(i, f)).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        let mut thresholds = vec![f64::NEG_INFINITY];
        for pair in values.windows(2) {
            let mid = pair[0] + (pair[1] - pair[0]) / 2.0;
            thresholds.push(if mid > pair[0] { mid } else { pair[1] });
        }
        for t in thresholds {
            for polarity in [1, -1] {
                out.push(Stump::new(f, t, polarity));
            }
        }
    }
    out
}

/// Largest edge `Σ w_i a_i h(x_i)` over [`all_stumps`], evaluated directly.
pub fn best_stump_edge(ds: &Dataset, w: &[f64]) -> f64 {
    all_stumps(ds)
        .iter()
        .map(|h| {
            (0..ds.n())
                .map(|i| w[i] * ds.label(i) * h.predict(ds.row(i)))
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn enumeration_known_answers() {
        let q = Geometry::quadratic(2);
        let w = capped_simplex_by_enumeration(&q, &[0.8, 0.4], &[f64::INFINITY; 2]).unwrap();
        assert_abs_diff_eq!(w[0], 0.7, epsilon = 1e-12);
        let h = Geometry::entropy();
        let w = capped_simplex_by_enumeration(&h, &[4.0, 1.0, 1.0], &[0.5; 3]).unwrap();
        assert_abs_diff_eq!(w[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 0.25, epsilon = 1e-12);
    }

    #[test]
    fn bisection_known_answers() {
        let y = orthant_l1_by_bisection(&[0.2, -0.3, 1.0], 0.05);
        assert_abs_diff_eq!(y[0], 0.15, epsilon = 1e-14);
        assert_eq!(y[1], 0.0);
        assert_abs_diff_eq!(y[2], 0.95, epsilon = 1e-14);
        let y = hypercube_entropic_by_bisection(&[0.5, 3.0]);
        assert_abs_diff_eq!(y[0], 0.5, epsilon = 1e-14);
        assert_eq!(y[1], 1.0);
    }
}
