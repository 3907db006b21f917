//! Closed-form training-error and margin bounds.
//!
//! All of these take cumulative quantities from a run (sums of squared
//! edges, observed minimum edge) and return the value the observed error
//! must not exceed, or, for [`margin_lower_bound`], the value the observed
//! margin must not fall below.

use crate::geometry::GeometryKind;

/// Slack added to every bound comparison to absorb floating-point accumulation.
pub const BOUND_SLACK: f64 = 1e-9;

/// MABoost with `η_t = γ_t/L`: `1/(1 + Σγ²)` (quadratic) or `exp(−½Σγ²)` (entropy).
pub fn mirror_ascent(kind: GeometryKind, sum_sq_edges: f64) -> f64 {
    match kind {
        GeometryKind::Quadratic => 1.0 / (1.0 + sum_sq_edges),
        GeometryKind::NegativeEntropy => (-0.5 * sum_sq_edges).exp(),
    }
}

/// Error bound on a subset of `subset_n` out of `n` samples: the uniform
/// distribution over the subset's mistakes is at divergence
/// `log(n/(ε·subset_n))` (entropy) or `½(1/(ε·subset_n) − 1/n)` (quadratic)
/// from uniform, which scales [`mirror_ascent`] by `n/subset_n`.
pub fn mirror_ascent_subset(
    kind: GeometryKind,
    sum_sq_edges: f64,
    n: usize,
    subset_n: usize,
) -> f64 {
    n as f64 / subset_n as f64 * mirror_ascent(kind, sum_sq_edges)
}

/// Capped runs only control the error while it is at least `1/k`.
pub fn smooth(kind: GeometryKind, sum_sq_edges: f64, k: f64) -> f64 {
    mirror_ascent(kind, sum_sq_edges).max(1.0 / k)
}

/// SparseBoost: `1/(1 + cΣγ_t²‖y_t‖₁²)`; `weighted_sum` is the sum.
pub fn sparse(c: f64, weighted_sum: f64) -> f64 {
    1.0 / (1.0 + c * weighted_sum)
}

/// Entropy-hypercube MadaBoost variant: `ε_t ≤ 1/(√t·γ_min)`.
pub fn mada(t: usize, gamma_min: f64) -> f64 {
    1.0 / ((t as f64).sqrt() * gamma_min)
}

/// `C = B(e_i, uniform)` for the point mass on one sample.
pub fn point_mass_divergence(kind: GeometryKind, n: usize) -> f64 {
    match kind {
        GeometryKind::Quadratic => 0.5 * (1.0 - 1.0 / n as f64),
        GeometryKind::NegativeEntropy => (n as f64).ln(),
    }
}

/// Margin slack after `t` rounds of `η_t = γ_t/(L√t)`:
/// `ν = (1 + ln t)/(2√(t+1) − 2)·γ + L·C/(γ(√(t+1) − 1))`.
pub fn max_margin_nu(t: usize, gamma_min: f64, l: f64, c: f64) -> f64 {
    let root = ((t + 1) as f64).sqrt();
    (1.0 + (t as f64).ln()) / (2.0 * root - 2.0) * gamma_min + l * c / (gamma_min * (root - 1.0))
}

/// `γ_min − ν`.
pub fn margin_lower_bound(t: usize, gamma_min: f64, l: f64, c: f64) -> f64 {
    gamma_min - max_margin_nu(t, gamma_min, l, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn formulas() {
        assert_eq!(mirror_ascent(GeometryKind::Quadratic, 3.0), 0.25);
        assert_abs_diff_eq!(
            mirror_ascent(GeometryKind::NegativeEntropy, 2.0),
            (-1.0f64).exp()
        );
        assert_eq!(smooth(GeometryKind::Quadratic, 100.0, 4.0), 0.25);
        assert_eq!(sparse(0.25, 4.0), 0.5);
        assert_eq!(mada(4, 0.5), 1.0);
        assert_abs_diff_eq!(
            point_mass_divergence(GeometryKind::NegativeEntropy, 100),
            100f64.ln()
        );
        // t = 3: √4 = 2, so ν = (1 + ln 3)/2·γ + L·C/γ.
        let nu = max_margin_nu(3, 0.5, 1.0, 2.0);
        assert_abs_diff_eq!(nu, (1.0 + 3f64.ln()) / 2.0 * 0.5 + 4.0, epsilon = 1e-14);
    }

    #[test]
    fn nu_vanishes() {
        let c = point_mass_divergence(GeometryKind::NegativeEntropy, 100);
        let a = max_margin_nu(1_000, 0.3, 1.0, c);
        let b = max_margin_nu(1_000_000, 0.3, 1.0, c);
        assert!(b < a / 10.0);
    }
}
