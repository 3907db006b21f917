//! Bregman projections onto the constraint sets used by the boosters.
//!
//! Every function validates its input against the geometry's domain and
//! returns a point that satisfies the set's bounds exactly; the simplex
//! equality holds up to rounding (`|Σw − 1| ≤ 1e−12`).

use crate::error::{Error, Result};
use crate::geometry::{check_finite, check_positive, Geometry, GeometryKind};

const BISECTION_MAX_ITERS: usize = 200;
const BISECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSet {
    /// `{w : Σw = 1, w ≥ 0}`
    Simplex,
    /// Simplex with the uniform upper bound `w_i ≤ cap` (`cap = k/N`).
    CappedSimplex {
        cap: f64,
    },
    /// Simplex with per-coordinate upper bounds; `f64::INFINITY` never binds.
    MixedCaps(Vec<f64>),
    PositiveOrthant,
    UnitHypercube,
}

impl ConstraintSet {
    /// Checks that the set is non-empty in dimension `n`.
    pub fn check_feasible(&self, n: usize) -> Result<()> {
        match self {
            ConstraintSet::Simplex => nonempty(n),
            ConstraintSet::CappedSimplex { cap } => {
                nonempty(n)?;
                if !(cap * n as f64 >= 1.0 - 1e-12) {
                    return Err(Error::Config(format!(
                        "capped simplex infeasible: cap {cap} * N {n} < 1"
                    )));
                }
                Ok(())
            }
            ConstraintSet::MixedCaps(caps) => {
                if caps.len() != n {
                    return Err(Error::Usage(format!(
                        "{} caps for a {n}-dimensional point",
                        caps.len()
                    )));
                }
                nonempty(n)?;
                if caps.iter().any(|c| c.is_nan() || *c < 0.0) {
                    return Err(Error::Config("caps must be non-negative".into()));
                }
                let mass: f64 = caps.iter().map(|c| c.min(1.0)).sum();
                if mass < 1.0 - 1e-12 {
                    return Err(Error::Config(format!(
                        "mixed caps infeasible: total capacity {mass} < 1"
                    )));
                }
                Ok(())
            }
            ConstraintSet::PositiveOrthant | ConstraintSet::UnitHypercube => Ok(()),
        }
    }

    /// Membership test; `tol` applies to the simplex equality and to bounds.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        let sum: f64 = x.iter().sum();
        let nonneg = x.iter().all(|&v| v >= -tol);
        let on_simplex = nonneg && (sum - 1.0).abs() <= tol;
        match self {
            ConstraintSet::Simplex => on_simplex,
            ConstraintSet::CappedSimplex { cap } => on_simplex && x.iter().all(|&v| v <= cap + tol),
            ConstraintSet::MixedCaps(caps) => {
                on_simplex
                    && caps.len() == x.len()
                    && x.iter().zip(caps).all(|(v, c)| *v <= c + tol)
            }
            ConstraintSet::PositiveOrthant => nonneg,
            ConstraintSet::UnitHypercube => nonneg && x.iter().all(|&v| v <= 1.0 + tol),
        }
    }
}

fn nonempty(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Degenerate("empty vector".into()));
    }
    Ok(())
}

/// Bregman projection of `z` onto `set` under `g`.
pub fn project(g: &Geometry, set: &ConstraintSet, z: &[f64]) -> Result<Vec<f64>> {
    match set {
        ConstraintSet::Simplex => project_simplex(g, z),
        ConstraintSet::CappedSimplex { cap } => project_capped_simplex(g, z, *cap),
        ConstraintSet::MixedCaps(caps) => project_mixed(g, z, caps),
        ConstraintSet::PositiveOrthant => {
            validate(g, z)?;
            Ok(match g.kind() {
                GeometryKind::Quadratic => project_orthant_l1(z, 0.0),
                GeometryKind::NegativeEntropy => z.to_vec(),
            })
        }
        ConstraintSet::UnitHypercube => project_hypercube(g, z),
    }
}

fn validate(g: &Geometry, z: &[f64]) -> Result<()> {
    nonempty(z.len())?;
    check_finite(z)?;
    if g.is_entropy() {
        if z.iter().all(|&v| v == 0.0) {
            return Err(Error::Degenerate(
                "all-zero vector has no entropic projection".into(),
            ));
        }
        check_positive(z)?;
    }
    Ok(())
}

/// Projection onto the probability simplex.
///
/// Entropy: normalization. Quadratic: `w_i = max(0, z_i − θ)` with θ found by
/// sorting.
pub fn project_simplex(g: &Geometry, z: &[f64]) -> Result<Vec<f64>> {
    validate(g, z)?;
    Ok(match g.kind() {
        GeometryKind::NegativeEntropy => normalize(z),
        GeometryKind::Quadratic => euclidean_simplex(z),
    })
}

fn normalize(z: &[f64]) -> Vec<f64> {
    let sum: f64 = z.iter().sum();
    if sum.is_finite() {
        z.iter().map(|v| v / sum).collect()
    } else {
        let max = z.iter().fold(0.0f64, |m, &v| m.max(v));
        let scaled: Vec<f64> = z.iter().map(|v| v / max).collect();
        let sum: f64 = scaled.iter().sum();
        scaled.into_iter().map(|v| v / sum).collect()
    }
}

fn euclidean_simplex(z: &[f64]) -> Vec<f64> {
    let mut sorted = z.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut prefix = 0.0;
    let mut theta = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        prefix += u;
        let candidate = (prefix - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        } else {
            break;
        }
    }
    z.iter().map(|v| (v - theta).max(0.0)).collect()
}

/// Projection onto `{Σw = 1, 0 ≤ w_i ≤ cap}`.
pub fn project_capped_simplex(g: &Geometry, z: &[f64], cap: f64) -> Result<Vec<f64>> {
    ConstraintSet::CappedSimplex { cap }.check_feasible(z.len())?;
    project_mixed(g, z, &vec![cap; z.len()])
}

/// Projection onto `{Σw = 1, 0 ≤ w_i ≤ caps_i}`.
///
/// Caps at or above 1 cannot bind on the simplex, so an all-loose cap vector
/// falls through to [`project_simplex`].
pub fn project_mixed(g: &Geometry, z: &[f64], caps: &[f64]) -> Result<Vec<f64>> {
    ConstraintSet::MixedCaps(caps.to_vec()).check_feasible(z.len())?;
    if caps.iter().all(|&c| c >= 1.0) {
        return project_simplex(g, z);
    }
    validate(g, z)?;
    Ok(match g.kind() {
        GeometryKind::NegativeEntropy => entropic_capped(z, caps),
        GeometryKind::Quadratic => euclidean_capped(z, caps),
    })
}

/// The solution has the form `w_i = min(cap_i, c·z_i)`. Coordinate `i` binds
/// once `c ≥ cap_i / z_i`, so coordinates are capped in increasing order of
/// that ratio (decreasing `z` for uniform caps) until the rescaled remainder
/// fits under its caps.
fn entropic_capped(z: &[f64], caps: &[f64]) -> Vec<f64> {
    let n = z.len();
    let ratio: Vec<f64> = z.iter().zip(caps).map(|(v, c)| c / v).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| ratio[a].total_cmp(&ratio[b]).then(a.cmp(&b)));

    let mut capped_mass = 0.0;
    let mut free_sum: f64 = z.iter().sum();
    let mut n_capped = 0;
    let mut scale = 1.0 / free_sum;
    while n_capped < n {
        scale = (1.0 - capped_mass) / free_sum;
        let next = order[n_capped];
        if scale <= ratio[next] {
            break;
        }
        capped_mass += caps[next];
        free_sum -= z[next];
        n_capped += 1;
    }

    let mut w = vec![0.0; n];
    for (rank, &i) in order.iter().enumerate() {
        w[i] = if rank < n_capped {
            caps[i]
        } else {
            (scale * z[i]).min(caps[i])
        };
    }
    w
}

/// `w_i = clamp(z_i − θ, 0, cap_i)` with θ from bisection on the monotone
/// map `θ ↦ Σ clamp(z_i − θ, 0, cap_i)`, then solved exactly on the
/// resulting free set.
fn euclidean_capped(z: &[f64], caps: &[f64]) -> Vec<f64> {
    let mass = |theta: f64| -> f64 {
        z.iter()
            .zip(caps)
            .map(|(v, c)| (v - theta).clamp(0.0, *c))
            .sum()
    };
    let zmin = z.iter().cloned().fold(f64::INFINITY, f64::min);
    let zmax = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // mass(zmin − 1) ≥ Σ min(cap_i, 1) ≥ 1 and mass(zmax) = 0.
    let (mut lo, mut hi) = (zmin - 1.0, zmax);
    let mut theta = 0.5 * (lo + hi);
    for _ in 0..BISECTION_MAX_ITERS {
        theta = 0.5 * (lo + hi);
        let m = mass(theta);
        if (m - 1.0).abs() <= BISECTION_TOL {
            break;
        }
        if m > 1.0 {
            lo = theta;
        } else {
            hi = theta;
        }
    }

    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    let mut capped_mass = 0.0;
    for (v, c) in z.iter().zip(caps) {
        let x = v - theta;
        if x >= *c {
            capped_mass += c;
        } else if x > 0.0 {
            free_sum += v;
            free_count += 1;
        }
    }
    if free_count > 0 {
        let exact = (free_sum + capped_mass - 1.0) / free_count as f64;
        if (mass(exact) - 1.0).abs() <= (mass(theta) - 1.0).abs() {
            theta = exact;
        }
    }
    z.iter()
        .zip(caps)
        .map(|(v, c)| (v - theta).clamp(0.0, *c))
        .collect()
}

/// Exact minimizer of `½‖y − z‖² + λ‖y‖₁` over `y ≥ 0`: `y_i = max(0, z_i − λ)`.
pub fn project_orthant_l1(z: &[f64], lambda: f64) -> Vec<f64> {
    debug_assert!(lambda >= 0.0, "l1 penalty must be non-negative");
    z.iter().map(|v| (v - lambda).max(0.0)).collect()
}

/// Entropic projection onto `[0, 1]^N`: `y_i = min(1, z_i)`.
pub fn project_hypercube_entropic(z: &[f64]) -> Result<Vec<f64>> {
    nonempty(z.len())?;
    check_finite(z)?;
    check_positive(z)?;
    Ok(z.iter().map(|v| v.min(1.0)).collect())
}

/// Projection onto `[0, 1]^N` under either geometry.
pub fn project_hypercube(g: &Geometry, z: &[f64]) -> Result<Vec<f64>> {
    match g.kind() {
        GeometryKind::NegativeEntropy => project_hypercube_entropic(z),
        GeometryKind::Quadratic => {
            validate(g, z)?;
            Ok(z.iter().map(|v| v.clamp(0.0, 1.0)).collect())
        }
    }
}

/// Approximate projection `Π_inner(Π_outer(z))`.
///
/// Only the hypercube-then-simplex pair is supported.
pub fn project_double(
    g: &Geometry,
    z: &[f64],
    outer: &ConstraintSet,
    inner: &ConstraintSet,
) -> Result<Vec<f64>> {
    match (outer, inner) {
        (ConstraintSet::UnitHypercube, ConstraintSet::Simplex) => {
            let y = project_hypercube(g, z)?;
            project_simplex(g, &y)
        }
        _ => Err(Error::Config(format!(
            "unsupported double projection {outer:?} -> {inner:?}"
        ))),
    }
}
