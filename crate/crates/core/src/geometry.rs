//! Bregman geometries.
//!
//! Two potentials are supported: the squared Euclidean norm `½‖x‖²` (paired
//! with ℓ2, dual ℓ2) and negative entropy `Σ xᵢ log xᵢ` (paired with ℓ1 on the
//! simplex, dual ℓ∞). Negative entropy uses `0·log 0 = 0`, so the potential is
//! defined on the closed orthant while the mirror map needs strictly positive
//! input.
//!
//! The entropic divergence is the generalized KL divergence
//! `Σ xᵢ log(xᵢ/yᵢ) − Σ xᵢ + Σ yᵢ`. It is also the divergence of
//! `Σ xᵢ log xᵢ − xᵢ`, since the two potentials differ by a linear term, and
//! it reduces to KL when both arguments lie on the simplex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Quadratic,
    #[serde(rename = "entropy")]
    NegativeEntropy,
}

impl GeometryKind {
    pub fn name(self) -> &'static str {
        match self {
            GeometryKind::Quadratic => "quadratic",
            GeometryKind::NegativeEntropy => "entropy",
        }
    }
}

impl std::str::FromStr for GeometryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadratic" => Ok(GeometryKind::Quadratic),
            "entropy" | "negative-entropy" => Ok(GeometryKind::NegativeEntropy),
            other => Err(Error::Usage(format!(
                "unknown geometry '{other}' (expected quadratic|entropy)"
            ))),
        }
    }
}

/// A potential together with the bound `L` on the squared dual norm of loss
/// vectors with entries in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    kind: GeometryKind,
    dual_norm_sq_bound: f64,
}

/// Value of a Bregman divergence; never negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Divergence(f64);

impl Divergence {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Divergence> for f64 {
    fn from(d: Divergence) -> f64 {
        d.0
    }
}

impl Geometry {
    /// `½‖x‖²` over `n` samples: `‖d‖₂² ≤ n`.
    pub fn quadratic(n: usize) -> Self {
        Self {
            kind: GeometryKind::Quadratic,
            dual_norm_sq_bound: n as f64,
        }
    }

    /// Negative entropy: `‖d‖∞² ≤ 1`.
    pub fn entropy() -> Self {
        Self {
            kind: GeometryKind::NegativeEntropy,
            dual_norm_sq_bound: 1.0,
        }
    }

    pub fn for_samples(kind: GeometryKind, n: usize) -> Self {
        match kind {
            GeometryKind::Quadratic => Self::quadratic(n),
            GeometryKind::NegativeEntropy => Self::entropy(),
        }
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    /// The constant `L` with `‖d‖*² ≤ L`.
    pub fn dual_norm_sq_bound(&self) -> f64 {
        self.dual_norm_sq_bound
    }

    pub fn is_entropy(&self) -> bool {
        self.kind == GeometryKind::NegativeEntropy
    }

    pub fn potential(&self, x: &[f64]) -> Result<f64> {
        match self.kind {
            GeometryKind::Quadratic => Ok(0.5 * x.iter().map(|v| v * v).sum::<f64>()),
            GeometryKind::NegativeEntropy => {
                check_nonnegative(x)?;
                Ok(x.iter().map(|&v| xlogx(v)).sum())
            }
        }
    }

    pub fn mirror_map(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self.kind {
            GeometryKind::Quadratic => Ok(x.to_vec()),
            GeometryKind::NegativeEntropy => {
                check_positive(x)?;
                Ok(x.iter().map(|v| 1.0 + v.ln()).collect())
            }
        }
    }

    pub fn inverse_mirror_map(&self, theta: &[f64]) -> Vec<f64> {
        match self.kind {
            GeometryKind::Quadratic => theta.to_vec(),
            GeometryKind::NegativeEntropy => theta.iter().map(|t| (t - 1.0).exp()).collect(),
        }
    }

    /// `B(x, y) = R(x) − R(y) − ∇R(y)ᵀ(x − y)`, evaluated in closed form.
    pub fn divergence(&self, x: &[f64], y: &[f64]) -> Result<Divergence> {
        check_len(x, y)?;
        let value = match self.kind {
            GeometryKind::Quadratic => {
                0.5 * x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
            }
            GeometryKind::NegativeEntropy => {
                check_nonnegative(x)?;
                check_positive(y)?;
                x.iter()
                    .zip(y)
                    .map(|(&a, &b)| {
                        if a == 0.0 {
                            b
                        } else {
                            a * (a / b).ln() - a + b
                        }
                    })
                    .sum::<f64>()
            }
        };
        // Rounding can push an exact zero slightly negative.
        Ok(Divergence(value.max(0.0)))
    }

    /// Norm the potential is 1-strongly convex against (ℓ2 or ℓ1).
    pub fn norm(&self, x: &[f64]) -> f64 {
        match self.kind {
            GeometryKind::Quadratic => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            GeometryKind::NegativeEntropy => x.iter().map(|v| v.abs()).sum(),
        }
    }

    /// Dual of [`Geometry::norm`] (ℓ2 or ℓ∞).
    pub fn dual_norm(&self, x: &[f64]) -> f64 {
        match self.kind {
            GeometryKind::Quadratic => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            GeometryKind::NegativeEntropy => x.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }
}

fn xlogx(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * v.ln()
    }
}

fn check_len(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Usage(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

pub(crate) fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::Domain(format!("coordinate {i} is not finite"))),
        None => Ok(()),
    }
}

pub(crate) fn check_nonnegative(x: &[f64]) -> Result<()> {
    match x.iter().position(|&v| !(v >= 0.0)) {
        Some(i) => Err(Error::Domain(format!(
            "negative entropy needs x >= 0, coordinate {i} is {}",
            x[i]
        ))),
        None => Ok(()),
    }
}

pub(crate) fn check_positive(x: &[f64]) -> Result<()> {
    match x.iter().position(|&v| !(v > 0.0)) {
        Some(i) => Err(Error::Domain(format!(
            "negative entropy needs x > 0, coordinate {i} is {}",
            x[i]
        ))),
        None => Ok(()),
    }
}
