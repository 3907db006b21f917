//! Decision stumps, loss vectors and edges.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

/// `h(x) = polarity · sign(x[feature] − threshold)` with `sign(0) = +1`.
/// A threshold of `−∞` gives the constant hypothesis `polarity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    pub polarity: i8,
}

impl Stump {
    pub fn new(feature: usize, threshold: f64, polarity: i8) -> Self {
        assert!(polarity == 1 || polarity == -1, "polarity must be ±1");
        Self {
            feature,
            threshold,
            polarity,
        }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let side = if x[self.feature] - self.threshold >= 0.0 {
            1.0
        } else {
            -1.0
        };
        self.polarity as f64 * side
    }
}

/// `d_i = −a_i h(x_i)`: `−1` where `h` is right, `+1` where it is wrong.
#[derive(Debug, Clone, PartialEq)]
pub struct LossVector(Vec<f64>);

impl LossVector {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if let Some(i) = d.iter().position(|v| !(-1.0..=1.0).contains(v)) {
            return Err(Error::Domain(format!(
                "loss entry {i} is {} outside [-1, 1]",
                d[i]
            )));
        }
        Ok(Self(d))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Deref for LossVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub fn loss_vector(ds: &Dataset, h: &Stump) -> LossVector {
    LossVector(
        (0..ds.n())
            .map(|i| -ds.label(i) * h.predict(ds.row(i)))
            .collect(),
    )
}

/// `γ = −wᵀd`.
pub fn edge(w: &[f64], d: &LossVector) -> Result<f64> {
    if w.len() != d.len() {
        return Err(Error::Usage(format!(
            "weights have length {}, loss vector {}",
            w.len(),
            d.len()
        )));
    }
    Ok(-w.iter().zip(d.iter()).map(|(a, b)| a * b).sum::<f64>())
}

/// Exhaustive stump search over midpoints of consecutive distinct values.
///
/// Sorted orders are computed once per dataset, so repeated calls cost
/// `O(N·d)` each.
#[derive(Debug, Clone)]
pub struct StumpLearner<'a> {
    ds: &'a Dataset,
    orders: Vec<Vec<usize>>,
}

impl<'a> StumpLearner<'a> {
    pub fn new(ds: &'a Dataset) -> Self {
        let orders = (0..ds.d())
            .map(|f| {
                let mut idx: Vec<usize> = (0..ds.n()).collect();
                idx.sort_by(|&a, &b| {
                    ds.feature(a, f)
                        .total_cmp(&ds.feature(b, f))
                        .then(a.cmp(&b))
                });
                idx
            })
            .collect();
        Self { ds, orders }
    }

    /// Returns the stump with the largest `|Σ w_i a_i h(x_i)|`, polarity
    /// chosen so its edge is non-negative, together with that edge.
    /// Ties go to the lowest feature index, then the lowest threshold.
    pub fn train(&self, w: &[f64]) -> Result<(Stump, f64)> {
        let ds = self.ds;
        if w.len() != ds.n() {
            return Err(Error::Usage(format!(
                "{} weights for {} samples",
                w.len(),
                ds.n()
            )));
        }
        let total: f64 = (0..ds.n()).map(|i| w[i] * ds.label(i)).sum();
        // Correlation of the `+1` polarity stump; −∞ threshold predicts +1 everywhere.
        let mut best = (0usize, f64::NEG_INFINITY, total);
        for (f, order) in self.orders.iter().enumerate() {
            let mut below = 0.0;
            let mut k = 0;
            while k < order.len() {
                let v = ds.feature(order[k], f);
                while k < order.len() && ds.feature(order[k], f) == v {
                    below += w[order[k]] * ds.label(order[k]);
                    k += 1;
                }
                if k == order.len() {
                    break;
                }
                let next = ds.feature(order[k], f);
                let mid = v + (next - v) / 2.0;
                let threshold = if mid > v { mid } else { next };
                let corr = total - 2.0 * below;
                if corr.abs() > best.2.abs() {
                    best = (f, threshold, corr);
                }
            }
        }
        let (feature, threshold, corr) = best;
        let stump = Stump::new(feature, threshold, if corr >= 0.0 { 1 } else { -1 });
        let gamma = edge(w, &loss_vector(ds, &stump))?;
        Ok((stump, gamma))
    }
}

pub fn train_stump(ds: &Dataset, w: &[f64]) -> Result<(Stump, f64)> {
    StumpLearner::new(ds).train(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::rng::SplitMix64;
    use approx::assert_abs_diff_eq;

    fn uniform(n: usize) -> Vec<f64> {
        vec![1.0 / n as f64; n]
    }

    #[test]
    fn separable_pair() {
        let ds = Dataset::new(vec![vec![-1.0], vec![1.0]], vec![-1.0, 1.0]).unwrap();
        let (h, g) = train_stump(&ds, &uniform(2)).unwrap();
        assert_eq!(h, Stump::new(0, 0.0, 1));
        assert_eq!(g, 1.0);
    }

    #[test]
    fn constant_features_give_constant_stump() {
        let ds = Dataset::new(vec![vec![2.0]; 4], vec![1.0, -1.0, -1.0, -1.0]).unwrap();
        let w = [0.1, 0.2, 0.3, 0.4];
        let (h, g) = train_stump(&ds, &w).unwrap();
        assert_eq!(h.threshold, f64::NEG_INFINITY);
        assert_eq!(h.polarity, -1);
        let expected: f64 = -(0.1 - 0.2 - 0.3 - 0.4f64);
        assert_abs_diff_eq!(g, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(g, oracle::best_stump_edge(&ds, &w), epsilon = 1e-15);
    }

    #[test]
    fn zero_edge_is_returned_not_an_error() {
        let ds = Dataset::new(vec![vec![0.0], vec![0.0]], vec![1.0, -1.0]).unwrap();
        let (_, g) = train_stump(&ds, &uniform(2)).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn loss_vector_signs() {
        let ds = Dataset::new(
            vec![vec![-2.0], vec![-1.0], vec![1.0], vec![2.0]],
            vec![-1.0, 1.0, 1.0, -1.0],
        )
        .unwrap();
        let h = Stump::new(0, 0.0, 1);
        assert_eq!(loss_vector(&ds, &h).as_slice(), &[-1.0, 1.0, -1.0, 1.0]);
        assert_eq!(edge(&uniform(4), &loss_vector(&ds, &h)).unwrap(), 0.0);
    }

    #[test]
    fn edge_examples() {
        let d = LossVector::new(vec![-1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(edge(&[0.7, 0.3], &d).unwrap(), 0.4, epsilon = 1e-15);
        let all_right = LossVector::new(vec![-1.0; 5]).unwrap();
        assert_eq!(edge(&uniform(5), &all_right).unwrap(), 1.0);
        assert!(matches!(edge(&[1.0], &d), Err(Error::Usage(_))));
        assert!(LossVector::new(vec![1.5]).is_err());
    }

    #[test]
    fn sign_zero_is_positive() {
        let h = Stump::new(0, 0.5, -1);
        assert_eq!(h.predict(&[0.5]), -1.0);
        assert_eq!(h.predict(&[0.4]), 1.0);
    }

    #[test]
    fn matches_enumeration_on_random_data() {
        let mut rng = SplitMix64::new(11);
        for trial in 0..40 {
            let n = 5 + rng.below(46);
            let d = 1 + rng.below(4);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    (0..d)
                        .map(|_| (rng.uniform(-2.0, 2.0) * 4.0).round() / 4.0)
                        .collect()
                })
                .collect();
            let labels = (0..n)
                .map(|_| if rng.next_f64() < 0.5 { 1.0 } else { -1.0 })
                .collect();
            let ds = Dataset::new(rows, labels).unwrap();
            let raw: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
            let s: f64 = raw.iter().sum();
            let w: Vec<f64> = raw.iter().map(|v| v / s).collect();
            let (h, g) = train_stump(&ds, &w).unwrap();
            assert!(g >= 0.0);
            assert_abs_diff_eq!(g, edge(&w, &loss_vector(&ds, &h)).unwrap(), epsilon = 1e-12);
            assert_abs_diff_eq!(g, oracle::best_stump_edge(&ds, &w), epsilon = 1e-12);
            assert_eq!(train_stump(&ds, &w).unwrap().0, h, "trial {trial}");
        }
    }
}
