//! Boosters built from a geometry, a projection and the stump learner.
//!
//! Every booster starts from the uniform distribution, trains a stump on the
//! current weights, picks a step size from the stump's edge, updates in the
//! dual through the mirror maps and projects back. Each completed round
//! produces a [`RoundTrace`] carrying the quantities its error bound is
//! stated in, so the bound can be re-checked from the trace alone.
//!
//! A run stops after `max_rounds`, when the training error reaches
//! `target_error` (max-margin runs ignore the error), when the best stump has
//! edge at most [`EDGE_TOL`], or when SparseBoost's weights vanish.

use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::data::{Dataset, Subset};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, GeometryKind};
use crate::projection::{self, ConstraintSet};
use crate::weaklearn::{loss_vector, Stump, StumpLearner};

/// Edges at or below this are treated as zero.
pub const EDGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaMode {
    /// `α_t = 0`, `η_t = γ_t‖y_t‖₁/N`.
    Zero,
    /// `α_t = min(1, ½γ_t‖y_t‖₁)`, `η_t = γ_t‖y_t‖₁/(2N)`.
    Half,
}

impl AlphaMode {
    /// Constant `c` in the SparseBoost bound.
    pub fn bound_constant(self) -> f64 {
        match self {
            AlphaMode::Zero => 1.0,
            AlphaMode::Half => 0.25,
        }
    }
}

/// How the MadaBoost variant resolves `η_t = ε_t γ_t`, whose `ε_t` depends on `η_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MadaEta {
    /// `η_t = ε_{t−1} γ_t` with `ε_0 = 1`.
    PreviousError,
    /// Provisional `η = ε_{t−1} γ_t`, then `η_t = ε_t γ_t` once.
    FixedPoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    MaBoostActive,
    MaBoostLazy,
    MaxMargin,
    Smooth {
        k: f64,
    },
    /// Membership comes from the dataset's subset flags.
    Combined {
        k: f64,
    },
    Sparse {
        alpha: AlphaMode,
    },
    Mada {
        eta: MadaEta,
    },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::MaBoostActive => "maboost-active",
            Algorithm::MaBoostLazy => "maboost-lazy",
            Algorithm::MaxMargin => "maxmargin",
            Algorithm::Smooth { .. } => "smooth",
            Algorithm::Combined { .. } => "combined",
            Algorithm::Sparse { .. } => "sparse",
            Algorithm::Mada { .. } => "mada",
        }
    }

    /// Geometry the algorithm is defined for, if it only has one.
    pub fn forced_geometry(&self) -> Option<GeometryKind> {
        match self {
            Algorithm::Sparse { .. } => Some(GeometryKind::Quadratic),
            Algorithm::Mada { .. } => Some(GeometryKind::NegativeEntropy),
            _ => None,
        }
    }

    pub fn k(&self) -> Option<f64> {
        match self {
            Algorithm::Smooth { k } | Algorithm::Combined { k } => Some(*k),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoosterConfig {
    pub algorithm: Algorithm,
    pub geometry: GeometryKind,
    pub max_rounds: usize,
    pub target_error: f64,
}

impl BoosterConfig {
    /// 100 rounds, stopping early only at zero training error. Smooth runs
    /// default to `target_error = 1/k`.
    pub fn new(algorithm: Algorithm, geometry: GeometryKind) -> Self {
        let target_error = match algorithm {
            Algorithm::Smooth { k } => 1.0 / k,
            _ => 0.0,
        };
        Self {
            algorithm,
            geometry,
            max_rounds: 100,
            target_error,
        }
    }

    pub fn rounds(mut self, max_rounds: usize) -> Self {
        self.max_rounds = max_rounds;
        self
    }

    pub fn target(mut self, target_error: f64) -> Self {
        self.target_error = target_error;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_rounds == 0 {
            return Err(Error::Config("max_rounds must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.target_error) {
            return Err(Error::Config(format!(
                "target error {} outside [0, 1]",
                self.target_error
            )));
        }
        if let Some(kind) = self.algorithm.forced_geometry() {
            if kind != self.geometry {
                return Err(Error::Config(format!(
                    "{} requires the {} geometry",
                    self.algorithm.name(),
                    kind.name()
                )));
            }
        }
        if let Some(k) = self.algorithm.k() {
            if !(k >= 1.0 && k.is_finite()) {
                return Err(Error::Config(format!(
                    "k must be a finite value >= 1, got {k}"
                )));
            }
            if matches!(self.algorithm, Algorithm::Smooth { .. })
                && self.target_error < 1.0 / k - 1e-12
            {
                return Err(Error::Config(format!(
                    "smooth boosting needs target error >= 1/k = {}",
                    1.0 / k
                )));
            }
        }
        Ok(())
    }
}

/// Signed sum `f(x) = Σ η_t h_t(x)` of weighted stumps.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    members: Vec<(Stump, f64)>,
}

impl Ensemble {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_members(members: Vec<(Stump, f64)>) -> Self {
        Self { members }
    }

    pub fn push(&mut self, h: Stump, eta: f64) {
        self.members.push((h, eta));
    }

    pub fn members(&self) -> &[(Stump, f64)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn total_eta(&self) -> f64 {
        self.members.iter().map(|(_, e)| e).sum()
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        self.members.iter().map(|(h, e)| e * h.predict(x)).sum()
    }

    /// `sign(f(x))` with `sign(0) = +1`.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::Usage("cannot predict with an empty ensemble".into()));
        }
        Ok(sign(self.score(x)))
    }

    /// `min_j a_j f(x_j) / Σ η_t`.
    pub fn margin(&self, ds: &Dataset) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::Usage("margin of an empty ensemble".into()));
        }
        let total = self.total_eta();
        Ok((0..ds.n())
            .map(|i| ds.label(i) * self.score(ds.row(i)) / total)
            .fold(f64::INFINITY, f64::min))
    }

    pub fn error(&self, ds: &Dataset) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::Usage("error of an empty ensemble".into()));
        }
        let wrong = (0..ds.n())
            .filter(|&i| sign(self.score(ds.row(i))) != ds.label(i))
            .count();
        Ok(wrong as f64 / ds.n() as f64)
    }
}

pub fn predict(ensemble: &Ensemble, x: &[f64]) -> Result<f64> {
    ensemble.predict(x)
}

pub fn margin(ensemble: &Ensemble, ds: &Dataset) -> Result<f64> {
    ensemble.margin(ds)
}

fn sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// One completed boosting round.
///
/// `max_weight` and `nnz` describe the distribution produced by the round.
/// `bound` is what `train_error` must not exceed, except for max-margin runs
/// where it is the lower bound `γ_min − ν` on `margin`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub t: usize,
    pub gamma: f64,
    pub eta: f64,
    pub train_error: f64,
    pub bound: f64,
    pub max_weight: f64,
    pub nnz: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "eps_A")]
    pub eps_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "eps_B")]
    pub eps_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "bound_B")]
    pub bound_b: Option<f64>,
    /// `‖y_t‖₁` going into the round (SparseBoost, MadaBoost).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_norm: Option<f64>,
    /// `‖y_{t+1}‖₁` coming out of the round.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_norm_next: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxRounds,
    TargetReached,
    ZeroEdge,
    DistributionCollapsed,
}

/// Result of a boosting run.
#[derive(Debug, Clone)]
pub struct BoostRun {
    pub ensemble: Ensemble,
    /// Distribution after the last round (empty if SparseBoost collapsed).
    pub weights: Vec<f64>,
    /// `z` for lazy MABoost, `y` for SparseBoost and MadaBoost.
    pub auxiliary: Option<Vec<f64>>,
    pub rounds: Vec<RoundTrace>,
    pub stop: StopReason,
}

impl BoostRun {
    pub fn final_error(&self) -> f64 {
        self.rounds.last().map_or(1.0, |r| r.train_error)
    }
}

/// Dispatches on `config.algorithm`.
pub fn run(config: &BoosterConfig, ds: &Dataset) -> Result<BoostRun> {
    match config.algorithm {
        Algorithm::MaBoostActive | Algorithm::MaBoostLazy => run_maboost(config, ds),
        Algorithm::MaxMargin => run_max_margin(config, ds),
        Algorithm::Smooth { .. } => run_smooth(config, ds),
        Algorithm::Combined { .. } => run_combined(config, ds),
        Algorithm::Sparse { .. } => run_sparse(config, ds),
        Algorithm::Mada { .. } => run_mada(config, ds),
    }
}

fn wrong_algorithm(config: &BoosterConfig, op: &str) -> Error {
    Error::Usage(format!(
        "{op} cannot run algorithm {}",
        config.algorithm.name()
    ))
}

/// Running ensemble scores and error bookkeeping shared by all boosters.
struct Tally<'a> {
    ds: &'a Dataset,
    scores: Vec<f64>,
    ensemble: Ensemble,
    sum_sq_edges: f64,
    min_edge: f64,
}

impl<'a> Tally<'a> {
    fn new(ds: &'a Dataset) -> Self {
        Self {
            ds,
            scores: vec![0.0; ds.n()],
            ensemble: Ensemble::new(),
            sum_sq_edges: 0.0,
            min_edge: f64::INFINITY,
        }
    }

    fn add(&mut self, h: Stump, gamma: f64, eta: f64) {
        for (i, s) in self.scores.iter_mut().enumerate() {
            *s += eta * h.predict(self.ds.row(i));
        }
        self.ensemble.push(h, eta);
        self.sum_sq_edges += gamma * gamma;
        self.min_edge = self.min_edge.min(gamma);
    }

    fn wrong(&self, i: usize, score: f64) -> bool {
        sign(score) != self.ds.label(i)
    }

    fn error(&self) -> f64 {
        self.error_where(|_| true).unwrap_or(0.0)
    }

    /// Error if `eta · h` were appended, without appending it.
    fn error_with(&self, h: &Stump, eta: f64) -> f64 {
        let wrong = (0..self.ds.n())
            .filter(|&i| self.wrong(i, self.scores[i] + eta * h.predict(self.ds.row(i))))
            .count();
        wrong as f64 / self.ds.n() as f64
    }

    fn error_where(&self, keep: impl Fn(usize) -> bool) -> Option<f64> {
        let (mut total, mut wrong) = (0usize, 0usize);
        for i in (0..self.ds.n()).filter(|&i| keep(i)) {
            total += 1;
            if self.wrong(i, self.scores[i]) {
                wrong += 1;
            }
        }
        (total > 0).then(|| wrong as f64 / total as f64)
    }

    fn margin(&self) -> f64 {
        let total = self.ensemble.total_eta();
        self.scores
            .iter()
            .enumerate()
            .map(|(i, s)| self.ds.label(i) * s / total)
            .fold(f64::INFINITY, f64::min)
    }
}

fn weight_stats(w: &[f64]) -> (f64, usize) {
    let max = w.iter().cloned().fold(0.0, f64::max);
    (max, w.iter().filter(|&&v| v != 0.0).count())
}

/// Returns the stump and edge, or `None` if the run should stop on a zero edge.
fn next_stump(learner: &StumpLearner, w: &[f64], t: usize) -> Result<Option<(Stump, f64)>> {
    let (h, gamma) = learner.train(w)?;
    if gamma <= EDGE_TOL {
        if t == 1 {
            return Err(Error::NoWeakLearnability(format!(
                "best stump has edge {gamma} under the initial distribution"
            )));
        }
        return Ok(None);
    }
    Ok(Some((h, gamma)))
}

#[derive(Clone, Copy, PartialEq)]
enum Schedule {
    Constant,
    InverseSqrt,
}

#[derive(Clone, Copy, PartialEq)]
enum Update {
    Active,
    Lazy,
}

fn subset_sizes(flags: Option<&[Subset]>, n: usize) -> (usize, usize) {
    match flags {
        Some(f) => {
            let b = f.iter().filter(|&&s| s == Subset::B).count();
            (n - b, b)
        }
        None => (n, 0),
    }
}

/// Shared loop for the mirror-ascent family: active or lazy update, projection
/// onto `set`, constant or `1/√t` step schedule.
fn mirror_ascent(
    config: &BoosterConfig,
    ds: &Dataset,
    set: ConstraintSet,
    update: Update,
    schedule: Schedule,
) -> Result<BoostRun> {
    let n = ds.n();
    let g = Geometry::for_samples(config.geometry, n);
    let l = g.dual_norm_sq_bound();
    let learner = StumpLearner::new(ds);
    let mut tally = Tally::new(ds);

    let uniform = vec![1.0 / n as f64; n];
    let mut w = uniform.clone();
    // Lazy runs keep the dual image of the unprojected iterate.
    let mut dual = g.mirror_map(&uniform)?;
    let mut z = uniform;

    let flags = ds.subsets();
    let (n_a, n_b) = subset_sizes(flags, n);
    let point_mass = bounds::point_mass_divergence(config.geometry, n);

    let mut rounds = Vec::new();
    let mut stop = StopReason::MaxRounds;
    for t in 1..=config.max_rounds {
        let Some((h, gamma)) = next_stump(&learner, &w, t)? else {
            stop = StopReason::ZeroEdge;
            break;
        };
        let d = loss_vector(ds, &h);
        let eta = match schedule {
            Schedule::Constant => gamma / l,
            Schedule::InverseSqrt => gamma / (l * (t as f64).sqrt()),
        };

        match update {
            Update::Active => {
                let mut theta = g.mirror_map(&w)?;
                for (th, di) in theta.iter_mut().zip(d.iter()) {
                    *th += eta * di;
                }
                z = g.inverse_mirror_map(&theta);
            }
            Update::Lazy => {
                for (th, di) in dual.iter_mut().zip(d.iter()) {
                    *th += eta * di;
                }
                z = if g.is_entropy() {
                    // Entropic projections are scale invariant; shift before exp.
                    let top = dual.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    dual.iter().map(|th| (th - top).exp()).collect()
                } else {
                    g.inverse_mirror_map(&dual)
                };
            }
        }
        w = projection::project(&g, &set, &z)?;
        tally.add(h, gamma, eta);

        let train_error = tally.error();
        let (max_weight, nnz) = weight_stats(&w);
        let margin = tally.margin();
        let mut rec = RoundTrace {
            t,
            gamma,
            eta,
            train_error,
            bound: 0.0,
            max_weight,
            nnz,
            margin: Some(margin),
            nu: None,
            eps_a: None,
            eps_b: None,
            bound_b: None,
            y_norm: None,
            y_norm_next: None,
            alpha: None,
        };
        let s = tally.sum_sq_edges;
        match config.algorithm {
            Algorithm::MaxMargin => {
                let nu = bounds::max_margin_nu(t, tally.min_edge, l, point_mass);
                rec.nu = Some(nu);
                rec.bound = tally.min_edge - nu;
            }
            Algorithm::Smooth { k } => rec.bound = bounds::smooth(config.geometry, s, k),
            Algorithm::Combined { k } => {
                let flags = flags.expect("combined runs are validated to carry subset flags");
                rec.eps_a = tally.error_where(|i| flags[i] == Subset::A);
                rec.eps_b = tally.error_where(|i| flags[i] == Subset::B);
                if n_b > 0 {
                    let b = bounds::mirror_ascent_subset(config.geometry, s, n, n_b);
                    rec.bound_b = Some(b.max(1.0 / k));
                }
                rec.bound = if n_a > 0 {
                    bounds::mirror_ascent_subset(config.geometry, s, n, n_a)
                } else {
                    rec.bound_b.unwrap_or(1.0)
                };
            }
            _ => rec.bound = bounds::mirror_ascent(config.geometry, s),
        }

        let reached = match config.algorithm {
            Algorithm::MaxMargin => false,
            Algorithm::Combined { k } => {
                rec.eps_a.unwrap_or(0.0) <= config.target_error
                    && rec.eps_b.unwrap_or(0.0) <= 1.0 / k
            }
            _ => train_error <= config.target_error,
        };
        rounds.push(rec);
        if reached {
            stop = StopReason::TargetReached;
            break;
        }
    }

    let auxiliary = (update == Update::Lazy).then_some(z);
    Ok(BoostRun {
        ensemble: tally.ensemble,
        weights: w,
        auxiliary,
        rounds,
        stop,
    })
}

/// MABoost with `η_t = γ_t/L`, active or lazy update, projected onto the simplex.
pub fn run_maboost(config: &BoosterConfig, ds: &Dataset) -> Result<BoostRun> {
    let update = match config.algorithm {
        Algorithm::MaBoostActive => Update::Active,
        Algorithm::MaBoostLazy => Update::Lazy,
        _ => return Err(wrong_algorithm(config, "run_maboost")),
    };
    config.validate()?;
    mirror_ascent(
        config,
        ds,
        ConstraintSet::Simplex,
        update,
        Schedule::Constant,
    )
}

/// Active MABoost with `η_t = γ_t/(L√t)`. Runs the full round budget; the
/// trace records the margin and its guaranteed lower bound.
pub fn run_max_margin(config: &BoosterConfig, ds: &Dataset) -> Result<BoostRun> {
    if config.algorithm != Algorithm::MaxMargin {
        return Err(wrong_algorithm(config, "run_max_margin"));
    }
    config.validate()?;
    mirror_ascent(
        config,
        ds,
        ConstraintSet::Simplex,
        Update::Active,
        Schedule::InverseSqrt,
    )
}

/// Active MABoost projected onto the capped simplex `w_i ≤ k/N`.
pub fn run_smooth(config: &BoosterConfig, ds: &Dataset) -> Result<BoostRun> {
    let Algorithm::Smooth { k } = config.algorithm else {
        return Err(wrong_algorithm(config, "run_smooth"));
    };
    config.validate()?;
    let cap = (k / ds.n() as f64).min(1.0);
    mirror_ascent(
        config,
        ds,
        ConstraintSet::CappedSimplex { cap },
        Update::Active,
        Schedule::Constant,
    )
}

/// Active MABoost over the mixed set: `B` samples capped at `k/N_B`, `A`
/// samples uncapped. Stops once `ε_A ≤ target_error` and `ε_B ≤ 1/k`.
pub fn run_combined(config: &BoosterConfig, ds: &Dataset) -> Result<BoostRun> {
    let Algorithm::Combined { k } = config.algorithm else {
        return Err(wrong_algorithm(config, "run_combined"));
    };
    config.validate()?;
    let flags = ds
        .subsets()
        .ok_or_else(|| Error::Config("combined boosting needs A/B subset flags".into()))?;
    let (_, n_b) = subset_sizes(Some(flags), ds.n());
    let cap_b = if n_b > 0 {
        k / n_b as f64
    } else {
        f64::INFINITY
    };
    let caps = flags
        .iter()
        .map(|s| match s {
            Subset::A => f64::INFINITY,
            Subset::B => cap_b,
        })
        .collect();
    mirror_ascent(
        config,
        ds,
        ConstraintSet::MixedCaps(caps),
        Update::Active,
        Schedule::Constant,
    )
}

/// SparseBoost: additive step on unnormalized weights `y`, soft-thresholded
/// onto the positive orthant, normalized for training.
pub fn run_sparse(config: &BoosterConfig, ds: &Dataset) -> Result<BoostRun> {
    let Algorithm::Sparse { alpha: mode } = config.algorithm else {
        return Err(wrong_algorithm(config, "run_sparse"));
    };
    config.validate()?;
    let n = ds.n();
    let nf = n as f64;
    let learner = StumpLearner::new(ds);
    let mut tally = Tally::new(ds);
    let c = mode.bound_constant();

    let mut y = vec![1.0 / nf; n];
    let mut w = y.clone();
    let mut weighted_sum = 0.0;
    let mut rounds = Vec::new();
    let mut stop = StopReason::MaxRounds;
    for t in 1..=config.max_rounds {
        let y_norm: f64 = y.iter().sum();
        let Some((h, gamma)) = next_stump(&learner, &w, t)? else {
            stop = StopReason::ZeroEdge;
            break;
        };
        let d = loss_vector(ds, &h);
        let (eta, alpha) = match mode {
            AlphaMode::Zero => (gamma * y_norm / nf, 0.0),
            AlphaMode::Half => (gamma * y_norm / (2.0 * nf), (0.5 * gamma * y_norm).min(1.0)),
        };
        let z: Vec<f64> = y
            .iter()
            .zip(d.iter())
            .map(|(yi, di)| yi + eta * di)
            .collect();
        y = projection::project_orthant_l1(&z, alpha * eta);
        tally.add(h, gamma, eta);
        weighted_sum += gamma * gamma * y_norm * y_norm;

        let y_next: f64 = y.iter().sum();
        let collapsed = y_next <= 0.0;
        w = if collapsed {
            Vec::new()
        } else {
            y.iter().map(|v| v / y_next).collect()
        };
        let (max_weight, nnz) = weight_stats(&w);
        let train_error = tally.error();
        rounds.push(RoundTrace {
            t,
            gamma,
            eta,
            train_error,
            bound: bounds::sparse(c, weighted_sum),
            max_weight,
            nnz,
            margin: Some(tally.margin()),
            nu: None,
            eps_a: None,
            eps_b: None,
            bound_b: None,
            y_norm: Some(y_norm),
            y_norm_next: Some(y_next),
            alpha: Some(alpha),
        });
        if train_error <= config.target_error {
            stop = StopReason::TargetReached;
            break;
        }
        if collapsed {
            stop = StopReason::DistributionCollapsed;
            break;
        }
    }
    Ok(BoostRun {
        ensemble: tally.ensemble,
        weights: w,
        auxiliary: Some(y),
        rounds,
        stop,
    })
}

/// MadaBoost variant: lazy entropic update `z ← z·exp(ηd)` from `z₁ = 1`,
/// clamp to the unit hypercube, normalize. `η_t` is resolved per [`MadaEta`].
pub fn run_mada(config: &BoosterConfig, ds: &Dataset) -> Result<BoostRun> {
    let Algorithm::Mada { eta: rule } = config.algorithm else {
        return Err(wrong_algorithm(config, "run_mada"));
    };
    config.validate()?;
    let n = ds.n();
    let g = Geometry::entropy();
    let learner = StumpLearner::new(ds);
    let mut tally = Tally::new(ds);

    let mut log_z = vec![0.0; n];
    let mut y = vec![1.0; n];
    let mut w = vec![1.0 / n as f64; n];
    let mut prev_error = 1.0;
    let mut rounds = Vec::new();
    let mut stop = StopReason::MaxRounds;
    for t in 1..=config.max_rounds {
        let y_norm: f64 = y.iter().sum();
        let Some((h, gamma)) = next_stump(&learner, &w, t)? else {
            stop = StopReason::ZeroEdge;
            break;
        };
        let d = loss_vector(ds, &h);
        let mut eta = prev_error * gamma;
        if rule == MadaEta::FixedPoint {
            let refined = tally.error_with(&h, eta) * gamma;
            if refined > 0.0 {
                eta = refined;
            }
        }
        for (lz, di) in log_z.iter_mut().zip(d.iter()) {
            *lz += eta * di;
        }
        let z: Vec<f64> = log_z.iter().map(|v| v.exp()).collect();
        y = projection::project_hypercube_entropic(&z)?;
        w = projection::project_simplex(&g, &y)?;
        tally.add(h, gamma, eta);

        let train_error = tally.error();
        let y_next: f64 = y.iter().sum();
        let (max_weight, nnz) = weight_stats(&w);
        rounds.push(RoundTrace {
            t,
            gamma,
            eta,
            train_error,
            bound: bounds::mada(t, tally.min_edge),
            max_weight,
            nnz,
            margin: Some(tally.margin()),
            nu: None,
            eps_a: None,
            eps_b: None,
            bound_b: None,
            y_norm: Some(y_norm),
            y_norm_next: Some(y_next),
            alpha: None,
        });
        prev_error = train_error;
        if train_error <= config.target_error {
            stop = StopReason::TargetReached;
            break;
        }
    }
    Ok(BoostRun {
        ensemble: tally.ensemble,
        weights: w,
        auxiliary: Some(y),
        rounds,
        stop,
    })
}
