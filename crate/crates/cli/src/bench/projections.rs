//! Projection oracle suite and the divergence identities, on draws from
//! [`SplitMix64`] so the numbers are the same on every run.

use maboost::oracle;
use maboost::projection;
use maboost::rng::SplitMix64;
use maboost::{ConstraintSet, Geometry, GeometryKind};

const INSTANCES: usize = 100;
const DRAWS: usize = 1000;
const ORACLE_TOL: f64 = 1e-6;
const IDENTITY_TOL: f64 = 1e-10;

/// Inequalities that hold with equality (entropy on the simplex, the
/// unclamped quadratic case) come out a few ulps either side of zero, so
/// each sign check allows this many ulps of the magnitude of its terms.
const ROUNDING_ULPS: f64 = 64.0;

const KINDS: [GeometryKind; 2] = [GeometryKind::Quadratic, GeometryKind::NegativeEntropy];

pub struct SuiteReport {
    /// `(label, instances, worst deviation)` per geometry/set pair.
    pub oracle: Vec<(String, usize, f64)>,
    /// `(label, draws, failures, worst value)` per identity or inequality check.
    pub checks: Vec<(String, usize, usize, f64)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.oracle
            .iter()
            .all(|(_, k, dev)| *k >= INSTANCES && *dev <= ORACLE_TOL)
            && self
                .checks
                .iter()
                .all(|(_, k, fails, _)| *k >= DRAWS && *fails == 0)
    }
}

fn dim(rng: &mut SplitMix64) -> usize {
    2 + rng.below(5)
}

fn positive(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.uniform(0.01, 5.0)).collect()
}

fn input(rng: &mut SplitMix64, kind: GeometryKind, n: usize) -> Vec<f64> {
    match kind {
        GeometryKind::Quadratic => (0..n).map(|_| rng.uniform(-2.0, 3.0)).collect(),
        GeometryKind::NegativeEntropy => positive(rng, n),
    }
}

/// A random point with `Σx = 1` and `0 ≤ x_i ≤ caps_i`: a random direction
/// mixed into a feasible anchor only as far as the caps allow.
fn feasible(rng: &mut SplitMix64, caps: &[f64]) -> Vec<f64> {
    let n = caps.len();
    let bounded: Vec<f64> = caps.iter().map(|c| c.min(1.0)).collect();
    let mass: f64 = bounded.iter().sum();
    let anchor: Vec<f64> = bounded.iter().map(|c| c / mass).collect();
    let raw = positive(rng, n);
    let total: f64 = raw.iter().sum();
    let p: Vec<f64> = raw.iter().map(|v| v / total).collect();
    let mut lambda: f64 = 1.0;
    for i in 0..n {
        if p[i] > bounded[i] {
            lambda = lambda.min((bounded[i] - anchor[i]) / (p[i] - anchor[i]));
        }
    }
    let lambda = lambda.clamp(0.0, 1.0) * rng.next_f64();
    (0..n)
        .map(|i| ((1.0 - lambda) * anchor[i] + lambda * p[i]).min(bounded[i]))
        .collect()
}

fn deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn div(g: &Geometry, x: &[f64], y: &[f64]) -> f64 {
    g.divergence(x, y).expect("in-domain divergence").value()
}

fn caps_for(rng: &mut SplitMix64, n: usize, mixed: bool) -> Vec<f64> {
    let k = rng.uniform(1.0, 3.0);
    if !mixed {
        return vec![(k / n as f64).min(1.0); n];
    }
    let free: Vec<bool> = (0..n).map(|_| rng.below(2) == 0).collect();
    let n_b = free.iter().filter(|f| !**f).count().max(1);
    free.iter()
        .map(|f| {
            if *f {
                f64::INFINITY
            } else {
                (k / n_b as f64).min(1.0)
            }
        })
        .collect()
}

fn oracle_checks(rng: &mut SplitMix64) -> Vec<(String, usize, f64)> {
    let mut out = Vec::new();
    for kind in KINDS {
        for set in ["simplex", "capped", "mixed"] {
            let mut worst: f64 = 0.0;
            for _ in 0..INSTANCES {
                let n = dim(rng);
                let z = input(rng, kind, n);
                let g = Geometry::for_samples(kind, n);
                let caps = match set {
                    "simplex" => vec![f64::INFINITY; n],
                    "capped" => caps_for(rng, n, false),
                    _ => caps_for(rng, n, true),
                };
                let fast = match set {
                    "simplex" => projection::project_simplex(&g, &z),
                    "capped" => projection::project_capped_simplex(&g, &z, caps[0]),
                    _ => projection::project_mixed(&g, &z, &caps),
                }
                .expect("feasible projection");
                let slow =
                    oracle::capped_simplex_by_enumeration(&g, &z, &caps).expect("feasible set");
                worst = worst.max(deviation(&fast, &slow));
            }
            out.push((format!("{}/{set}", kind.name()), INSTANCES, worst));
        }
        let mut worst: f64 = 0.0;
        for _ in 0..INSTANCES {
            let n = dim(rng);
            let z = input(rng, kind, n);
            let g = Geometry::for_samples(kind, n);
            let fast = projection::project(&g, &ConstraintSet::UnitHypercube, &z).unwrap();
            let slow: Vec<f64> = match kind {
                GeometryKind::Quadratic => z
                    .iter()
                    .map(|&zi| oracle::minimize_1d_by_derivative(|y| y - zi, 0.0, 1.0))
                    .collect(),
                GeometryKind::NegativeEntropy => oracle::hypercube_entropic_by_bisection(&z),
            };
            worst = worst.max(deviation(&fast, &slow));
        }
        out.push((format!("{}/hypercube", kind.name()), INSTANCES, worst));
    }
    let mut worst: f64 = 0.0;
    for _ in 0..INSTANCES {
        let n = dim(rng);
        let z = input(rng, GeometryKind::Quadratic, n);
        let lambda = rng.uniform(0.0, 1.5);
        worst = worst.max(deviation(
            &projection::project_orthant_l1(&z, lambda),
            &oracle::orthant_l1_by_bisection(&z, lambda),
        ));
    }
    out.push(("quadratic/orthant-l1".into(), INSTANCES, worst));
    let mut worst: f64 = 0.0;
    for _ in 0..INSTANCES {
        let n = dim(rng);
        let z = positive(rng, n);
        let fast =
            projection::project(&Geometry::entropy(), &ConstraintSet::PositiveOrthant, &z).unwrap();
        let slow: Vec<f64> = z
            .iter()
            .map(|&zi| oracle::minimize_1d_by_derivative(|y| (y / zi).ln(), 0.0, 2.0 * zi + 1.0))
            .collect();
        worst = worst.max(deviation(&fast, &slow));
    }
    out.push(("entropy/orthant".into(), INSTANCES, worst));
    out
}

struct Tally {
    label: String,
    draws: usize,
    failures: usize,
    worst: f64,
}

impl Tally {
    fn new(label: &str) -> Self {
        Tally {
            label: label.into(),
            draws: 0,
            failures: 0,
            worst: f64::NEG_INFINITY,
        }
    }

    /// An inequality `slack ≥ 0` whose terms have total magnitude `scale`;
    /// `worst` tracks the largest shortfall seen.
    fn nonnegative(&mut self, slack: f64, scale: f64) {
        self.draws += 1;
        self.worst = self.worst.max(-slack);
        if !(slack >= -ROUNDING_ULPS * f64::EPSILON * scale.max(1.0)) {
            self.failures += 1;
        }
    }

    fn identity(&mut self, gap: f64) {
        self.draws += 1;
        self.worst = self.worst.max(gap.abs());
        if !(gap.abs() <= IDENTITY_TOL) {
            self.failures += 1;
        }
    }

    fn done(self) -> (String, usize, usize, f64) {
        (self.label, self.draws, self.failures, self.worst)
    }
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn identity_checks(rng: &mut SplitMix64) -> Vec<(String, usize, usize, f64)> {
    let mut relaxed = Tally::new("pythagorean-relaxed");
    let mut exact = Tally::new("pythagorean-exact");
    let mut three = Tally::new("three-point");
    let mut fenchel = Tally::new("norm-duality");
    let mut double = Tally::new("double-projection");
    let mut cube_identity = Tally::new("hypercube-closed-form");
    let mut cube_vi = Tally::new("hypercube-variational");
    for draw in 0..DRAWS {
        let kind = KINDS[draw % 2];
        let n = dim(rng);
        let g = Geometry::for_samples(kind, n);

        let z = input(rng, kind, n);
        let caps = if draw % 4 < 2 {
            vec![f64::INFINITY; n]
        } else {
            caps_for(rng, n, false)
        };
        let x = feasible(rng, &caps);
        let y = projection::project_mixed(&g, &z, &caps).unwrap();
        let (xz, xy, yz) = (div(&g, &x, &z), div(&g, &x, &y), div(&g, &y, &z));
        relaxed.nonnegative(xz - xy, xz + xy);
        exact.nonnegative(xz - xy - yz, xz + xy + yz);

        let (a, b, c) = (
            input(rng, kind, n),
            input(rng, kind, n),
            input(rng, kind, n),
        );
        let lhs = dot(
            &sub(&a, &b),
            &sub(&g.mirror_map(&c).unwrap(), &g.mirror_map(&b).unwrap()),
        );
        three.identity(lhs - (div(&g, &a, &b) - div(&g, &a, &c) + div(&g, &b, &c)));

        let (u, v): (Vec<f64>, Vec<f64>) = (0..n)
            .map(|_| (rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)))
            .unzip();
        let (nu, nv) = (g.norm(&u), g.dual_norm(&v));
        let bound = 0.5 * nu * nu + 0.5 * nv * nv;
        fenchel.nonnegative(bound - dot(&u, &v), 2.0 * bound);

        let x = feasible(rng, &vec![f64::INFINITY; n]);
        let w = projection::project_double(
            &g,
            &z,
            &ConstraintSet::UnitHypercube,
            &ConstraintSet::Simplex,
        )
        .unwrap();
        let (xz, xw) = (div(&g, &x, &z), div(&g, &x, &w));
        double.nonnegative(xz - xw, xz + xw);

        let zc = positive(rng, n);
        let yc = projection::project_hypercube_entropic(&zc).unwrap();
        let closed: Vec<f64> = zc.iter().map(|v| v.min(1.0)).collect();
        cube_identity.identity(deviation(&yc, &closed));
        let vpt: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let grad: Vec<f64> = yc.iter().zip(&zc).map(|(yi, zi)| (yi / zi).ln()).collect();
        let scale: f64 = grad.iter().map(|v| v.abs()).sum();
        cube_vi.nonnegative(dot(&sub(&vpt, &yc), &grad), scale);
    }
    [
        relaxed,
        exact,
        three,
        fenchel,
        double,
        cube_identity,
        cube_vi,
    ]
    .into_iter()
    .map(Tally::done)
    .collect()
}

pub fn run(seed: u64) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    SuiteReport {
        oracle: oracle_checks(&mut rng),
        checks: identity_checks(&mut rng),
    }
}
