//! Recomputes each round's bound from the edges recorded in a trace.

use maboost::bounds::{self, BOUND_SLACK};
use maboost::{Geometry, GeometryKind, RoundTrace};

use crate::trace::TraceHeader;
use crate::CliError;

/// Outcome of one bound family over a whole trace.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub family: String,
    pub rounds: usize,
    /// First failing round and a description of the failure.
    pub violation: Option<(usize, String)>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }

    pub fn line(&self) -> String {
        match &self.violation {
            None => format!("PASS {} ({} rounds)", self.family, self.rounds),
            Some((t, why)) => format!("FAIL {}: first violation at round {t}: {why}", self.family),
        }
    }
}

struct Family {
    name: String,
    violation: Option<(usize, String)>,
}

impl Family {
    fn new(name: impl Into<String>) -> Self {
        Family {
            name: name.into(),
            violation: None,
        }
    }

    /// Records the first round at which `observed ≤ limit + slack` fails.
    fn at_most(&mut self, t: usize, what: &str, observed: f64, limit: f64) {
        if self.violation.is_none() && !(observed <= limit + BOUND_SLACK) {
            self.violation = Some((t, format!("{what} {observed} > bound {limit}")));
        }
    }

    fn at_least(&mut self, t: usize, what: &str, observed: f64, limit: f64) {
        if self.violation.is_none() && !(observed >= limit - BOUND_SLACK) {
            self.violation = Some((t, format!("{what} {observed} < bound {limit}")));
        }
    }

    fn missing(&mut self, t: usize, field: &str) {
        if self.violation.is_none() {
            self.violation = Some((t, format!("record has no {field}")));
        }
    }

    fn report(self, rounds: usize) -> FamilyReport {
        FamilyReport {
            family: self.name,
            rounds,
            violation: self.violation,
        }
    }
}

fn require(v: Option<f64>, t: usize, field: &str, fam: &mut Family) -> Option<f64> {
    if v.is_none() {
        fam.missing(t, field);
    }
    v
}

pub fn verify(header: &TraceHeader, rounds: &[RoundTrace]) -> Result<Vec<FamilyReport>, CliError> {
    let kind: GeometryKind = header
        .geometry
        .parse()
        .map_err(|_| CliError::Parse(format!("unknown geometry '{}'", header.geometry)))?;
    let n = header.n;
    let k = || {
        header
            .k
            .ok_or_else(|| CliError::Parse("trace header has no k".into()))
    };
    let mut sum_sq = 0.0;
    let mut gamma_min = f64::INFINITY;
    let mut families: Vec<Family> = Vec::new();

    match header.algorithm.as_str() {
        "maboost-active" | "maboost-lazy" => {
            let mut fam = Family::new(format!("mirror-ascent-{}", kind.name()));
            for r in rounds {
                sum_sq += r.gamma * r.gamma;
                fam.at_most(
                    r.t,
                    "train_error",
                    r.train_error,
                    bounds::mirror_ascent(kind, sum_sq),
                );
            }
            families.push(fam);
        }
        "smooth" => {
            let k = k()?;
            let mut fam = Family::new("smooth");
            let mut cap = Family::new("smooth-cap");
            for r in rounds {
                sum_sq += r.gamma * r.gamma;
                fam.at_most(
                    r.t,
                    "train_error",
                    r.train_error,
                    bounds::smooth(kind, sum_sq, k),
                );
                // Caps hold exactly, so no slack here.
                if cap.violation.is_none() && r.max_weight > k / n as f64 {
                    cap.violation = Some((
                        r.t,
                        format!("max_weight {} > k/N {}", r.max_weight, k / n as f64),
                    ));
                }
            }
            families.extend([fam, cap]);
        }
        "combined" => {
            let k = k()?;
            let (n_a, n_b) = (header.n_a.unwrap_or(0), header.n_b.unwrap_or(0));
            let mut fam_a = Family::new("combined-A");
            let mut fam_b = Family::new("combined-B");
            for r in rounds {
                sum_sq += r.gamma * r.gamma;
                if n_a > 0 {
                    if let Some(e) = require(r.eps_a, r.t, "eps_A", &mut fam_a) {
                        fam_a.at_most(
                            r.t,
                            "eps_A",
                            e,
                            bounds::mirror_ascent_subset(kind, sum_sq, n, n_a),
                        );
                    }
                }
                if n_b > 0 {
                    if let Some(e) = require(r.eps_b, r.t, "eps_B", &mut fam_b) {
                        let b = bounds::mirror_ascent_subset(kind, sum_sq, n, n_b).max(1.0 / k);
                        fam_b.at_most(r.t, "eps_B", e, b);
                    }
                }
            }
            families.extend([fam_a, fam_b]);
        }
        "sparse" => {
            let c = header
                .alpha_mode
                .ok_or_else(|| CliError::Parse("trace header has no alpha_mode".into()))?
                .bound_constant();
            let mut fam = Family::new("sparse");
            let mut mass = Family::new("sparse-mass");
            for r in rounds {
                if let Some(y) = require(r.y_norm, r.t, "y_norm", &mut fam) {
                    sum_sq += r.gamma * r.gamma * y * y;
                    fam.at_most(r.t, "train_error", r.train_error, bounds::sparse(c, sum_sq));
                }
                if r.train_error > 0.0 {
                    if let Some(y) = require(r.y_norm_next, r.t, "y_norm_next", &mut mass) {
                        mass.at_least(r.t, "y_norm_next", y, 1.0 / n as f64);
                    }
                }
            }
            families.extend([fam, mass]);
        }
        "mada" => {
            let mut fam = Family::new("mada");
            let mut mass = Family::new("mada-mass");
            for r in rounds {
                gamma_min = gamma_min.min(r.gamma);
                let sq = 1.0 / (r.t as f64 * gamma_min * gamma_min);
                fam.at_most(r.t, "train_error^2", r.train_error * r.train_error, sq);
                if let Some(y) = require(r.y_norm_next, r.t, "y_norm_next", &mut mass) {
                    mass.at_least(r.t, "y_norm_next", y, n as f64 * r.train_error);
                }
            }
            families.extend([fam, mass]);
        }
        "maxmargin" => {
            let l = Geometry::for_samples(kind, n).dual_norm_sq_bound();
            let c = bounds::point_mass_divergence(kind, n);
            let mut fam = Family::new("max-margin");
            for r in rounds {
                gamma_min = gamma_min.min(r.gamma);
                if let Some(m) = require(r.margin, r.t, "margin", &mut fam) {
                    fam.at_least(
                        r.t,
                        "margin",
                        m,
                        bounds::margin_lower_bound(r.t, gamma_min, l, c),
                    );
                }
            }
            families.push(fam);
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown algorithm '{other}' in trace header"
            )))
        }
    }
    Ok(families
        .into_iter()
        .map(|f| f.report(rounds.len()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(algorithm: &str) -> TraceHeader {
        TraceHeader {
            schema: 1,
            algorithm: algorithm.into(),
            geometry: "quadratic".into(),
            n: 10,
            k: None,
            alpha_mode: None,
            mada_eta: None,
            n_a: None,
            n_b: None,
        }
    }

    fn round(t: usize, gamma: f64, err: f64) -> RoundTrace {
        RoundTrace {
            t,
            gamma,
            eta: gamma,
            train_error: err,
            bound: 0.0,
            max_weight: 0.1,
            nnz: 10,
            margin: None,
            nu: None,
            eps_a: None,
            eps_b: None,
            bound_b: None,
            y_norm: None,
            y_norm_next: None,
            alpha: None,
        }
    }

    #[test]
    fn quadratic_bound_uses_recorded_edges() {
        // After γ = 1, 1 the bound is 1/3.
        let ok = [round(1, 1.0, 0.5), round(2, 1.0, 1.0 / 3.0)];
        let reports = verify(&header("maboost-active"), &ok).unwrap();
        assert!(reports.iter().all(FamilyReport::passed));
        let bad = [round(1, 1.0, 0.5), round(2, 1.0, 0.34), round(3, 1.0, 0.9)];
        let reports = verify(&header("maboost-active"), &bad).unwrap();
        assert_eq!(reports[0].violation.as_ref().unwrap().0, 2);
    }

    #[test]
    fn sparse_needs_norms() {
        let mut h = header("sparse");
        h.alpha_mode = Some(maboost::AlphaMode::Zero);
        let reports = verify(&h, &[round(1, 0.5, 0.4)]).unwrap();
        assert!(!reports[0].passed());
        assert!(reports[0].line().contains("y_norm"));
    }

    #[test]
    fn unknown_algorithm_is_a_parse_error() {
        assert!(verify(&header("adaboost"), &[]).is_err());
    }
}
