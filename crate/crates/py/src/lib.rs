//! Python bindings: geometries, projections, data generators and loaders,
//! the stump learner and every booster.
//!
//! Errors from the core crate surface as `ValueError`, except a weak learner
//! with no edge on the first round (`RuntimeError`) and I/O (`OSError`).

use ::maboost as core;
use core::boost::{self, BoostRun};
use core::projection;
use core::{Algorithm, AlphaMode, BoosterConfig, ConstraintSet, GeometryKind, MadaEta, RoundTrace};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: core::Error) -> PyErr {
    match e {
        core::Error::NoWeakLearnability(_) => PyRuntimeError::new_err(e.to_string()),
        core::Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn kind_of(name: &str) -> PyResult<GeometryKind> {
    name.parse().map_err(to_py)
}

/// A Bregman geometry: `"quadratic"` (needs the dimension `n` for `L = N`)
/// or `"entropy"`.
#[pyclass(name = "Geometry", frozen)]
struct PyGeometry {
    inner: core::Geometry,
}

#[pymethods]
impl PyGeometry {
    #[new]
    #[pyo3(signature = (kind, n = 1))]
    fn new(kind: &str, n: usize) -> PyResult<Self> {
        Ok(PyGeometry {
            inner: core::Geometry::for_samples(kind_of(kind)?, n.max(1)),
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().name()
    }

    #[getter]
    fn dual_norm_sq_bound(&self) -> f64 {
        self.inner.dual_norm_sq_bound()
    }

    fn potential(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.potential(&x).map_err(to_py)
    }

    fn mirror_map(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.mirror_map(&x).map_err(to_py)
    }

    fn inverse_mirror_map(&self, theta: Vec<f64>) -> Vec<f64> {
        self.inner.inverse_mirror_map(&theta)
    }

    fn divergence(&self, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
        self.inner
            .divergence(&x, &y)
            .map(|d| d.value())
            .map_err(to_py)
    }

    fn norm(&self, x: Vec<f64>) -> f64 {
        self.inner.norm(&x)
    }

    fn dual_norm(&self, x: Vec<f64>) -> f64 {
        self.inner.dual_norm(&x)
    }

    fn __repr__(&self) -> String {
        format!(
            "Geometry('{}', L={})",
            self.kind(),
            self.dual_norm_sq_bound()
        )
    }
}

/// Projects `z` onto `set`: `"simplex"`, `"capped"` (with `cap`),
/// `"mixed"` (with `caps`), `"hypercube"` or `"orthant"`.
#[pyfunction]
#[pyo3(signature = (geometry, set, z, cap = None, caps = None))]
fn project(
    geometry: &PyGeometry,
    set: &str,
    z: Vec<f64>,
    cap: Option<f64>,
    caps: Option<Vec<f64>>,
) -> PyResult<Vec<f64>> {
    let set = match set {
        "simplex" => ConstraintSet::Simplex,
        "capped" => ConstraintSet::CappedSimplex {
            cap: cap.ok_or_else(|| PyValueError::new_err("capped projection needs cap"))?,
        },
        "mixed" => ConstraintSet::MixedCaps(
            caps.ok_or_else(|| PyValueError::new_err("mixed projection needs caps"))?,
        ),
        "hypercube" => ConstraintSet::UnitHypercube,
        "orthant" => ConstraintSet::PositiveOrthant,
        other => return Err(PyValueError::new_err(format!("unknown set '{other}'"))),
    };
    set.check_feasible(z.len()).map_err(to_py)?;
    projection::project(&geometry.inner, &set, &z).map_err(to_py)
}

/// Soft-thresholded projection onto the positive orthant, `max(0, z − λ)`.
#[pyfunction]
fn project_orthant_l1(z: Vec<f64>, lam: f64) -> PyResult<Vec<f64>> {
    if lam.is_nan() || lam < 0.0 || z.iter().any(|v| !v.is_finite()) {
        return Err(PyValueError::new_err("need finite z and lam >= 0"));
    }
    Ok(projection::project_orthant_l1(&z, lam))
}

#[pyclass(name = "Dataset", frozen)]
struct PyDataset {
    inner: core::Dataset,
}

#[pymethods]
impl PyDataset {
    /// `subsets`, when given, holds `"A"`/`"B"` per sample.
    #[new]
    #[pyo3(signature = (rows, labels, subsets = None))]
    fn new(rows: Vec<Vec<f64>>, labels: Vec<f64>, subsets: Option<Vec<String>>) -> PyResult<Self> {
        let mut ds = core::Dataset::new(rows, labels).map_err(to_py)?;
        if let Some(flags) = subsets {
            let flags = flags
                .iter()
                .map(|f| match f.as_str() {
                    "A" => Ok(core::Subset::A),
                    "B" => Ok(core::Subset::B),
                    other => Err(PyValueError::new_err(format!(
                        "subset '{other}' is not A or B"
                    ))),
                })
                .collect::<PyResult<Vec<_>>>()?;
            ds = ds.with_subsets(flags).map_err(to_py)?;
        }
        Ok(PyDataset { inner: ds })
    }

    #[staticmethod]
    fn blobs(seed: u64, n: usize, margin: f64) -> PyResult<Self> {
        core::data::gen_blobs(seed, n, margin)
            .map(|inner| PyDataset { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn noisy(seed: u64, n: usize, flip_rate: f64) -> PyResult<Self> {
        core::data::gen_noisy(seed, n, flip_rate)
            .map(|inner| PyDataset { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn diagonal(seed: u64, n: usize, margin: f64) -> PyResult<Self> {
        core::data::gen_diagonal(seed, n, margin)
            .map(|inner| PyDataset { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn combined(seed: u64, n_a: usize, n_b: usize, margin: f64, flip_rate: f64) -> PyResult<Self> {
        core::data::gen_combined(seed, n_a, n_b, margin, flip_rate)
            .map(|inner| PyDataset { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (path, label_column = "label", subset_column = None))]
    fn load_csv(path: &str, label_column: &str, subset_column: Option<&str>) -> PyResult<Self> {
        core::data::load_csv(path, label_column, subset_column)
            .map(|inner| PyDataset { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn load_libsvm(path: &str) -> PyResult<Self> {
        core::data::load_libsvm(path)
            .map(|inner| PyDataset { inner })
            .map_err(to_py)
    }

    fn save_csv(&self, path: &str) -> PyResult<()> {
        self.inner.save_csv(path).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn labels(&self) -> Vec<f64> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.inner.n())
            .map(|i| self.inner.row(i).to_vec())
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }
}

/// Weighted vote of stumps.
#[pyclass(name = "Ensemble", frozen)]
struct PyEnsemble {
    inner: core::Ensemble,
}

#[pymethods]
impl PyEnsemble {
    /// `(feature, threshold, polarity, eta)` per member.
    #[getter]
    fn members(&self) -> Vec<(usize, f64, i8, f64)> {
        self.inner
            .members()
            .iter()
            .map(|(h, eta)| (h.feature, h.threshold, h.polarity, *eta))
            .collect()
    }

    fn predict(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.predict(&x).map_err(to_py)
    }

    fn margin(&self, data: &PyDataset) -> PyResult<f64> {
        self.inner.margin(&data.inner).map_err(to_py)
    }

    fn error(&self, data: &PyDataset) -> PyResult<f64> {
        self.inner.error(&data.inner).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Output of [`train`]: the ensemble, the final distribution and one dict
/// per round.
#[pyclass(name = "BoostResult", frozen)]
struct PyBoostResult {
    #[pyo3(get)]
    ensemble: Py<PyEnsemble>,
    #[pyo3(get)]
    weights: Vec<f64>,
    #[pyo3(get)]
    auxiliary: Option<Vec<f64>>,
    #[pyo3(get)]
    stop: &'static str,
    rounds: Vec<RoundTrace>,
}

fn round_dict<'py>(py: Python<'py>, r: &RoundTrace) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("t", r.t)?;
    d.set_item("gamma", r.gamma)?;
    d.set_item("eta", r.eta)?;
    d.set_item("train_error", r.train_error)?;
    d.set_item("bound", r.bound)?;
    d.set_item("max_weight", r.max_weight)?;
    d.set_item("nnz", r.nnz)?;
    let optional = [
        ("margin", r.margin),
        ("nu", r.nu),
        ("eps_A", r.eps_a),
        ("eps_B", r.eps_b),
        ("bound_B", r.bound_b),
        ("y_norm", r.y_norm),
        ("y_norm_next", r.y_norm_next),
        ("alpha", r.alpha),
    ];
    for (key, value) in optional {
        if let Some(v) = value {
            d.set_item(key, v)?;
        }
    }
    Ok(d)
}

#[pymethods]
impl PyBoostResult {
    #[getter]
    fn trace<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.rounds.iter().map(|r| round_dict(py, r)).collect()
    }

    #[getter]
    fn rounds(&self) -> usize {
        self.rounds.len()
    }

    #[getter]
    fn final_error(&self) -> f64 {
        self.rounds.last().map_or(1.0, |r| r.train_error)
    }
}

fn stop_name(run: &BoostRun) -> &'static str {
    match run.stop {
        core::StopReason::MaxRounds => "max_rounds",
        core::StopReason::TargetReached => "target_reached",
        core::StopReason::ZeroEdge => "zero_edge",
        core::StopReason::DistributionCollapsed => "distribution_collapsed",
    }
}

/// Trains a booster. `algo` is one of `maboost-active`, `maboost-lazy`,
/// `maxmargin`, `smooth`, `combined`, `sparse`, `mada`.
#[pyfunction]
#[pyo3(signature = (data, algo, geometry = None, rounds = 100, target_eps = None, k = None, alpha_mode = "zero", mada_eta = "previous_error"))]
#[allow(clippy::too_many_arguments)]
fn train(
    py: Python<'_>,
    data: &PyDataset,
    algo: &str,
    geometry: Option<&str>,
    rounds: usize,
    target_eps: Option<f64>,
    k: Option<f64>,
    alpha_mode: &str,
    mada_eta: &str,
) -> PyResult<PyBoostResult> {
    let need_k = || k.ok_or_else(|| PyValueError::new_err(format!("{algo} needs k")));
    let algorithm = match algo {
        "maboost-active" => Algorithm::MaBoostActive,
        "maboost-lazy" => Algorithm::MaBoostLazy,
        "maxmargin" => Algorithm::MaxMargin,
        "smooth" => Algorithm::Smooth { k: need_k()? },
        "combined" => Algorithm::Combined { k: need_k()? },
        "sparse" => Algorithm::Sparse {
            alpha: match alpha_mode {
                "zero" => AlphaMode::Zero,
                "half" => AlphaMode::Half,
                other => {
                    return Err(PyValueError::new_err(format!(
                        "unknown alpha_mode '{other}'"
                    )))
                }
            },
        },
        "mada" => Algorithm::Mada {
            eta: match mada_eta {
                "previous_error" => MadaEta::PreviousError,
                "fixed_point" => MadaEta::FixedPoint,
                other => return Err(PyValueError::new_err(format!("unknown mada_eta '{other}'"))),
            },
        },
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown algorithm '{other}'"
            )))
        }
    };
    let kind = match geometry {
        Some(g) => kind_of(g)?,
        None => algorithm
            .forced_geometry()
            .unwrap_or(GeometryKind::NegativeEntropy),
    };
    let mut config = BoosterConfig::new(algorithm, kind).rounds(rounds);
    if let Some(eps) = target_eps {
        config = config.target(eps);
    }
    let run = boost::run(&config, &data.inner).map_err(to_py)?;
    Ok(PyBoostResult {
        ensemble: Py::new(
            py,
            PyEnsemble {
                inner: run.ensemble.clone(),
            },
        )?,
        stop: stop_name(&run),
        weights: run.weights,
        auxiliary: run.auxiliary,
        rounds: run.rounds,
    })
}

/// Best stump for `weights`: `(feature, threshold, polarity, edge)`.
#[pyfunction]
fn train_stump(data: &PyDataset, weights: Vec<f64>) -> PyResult<(usize, f64, i8, f64)> {
    let (h, gamma) = core::weaklearn::train_stump(&data.inner, &weights).map_err(to_py)?;
    Ok((h.feature, h.threshold, h.polarity, gamma))
}

#[pymodule]
fn pymaboost(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGeometry>()?;
    m.add_class::<PyDataset>()?;
    m.add_class::<PyEnsemble>()?;
    m.add_class::<PyBoostResult>()?;
    m.add_function(wrap_pyfunction!(project, m)?)?;
    m.add_function(wrap_pyfunction!(project_orthant_l1, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(train_stump, m)?)?;
    Ok(())
}
