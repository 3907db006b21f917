//! `train`, `predict` and `project`.

use std::io::Read;
use std::path::Path;

use maboost::boost::{self, BoostRun};
use maboost::data::{self, Dataset};
use maboost::projection::{self, ConstraintSet};
use maboost::{Algorithm, BoosterConfig, Geometry, GeometryKind, Subset};

use crate::args::{
    AlgoArg, DataOptions, DataSource, FormatArg, PredictArgs, ProjectArgs, TrainArgs,
};
use crate::model::Model;
use crate::trace::{self, TraceHeader, SCHEMA};
use crate::CliError;

/// Parses `blobs:SEED:N:MARGIN`, `noisy:SEED:N:FLIP`, `diagonal:SEED:N:MARGIN`
/// or `combined:SEED:NA:NB:FLIP` (blobs at margin 0.3 plus noisy B samples).
pub fn generate(spec: &str) -> Result<Dataset, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("cannot parse generator spec '{spec}'"));
    let seed: u64 = parts.get(1).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let int = |i: usize| {
        parts
            .get(i)
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(bad)
    };
    let real = |i: usize| {
        parts
            .get(i)
            .and_then(|s| s.parse::<f64>().ok())
            .ok_or_else(bad)
    };
    let ds = match (parts[0], parts.len()) {
        ("blobs", 4) => data::gen_blobs(seed, int(2)?, real(3)?)?,
        ("noisy", 4) => data::gen_noisy(seed, int(2)?, real(3)?)?,
        ("diagonal", 4) => data::gen_diagonal(seed, int(2)?, real(3)?)?,
        ("combined", 5) => data::gen_combined(seed, int(2)?, int(3)?, 0.3, real(4)?)?,
        _ => return Err(bad()),
    };
    Ok(ds)
}

pub fn load_data(
    source: &DataSource,
    opts: &DataOptions,
    want_subsets: bool,
) -> Result<Dataset, CliError> {
    if let Some(spec) = &source.generator {
        return generate(spec);
    }
    let path = source
        .data
        .as_deref()
        .ok_or_else(|| CliError::Usage("need --data or --gen".into()))?;
    let format = opts.format.unwrap_or_else(|| infer_format(path));
    let ds = match format {
        FormatArg::Libsvm => data::load_libsvm(path)?,
        FormatArg::Csv => {
            let subset =
                opts.subset_column
                    .as_deref()
                    .or(if want_subsets { Some("subset") } else { None });
            data::load_csv(path, &opts.label_column, subset)?
        }
    };
    Ok(ds)
}

fn infer_format(path: &Path) -> FormatArg {
    match path.extension().and_then(|e| e.to_str()) {
        Some("svm" | "libsvm") => FormatArg::Libsvm,
        _ => FormatArg::Csv,
    }
}

pub fn config_from_args(args: &TrainArgs) -> Result<BoosterConfig, CliError> {
    let need_k = || {
        args.k
            .ok_or_else(|| CliError::Usage(format!("--algo {} needs --k", algo_name(args.algo))))
    };
    let algorithm = match args.algo {
        AlgoArg::MaboostActive => Algorithm::MaBoostActive,
        AlgoArg::MaboostLazy => Algorithm::MaBoostLazy,
        AlgoArg::MaxMargin => Algorithm::MaxMargin,
        AlgoArg::Smooth => Algorithm::Smooth { k: need_k()? },
        AlgoArg::Combined => Algorithm::Combined { k: need_k()? },
        AlgoArg::Sparse => Algorithm::Sparse {
            alpha: args.alpha_mode.into(),
        },
        AlgoArg::Mada => Algorithm::Mada {
            eta: args.mada_eta.into(),
        },
    };
    let geometry = match args.geometry {
        Some(g) => g.into(),
        None => algorithm
            .forced_geometry()
            .unwrap_or(GeometryKind::NegativeEntropy),
    };
    let mut config = BoosterConfig::new(algorithm, geometry).rounds(args.rounds);
    if let Some(eps) = args.target_eps {
        config = config.target(eps);
    }
    config.validate()?;
    Ok(config)
}

fn algo_name(a: AlgoArg) -> &'static str {
    match a {
        AlgoArg::MaboostActive => "maboost-active",
        AlgoArg::MaboostLazy => "maboost-lazy",
        AlgoArg::MaxMargin => "maxmargin",
        AlgoArg::Smooth => "smooth",
        AlgoArg::Combined => "combined",
        AlgoArg::Sparse => "sparse",
        AlgoArg::Mada => "mada",
    }
}

pub fn header_for(config: &BoosterConfig, ds: &Dataset) -> TraceHeader {
    let (alpha_mode, mada_eta) = match config.algorithm {
        Algorithm::Sparse { alpha } => (Some(alpha), None),
        Algorithm::Mada { eta } => (None, Some(eta)),
        _ => (None, None),
    };
    let (n_a, n_b) = match (config.algorithm, ds.subsets()) {
        (Algorithm::Combined { .. }, Some(flags)) => {
            let a = flags.iter().filter(|f| **f == Subset::A).count();
            (Some(a), Some(flags.len() - a))
        }
        _ => (None, None),
    };
    TraceHeader {
        schema: SCHEMA,
        algorithm: config.algorithm.name().to_string(),
        geometry: config.geometry.name().to_string(),
        n: ds.n(),
        k: config.algorithm.k(),
        alpha_mode,
        mada_eta,
        n_a,
        n_b,
    }
}

/// Runs `train`; returns the summary line.
pub fn train(args: &TrainArgs) -> Result<(String, BoostRun), CliError> {
    let config = config_from_args(args)?;
    let ds = load_data(
        &args.source,
        &args.data_options,
        matches!(args.algo, AlgoArg::Combined),
    )?;
    let run = boost::run(&config, &ds)?;
    if let Some(path) = &args.trace {
        trace::write_trace(path, &header_for(&config, &ds), &run.rounds)?;
    }
    if let Some(path) = &args.model {
        let model = Model {
            algorithm: config.algorithm.name().to_string(),
            geometry: config.geometry.name().to_string(),
            features: ds.d(),
            ensemble: run.ensemble.clone(),
        };
        model.save(path)?;
    }
    let last = run.rounds.last();
    let summary = format!(
        "rounds={} train_error={} bound={}",
        run.rounds.len(),
        last.map_or(1.0, |r| r.train_error),
        last.map_or(1.0, |r| r.bound)
    );
    Ok((summary, run))
}

/// Runs `predict`; returns one `±1` per sample.
pub fn predict(args: &PredictArgs) -> Result<Vec<f64>, CliError> {
    let model = Model::load(&args.model)?;
    let ds = load_data(&args.source, &args.data_options, false)?;
    if ds.d() != model.features {
        return Err(CliError::Usage(format!(
            "model expects {} features, data has {}",
            model.features,
            ds.d()
        )));
    }
    (0..ds.n())
        .map(|i| model.ensemble.predict(ds.row(i)).map_err(CliError::from))
        .collect()
}

/// Parses `simplex`, `capped:CAP`, `hypercube` or `orthant-l1:LAMBDA`.
pub enum SetArg {
    Set(ConstraintSet),
    OrthantL1(f64),
}

pub fn parse_set(spec: &str) -> Result<SetArg, CliError> {
    let bad = || CliError::Usage(format!("cannot parse set '{spec}'"));
    let value = |s: Option<&str>| s.and_then(|v| v.parse::<f64>().ok()).ok_or_else(bad);
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    match (name, arg) {
        ("simplex", None) => Ok(SetArg::Set(ConstraintSet::Simplex)),
        ("hypercube", None) => Ok(SetArg::Set(ConstraintSet::UnitHypercube)),
        ("capped", a) => Ok(SetArg::Set(ConstraintSet::CappedSimplex { cap: value(a)? })),
        ("orthant-l1", a) => {
            let lambda = value(a)?;
            if !(lambda >= 0.0) {
                return Err(CliError::Usage("orthant-l1 needs λ ≥ 0".into()));
            }
            Ok(SetArg::OrthantL1(lambda))
        }
        _ => Err(bad()),
    }
}

pub fn project(args: &ProjectArgs, input: impl Read) -> Result<String, CliError> {
    let z: Vec<f64> =
        serde_json::from_reader(input).map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
    let kind: GeometryKind = args.geometry.into();
    let g = Geometry::for_samples(kind, z.len().max(1));
    let out = match parse_set(&args.set)? {
        SetArg::Set(set) => {
            set.check_feasible(z.len())?;
            projection::project(&g, &set, &z)?
        }
        SetArg::OrthantL1(lambda) => {
            if kind != GeometryKind::Quadratic {
                return Err(CliError::Usage(
                    "orthant-l1 is defined for the quadratic geometry".into(),
                ));
            }
            if z.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Usage("input must be finite".into()));
            }
            projection::project_orthant_l1(&z, lambda)
        }
    };
    Ok(serde_json::to_string(&out)?)
}
