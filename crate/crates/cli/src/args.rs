use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maboost::{AlphaMode, GeometryKind, MadaEta};

#[derive(Debug, Parser)]
#[command(
    name = "maboost",
    version,
    about = "Mirror ascent boosting with checkable bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a booster and write its trace and model.
    Train(TrainArgs),
    /// Recheck every round of a trace against its theoretical bound.
    Verify { trace: PathBuf },
    /// Project a JSON array read from stdin.
    Project(ProjectArgs),
    /// Predict labels for a dataset with a saved model.
    Predict(PredictArgs),
    /// Run the acceptance criteria and print a table.
    Bench {
        /// Run a single criterion, by number (`4`, `c4`) or name.
        #[arg(long)]
        criterion: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    #[value(name = "maboost-active")]
    MaboostActive,
    #[value(name = "maboost-lazy")]
    MaboostLazy,
    #[value(name = "maxmargin")]
    MaxMargin,
    Smooth,
    Combined,
    Sparse,
    Mada,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Quadratic,
    Entropy,
}

impl From<GeometryArg> for GeometryKind {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Quadratic => GeometryKind::Quadratic,
            GeometryArg::Entropy => GeometryKind::NegativeEntropy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlphaArg {
    Zero,
    Half,
}

impl From<AlphaArg> for AlphaMode {
    fn from(a: AlphaArg) -> Self {
        match a {
            AlphaArg::Zero => AlphaMode::Zero,
            AlphaArg::Half => AlphaMode::Half,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MadaEtaArg {
    PreviousError,
    FixedPoint,
}

impl From<MadaEtaArg> for MadaEta {
    fn from(m: MadaEtaArg) -> Self {
        match m {
            MadaEtaArg::PreviousError => MadaEta::PreviousError,
            MadaEtaArg::FixedPoint => MadaEta::FixedPoint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Libsvm,
}

/// Where the training data comes from.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct DataSource {
    /// CSV or LIBSVM file.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Generator spec: blobs:SEED:N:MARGIN, noisy:SEED:N:FLIP,
    /// diagonal:SEED:N:MARGIN or combined:SEED:NA:NB:FLIP.
    #[arg(long = "gen")]
    pub generator: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct DataOptions {
    /// File format; inferred from the extension when omitted.
    #[arg(long)]
    pub format: Option<FormatArg>,
    #[arg(long, default_value = "label")]
    pub label_column: String,
    /// CSV column holding A/B flags; defaults to `subset` for combined runs.
    #[arg(long)]
    pub subset_column: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    /// Defaults to the algorithm's required geometry, else entropy.
    #[arg(long, value_enum)]
    pub geometry: Option<GeometryArg>,
    #[command(flatten)]
    pub source: DataSource,
    #[command(flatten)]
    pub data_options: DataOptions,
    #[arg(long, default_value_t = 100)]
    pub rounds: usize,
    /// Stop once the training error is at or below this.
    #[arg(long)]
    pub target_eps: Option<f64>,
    /// Smoothness parameter for smooth and combined runs.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, value_enum, default_value = "zero")]
    pub alpha_mode: AlphaArg,
    #[arg(long, value_enum, default_value = "previous-error")]
    pub mada_eta: MadaEtaArg,
    /// JSON-lines trace output.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Plain-text model output.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProjectArgs {
    #[arg(long, value_enum)]
    pub geometry: GeometryArg,
    /// simplex, capped:CAP, hypercube or orthant-l1:LAMBDA.
    #[arg(long)]
    pub set: String,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub source: DataSource,
    #[command(flatten)]
    pub data_options: DataOptions,
}
