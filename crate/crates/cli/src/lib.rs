//! Command-line front end: `fit`, `predict`, `cv`, `tune` and `compare`.
//!
//! Exit codes: 0 on success, 1 when a command fails while running, 2 when
//! the command line or a parameter is invalid. Parameters are validated
//! before any data is read or any file is written.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use odte_core::config::Hyperparameters;
use odte_core::data::{load_csv, standardize, LabelColumn, RawTable};
use odte_core::ensemble::{fit_ensemble, load_model, save_model, OdteParams};
use odte_core::evaluation::stats::compare;
use odte_core::evaluation::{cross_validate, grid_search, CvConfig, ParamGrid};
use odte_core::{Dataset, Error};

pub const DEFAULT_SEED: u64 = 57;

#[derive(Debug, Parser)]
#[command(name = "odte", version, about = "Oblique decision tree ensembles with SVM splits")]
pub struct Cli {
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train an ensemble and write it as JSON.
    Fit(FitArgs),
    /// Predict one label per row of a CSV file.
    Predict(PredictArgs),
    /// Repeated stratified k-fold cross-validation.
    Cv(CvArgs),
    /// Grid search over hyperparameters by inner cross-validation.
    Tune(TuneArgs),
    /// Friedman test and Holm post-hoc over an accuracy matrix.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Label column name, or `last`.
    #[arg(long, default_value = "last")]
    pub label_column: String,
    /// The CSV file has no header row.
    #[arg(long)]
    pub no_header: bool,
}

impl DataArgs {
    fn load(&self) -> Result<Dataset, CliError> {
        let label: LabelColumn = self.label_column.parse().expect("infallible");
        load_csv(&self.data, &label, !self.no_header).map_err(CliError::from)
    }

    fn name(&self) -> String {
        self.data
            .file_stem()
            .map_or_else(|| "dataset".into(), |s| s.to_string_lossy().into_owned())
    }
}

/// Model hyperparameters; unset flags keep the library defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct HyperArgs {
    /// SVM regularization.
    #[arg(long = "C")]
    pub c: Option<f64>,
    /// linear, poly or rbf.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Kernel coefficient for poly and rbf [default: 1/n_features].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Polynomial degree [default: 3].
    #[arg(long)]
    pub degree: Option<u32>,
    /// Polynomial offset [default: 0].
    #[arg(long)]
    pub coef0: Option<f64>,
    /// Multiclass split strategy: ovo or ovr [default: ovo].
    #[arg(long)]
    pub strategy: Option<String>,
    /// best or random [default: random].
    #[arg(long)]
    pub splitter: Option<String>,
    /// Depth limit [default: unlimited].
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Solver iteration cap [default: 100000].
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Solver stopping tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Smallest node that may be split [default: 2].
    #[arg(long)]
    pub min_samples_split: Option<usize>,
    /// Trees in the ensemble [default: 100].
    #[arg(long)]
    pub n_trees: Option<usize>,
    /// Features drawn per tree [default: all].
    #[arg(long)]
    pub max_features: Option<usize>,
    /// Rows drawn per tree [default: training size].
    #[arg(long)]
    pub bootstrap_size: Option<usize>,
    /// Majority fraction at which a node becomes a leaf [default: 1].
    #[arg(long)]
    pub purity_threshold: Option<f64>,
}

impl HyperArgs {
    pub fn to_hyperparameters(&self) -> Result<Hyperparameters, CliError> {
        let mut h = Hyperparameters::default();
        let entries: [(&str, Option<Value>); 15] = [
            ("C", self.c.map(Value::from)),
            ("kernel", self.kernel.clone().map(Value::from)),
            ("gamma", self.gamma.map(Value::from)),
            ("degree", self.degree.map(Value::from)),
            ("coef0", self.coef0.map(Value::from)),
            ("strategy", self.strategy.clone().map(Value::from)),
            ("splitter", self.splitter.clone().map(Value::from)),
            ("max_depth", self.max_depth.map(Value::from)),
            ("max_iter", self.max_iter.map(Value::from)),
            ("tol", self.tol.map(Value::from)),
            ("min_samples_split", self.min_samples_split.map(Value::from)),
            ("n_trees", self.n_trees.map(Value::from)),
            ("max_features", self.max_features.map(Value::from)),
            ("bootstrap_size", self.bootstrap_size.map(Value::from)),
            ("purity_threshold", self.purity_threshold.map(Value::from)),
        ];
        for (key, value) in entries {
            if let Some(v) = value {
                h.set(key, v).map_err(CliError::from)?;
            }
        }
        // n_features is unknown yet; this checks everything but its effect on gamma
        h.to_odte(1, 0)?;
        Ok(h)
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub hyper: HyperArgs,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Standardize features; the scaling is stored with the model.
    #[arg(long)]
    pub standardize: bool,
    /// Model file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Leave the wall time out of the summary.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Feature CSV; a trailing label column is ignored.
    #[arg(long)]
    pub data: PathBuf,
    /// Label column to drop when the file has one more column than the model.
    #[arg(long, default_value = "last")]
    pub label_column: String,
    #[arg(long)]
    pub no_header: bool,
    /// Write predictions here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Root seed; repetition seeds are derived from it unless --seeds is given.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Comma-separated seed per repetition.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long, default_value_t = 10)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    /// Standardize features, fitted on each training split.
    #[arg(long)]
    pub standardize: bool,
    /// Directory for `summary.json` and `folds.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the per-fold CSV instead of the JSON summary.
    #[arg(long)]
    pub csv: bool,
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Fixed hyperparameters; grid entries override them.
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// JSON object mapping hyperparameter names to value lists, or a path to one.
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Inner cross-validation repetitions.
    #[arg(long, default_value_t = 1)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long)]
    pub standardize: bool,
    /// Directory for `best.json` and `grid.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the score table as CSV instead of JSON.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Accuracy matrix: first column dataset name, one column per algorithm.
    #[arg(long)]
    pub data: PathBuf,
    /// Control algorithm [default: best average rank].
    #[arg(long)]
    pub control: Option<String>,
    /// Directory for `comparison.json` and `comparison.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the CSV table instead of JSON.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            e => CliError::Runtime(e.to_string()),
        }
    }
}

fn runtime<E: std::fmt::Display>(context: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Runtime(format!("{context}: {e}"))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(runtime(&format!("cannot write {}", path.display())))
}

fn write_outputs(dir: Option<&Path>, files: &[(&str, &str)]) -> Result<(), CliError> {
    let Some(dir) = dir else { return Ok(()) };
    fs::create_dir_all(dir).map_err(runtime(&format!("cannot create {}", dir.display())))?;
    for (name, contents) in files {
        write_file(&dir.join(name), contents)?;
    }
    Ok(())
}

/// Runs a parsed command line and returns what goes to standard output.
pub fn run(cli: Cli) -> Result<String, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(runtime("thread pool"))?;
    pool.install(|| match cli.command {
        Command::Fit(a) => cmd_fit(&a),
        Command::Predict(a) => cmd_predict(&a),
        Command::Cv(a) => cmd_cv(&a),
        Command::Tune(a) => cmd_tune(&a),
        Command::Compare(a) => cmd_compare(&a),
    })
}

#[derive(Debug, Serialize)]
struct FitSummary {
    n_trees: usize,
    n_rows: usize,
    n_features: usize,
    classes: Vec<String>,
    mean_nodes: f64,
    max_depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_seconds: Option<f64>,
}

pub fn cmd_fit(args: &FitArgs) -> Result<String, CliError> {
    let hyper = args.hyper.to_hyperparameters()?;
    let start = Instant::now();
    let dataset = args.data.load()?;
    let params = hyper.to_odte(dataset.n_features(), args.seed)?;
    let (scaler, train) = if args.standardize {
        let (s, mut scaled) = standardize(&dataset.full_view(), &[]);
        (Some(s), scaled.pop().expect("scaled training set"))
    } else {
        (None, dataset)
    };
    let mut model = fit_ensemble(&train, &params)?;
    model.standardizer = scaler;
    save_model(&model, &args.out)?;
    let stats = model.size_stats();
    Ok(to_json(&FitSummary {
        n_trees: model.trees.len(),
        n_rows: train.n_rows(),
        n_features: model.n_features,
        classes: model.vocabulary.clone(),
        mean_nodes: stats.mean_nodes,
        max_depth: stats.max_depth_observed,
        wall_time_seconds: (!args.no_timing).then(|| start.elapsed().as_secs_f64()),
    }))
}

pub fn cmd_predict(args: &PredictArgs) -> Result<String, CliError> {
    let model = load_model(&args.model)?;
    let table = RawTable::read(&args.data, !args.no_header)?;
    if table.rows.is_empty() {
        if let Some(out) = &args.out {
            write_file(out, "")?;
        }
        return Ok(String::new());
    }
    let skip = if table.width == model.n_features {
        None
    } else if table.width == model.n_features + 1 {
        let label: LabelColumn = args.label_column.parse().expect("infallible");
        Some(table.resolve_label_column(&label)?)
    } else {
        return Err(Error::DimensionMismatch {
            expected: model.n_features,
            actual: table.width,
        }
        .into());
    };
    let rows = table.feature_rows(skip)?;
    let predicted = model.predict_batch(&rows)?;
    let mut out = String::with_capacity(predicted.len() * 8);
    for p in predicted {
        out.push_str(&model.vocabulary[p]);
        out.push('\n');
    }
    if let Some(path) = &args.out {
        write_file(path, &out)?;
    }
    Ok(out)
}

fn cv_config(
    repetitions: usize,
    folds: usize,
    seed: u64,
    seeds: Option<&Vec<u64>>,
    standardize: bool,
) -> Result<CvConfig, CliError> {
    let mut config = CvConfig::new(repetitions, folds, seed);
    if let Some(s) = seeds {
        config.seeds = s.clone();
    }
    config.standardize = standardize;
    config.validate()?;
    Ok(config)
}

pub fn cmd_cv(args: &CvArgs) -> Result<String, CliError> {
    let hyper = args.hyper.to_hyperparameters()?;
    let config = cv_config(
        args.repetitions,
        args.folds,
        args.seed,
        args.seeds.as_ref(),
        args.standardize,
    )?;
    let dataset = args.data.load()?;
    let params = hyper.to_odte(dataset.n_features(), args.seed)?;
    let mut report = cross_validate(&dataset, &args.data.name(), &params, &config)?;
    if args.no_timing {
        report.wall_time_seconds = None;
    }
    let summary = json!({
        "report": report,
        "hyperparameters": hyper,
        "standardize": args.standardize,
    });
    let summary = to_json(&summary);
    let folds = report.to_csv();
    write_outputs(
        args.out.as_deref(),
        &[("summary.json", &summary), ("folds.csv", &folds)],
    )?;
    Ok(if args.csv { folds } else { summary })
}

fn read_grid(spec: &str) -> Result<ParamGrid, CliError> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        fs::read_to_string(spec).map_err(|e| CliError::Usage(format!("cannot read grid {spec}: {e}")))?
    };
    let grid = ParamGrid::from_json(&text)?;
    grid.validate()?;
    Ok(grid)
}

fn grid_csv(result: &odte_core::evaluation::GridResult) -> String {
    let keys: Vec<&str> = result
        .table
        .first()
        .map(|e| e.assignment.iter().map(|(k, _)| k.as_str()).collect())
        .unwrap_or_default();
    let mut out = keys.join(",");
    out.push_str(",mean,std\n");
    for e in &result.table {
        for (_, v) in &e.assignment {
            out.push_str(&match v {
                Value::String(s) => s.clone(),
                v => v.to_string(),
            });
            out.push(',');
        }
        out.push_str(&format!("{},{}\n", e.mean, e.std));
    }
    out
}

pub fn cmd_tune(args: &TuneArgs) -> Result<String, CliError> {
    let base = args.hyper.to_hyperparameters()?;
    let grid = read_grid(&args.grid)?;
    // every configuration must be valid before any fitting starts
    for a in grid.assignments() {
        let mut h = base.clone();
        for (k, v) in &a {
            h.set(k, v.clone())?;
        }
        h.to_odte(1, 0)?;
    }
    let config = cv_config(args.repetitions, args.folds, args.seed, None, args.standardize)?;
    let dataset = args.data.load()?;
    let result = grid_search(&dataset, &grid, &base, &config, args.seed)?;
    let best = to_json(&json!({
        "best": result.best,
        "best_index": result.best_index,
        "best_params": result.best_params,
        "table": result.table.iter().map(|e| json!({
            "params": e.assignment.iter().cloned().collect::<serde_json::Map<_, _>>(),
            "mean": e.mean,
            "std": e.std,
        })).collect::<Vec<_>>(),
    }));
    let table = grid_csv(&result);
    write_outputs(args.out.as_deref(), &[("best.json", &best), ("grid.csv", &table)])?;
    Ok(if args.csv { table } else { best })
}

/// Reads a `dataset,alg1,alg2,...` accuracy matrix.
/// Algorithm names, dataset names and the datasets x algorithms accuracies.
pub type AccuracyMatrix = (Vec<String>, Vec<String>, Vec<Vec<f64>>);

pub fn read_matrix(path: &Path) -> Result<AccuracyMatrix, CliError> {
    let table = RawTable::read(path, true)?;
    let header = table.header.clone().unwrap_or_default();
    if header.len() < 3 {
        return Err(CliError::Runtime(format!(
            "{}: need a dataset column and at least two algorithms",
            path.display()
        )));
    }
    let algorithms = header[1..].to_vec();
    let mut datasets = Vec::with_capacity(table.rows.len());
    let mut matrix = Vec::with_capacity(table.rows.len());
    for (i, row) in table.rows.iter().enumerate() {
        datasets.push(row[0].clone());
        let values = row[1..]
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                cell.parse::<f64>().map_err(|_| {
                    CliError::Runtime(format!(
                        "{}: row {} column {:?}: missing or non-numeric cell {cell:?}",
                        path.display(),
                        i + 1,
                        algorithms[j]
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        matrix.push(values);
    }
    Ok((algorithms, datasets, matrix))
}

pub fn cmd_compare(args: &CompareArgs) -> Result<String, CliError> {
    let (algorithms, datasets, matrix) = read_matrix(&args.data)?;
    let report = compare(&algorithms, &datasets, &matrix, args.control.as_deref()).map_err(|e| match e {
        Error::InvalidParameter(m) => CliError::Usage(m),
        e => CliError::Runtime(e.to_string()),
    })?;
    let json = to_json(&report);
    let csv = report.to_csv();
    write_outputs(
        args.out.as_deref(),
        &[("comparison.json", &json), ("comparison.csv", &csv)],
    )?;
    Ok(if args.csv { csv } else { json })
}

/// Parameters `cv` and `fit` would use for `dataset`.
pub fn resolve_params(hyper: &HyperArgs, n_features: usize, seed: u64) -> Result<OdteParams, CliError> {
    Ok(hyper.to_hyperparameters()?.to_odte(n_features, seed)?)
}
