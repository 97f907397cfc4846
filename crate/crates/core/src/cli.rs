//! Command-line front end: training, grid search, noise sweeps, rank
//! statistics and loss curves.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::data::{load_csv, CsvOptions, Dataset, LabelColumn, NoiseConfig, NoiseMode};
use crate::error::{Error, ErrorClass, Result};
use crate::eval::{
    accuracy, grid_search_cv, stat_report, CvOptions, CvReport, FoldScore, GridSpec, RankTable,
};
use crate::losses::{write_loss_curve, LossSpec, WaveParams};
use crate::model::{fit, HyperParams, ModelFamily, TrainSettings};
use crate::wavesvm::AdamConfig;
use crate::wavetsvm::TwinConfig;

/// Environment variable read when neither `--seed` nor the config file
/// gives a seed.
pub const SEED_ENV: &str = "WAVECLS_SEED";

const EXIT_HELP: &str = "\
Exit status:
  0  success
  2  usage error: bad flags, parameters or grid file
  3  data error: unreadable or malformed input, single-class data for twin models
  4  numeric failure: factorisation breakdown or degenerate model

The master seed comes from --seed, then the --config file, then WAVECLS_SEED, then 0.";

#[derive(Debug, Parser)]
#[command(
    name = "wavecls",
    version,
    about = "Wave-loss SVM and twin SVM classifiers",
    after_help = EXIT_HELP
)]
struct Cli {
    /// JSON file with defaults for any flag; flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train one model and save it as JSON.
    Train(TrainArgs),
    /// Stratified k-fold grid search.
    Benchmark(BenchArgs),
    /// Repeat the grid search with Gaussian noise in the training folds.
    NoiseSweep(NoiseArgs),
    /// Mean ranks, Friedman and Nemenyi statistics, pairwise win-tie-loss.
    Stats(StatsArgs),
    /// Sample a loss function and its derivative.
    LossCurve(CurveArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Model family.
    #[arg(long, value_parser = parse_family)]
    model: Option<ModelFamily>,
    /// CSV file with a header row.
    #[arg(long, value_name = "CSV")]
    data: Option<PathBuf>,
    /// Label column, by header name or zero-based index [default: label].
    #[arg(long)]
    label: Option<String>,
    /// Label value treated as the positive class; all others are negative
    /// [default: 1].
    #[arg(long)]
    positive: Option<String>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args, Default)]
struct SolverArgs {
    /// Adam iteration limit (Wave-SVM) or fixed-point limit (Wave-TSVM).
    #[arg(long)]
    max_iter: Option<usize>,
    /// Mini-batch size for linear Wave-SVM, support-set size for kernel
    /// Wave-SVM.
    #[arg(long)]
    batch_size: Option<usize>,
    /// Convergence tolerance.
    #[arg(long)]
    eta: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Wave-SVM trade-off.
    #[arg(long = "C", alias = "c")]
    c: Option<f64>,
    /// Twin trade-off C1 (also used for C3).
    #[arg(long)]
    c1: Option<f64>,
    /// Twin trade-off C2 (also used for C4).
    #[arg(long)]
    c2: Option<f64>,
    /// Wave loss shape [default: 1].
    #[arg(long)]
    a: Option<f64>,
    /// Wave loss bound [default: 1].
    #[arg(long)]
    lambda: Option<f64>,
    /// Gaussian kernel width, kernel families only.
    #[arg(long)]
    sigma: Option<f64>,
    /// Adam step size.
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Held-out CSV scored with the trained model.
    #[arg(long, value_name = "CSV")]
    test: Option<PathBuf>,
    /// Where to write the model.
    #[arg(long, default_value = "model.json")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScoreArg {
    Best,
    Mean,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    #[command(flatten)]
    data: DataArgs,
    /// JSON object of value lists overriding the default grid, e.g.
    /// {"c": [1, 10], "a": [0.5]}.
    #[arg(long, value_name = "JSON")]
    grid_file: Option<PathBuf>,
    /// Number of stratified folds [default: 4].
    #[arg(long)]
    folds: Option<usize>,
    /// Fold aggregation [default: best].
    #[arg(long, value_enum)]
    score: Option<ScoreArg>,
    /// Worker threads for grid cells; results do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct BenchArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// JSON report.
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
    /// Per-cell CSV table [default: the report path with a .csv extension].
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NoiseModeArg {
    CellFraction,
    Amplitude,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct NoiseArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Noise levels; 0 means clean data [default: 0,0.05,0.1,0.2,0.3].
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<f64>>,
    /// Fraction of cells perturbed, or noise amplitude relative to each
    /// feature's spread [default: cell-fraction].
    #[arg(long, value_enum)]
    noise_mode: Option<NoiseModeArg>,
    /// Seed for the noise draws [default: the master seed].
    #[arg(long)]
    noise_seed: Option<u64>,
    /// Level-to-accuracy CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Accuracy table: `dataset,<model>,...`, empty or `*` for missing cells.
    #[arg(long, value_name = "CSV")]
    table: PathBuf,
    /// Studentized range critical value for the Nemenyi test.
    #[arg(long)]
    q_alpha: Option<f64>,
    /// Round mean ranks to this many decimals before testing.
    #[arg(long)]
    rank_decimals: Option<u32>,
    /// JSON report; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Long-format CSV of every statistic.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LossArg {
    Hinge,
    Pinball,
    Ramp,
    SquaredHinge,
    SmoothPinball,
    Linex,
    Roboss,
    Wave,
    ZeroOneLambda,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct CurveArgs {
    #[arg(long, value_enum, default_value = "wave")]
    loss: LossArg,
    /// Shape for wave, linex and roboss.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Bound for wave, roboss and zero-one-lambda.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Quantile for pinball and smooth-pinball.
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    /// Truncation point for ramp.
    #[arg(long, default_value_t = 2.0)]
    theta: f64,
    #[arg(long, default_value_t = -4.0)]
    from: f64,
    #[arg(long, default_value_t = 4.0)]
    to: f64,
    #[arg(long, default_value_t = 401)]
    points: usize,
    /// Omit the derivative column.
    #[arg(long)]
    no_grad: bool,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_family(s: &str) -> std::result::Result<ModelFamily, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = ModelFamily::ALL.iter().map(|f| f.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

/// Values a `--config` file may set. Every field is optional and flags
/// take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub model: Option<ModelFamily>,
    pub data: Option<PathBuf>,
    pub label: Option<String>,
    pub positive: Option<String>,
    pub test: Option<PathBuf>,
    pub c: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub a: Option<f64>,
    pub lambda: Option<f64>,
    pub sigma: Option<f64>,
    pub alpha: Option<f64>,
    /// Base optimiser settings; missing fields take their defaults.
    pub adam: Option<AdamConfig>,
    /// Base twin settings; missing fields take their defaults.
    pub twin: Option<TwinConfig>,
    /// Grid override, same shape as a `--grid-file`.
    pub grid: Option<serde_json::Value>,
    pub folds: Option<usize>,
    pub jobs: Option<usize>,
    pub score: Option<FoldScore>,
    pub noise_levels: Option<Vec<f64>>,
    pub noise_mode: Option<NoiseMode>,
    pub noise_seed: Option<u64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("malformed config file: {e}")))
    }

    fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                RunConfig::from_json(&text)
            }
        }
    }
}

/// Exit status for an error class.
pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Usage => 2,
        ErrorClass::Data => 3,
        ErrorClass::Numeric => 4,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status. Diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = RunConfig::load(cli.config.as_deref()).and_then(|cfg| match cli.command {
        Command::Train(a) => cmd_train(a, &cfg, out, err),
        Command::Benchmark(a) => cmd_benchmark(a, &cfg, out),
        Command::NoiseSweep(a) => cmd_noise_sweep(a, &cfg, out),
        Command::Stats(a) => cmd_stats(a, out),
        Command::LossCurve(a) => cmd_loss_curve(a, out),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(e.class())
        }
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn resolve_seed(flag: Option<u64>, cfg: &RunConfig) -> Result<u64> {
    if let Some(s) = flag.or(cfg.seed) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::Usage(format!("{SEED_ENV} must be an unsigned integer, got '{v}'"))
        }),
        Err(_) => Ok(0),
    }
}

struct Loaded {
    family: ModelFamily,
    seed: u64,
    label: LabelColumn,
    positive: String,
    data_path: PathBuf,
}

fn resolve_data(a: &DataArgs, cfg: &RunConfig) -> Result<Loaded> {
    let family = a
        .model
        .or(cfg.model)
        .ok_or_else(|| Error::Usage("--model is required".into()))?;
    let data_path = a
        .data
        .clone()
        .or_else(|| cfg.data.clone())
        .ok_or_else(|| Error::Usage("--data is required".into()))?;
    let label = a
        .label
        .clone()
        .or_else(|| cfg.label.clone())
        .unwrap_or_else(|| "label".into());
    Ok(Loaded {
        family,
        seed: resolve_seed(a.seed, cfg)?,
        label: LabelColumn::parse(&label),
        positive: a
            .positive
            .clone()
            .or_else(|| cfg.positive.clone())
            .unwrap_or_else(|| "1".into()),
        data_path,
    })
}

impl Loaded {
    fn read(&self, path: &Path) -> Result<Dataset> {
        load_csv(path, &self.label, &self.positive, &CsvOptions::default())
    }
}

fn settings(solver: &SolverArgs, cfg: &RunConfig) -> TrainSettings {
    let mut s = TrainSettings {
        adam: cfg.adam.unwrap_or_default(),
        twin: cfg.twin.unwrap_or_default(),
    };
    if let Some(t) = solver.max_iter {
        s.adam.max_iter = t;
        s.twin.max_iter = t;
    }
    if let Some(k) = solver.batch_size {
        s.adam.batch_size = k;
    }
    if let Some(eta) = solver.eta {
        s.adam.eta = eta;
        s.twin.eta = eta;
    }
    s
}

fn warn_one_class(data: &Dataset, err: &mut dyn Write) {
    if !data.has_both_classes() {
        let _ = writeln!(
            err,
            "warning: training data has only one class ({} positive, {} negative)",
            data.count_positive(),
            data.count_negative()
        );
    }
}

fn cmd_train(
    a: TrainArgs,
    cfg: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let src = resolve_data(&a.data, cfg)?;
    let settings = settings(&a.solver, cfg);
    let hp = HyperParams {
        c: a.c.or(cfg.c),
        c1: a.c1.or(cfg.c1),
        c2: a.c2.or(cfg.c2),
        lambda: a.lambda.or(cfg.lambda).unwrap_or(1.0),
        a: a.a.or(cfg.a).unwrap_or(1.0),
        alpha: a.alpha.or(cfg.alpha),
        sigma: a.sigma.or(cfg.sigma),
    };
    if src.family.is_kernel() && hp.sigma.is_none() {
        return Err(Error::Usage(format!("{} needs --sigma", src.family)));
    }
    if src.family.is_twin() {
        settings.twin_config(&hp, None).validate()?;
    } else {
        settings.adam_config(&hp, src.seed).validate()?;
    }

    let train = src.read(&src.data_path)?;
    let test_path = a.test.clone().or_else(|| cfg.test.clone());
    let test = test_path.as_deref().map(|p| src.read(p)).transpose()?;
    if let Some(t) = &test {
        if t.n_features() != train.n_features() {
            return Err(Error::Data(format!(
                "test file has {} features, training file has {}",
                t.n_features(),
                train.n_features()
            )));
        }
    }
    warn_one_class(&train, err);

    let start = Instant::now();
    let model = fit(src.family, &train, &hp, &settings, src.seed)?;
    let elapsed = start.elapsed();
    for w in model.warnings() {
        let _ = writeln!(err, "warning: {w}");
    }

    let mut file = create(&a.out)?;
    file.write_all(model.to_json()?.as_bytes())
        .and_then(|_| file.write_all(b"\n"))
        .and_then(|_| file.flush())
        .map_err(io_err(&a.out))?;

    let o = io_err(Path::new("<stdout>"));
    let train_acc = accuracy(&model.predict(train.features())?, train.labels())?;
    writeln!(out, "model: {}", src.family).map_err(&o)?;
    writeln!(
        out,
        "train accuracy: {train_acc:.2}% ({} samples)",
        train.len()
    )
    .map_err(&o)?;
    if let Some(t) = &test {
        let acc = accuracy(&model.predict(t.features())?, t.labels())?;
        writeln!(out, "test accuracy: {acc:.2}% ({} samples)", t.len()).map_err(&o)?;
    }
    writeln!(out, "training time: {:.6} s", elapsed.as_secs_f64()).map_err(&o)?;
    writeln!(out, "model written to {}", a.out.display()).map_err(&o)?;
    Ok(())
}

struct Sweep {
    src: Loaded,
    data: Dataset,
    grid: GridSpec,
    options: CvOptions,
}

fn prepare_sweep(a: &SweepArgs, cfg: &RunConfig) -> Result<Sweep> {
    let src = resolve_data(&a.data, cfg)?;
    let grid = match (&a.grid_file, &cfg.grid) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Usage(format!("cannot read grid file {}: {e}", path.display()))
            })?;
            GridSpec::from_json_override(src.family, &text)?
        }
        (None, Some(value)) => GridSpec::from_json_override(src.family, &value.to_string())?,
        (None, None) => GridSpec::default_for(src.family),
    };
    grid.validate(src.family)?;
    let score = match a.score {
        Some(ScoreArg::Best) => FoldScore::Best,
        Some(ScoreArg::Mean) => FoldScore::Mean,
        None => cfg.score.unwrap_or_default(),
    };
    let options = CvOptions {
        folds: a.folds.or(cfg.folds).unwrap_or(4),
        seed: src.seed,
        score,
        jobs: a.jobs.or(cfg.jobs).unwrap_or(1),
        settings: settings(&a.solver, cfg),
        noise: None,
    };
    if options.folds < 2 {
        return Err(Error::Usage(format!(
            "need at least 2 folds, got {}",
            options.folds
        )));
    }
    let mut adam = options.settings.adam;
    adam.seed = src.seed;
    adam.validate()?;
    options.settings.twin.validate()?;
    let data = src.read(&src.data_path)?;
    Ok(Sweep {
        src,
        data,
        grid,
        options,
    })
}

fn describe(p: &HyperParams) -> String {
    let mut parts = Vec::new();
    let mut push = |name: &str, v: Option<f64>| {
        if let Some(v) = v {
            parts.push(format!("{name}={v}"));
        }
    };
    push("C", p.c);
    push("C1", p.c1);
    push("C2", p.c2);
    push("sigma", p.sigma);
    push("lambda", Some(p.lambda));
    push("a", Some(p.a));
    push("alpha", p.alpha);
    parts.join(", ")
}

fn summarize(report: &CvReport, out: &mut dyn Write) -> Result<()> {
    let o = io_err(Path::new("<stdout>"));
    writeln!(
        out,
        "cells: {} ({} failed), {}-fold, score {:?}",
        report.n_cells, report.n_failed, report.folds, report.score
    )
    .map_err(&o)?;
    match (&report.best_params, report.best_score) {
        (Some(p), Some(s)) => writeln!(out, "best: {s:.2}% with {}", describe(p)).map_err(&o)?,
        _ => writeln!(out, "best: none, every cell failed").map_err(&o)?,
    }
    writeln!(
        out,
        "training time: {:.3} s",
        report.training_time.as_secs_f64()
    )
    .map_err(&o)?;
    Ok(())
}

fn cmd_benchmark(a: BenchArgs, cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let sweep = prepare_sweep(&a.sweep, cfg)?;
    let report = grid_search_cv(&sweep.data, sweep.src.family, &sweep.grid, &sweep.options)?;
    let csv_path = a.csv.clone().unwrap_or_else(|| a.out.with_extension("csv"));
    let mut f = create(&a.out)?;
    report.write_json(&mut f)?;
    f.write_all(b"\n")
        .and_then(|_| f.flush())
        .map_err(io_err(&a.out))?;
    let mut f = create(&csv_path)?;
    report.write_csv(&mut f)?;
    summarize(&report, out)?;
    let o = io_err(Path::new("<stdout>"));
    writeln!(
        out,
        "report written to {} and {}",
        a.out.display(),
        csv_path.display()
    )
    .map_err(&o)?;
    Ok(())
}

fn cmd_noise_sweep(a: NoiseArgs, cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let sweep = prepare_sweep(&a.sweep, cfg)?;
    let levels = a
        .levels
        .clone()
        .or_else(|| cfg.noise_levels.clone())
        .unwrap_or_else(|| vec![0.0, 0.05, 0.10, 0.20, 0.30]);
    if levels.is_empty() {
        return Err(Error::Usage("no noise levels given".into()));
    }
    let mode = match a.noise_mode {
        Some(NoiseModeArg::CellFraction) => NoiseMode::CellFraction,
        Some(NoiseModeArg::Amplitude) => NoiseMode::Amplitude,
        None => cfg.noise_mode.unwrap_or_default(),
    };
    let noise_seed = a.noise_seed.or(cfg.noise_seed).unwrap_or(sweep.src.seed);
    let configs: Vec<Option<NoiseConfig>> = levels
        .iter()
        .map(|&level| {
            if level == 0.0 {
                return Ok(None);
            }
            let c = NoiseConfig {
                level,
                seed: noise_seed,
                mode,
            };
            c.validate().map_err(|e| Error::Usage(e.to_string()))?;
            Ok(Some(c))
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<Vec<String>> = Vec::new();
    for (level, noise) in levels.iter().zip(configs) {
        let options = CvOptions {
            noise,
            ..sweep.options.clone()
        };
        let r = grid_search_cv(&sweep.data, sweep.src.family, &sweep.grid, &options)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let p = r.best_params;
        rows.push(vec![
            level.to_string(),
            opt(r.best_score),
            r.best_index.map(|i| i.to_string()).unwrap_or_default(),
            r.n_failed.to_string(),
            opt(p.and_then(|p| p.c)),
            opt(p.and_then(|p| p.c1)),
            opt(p.and_then(|p| p.c2)),
            opt(p.and_then(|p| p.sigma)),
            opt(p.map(|p| p.lambda)),
            opt(p.map(|p| p.a)),
            opt(p.and_then(|p| p.alpha)),
        ]);
    }

    let target: Box<dyn Write + '_> = match &a.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(out),
    };
    let mut w = csv::Writer::from_writer(target);
    let map = |e: csv::Error| Error::Data(format!("csv write failed: {e}"));
    w.write_record([
        "level",
        "accuracy",
        "best_index",
        "n_failed",
        "c",
        "c1",
        "c2",
        "sigma",
        "lambda",
        "a",
        "alpha",
    ])
    .map_err(map)?;
    for row in rows {
        w.write_record(&row).map_err(map)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

fn cmd_stats(a: StatsArgs, out: &mut dyn Write) -> Result<()> {
    let table = RankTable::from_csv_path(&a.table)?;
    let report = stat_report(&table, a.q_alpha, a.rank_decimals)?;
    match &a.out {
        Some(path) => {
            let mut f = create(path)?;
            report.write_json(&mut f)?;
            f.write_all(b"\n")
                .and_then(|_| f.flush())
                .map_err(io_err(path))?;
        }
        None => {
            report.write_json(&mut *out)?;
            writeln!(out).map_err(io_err(Path::new("<stdout>")))?;
        }
    }
    if let Some(path) = &a.csv {
        report.write_csv(create(path)?)?;
    }
    Ok(())
}

fn cmd_loss_curve(a: CurveArgs, out: &mut dyn Write) -> Result<()> {
    let spec = match a.loss {
        LossArg::Hinge => LossSpec::Hinge,
        LossArg::Pinball => LossSpec::Pinball { tau: a.tau },
        LossArg::Ramp => LossSpec::Ramp { theta: a.theta },
        LossArg::SquaredHinge => LossSpec::SquaredHinge,
        LossArg::SmoothPinball => LossSpec::SmoothPinball { tau: a.tau },
        LossArg::Linex => LossSpec::Linex { a: a.a },
        LossArg::Roboss => LossSpec::Roboss {
            a: a.a,
            lambda: a.lambda,
        },
        LossArg::Wave => LossSpec::Wave(WaveParams {
            a: a.a,
            lambda: a.lambda,
        }),
        LossArg::ZeroOneLambda => LossSpec::ZeroOneLambda { lambda: a.lambda },
    };
    match &a.out {
        Some(path) => {
            let mut f = create(path)?;
            write_loss_curve(&spec, a.from, a.to, a.points, !a.no_grad, &mut f)?;
            f.flush().map_err(io_err(path))
        }
        None => write_loss_curve(&spec, a.from, a.to, a.points, !a.no_grad, out),
    }
}
