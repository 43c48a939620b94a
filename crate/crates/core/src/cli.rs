//! Command-line workflows. Every command is a pure function of its flags,
//! input files and seed; `--threads` only bounds parallelism.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error
//! (unreadable or malformed input), 3 numeric error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::baselines::{baseline_auc, ReducerKind};
use crate::error::{Error, Result};
use crate::harness::{consistency_check, repeated_evaluation, ConsistencyConfig, SplitConfig};
use crate::io::{
    curve_onto, ingest_csv, read_curves, write_consistency_csv, write_coverage_csv, write_replicates_csv,
    write_roc_csv, write_rows, write_text, write_violin_csv, AucRow, IngestOptions, ScoreRow,
};
use crate::pbc::{classification_threshold, loo_scores, SampleSystem, SystemMeta};
use crate::plot::{roc_svg, strip_svg};
use crate::roc::{auc_ci, default_p_grid, roc_curve, vertical_mean, Ecdf, RocCurve};
use crate::sim::{
    coverage_study, mc_auc_study, parse_sizes, CoverageConfig, Criterion, ModelSpec, ScenarioConfig, StudyConfig,
};

#[derive(Debug, Parser)]
#[command(
    name = "fnclass",
    version,
    about = "Probability-based classification of functional markers"
)]
pub struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true, env = "FNCLASS_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo AUC distributions for a generative model.
    Simulate(SimulateArgs),
    /// Repeated training/testing evaluation of a labeled data file.
    Eval(EvalArgs),
    /// Confidence-interval coverage study for a generative model.
    Coverage(CoverageArgs),
    /// Distance between in-sample and large-sample ROC curves across sizes.
    Consistency(ConsistencyArgs),
    /// Score new trajectories against a saved system.
    Score(ScoreArgs),
    /// Create, inspect or extend a saved system.
    System {
        #[command(subcommand)]
        action: SystemAction,
    },
    /// Plot ROC curves from score or ROC files.
    RocPlot(RocPlotArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Input CSV (`id,label,t,value`, or wide with --wide).
    #[arg(long)]
    pub data: PathBuf,
    /// Input is wide format: `id,label,<t_1>,...,<t_m>`.
    #[arg(long)]
    pub wide: bool,
    /// Resample every id onto this many equispaced points over the common range.
    #[arg(long)]
    pub resample: Option<usize>,
}

impl DataArgs {
    fn options(&self) -> IngestOptions {
        IngestOptions {
            resample_to: self.resample,
            wide: self.wide,
        }
    }
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Fraction of the sample used to build the system.
    #[arg(long = "train-frac", default_value_t = 1.0 / 3.0)]
    pub train_fraction: f64,
    /// Distance transform: identity, subgroup[:tau] or truncate[:tau].
    #[arg(long, default_value = "identity")]
    pub transform: String,
    /// Confidence level of the AUC intervals.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
}

impl SplitArgs {
    fn config(&self, seed: u64) -> Result<SplitConfig> {
        let cfg = SplitConfig {
            train_fraction: self.train_fraction,
            transform: self.transform.parse()?,
            level: self.level,
            seed,
        };
        cfg.validate().map_err(|e| Error::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario file (JSON or key = value); flags given explicitly override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model such as I-b.
    #[arg(long)]
    pub model: Option<String>,
    /// Sample size `n0,n1`; repeat or separate with `;` for several.
    #[arg(long)]
    pub sizes: Vec<String>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated subset of pbc,min,max,int.
    #[arg(long)]
    pub criteria: Option<String>,
    #[arg(long)]
    pub transform: Option<String>,
    #[arg(long = "train-frac")]
    pub train_fraction: Option<f64>,
    #[arg(long)]
    pub level: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub split: SplitArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long, required = true)]
    pub sizes: Vec<String>,
    #[arg(long)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub split: SplitArgs,
    /// Size of each sample behind the real-system AUC.
    #[arg(long = "real-size", default_value = "2000,2000")]
    pub real_size: String,
    /// Size of the fresh test sample defining each replicate's sample-system AUC.
    #[arg(long = "reference-size", default_value = "1000,1000")]
    pub reference_size: String,
    /// Output CSV file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConsistencyArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long, required = true)]
    pub sizes: Vec<String>,
    #[arg(long)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "identity")]
    pub transform: String,
    #[arg(long = "reference-size", default_value = "2000,2000")]
    pub reference_size: String,
    /// Output CSV file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Saved system (`.pbcsys.json`).
    #[arg(long)]
    pub system: PathBuf,
    /// Trajectories to score; labels may be empty.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub wide: bool,
    /// Target specificity of the classification threshold.
    #[arg(long, default_value_t = 0.8)]
    pub specificity: f64,
    /// Output CSV (standard output when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SystemAction {
    /// Build a system from a labeled data file.
    Save {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "identity")]
        transform: String,
        #[arg(long, default_value = "")]
        note: String,
        /// Output `.pbcsys.json` file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a summary of a saved system.
    Load {
        #[arg(long)]
        system: PathBuf,
    },
    /// Append labeled trajectories to a saved system.
    Feed {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        wide: bool,
        /// Output file (the input system is rewritten when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RocPlotArgs {
    /// CSV with `label` and `score` columns; one ROC ray per file.
    #[arg(long)]
    pub scores: Vec<PathBuf>,
    /// CSV with `p,sensitivity` columns; one ROC ray per file.
    #[arg(long)]
    pub roc: Vec<PathBuf>,
    #[arg(long, default_value = "ROC")]
    pub title: String,
    /// Output SVG file.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the plotted mean curve as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn usage(e: Error) -> Error {
    match e {
        Error::Domain(m) | Error::Spec(m) => Error::Usage(m),
        other => other,
    }
}

fn sizes_of(values: &[String]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for v in values {
        out.extend(parse_sizes(v)?);
    }
    if out.is_empty() {
        return Err(Error::Usage("at least one --sizes n0,n1 is required".into()));
    }
    Ok(out)
}

fn one_size(value: &str) -> Result<(usize, usize)> {
    match parse_sizes(value)?.as_slice() {
        [s] => Ok(*s),
        _ => Err(Error::Usage(format!("expected one size n0,n1, got '{value}'"))),
    }
}

fn reps_at_least_one(reps: usize) -> Result<usize> {
    if reps == 0 {
        return Err(Error::Usage("--reps must be at least 1".into()));
    }
    Ok(reps)
}

#[derive(Debug, Clone, Serialize)]
struct StudySummaryRow {
    scenario: String,
    n0: usize,
    n1: usize,
    criterion: String,
    reps: usize,
    mean_auc: f64,
    sd_auc: f64,
    q05: f64,
    median: f64,
    q95: f64,
    mean_ci_low: f64,
    mean_ci_high: f64,
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 {
        v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    let base = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            Some(ScenarioConfig::parse(&text, &path.display().to_string())?)
        }
        None => None,
    };
    let missing = |flag: &str| Error::Usage(format!("--{flag} is required (or give it in --config)"));
    let model: ModelSpec = match (&a.model, &base) {
        (Some(m), _) => m.parse()?,
        (None, Some(b)) => b.model_spec()?,
        (None, None) => return Err(missing("model")),
    };
    let sizes = match (a.sizes.is_empty(), &base) {
        (false, _) => sizes_of(&a.sizes)?,
        (true, Some(b)) => b.sizes.clone(),
        (true, None) => return Err(missing("sizes")),
    };
    let reps = reps_at_least_one(
        a.reps
            .or(base.as_ref().map(|b| b.reps))
            .ok_or_else(|| missing("reps"))?,
    )?;
    let seed = a
        .seed
        .or(base.as_ref().map(|b| b.seed))
        .ok_or_else(|| missing("seed"))?;
    let criteria: Vec<Criterion> = match (&a.criteria, &base) {
        (Some(c), _) => c.split(',').map(|s| s.parse()).collect::<Result<_>>()?,
        (None, Some(b)) => b.criteria()?,
        (None, None) => vec![
            Criterion::Pbc,
            Criterion::Reducer(ReducerKind::Min),
            Criterion::Reducer(ReducerKind::Max),
            Criterion::Reducer(ReducerKind::Int),
        ],
    };
    let default_split = base.as_ref().map(|b| b.split_config()).transpose()?.unwrap_or_default();
    let split = SplitConfig {
        train_fraction: a.train_fraction.unwrap_or(default_split.train_fraction),
        transform: match &a.transform {
            Some(t) => t.parse()?,
            None => default_split.transform,
        },
        level: a.level.unwrap_or(default_split.level),
        seed,
    };
    split.validate().map_err(usage)?;
    let rows = mc_auc_study(&model, &sizes, reps, &criteria, &StudyConfig { split })?;
    write_violin_csv(&rows, a.out.join("violin.csv"))?;

    let mut summary = Vec::new();
    let mut groups = Vec::new();
    for &(n0, n1) in &sizes {
        for c in &criteria {
            let sel: Vec<_> = rows
                .iter()
                .filter(|r| r.n0 == n0 && r.n1 == n1 && r.criterion == c.name())
                .collect();
            let aucs: Vec<f64> = sel.iter().map(|r| r.auc).collect();
            let (mean_auc, sd_auc) = mean_sd(&aucs);
            let e = Ecdf::new(&aucs)?;
            summary.push(StudySummaryRow {
                scenario: model.id(),
                n0,
                n1,
                criterion: c.name().to_string(),
                reps,
                mean_auc,
                sd_auc,
                q05: e.quantile(0.05)?,
                median: e.quantile(0.5)?,
                q95: e.quantile(0.95)?,
                mean_ci_low: sel.iter().map(|r| r.ci_low).sum::<f64>() / sel.len() as f64,
                mean_ci_high: sel.iter().map(|r| r.ci_high).sum::<f64>() / sel.len() as f64,
            });
            groups.push((format!("{} ({n0},{n1})", c.name()), aucs));
        }
    }
    write_rows(a.out.join("summary.csv"), &summary)?;
    write_text(
        a.out.join("violin.svg"),
        &strip_svg(&groups, &format!("Model {}", model.id())),
    )
}

#[derive(Debug, Clone, Serialize)]
struct RepeatedRow {
    reps: usize,
    mean_auc: f64,
    min_auc: f64,
    max_auc: f64,
    mean_ci_low: f64,
    mean_ci_high: f64,
    redraws: u32,
}

fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let reps = reps_at_least_one(a.reps)?;
    let config = a.split.config(a.seed)?;
    let ingested = ingest_csv(&a.data.data, &a.data.options())?;
    let sample = &ingested.sample;
    let summary = repeated_evaluation(sample, &config, reps)?;
    write_replicates_csv(&summary.results, a.out.join("replicates.csv"))?;
    write_roc_csv(&summary.mean_roc, a.out.join("mean_roc.csv"))?;
    write_rows(
        a.out.join("repeated.csv"),
        &[RepeatedRow {
            reps,
            mean_auc: summary.mean_auc,
            min_auc: summary.min_auc,
            max_auc: summary.max_auc,
            mean_ci_low: summary.mean_ci_low,
            mean_ci_high: summary.mean_ci_high,
            redraws: summary.redraws,
        }],
    )?;
    let rays: Vec<RocCurve> = summary.results.iter().map(|r| r.roc.clone()).collect();
    write_text(
        a.out.join("roc.svg"),
        &roc_svg(&rays, Some(&summary.mean_roc), "Training/testing ROC curves"),
    )?;

    let mut rows = Vec::new();
    let loo = loo_scores(sample, &config.transform)?;
    let est = auc_ci(&loo.negative(), &loo.positive(), config.level)?;
    rows.push(AucRow::new("pbc_loo", &est, est.auc));
    for kind in ReducerKind::ALL {
        let b = baseline_auc(sample, kind, config.level)?;
        rows.push(AucRow::new(kind.name(), &b.estimate, b.raw_auc));
    }
    write_rows(a.out.join("summary.csv"), &rows)?;
    write_rows(a.out.join("diagnostics.csv"), &ingested.diagnostics)
}

fn cmd_coverage(a: &CoverageArgs) -> Result<()> {
    let model: ModelSpec = a.model.parse()?;
    let sizes = sizes_of(&a.sizes)?;
    let config = CoverageConfig {
        split: a.split.config(a.seed)?,
        real_size: one_size(&a.real_size)?,
        reference_test_size: one_size(&a.reference_size)?,
    };
    let rows = coverage_study(&model, &sizes, reps_at_least_one(a.reps)?, &config)?;
    write_coverage_csv(&rows, &a.out)
}

fn cmd_consistency(a: &ConsistencyArgs) -> Result<()> {
    let model: ModelSpec = a.model.parse()?;
    let config = ConsistencyConfig {
        reference_size: one_size(&a.reference_size)?,
        transform: a.transform.parse()?,
        seed: a.seed,
    };
    let rows = consistency_check(&model, &sizes_of(&a.sizes)?, reps_at_least_one(a.reps)?, &config)?;
    write_consistency_csv(&rows, &a.out)
}

fn cmd_score(a: &ScoreArgs, stdout: &mut dyn Write) -> Result<()> {
    if !(0.0..=1.0).contains(&a.specificity) {
        return Err(Error::Usage(format!("--specificity {} outside [0, 1]", a.specificity)));
    }
    let system = SampleSystem::load(&a.system)?;
    let curves = read_curves(&a.data, a.wide)?;
    let threshold = classification_threshold(1.0 - a.specificity, &system.negative_reference_scores()?)?;
    let rows = curves
        .iter()
        .map(|c| {
            let score = system.score(&curve_onto(c, system.grid())?)?;
            Ok(ScoreRow {
                id: c.id.clone(),
                score,
                label_hat: u8::from(score > threshold),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    match &a.out {
        Some(path) => write_rows(path, &rows),
        None => {
            let mut w = csv::Writer::from_writer(stdout);
            for r in &rows {
                w.serialize(r)
                    .map_err(|e| Error::io("<stdout>", std::io::Error::other(e.to_string())))?;
            }
            w.flush().map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn cmd_system(action: &SystemAction, stdout: &mut dyn Write) -> Result<()> {
    match action {
        SystemAction::Save {
            data,
            transform,
            note,
            out,
        } => {
            let ingested = ingest_csv(&data.data, &data.options())?;
            let system = SampleSystem::new(
                ingested.sample,
                transform.parse()?,
                SystemMeta {
                    seed: None,
                    note: note.clone(),
                },
            )?;
            system.save(out)
        }
        SystemAction::Load { system } => {
            let s = SampleSystem::load(system)?;
            let (n0, n1) = s.counts();
            let g = s.grid();
            let text = format!(
                "n0 = {n0}\nn1 = {n1}\ngrid = {} points on [{}, {}]\ntransform = {}\nseed = {}\nnote = {}\n",
                g.len(),
                g.start(),
                g.end(),
                s.transform(),
                s.meta.seed.map_or_else(|| "none".to_string(), |v| v.to_string()),
                s.meta.note
            );
            stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
        }
        SystemAction::Feed {
            system,
            data,
            wide,
            out,
        } => {
            let mut s = SampleSystem::load(system)?;
            for c in read_curves(data, *wide)? {
                let label = c
                    .label
                    .ok_or_else(|| Error::Class(format!("id '{}' (line {}) has no label", c.id, c.line)))?;
                let f = curve_onto(&c, s.grid())?;
                s.feed(f, label, c.id.clone())?;
            }
            s.save(out.as_deref().unwrap_or(system))
        }
    }
}

#[derive(Debug, serde::Deserialize)]
struct ScoreLine {
    label: u8,
    score: f64,
}

fn read_score_file(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let source = path.display().to_string();
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::parse(&source, e.to_string()))?;
    let (mut neg, mut pos) = (Vec::new(), Vec::new());
    for rec in rdr.deserialize::<ScoreLine>() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(format!("{source}:{line}"), e.to_string())
        })?;
        match rec.label {
            0 => neg.push(rec.score),
            1 => pos.push(rec.score),
            other => return Err(Error::Class(format!("{source}: label {other} is not 0 or 1"))),
        }
    }
    Ok((neg, pos))
}

fn read_roc_file(path: &Path) -> Result<RocCurve> {
    let source = path.display().to_string();
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::parse(&source, e.to_string()))?;
    let (mut p, mut sensitivity) = (Vec::new(), Vec::new());
    for rec in rdr.deserialize::<crate::io::RocRow>() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(format!("{source}:{line}"), e.to_string())
        })?;
        p.push(rec.p);
        sensitivity.push(rec.sensitivity);
    }
    Ok(RocCurve { p, sensitivity })
}

fn cmd_roc_plot(a: &RocPlotArgs) -> Result<()> {
    let mut rays = Vec::new();
    for path in &a.scores {
        let (neg, pos) = read_score_file(path)?;
        rays.push(roc_curve(&neg, &pos, &default_p_grid())?);
    }
    for path in &a.roc {
        rays.push(read_roc_file(path)?);
    }
    if rays.is_empty() {
        return Err(Error::Usage("give at least one --scores or --roc file".into()));
    }
    let mean = vertical_mean(&rays)?;
    write_text(&a.out, &roc_svg(&rays, (rays.len() > 1).then_some(&mean), &a.title))?;
    if let Some(csv) = &a.csv {
        write_roc_csv(&mean, csv)?;
    }
    Ok(())
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let mut buf = Vec::new();
    let outcome = crate::with_threads(cli.threads, || match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Coverage(a) => cmd_coverage(a),
        Command::Consistency(a) => cmd_consistency(a),
        Command::Score(a) => cmd_score(a, &mut buf),
        Command::System { action } => cmd_system(action, &mut buf),
        Command::RocPlot(a) => cmd_roc_plot(a),
    });
    stdout.write_all(&buf).map_err(|e| Error::io("<stdout>", e))?;
    outcome
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors are reported on `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point of the `fnclass` binary.
pub fn main() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}
