//! Command-line surface.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use serde::Serialize;
use tsetlin_core::binarize::BinarizeWarning;
use tsetlin_core::boundary::{grid_eval, GridCell, GridSpec};
use tsetlin_core::interpret::class_dnf;
use tsetlin_core::perceptron::{convergence_bound, labels_from_bits, perceptron_fit, PerceptronConfig};
use tsetlin_core::{Binarizer, Classifier, TmConfig};

use crate::data::{load_training, load_with_schema};
use crate::error::{CliError, Result};
use crate::experiment::{bench_run, median, new_trainer, prepare, BenchRow};
use crate::model_file::ModelFile;

#[derive(Debug, Parser)]
#[command(name = "tsetlin", version, about = "Weighted Tsetlin Machine classifier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model and write it with its per-epoch history
    Train(TrainArgs),
    /// Accuracy and confusion counts on a labelled file
    Eval(ModelData),
    /// One predicted class per input row
    Predict(ModelData),
    /// Per-class DNF rules
    Rules(RulesArgs),
    /// Decision regions over two raw features
    Boundary(BoundaryArgs),
    /// Epochs to a target accuracy, time per epoch and model size
    Bench(BenchArgs),
    /// Reference perceptron on a CSV file, with its mistake-bound report
    Perceptron(PerceptronArgs),
}

#[derive(Clone, Debug, Args)]
pub struct MachineArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub clauses: usize,
    #[arg(long = "T", default_value_t = 15)]
    pub t: u32,
    #[arg(long, default_value_t = 10.0)]
    pub s: f64,
    /// States per automaton (2N)
    #[arg(long, default_value_t = 200)]
    pub states: u32,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    /// Type I feedback on firing true literals without the 1/s inaction
    #[arg(long)]
    pub boost: bool,
    #[arg(long = "learnable-T")]
    pub learnable_t: bool,
}

impl MachineArgs {
    pub fn config(&self) -> Result<TmConfig> {
        if !self.states.is_multiple_of(2) {
            return Err(CliError::Argument(format!("--states {} is not even", self.states)));
        }
        let cfg = TmConfig {
            clauses: self.clauses,
            t_margin: self.t,
            s: self.s,
            big_n: self.states / 2,
            boost_true_positive: self.boost,
            learnable_t: self.learnable_t,
            seed: self.seed,
            epochs: self.epochs,
            ..TmConfig::default()
        };
        cfg.validate().map_err(CliError::Config)?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Label column; defaults to the last one
    #[arg(long)]
    pub label: Option<String>,
    /// Held-out share per class
    #[arg(long, default_value_t = 0.2)]
    pub test_fraction: f64,
    /// Thermometer thresholds per feature
    #[arg(long, default_value_t = 4)]
    pub thresholds: usize,
}

#[derive(Clone, Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub machine: MachineArgs,
    #[arg(long)]
    pub model: PathBuf,
    /// Defaults to the model path with a `.history.csv` extension
    #[arg(long)]
    pub history: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct ModelData {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
}

#[derive(Clone, Debug, Args)]
pub struct RulesArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    /// Signed literal ids per class
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Rules text; printed to stdout either way
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct BoundaryArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Ranges and fixed values from this file instead of the training statistics
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub fx: usize,
    #[arg(long, default_value_t = 1)]
    pub fy: usize,
    #[arg(long, default_value_t = 128)]
    pub resolution: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// 8-bit greyscale margin image
    #[arg(long)]
    pub pgm: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub machine: MachineArgs,
    /// Specificities to compare; overrides --s
    #[arg(long = "s-grid", value_delimiter = ',', default_values_t = [2.0, 10.0])]
    pub s_grid: Vec<f64>,
    /// Seeds per setting, counting up from --seed
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0.95)]
    pub target: f64,
    #[arg(long, default_value_t = 1000)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct PerceptronArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub max_epochs: usize,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Train(a) => train(&a, out).map(|_| ()),
        Command::Eval(a) => eval(&a, out).map(|_| ()),
        Command::Predict(a) => predict(&a, out).map(|_| ()),
        Command::Rules(a) => rules(&a, out).map(|_| ()),
        Command::Boundary(a) => boundary(&a, out).map(|_| ()),
        Command::Bench(a) => bench(&a, out).map(|_| ()),
        Command::Perceptron(a) => perceptron(&a, out).map(|_| ()),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Write {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainOutcome {
    pub train_accuracy: f64,
    pub test_accuracy: Option<f64>,
    pub model: ModelFile,
}

pub fn history_path(model: &Path) -> PathBuf {
    model.with_extension("history.csv")
}

pub fn train(a: &TrainArgs, out: &mut dyn Write) -> Result<TrainOutcome> {
    let cfg = a.machine.config()?;
    let training = load_training(&a.data.data, a.data.label.as_deref())?;
    let p = prepare(&training.raw, a.data.test_fraction, a.data.thresholds, cfg.seed)?;
    for w in &p.warnings {
        match *w {
            BinarizeWarning::ConstantColumn { feature } => {
                warn!(
                    "feature {} is constant and contributes no bits",
                    training.raw.feature_names[feature]
                )
            }
            BinarizeWarning::MergedThresholds { feature, kept } => info!(
                "feature {}: {kept} distinct thresholds of {}",
                training.raw.feature_names[feature], a.data.thresholds
            ),
        }
    }
    info!(
        "{} training rows, {} test rows, {} bits, {} classes",
        p.train.len(),
        p.test.as_ref().map_or(0, |t| t.len()),
        p.binarizer.width(),
        p.train.n_classes()
    );
    let mut trainer = new_trainer(&cfg, &p.train)?;
    let mut history = String::from("epoch,accuracy,mean_clause_len_pos,mean_clause_len_neg,mean_weight\n");
    for _ in 0..cfg.epochs {
        let r = trainer.run_epoch(&p.train).map_err(CliError::Data)?;
        info!("epoch {} train accuracy {:.4}", r.epoch, r.accuracy);
        history.push_str(&format!(
            "{},{},{},{},{}\n",
            r.epoch, r.accuracy, r.mean_clause_len_pos, r.mean_clause_len_neg, r.mean_weight
        ));
    }
    let clf = trainer.classifier();
    let train_accuracy = clf.accuracy(&p.train).map_err(CliError::Data)?;
    let test_accuracy = match &p.test {
        Some(t) => Some(clf.accuracy(t).map_err(CliError::Data)?),
        None => None,
    };
    let model = ModelFile::new(&cfg, clf, &p.binarizer, &p.train_raw, &training.label_column);
    model.save(&a.model)?;
    write_file(
        &a.history.clone().unwrap_or_else(|| history_path(&a.model)),
        history.as_bytes(),
    )?;
    let mut text = format!("train accuracy {train_accuracy:.4}\n");
    if let Some(t) = test_accuracy {
        text.push_str(&format!("test accuracy {t:.4}\n"));
    }
    emit(out, &text)?;
    Ok(TrainOutcome {
        train_accuracy,
        test_accuracy,
        model,
    })
}

struct Loaded {
    file: ModelFile,
    binarizer: Binarizer,
    classifier: Classifier,
}

fn load_model(path: &Path) -> Result<Loaded> {
    let (file, binarizer, classifier) = ModelFile::load(path)?;
    Ok(Loaded {
        file,
        binarizer,
        classifier,
    })
}

fn predict_rows(m: &Loaded, rows: &[Vec<f64>]) -> Result<Vec<usize>> {
    rows.iter()
        .map(|r| {
            let bits = m.binarizer.encode(r).map_err(CliError::Data)?;
            Ok(m.classifier.predict(&bits).map_err(CliError::Data)?.label)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalOutcome {
    pub accuracy: f64,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
}

pub fn eval(a: &ModelData, out: &mut dyn Write) -> Result<EvalOutcome> {
    let m = load_model(&a.model)?;
    let rows = load_with_schema(
        &a.data,
        &m.file.feature_names,
        &m.file.label_column,
        &m.file.class_names,
    )?;
    let labels = rows.labels.ok_or_else(|| CliError::MissingColumn {
        path: a.data.clone(),
        column: m.file.label_column.clone(),
    })?;
    let predicted = predict_rows(&m, &rows.rows)?;
    let k = m.file.class_names.len();
    let mut confusion = vec![vec![0; k]; k];
    for (&t, &p) in labels.iter().zip(&predicted) {
        confusion[t][p] += 1;
    }
    let correct: usize = (0..k).map(|c| confusion[c][c]).sum();
    let accuracy = correct as f64 / labels.len() as f64;
    let width = m.file.class_names.iter().map(String::len).max().unwrap_or(0);
    let mut text = format!("accuracy {accuracy:.4} ({correct}/{})\n", labels.len());
    text.push_str(&format!("{:width$}  predicted\n", "true"));
    for (c, row) in confusion.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|n| format!("{n:>5}")).collect();
        text.push_str(&format!("{:width$}  {}\n", m.file.class_names[c], cells.join("")));
    }
    emit(out, &text)?;
    Ok(EvalOutcome { accuracy, confusion })
}

pub fn predict(a: &ModelData, out: &mut dyn Write) -> Result<Vec<usize>> {
    let m = load_model(&a.model)?;
    let rows = load_with_schema(
        &a.data,
        &m.file.feature_names,
        &m.file.label_column,
        &m.file.class_names,
    )?;
    let predicted = predict_rows(&m, &rows.rows)?;
    let mut text = String::new();
    for &p in &predicted {
        text.push_str(&m.file.class_names[p]);
        text.push('\n');
    }
    emit(out, &text)?;
    Ok(predicted)
}

/// `x{id} = {feature} > {threshold}` for every encoded bit, ids from 0 as in
/// the rule text.
pub fn bit_legend(file: &ModelFile) -> Vec<String> {
    file.feature_names
        .iter()
        .zip(&file.thresholds)
        .flat_map(|(name, ts)| ts.iter().map(move |t| format!("{name} > {t}")))
        .enumerate()
        .map(|(id, cond)| format!("x{id} = {cond}"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassRulesJson {
    pub class: String,
    /// One list per term; `k` is bit `x{k-1}`, `-k` its negation.
    pub terms: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RulesOutcome {
    pub text: String,
    pub json: Vec<ClassRulesJson>,
}

pub fn rules(a: &RulesArgs, out: &mut dyn Write) -> Result<RulesOutcome> {
    let m = load_model(&a.model)?;
    let banks = m.classifier.banks();
    // a single machine separates class 1 from class 0
    let classes: Vec<(usize, usize)> = if banks.len() == 1 {
        vec![(1, 0)]
    } else {
        (0..banks.len()).map(|c| (c, c)).collect()
    };
    let mut text = String::new();
    let mut json = Vec::new();
    for (class, bank) in classes {
        let r = class_dnf(&banks[bank], a.top_k);
        let name = &m.file.class_names[class];
        if r.empty {
            warn!("class {name}: no positive clause has a non-zero weight");
        }
        text.push_str(&format!("{name}: {}\n", r.expression));
        json.push(ClassRulesJson {
            class: name.clone(),
            terms: r.expression.to_signed(),
        });
    }
    text.push('\n');
    for line in bit_legend(&m.file) {
        text.push_str(&line);
        text.push('\n');
    }
    emit(out, &text)?;
    if let Some(path) = &a.out {
        write_file(path, text.as_bytes())?;
    }
    if let Some(path) = &a.json {
        let body = serde_json::to_string_pretty(&json).expect("rules are always serializable");
        write_file(path, body.as_bytes())?;
    }
    Ok(RulesOutcome { text, json })
}

/// Rows of `x,y,label,margin`, `y` outer.
pub fn boundary_csv(cells: &[GridCell]) -> String {
    let mut s = String::from("x,y,label,margin\n");
    for c in cells {
        s.push_str(&format!("{},{},{},{}\n", c.x, c.y, c.label, c.margin));
    }
    s
}

/// Binary greyscale PGM, margins scaled linearly onto 0..=255. The first
/// image row is the highest `y`.
pub fn boundary_pgm(cells: &[GridCell], resolution: usize) -> Vec<u8> {
    let lo = cells.iter().map(|c| c.margin).min().unwrap_or(0);
    let hi = cells.iter().map(|c| c.margin).max().unwrap_or(0);
    let span = (hi - lo).max(1) as f64;
    let mut img = format!("P5\n{resolution} {resolution}\n255\n").into_bytes();
    for iy in (0..resolution).rev() {
        for ix in 0..resolution {
            let m = cells[iy * resolution + ix].margin;
            img.push((255.0 * (m - lo) as f64 / span).round() as u8);
        }
    }
    img
}

pub fn boundary(a: &BoundaryArgs, out: &mut dyn Write) -> Result<Vec<GridCell>> {
    let m = load_model(&a.model)?;
    let arity = m.binarizer.arity();
    for f in [a.fx, a.fy] {
        if f >= arity {
            return Err(CliError::Argument(format!(
                "feature index {f} is out of range for {arity} features"
            )));
        }
    }
    if a.fx == a.fy {
        return Err(CliError::Argument("--fx and --fy must differ".into()));
    }
    let spec = match &a.data {
        Some(path) => {
            let rows = load_with_schema(path, &m.file.feature_names, &m.file.label_column, &m.file.class_names)?;
            GridSpec::from_data(&rows.rows, a.fx, a.fy, a.resolution).map_err(CliError::Data)?
        }
        None => {
            let st = &m.file.feature_stats;
            let pad = |j: usize| {
                let span = st[j].max - st[j].min;
                let p = if span > 0.0 { 0.05 * span } else { 0.5 };
                (st[j].min - p, st[j].max + p)
            };
            GridSpec {
                fx: a.fx,
                fy: a.fy,
                x_range: pad(a.fx),
                y_range: pad(a.fy),
                resolution: a.resolution,
                fixed: st.iter().map(|s| s.mean).collect(),
            }
        }
    };
    let cells = grid_eval(&m.classifier, &m.binarizer, &spec).map_err(|e| match e {
        tsetlin_core::Error::InvalidGrid(_) => CliError::Argument(e.to_string()),
        e => CliError::Data(e),
    })?;
    write_file(&a.out, boundary_csv(&cells).as_bytes())?;
    if let Some(path) = &a.pgm {
        write_file(path, &boundary_pgm(&cells, a.resolution))?;
    }
    emit(out, &format!("{} cells written to {}\n", cells.len(), a.out.display()))?;
    Ok(cells)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSummary {
    pub s: f64,
    /// `None` when the median run did not reach the target.
    pub median_epochs: Option<f64>,
    pub median_ms_per_epoch: f64,
    pub median_memory_bytes: f64,
}

/// Runs that never reached the target count as `cap + 1` epochs.
pub fn summarize_bench(rows: &[BenchRow], cap: usize) -> Vec<BenchSummary> {
    let mut grid: Vec<f64> = Vec::new();
    for r in rows {
        if !grid.contains(&r.s) {
            grid.push(r.s);
        }
    }
    grid.iter()
        .map(|&s| {
            let of = |f: &dyn Fn(&BenchRow) -> f64| -> f64 {
                let v: Vec<f64> = rows.iter().filter(|r| r.s == s).map(f).collect();
                median(&v).unwrap_or(f64::NAN)
            };
            let epochs = of(&|r| r.epochs_to_target.map_or(cap as f64 + 1.0, |e| e as f64));
            BenchSummary {
                s,
                median_epochs: (epochs <= cap as f64).then_some(epochs),
                median_ms_per_epoch: of(&|r| r.ms_per_epoch),
                median_memory_bytes: of(&|r| r.memory_bytes as f64),
            }
        })
        .collect()
}

pub fn bench(a: &BenchArgs, out: &mut dyn Write) -> Result<Vec<BenchRow>> {
    let base = a.machine.config()?;
    let training = load_training(&a.data.data, a.data.label.as_deref())?;
    let mut rows = Vec::new();
    for &s in &a.s_grid {
        for seed in a.machine.seed..a.machine.seed + a.seeds {
            let cfg = TmConfig {
                s,
                seed,
                ..base.clone()
            };
            cfg.validate().map_err(CliError::Config)?;
            let p = prepare(&training.raw, a.data.test_fraction, a.data.thresholds, seed)?;
            let row = bench_run(&p, &cfg, a.target, a.cap)?;
            info!("s={s} seed={seed}: {row:?}");
            rows.push(row);
        }
    }
    let mut csv = String::from("s,seed,epochs_to_target,ms_per_epoch,memory_bytes\n");
    for r in &rows {
        let epochs = r.epochs_to_target.map_or("not reached".to_owned(), |e| e.to_string());
        csv.push_str(&format!(
            "{},{},{},{:.3},{}\n",
            r.s, r.seed, epochs, r.ms_per_epoch, r.memory_bytes
        ));
    }
    let mut text = format!("{:>6} {:>14} {:>14} {:>14}\n", "s", "epochs", "ms/epoch", "bytes");
    for sm in summarize_bench(&rows, a.cap) {
        let epochs = sm.median_epochs.map_or("not reached".to_owned(), |e| e.to_string());
        text.push_str(&format!(
            "{:>6} {:>14} {:>14.3} {:>14}\n",
            sm.s, epochs, sm.median_ms_per_epoch, sm.median_memory_bytes
        ));
    }
    emit(out, &text)?;
    if let Some(path) = &a.out {
        write_file(path, csv.as_bytes())?;
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerceptronReport {
    pub k: usize,
    /// `R²/γ²`; absent unless the run converged with a positive margin.
    pub bound: Option<f64>,
    #[serde(rename = "R")]
    pub r: f64,
    /// Margin of the learned separator, normalized to unit length.
    pub gamma: Option<f64>,
    pub converged: bool,
}

/// Fits a perceptron on the raw features with the first class as −1 and
/// the others as +1. The bias is learned as a constant extra input, so `R`
/// and `γ` are measured on the augmented vectors. The bound uses the margin
/// of the separator the run finds, a valid if loose witness.
pub fn perceptron(a: &PerceptronArgs, out: &mut dyn Write) -> Result<PerceptronReport> {
    let training = load_training(&a.data, a.label.as_deref())?;
    let raw = &training.raw;
    let bits: Vec<bool> = raw.labels.iter().map(|&l| l != 0).collect();
    let y = labels_from_bits(&bits);
    let x: Vec<Vec<f64>> = raw
        .rows
        .iter()
        .map(|r| r.iter().copied().chain([1.0]).collect())
        .collect();
    let cfg = PerceptronConfig {
        max_epochs: a.max_epochs,
        bias: false,
    };
    let (state, converged) = perceptron_fit(&x, &y, cfg).map_err(CliError::Data)?;
    let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let r = x.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let w = norm(&state.weights);
    let gamma = (converged && w > 0.0)
        .then(|| {
            x.iter()
                .zip(&y)
                .map(|(xn, &yn)| f64::from(yn) * state.score(xn) / w)
                .fold(f64::INFINITY, f64::min)
        })
        .filter(|g| *g > 0.0);
    let bound = gamma.and_then(|g| convergence_bound(r, g, false, 0).ok());
    let report = PerceptronReport {
        k: state.updates,
        bound,
        r,
        gamma,
        converged,
    };
    let body = serde_json::to_string_pretty(&report).expect("report is always serializable");
    emit(out, &format!("{body}\n"))?;
    Ok(report)
}
