//! Split, encode, train and measure; shared by the commands and the tests.

use std::time::Instant;

use rand::SeedableRng;
use tsetlin_core::binarize::{fit_thresholds, stratified_split, BinarizeWarning};
use tsetlin_core::{Binarizer, Classifier, Dataset, RawDataset, TmConfig, Trainer};

use crate::error::{CliError, Result};
use crate::model_file::ModelFile;

/// Stream of the run seed reserved for the train/test split; the trainer
/// uses streams from 0 upwards.
const SPLIT_STREAM: u64 = u64::MAX;

pub fn split_rng(seed: u64) -> tsetlin_core::Rng {
    let mut rng = tsetlin_core::Rng::seed_from_u64(seed);
    rng.set_stream(SPLIT_STREAM);
    rng
}

#[derive(Clone, Debug)]
pub struct Prepared {
    pub binarizer: Binarizer,
    pub warnings: Vec<BinarizeWarning>,
    pub train_raw: RawDataset,
    pub test_raw: RawDataset,
    pub train: Dataset,
    /// `None` when the split leaves no test rows.
    pub test: Option<Dataset>,
}

/// Stratified split, then thresholds fitted on the training side only.
pub fn prepare(raw: &RawDataset, test_fraction: f64, thresholds: usize, seed: u64) -> Result<Prepared> {
    if !(0.0..1.0).contains(&test_fraction) {
        return Err(CliError::Argument(format!(
            "test fraction {test_fraction} is outside [0, 1)"
        )));
    }
    let (train_idx, test_idx) = stratified_split(&raw.labels, test_fraction, &mut split_rng(seed));
    let train_raw = raw.subset(&train_idx);
    let test_raw = raw.subset(&test_idx);
    let (binarizer, warnings) = fit_thresholds(&train_raw.rows, thresholds).map_err(CliError::Data)?;
    let train = binarizer.encode_dataset(&train_raw).map_err(CliError::Data)?;
    let test = if test_raw.is_empty() {
        None
    } else {
        Some(binarizer.encode_dataset(&test_raw).map_err(CliError::Data)?)
    };
    Ok(Prepared {
        binarizer,
        warnings,
        train_raw,
        test_raw,
        train,
        test,
    })
}

pub fn new_trainer(cfg: &TmConfig, data: &Dataset) -> Result<Trainer> {
    Trainer::new(cfg.clone(), data.features(), data.n_classes()).map_err(CliError::Config)
}

/// Accuracy on the test side, or on the training side when there is none.
pub fn holdout_accuracy(clf: &Classifier, p: &Prepared) -> Result<f64> {
    clf.accuracy(p.test.as_ref().unwrap_or(&p.train))
        .map_err(CliError::Data)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub s: f64,
    pub seed: u64,
    /// First epoch whose held-out accuracy reached the target.
    pub epochs_to_target: Option<usize>,
    pub epochs_run: usize,
    pub ms_per_epoch: f64,
    /// [`ModelFile::memory_estimate`] of the model when training stopped.
    pub memory_bytes: usize,
}

/// Trains until held-out accuracy reaches `target` or `cap` epochs pass.
pub fn bench_run(p: &Prepared, cfg: &TmConfig, target: f64, cap: usize) -> Result<BenchRow> {
    let mut trainer = new_trainer(cfg, &p.train)?;
    let mut reached = None;
    let mut elapsed = 0.0;
    while trainer.epochs_done() < cap {
        let start = Instant::now();
        trainer.run_epoch(&p.train).map_err(CliError::Data)?;
        elapsed += start.elapsed().as_secs_f64();
        if holdout_accuracy(trainer.classifier(), p)? >= target {
            reached = Some(trainer.epochs_done());
            break;
        }
    }
    let epochs_run = trainer.epochs_done();
    let model = ModelFile::new(cfg, trainer.classifier(), &p.binarizer, &p.train_raw, "");
    Ok(BenchRow {
        s: cfg.s,
        seed: cfg.seed,
        epochs_to_target: reached,
        epochs_run,
        ms_per_epoch: if epochs_run == 0 {
            0.0
        } else {
            1e3 * elapsed / epochs_run as f64
        },
        memory_bytes: model.memory_estimate(),
    })
}

/// Median of a non-empty list; the mean of the middle pair for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(v[n / 2]),
        _ => Some((v[n / 2 - 1] + v[n / 2]) / 2.0),
    }
}
