//! Versioned JSON model files.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tsetlin_core::{Binarizer, Classifier, Machine, RawDataset, StateMatrix, TmConfig};

use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigDto {
    pub clauses: usize,
    pub t_margin: u32,
    pub s: f64,
    pub big_n: u32,
    pub boost_true_positive: bool,
    pub learnable_t: bool,
    pub tie_to_zero: bool,
    pub seed: u64,
    pub epochs: usize,
    pub initial_weight: u32,
}

impl From<&TmConfig> for ConfigDto {
    fn from(c: &TmConfig) -> Self {
        ConfigDto {
            clauses: c.clauses,
            t_margin: c.t_margin,
            s: c.s,
            big_n: c.big_n,
            boost_true_positive: c.boost_true_positive,
            learnable_t: c.learnable_t,
            tie_to_zero: c.tie_to_zero,
            seed: c.seed,
            epochs: c.epochs,
            initial_weight: c.initial_weight,
        }
    }
}

impl From<&ConfigDto> for TmConfig {
    fn from(c: &ConfigDto) -> Self {
        TmConfig {
            clauses: c.clauses,
            t_margin: c.t_margin,
            s: c.s,
            big_n: c.big_n,
            boost_true_positive: c.boost_true_positive,
            learnable_t: c.learnable_t,
            tie_to_zero: c.tie_to_zero,
            seed: c.seed,
            epochs: c.epochs,
            initial_weight: c.initial_weight,
        }
    }
}

/// One machine; `states` is row-major, `clauses × 2·features`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MachineDto {
    pub clauses: usize,
    pub features: usize,
    pub big_n: u32,
    pub t_margin: u32,
    pub states: Vec<u32>,
    pub weights: Vec<u32>,
}

impl From<&Machine> for MachineDto {
    fn from(m: &Machine) -> Self {
        MachineDto {
            clauses: m.clauses(),
            features: m.features(),
            big_n: m.states().big_n(),
            t_margin: m.t_margin(),
            states: m.states().as_slice().to_vec(),
            weights: m.weights().to_vec(),
        }
    }
}

/// Per raw feature, over the training rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl FeatureStats {
    pub fn of(rows: &[Vec<f64>], arity: usize) -> Vec<FeatureStats> {
        (0..arity)
            .map(|j| {
                let col = rows.iter().map(|r| r[j]);
                FeatureStats {
                    mean: col.clone().sum::<f64>() / rows.len() as f64,
                    min: col.clone().fold(f64::INFINITY, f64::min),
                    max: col.fold(f64::NEG_INFINITY, f64::max),
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub version: u32,
    pub config: ConfigDto,
    pub feature_names: Vec<String>,
    pub label_column: String,
    pub class_names: Vec<String>,
    /// Thermometer thresholds per raw feature.
    pub thresholds: Vec<Vec<f64>>,
    pub feature_stats: Vec<FeatureStats>,
    pub machines: Vec<MachineDto>,
}

impl ModelFile {
    pub fn new(
        cfg: &TmConfig,
        classifier: &Classifier,
        binarizer: &Binarizer,
        train: &RawDataset,
        label_column: &str,
    ) -> ModelFile {
        ModelFile {
            version: FORMAT_VERSION,
            config: cfg.into(),
            feature_names: train.feature_names.clone(),
            label_column: label_column.to_owned(),
            class_names: train.class_names.clone(),
            thresholds: binarizer.thresholds().to_vec(),
            feature_stats: FeatureStats::of(&train.rows, binarizer.arity()),
            machines: classifier.machines().iter().map(MachineDto::from).collect(),
        }
    }

    pub fn config(&self) -> TmConfig {
        (&self.config).into()
    }

    pub fn binarizer(&self) -> tsetlin_core::Result<Binarizer> {
        Binarizer::new(self.thresholds.clone())
    }

    pub fn classifier(&self) -> tsetlin_core::Result<Classifier> {
        let machines = self
            .machines
            .iter()
            .map(|m| {
                let states = StateMatrix::from_raw(m.clauses, m.features, m.big_n, m.states.clone())?;
                Machine::from_parts(states, m.weights.clone(), m.t_margin)
            })
            .collect::<tsetlin_core::Result<Vec<_>>>()?;
        Classifier::new(machines, self.config.tie_to_zero)
    }

    /// Checks that every part fits together; used after loading.
    pub fn validate(&self) -> std::result::Result<(Binarizer, Classifier), String> {
        let binarizer = self.binarizer().map_err(|e| e.to_string())?;
        let classifier = self.classifier().map_err(|e| e.to_string())?;
        if binarizer.width() != classifier.features() {
            return Err(format!(
                "binarizer emits {} bits, machines expect {}",
                binarizer.width(),
                classifier.features()
            ));
        }
        if self.feature_names.len() != binarizer.arity() || self.feature_stats.len() != binarizer.arity() {
            return Err("feature names or statistics do not match the thresholds".into());
        }
        if self.class_names.len() != classifier.n_classes() {
            return Err(format!(
                "{} class names for {} classes",
                self.class_names.len(),
                classifier.n_classes()
            ));
        }
        Ok((binarizer, classifier))
    }

    /// Bytes of the serialized states and weights of every machine.
    pub fn memory_estimate(&self) -> usize {
        self.machines
            .iter()
            .map(|m| {
                serde_json::to_vec(&m.states).map_or(0, |v| v.len())
                    + serde_json::to_vec(&m.weights).map_or(0, |v| v.len())
            })
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model file is always serializable")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Parses and validates a model file.
    pub fn from_json(text: &str, path: &Path) -> Result<(ModelFile, Binarizer, Classifier)> {
        let bad = |reason: String| CliError::Model {
            path: path.to_path_buf(),
            reason,
        };
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let found = value
            .get("version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| bad("no format version".into()))?;
        if found != u64::from(FORMAT_VERSION) {
            return Err(CliError::Version {
                path: path.to_path_buf(),
                found: u32::try_from(found).unwrap_or(u32::MAX),
                expected: FORMAT_VERSION,
            });
        }
        let file: ModelFile = serde_json::from_value(value).map_err(|e| bad(e.to_string()))?;
        let (binarizer, classifier) = file.validate().map_err(bad)?;
        Ok((file, binarizer, classifier))
    }

    pub fn load(path: &Path) -> Result<(ModelFile, Binarizer, Classifier)> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, path)
    }
}
