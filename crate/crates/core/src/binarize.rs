//! Thermometer binarization and Boolean datasets.
//!
//! Each real feature gets an ascending list of thresholds; bit `j` of that
//! feature is set iff the value is strictly above threshold `j`. Thresholds
//! are fitted at the `j/(k+1)` quantiles of the training column.

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Binarizer {
    thresholds: Vec<Vec<f64>>,
}

/// A non-fatal fitting issue for one feature.
#[derive(Clone, Debug, PartialEq)]
pub enum BinarizeWarning {
    /// The column has a single distinct value, so it contributes no bits.
    ConstantColumn { feature: usize },
    /// Some quantiles coincided or split nothing, fewer than `k` bits remain.
    MergedThresholds { feature: usize, kept: usize },
}

/// Linear-interpolation quantile of an ascending slice (numpy's default).
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Fits `k` quantile thresholds per column of `raw` (rows are samples).
///
/// Thresholds that put no training value above them, or that induce the same
/// split of the training column as an earlier threshold, are dropped, so a
/// feature may end up with fewer than `k` bits.
pub fn fit_thresholds(raw: &[Vec<f64>], k: usize) -> Result<(Binarizer, Vec<BinarizeWarning>)> {
    if k == 0 {
        return Err(Error::ZeroSize("thresholds per feature"));
    }
    let first = raw.first().ok_or(Error::EmptyDataset)?;
    let arity = first.len();
    if arity == 0 {
        return Err(Error::EmptyInput);
    }
    let mut thresholds = Vec::with_capacity(arity);
    let mut warnings = Vec::new();
    for f in 0..arity {
        let mut col = Vec::with_capacity(raw.len());
        for row in raw {
            if row.len() != arity {
                return Err(Error::DimensionMismatch {
                    what: "raw row",
                    expected: arity,
                    actual: row.len(),
                });
            }
            col.push(row[f]);
        }
        col.sort_by(f64::total_cmp);
        if col[0] == col[col.len() - 1] {
            warnings.push(BinarizeWarning::ConstantColumn { feature: f });
            thresholds.push(Vec::new());
            continue;
        }
        let mut kept: Vec<f64> = Vec::with_capacity(k);
        let mut last_split = 0;
        for j in 1..=k {
            let t = quantile(&col, j as f64 / (k + 1) as f64);
            let below = col.partition_point(|&v| v <= t);
            if below == col.len() || below == last_split {
                continue;
            }
            last_split = below;
            kept.push(t);
        }
        if kept.len() < k {
            warnings.push(BinarizeWarning::MergedThresholds {
                feature: f,
                kept: kept.len(),
            });
        }
        thresholds.push(kept);
    }
    Ok((Binarizer { thresholds }, warnings))
}

impl Binarizer {
    /// Thresholds must be strictly increasing within each feature.
    pub fn new(thresholds: Vec<Vec<f64>>) -> Result<Self> {
        for (f, ts) in thresholds.iter().enumerate() {
            if ts.iter().any(|t| !t.is_finite()) || ts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidThresholds(f));
            }
        }
        Ok(Binarizer { thresholds })
    }

    /// Number of raw input features.
    pub fn arity(&self) -> usize {
        self.thresholds.len()
    }

    /// Total number of output bits.
    pub fn width(&self) -> usize {
        self.thresholds.iter().map(Vec::len).sum()
    }

    pub fn thresholds(&self) -> &[Vec<f64>] {
        &self.thresholds
    }

    /// Thermometer bits, feature by feature.
    pub fn encode(&self, x: &[f64]) -> Result<Vec<bool>> {
        if x.len() != self.arity() {
            return Err(Error::DimensionMismatch {
                what: "raw feature vector",
                expected: self.arity(),
                actual: x.len(),
            });
        }
        let mut bits = Vec::with_capacity(self.width());
        for (v, ts) in x.iter().zip(&self.thresholds) {
            bits.extend(ts.iter().map(|t| v > t));
        }
        Ok(bits)
    }

    /// Encodes a raw dataset into a Boolean one.
    pub fn encode_dataset(&self, raw: &RawDataset) -> Result<Dataset> {
        let samples = raw
            .rows
            .iter()
            .zip(&raw.labels)
            .map(|(row, &label)| {
                Ok(Sample {
                    features: self.encode(row)?,
                    label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(samples, raw.class_names.len())
    }
}

/// Real-valued rows with dense class ids, as read from a CSV file.
#[derive(Clone, Debug, PartialEq)]
pub struct RawDataset {
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

impl RawDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> RawDataset {
        RawDataset {
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub features: Vec<bool>,
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    samples: Vec<Sample>,
    n_classes: usize,
    features: usize,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>, n_classes: usize) -> Result<Self> {
        let features = samples.first().ok_or(Error::EmptyDataset)?.features.len();
        if features == 0 {
            return Err(Error::EmptyInput);
        }
        for s in &samples {
            if s.features.len() != features {
                return Err(Error::DimensionMismatch {
                    what: "sample width",
                    expected: features,
                    actual: s.features.len(),
                });
            }
            if s.label >= n_classes {
                return Err(Error::InvalidLabel {
                    label: s.label,
                    classes: n_classes,
                });
            }
        }
        Ok(Dataset {
            samples,
            n_classes,
            features,
        })
    }

    /// Builds a two-class dataset from Boolean rows and 0/1 targets.
    pub fn binary(rows: &[Vec<bool>], targets: &[bool]) -> Result<Self> {
        if rows.len() != targets.len() {
            return Err(Error::DimensionMismatch {
                what: "targets",
                expected: rows.len(),
                actual: targets.len(),
            });
        }
        let samples = rows
            .iter()
            .zip(targets)
            .map(|(r, &y)| Sample {
                features: r.clone(),
                label: usize::from(y),
            })
            .collect();
        Dataset::new(samples, 2)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn features(&self) -> usize {
        self.features
    }
}

/// Stratified split: each class contributes `round(count * test_fraction)`
/// samples to the test side. Returns `(train, test)` index lists, each sorted.
pub fn stratified_split<R: Rng + ?Sized>(
    labels: &[usize],
    test_fraction: f64,
    rng: &mut R,
) -> (Vec<usize>, Vec<usize>) {
    let n_classes = labels.iter().max().map_or(0, |&m| m + 1);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for c in 0..n_classes {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
        idx.shuffle(rng);
        let n_test = libm::round(idx.len() as f64 * test_fraction.clamp(0.0, 1.0)) as usize;
        test.extend_from_slice(&idx[..n_test]);
        train.extend_from_slice(&idx[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}
