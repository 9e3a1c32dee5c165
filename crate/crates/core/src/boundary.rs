//! Decision-boundary grids over two raw features.

use alloc::vec::Vec;

use crate::binarize::Binarizer;
use crate::error::{Error, Result};
use crate::model;
use crate::trainer::Classifier;

/// A regular grid over raw features `fx` and `fy`; every other feature is
/// held at its entry in `fixed`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub fx: usize,
    pub fy: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Cells per axis.
    pub resolution: usize,
    /// Full raw vector; entries `fx` and `fy` are overwritten per cell.
    pub fixed: Vec<f64>,
}

impl GridSpec {
    /// Ranges are the data min/max padded by 5% each side, the other features
    /// are fixed at their column means.
    pub fn from_data(rows: &[Vec<f64>], fx: usize, fy: usize, resolution: usize) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyDataset)?;
        let arity = first.len();
        for f in [fx, fy] {
            if f >= arity {
                return Err(Error::FeatureIndex {
                    index: f,
                    features: arity,
                });
            }
        }
        let mut fixed = alloc::vec![0.0; arity];
        let mut lo = alloc::vec![f64::INFINITY; arity];
        let mut hi = alloc::vec![f64::NEG_INFINITY; arity];
        for row in rows {
            for (j, &v) in row.iter().enumerate().take(arity) {
                fixed[j] += v / rows.len() as f64;
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        let pad = |j: usize| {
            let span = hi[j] - lo[j];
            let p = if span > 0.0 { 0.05 * span } else { 0.5 };
            (lo[j] - p, hi[j] + p)
        };
        Ok(GridSpec {
            fx,
            fy,
            x_range: pad(fx),
            y_range: pad(fy),
            resolution,
            fixed,
        })
    }

    pub fn validate(&self, arity: usize) -> Result<()> {
        for f in [self.fx, self.fy] {
            if f >= arity {
                return Err(Error::FeatureIndex {
                    index: f,
                    features: arity,
                });
            }
        }
        if self.fixed.len() != arity {
            return Err(Error::DimensionMismatch {
                what: "fixed feature values",
                expected: arity,
                actual: self.fixed.len(),
            });
        }
        if self.resolution < 2 {
            return Err(Error::InvalidGrid("resolution must be at least 2"));
        }
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        if !ok(self.x_range) || !ok(self.y_range) {
            return Err(Error::InvalidGrid("ranges need finite min < max"));
        }
        Ok(())
    }

    /// Coordinate of grid line `i` along an axis.
    pub fn coord(range: (f64, f64), i: usize, resolution: usize) -> f64 {
        range.0 + (range.1 - range.0) * i as f64 / (resolution - 1) as f64
    }

    /// Raw feature vector for cell `(ix, iy)`.
    pub fn point(&self, ix: usize, iy: usize) -> Vec<f64> {
        let mut raw = self.fixed.clone();
        raw[self.fx] = Self::coord(self.x_range, ix, self.resolution);
        raw[self.fy] = Self::coord(self.y_range, iy, self.resolution);
        raw
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridCell {
    pub x: f64,
    pub y: f64,
    pub label: usize,
    /// Binary: the vote sum. Multiclass: winner minus runner-up.
    pub margin: i64,
}

/// Predicts every cell; rows run along `y`, cells within a row along `x`.
pub fn grid_eval(model: &Classifier, binarizer: &Binarizer, spec: &GridSpec) -> Result<Vec<GridCell>> {
    spec.validate(binarizer.arity())?;
    if binarizer.width() != model.features() {
        return Err(Error::DimensionMismatch {
            what: "encoded width",
            expected: model.features(),
            actual: binarizer.width(),
        });
    }
    let banks = model.banks();
    let mut cells = Vec::with_capacity(spec.resolution * spec.resolution);
    for iy in 0..spec.resolution {
        for ix in 0..spec.resolution {
            let raw = spec.point(ix, iy);
            let p = model::predict(&banks, &binarizer.encode(&raw)?, model.tie_to_zero())?;
            cells.push(GridCell {
                x: raw[spec.fx],
                y: raw[spec.fy],
                label: p.label,
                margin: p.margin(),
            });
        }
    }
    Ok(cells)
}
