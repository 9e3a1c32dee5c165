//! Reference perceptron with mistake-bound accounting.
//!
//! With a unit separator `w*` of margin `γ` (`y_n x_n·w* ≥ γ`) and inputs of
//! norm at most `R`, the classic perceptron makes at most `R²/γ²` updates.
//! Binary inputs of dimension `D` have `R ≤ √D`, giving `D/γ²`.
//!
//! [`gradient_weight_step`] is the clause-weight update written as a
//! perceptron step `w ← w + ηγC` with `η = 1`, where the clause outputs `C`
//! are the binary inputs and `γ = ±1` says whether the clause polarity agrees
//! with the label. It is kept independent of the trainer's event-based
//! update so the two can be compared.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerceptronConfig {
    pub max_epochs: usize,
    /// Learn a bias as an extra input fixed at 1.
    pub bias: bool,
}

impl Default for PerceptronConfig {
    fn default() -> Self {
        PerceptronConfig {
            max_epochs: 1000,
            bias: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerceptronState {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Number of mistake-driven updates.
    pub updates: usize,
    pub epochs: usize,
}

impl PerceptronState {
    pub fn score(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn predict(&self, x: &[f64]) -> i8 {
        if self.score(x) > 0.0 {
            1
        } else {
            -1
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Maps 0/1 labels to -1/+1.
pub fn labels_from_bits(bits: &[bool]) -> Vec<i8> {
    bits.iter().map(|&b| if b { 1 } else { -1 }).collect()
}

fn check_data(x: &[Vec<f64>], y: &[i8]) -> Result<usize> {
    let d = x.first().ok_or(Error::EmptyDataset)?.len();
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "labels",
            expected: x.len(),
            actual: y.len(),
        });
    }
    if let Some(row) = x.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch {
            what: "input width",
            expected: d,
            actual: row.len(),
        });
    }
    if let Some(&bad) = y.iter().find(|&&l| l != 1 && l != -1) {
        return Err(Error::InvalidPerceptronLabel(bad));
    }
    Ok(d)
}

/// Mistake-driven training: on `y (w·x + b) ≤ 0`, `w += y x` (and `b += y`).
/// Stops after the first mistake-free pass; the flag says whether one
/// happened within `max_epochs`.
pub fn perceptron_fit(x: &[Vec<f64>], y: &[i8], cfg: PerceptronConfig) -> Result<(PerceptronState, bool)> {
    let d = check_data(x, y)?;
    let mut state = PerceptronState {
        weights: vec![0.0; d],
        bias: 0.0,
        updates: 0,
        epochs: 0,
    };
    for _ in 0..cfg.max_epochs {
        state.epochs += 1;
        let mut mistakes = 0;
        for (xn, &yn) in x.iter().zip(y) {
            let yn = f64::from(yn);
            if yn * state.score(xn) <= 0.0 {
                for (w, v) in state.weights.iter_mut().zip(xn) {
                    *w += yn * v;
                }
                if cfg.bias {
                    state.bias += yn;
                }
                state.updates += 1;
                mistakes += 1;
            }
        }
        if mistakes == 0 {
            return Ok((state, true));
        }
    }
    Ok((state, false))
}

/// `R²/γ²`, or `D/γ²` for binary inputs of dimension `d`.
pub fn convergence_bound(r: f64, gamma: f64, binary_input: bool, d: usize) -> Result<f64> {
    if gamma.is_nan() || gamma <= 0.0 || gamma.is_infinite() {
        return Err(Error::InvalidGamma(gamma));
    }
    if binary_input {
        if d == 0 {
            return Err(Error::ZeroSize("input dimension"));
        }
        return Ok(d as f64 / (gamma * gamma));
    }
    if r.is_nan() || r <= 0.0 || r.is_infinite() {
        return Err(Error::InvalidRadius(r));
    }
    Ok(r * r / (gamma * gamma))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    /// Updates `k` the perceptron made.
    pub updates: usize,
    /// `R²/γ²`.
    pub bound: f64,
    /// `D/γ²` when every input is a 0/1 vector.
    pub binary_bound: Option<f64>,
    /// `max ‖x_n‖`.
    pub radius: f64,
    pub gamma: f64,
    pub converged: bool,
}

const UNIT_TOL: f64 = 1e-9;

/// Validates that `w_star` is a unit separator with margin `gamma`, trains a
/// bias-free perceptron and checks its update count against the bound.
pub fn check_bound(x: &[Vec<f64>], y: &[i8], w_star: &[f64], gamma: f64) -> Result<BoundReport> {
    let d = check_data(x, y)?;
    if w_star.len() != d {
        return Err(Error::DimensionMismatch {
            what: "separator",
            expected: d,
            actual: w_star.len(),
        });
    }
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::InvalidGamma(gamma));
    }
    let norm = libm::sqrt(dot(w_star, w_star));
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NonUnitSeparator(norm));
    }
    for (index, (xn, &yn)) in x.iter().zip(y).enumerate() {
        let margin = f64::from(yn) * dot(xn, w_star);
        if margin < gamma {
            return Err(Error::MarginViolated { index, margin, gamma });
        }
    }
    let radius = x.iter().map(|xn| libm::sqrt(dot(xn, xn))).fold(0.0, f64::max);
    let bound = convergence_bound(radius, gamma, false, d)?;
    let binary = x.iter().flatten().all(|&v| v == 0.0 || v == 1.0);
    let binary_bound = if binary {
        Some(convergence_bound(radius, gamma, true, d)?)
    } else {
        None
    };
    // every pass that is not mistake-free makes at least one update
    let max_epochs = (bound as usize).saturating_add(2);
    let (state, converged) = perceptron_fit(
        x,
        y,
        PerceptronConfig {
            max_epochs,
            bias: false,
        },
    )?;
    if state.updates as f64 > bound {
        return Err(Error::BoundViolated {
            updates: state.updates,
            bound,
        });
    }
    Ok(BoundReport {
        updates: state.updates,
        bound,
        binary_bound,
        radius,
        gamma,
        converged,
    })
}

/// `w_i ← max(0, w_i + γ_i C_i)` on the selected clauses; returns the deltas.
pub fn gradient_weight_step(
    weights: &mut [u32],
    clause_outputs: &[bool],
    selected: &[bool],
    directions: &[i8],
) -> Vec<i32> {
    weights
        .iter_mut()
        .enumerate()
        .map(|(i, w)| {
            if !selected[i] {
                return 0;
            }
            let c = i64::from(clause_outputs[i]);
            let next = (i64::from(*w) + i64::from(directions[i]) * c).max(0);
            let delta = (next - i64::from(*w)) as i32;
            *w = next as u32;
            delta
        })
        .collect()
}

/// `T ← T − γ` with `γ = +1` for a correct prediction and `−1` otherwise,
/// floored at 1.
pub fn gradient_threshold_step(t: u32, gamma: i8) -> u32 {
    (i64::from(t) - i64::from(gamma)).max(1) as u32
}
