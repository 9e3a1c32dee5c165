//! Stochastic feedback: clause selection and the Type I / Type II tables.
//!
//! Type I feedback goes to clauses whose polarity agrees with the label
//! (positive clauses when `y = 1`, negative clauses when `y = 0`) and Type II
//! to the others. Each selected automaton draws an outcome from its table
//! cell. Reward on Include and penalty on Exclude push the state up; reward on
//! Exclude and penalty on Include push it down.
//!
//! | Type I, Include | clause 1, lit 1 | clause 0        |
//! |-----------------|-----------------|-----------------|
//! | reward          | (s-1)/s         | 0               |
//! | inaction        | 1/s             | (s-1)/s         |
//! | penalty         | 0               | 1/s             |
//!
//! | Type I, Exclude | clause 1, lit 1 | clause 1, lit 0 | clause 0 |
//! |-----------------|-----------------|-----------------|----------|
//! | reward          | 0               | 1/s             | 1/s      |
//! | inaction        | 1/s             | (s-1)/s         | (s-1)/s  |
//! | penalty         | (s-1)/s         | 0               | 0        |
//!
//! Type II is deterministic: penalty 1 for an excluded 0-literal of a firing
//! clause, inaction everywhere else. `(clause 1, literal 0, Include)` cannot
//! occur in either table since an included false literal forces the clause
//! to 0.

use alloc::vec::Vec;

use rand::Rng;

use crate::automata::{Action, FeedbackKind, FeedbackMatrices, StateMatrix};
use crate::error::{Error, Result};
use crate::model::{eval_unchecked, LiteralVector, Mode, Polarity};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeedbackProbs {
    pub reward: f64,
    pub inaction: f64,
    pub penalty: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Reward,
    Inaction,
    Penalty,
}

impl FeedbackProbs {
    const INACTION: FeedbackProbs = FeedbackProbs {
        reward: 0.0,
        inaction: 1.0,
        penalty: 0.0,
    };

    /// Draws one outcome with a single uniform variate. The interval is laid
    /// out reward, penalty, inaction, so a variate of 0 always produces
    /// feedback when the cell allows any.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Outcome {
        let u: f64 = rng.random();
        if u < self.reward {
            Outcome::Reward
        } else if u < self.reward + self.penalty {
            Outcome::Penalty
        } else if self.inaction > 0.0 {
            Outcome::Inaction
        } else if self.penalty > 0.0 {
            // reward + penalty rounded just below 1
            Outcome::Penalty
        } else {
            Outcome::Reward
        }
    }
}

/// Direction of the state move: `+1` toward include, `-1` toward exclude.
pub fn state_move(act: Action, outcome: Outcome) -> i8 {
    match (act, outcome) {
        (_, Outcome::Inaction) => 0,
        (Action::Include, Outcome::Reward) | (Action::Exclude, Outcome::Penalty) => 1,
        (Action::Exclude, Outcome::Reward) | (Action::Include, Outcome::Penalty) => -1,
    }
}

/// `ε / 2T` with `ε = T − v` for `y = 1` and `ε = T + v` for `y = 0`, after
/// clamping `v` into `[−T, T]`.
pub fn feedback_probability(v: i64, t: u32, y: bool) -> Result<f64> {
    if t < 1 {
        return Err(Error::InvalidMargin(t));
    }
    let t = i64::from(t);
    let v = v.clamp(-t, t);
    let eps = if y { t - v } else { t + v };
    Ok(eps as f64 / (2 * t) as f64)
}

/// Table cell for Type I feedback.
///
/// # Panics
///
/// On the unreachable cell `(clause 1, literal 0, Include)`.
pub fn type_i_probs(clause_out: bool, literal: bool, act: Action, s: f64, boost: bool) -> FeedbackProbs {
    let high = (s - 1.0) / s;
    let low = 1.0 / s;
    match (clause_out, literal, act) {
        (true, true, Action::Include) => {
            if boost {
                FeedbackProbs {
                    reward: 1.0,
                    inaction: 0.0,
                    penalty: 0.0,
                }
            } else {
                FeedbackProbs {
                    reward: high,
                    inaction: low,
                    penalty: 0.0,
                }
            }
        }
        (true, true, Action::Exclude) => {
            if boost {
                FeedbackProbs {
                    reward: 0.0,
                    inaction: 0.0,
                    penalty: 1.0,
                }
            } else {
                FeedbackProbs {
                    reward: 0.0,
                    inaction: low,
                    penalty: high,
                }
            }
        }
        (true, false, Action::Include) => {
            panic!("Type I feedback queried for an included false literal of a firing clause")
        }
        (true, false, Action::Exclude) | (false, _, Action::Exclude) => FeedbackProbs {
            reward: low,
            inaction: high,
            penalty: 0.0,
        },
        (false, _, Action::Include) => FeedbackProbs {
            reward: 0.0,
            inaction: high,
            penalty: low,
        },
    }
}

/// Table cell for Type II feedback.
///
/// # Panics
///
/// On the unreachable cell `(clause 1, literal 0, Include)`.
pub fn type_ii_probs(clause_out: bool, literal: bool, act: Action) -> FeedbackProbs {
    match (clause_out, literal, act) {
        (true, false, Action::Exclude) => FeedbackProbs {
            reward: 0.0,
            inaction: 0.0,
            penalty: 1.0,
        },
        (true, false, Action::Include) => {
            panic!("Type II feedback queried for an included false literal of a firing clause")
        }
        _ => FeedbackProbs::INACTION,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FeedbackType {
    TypeI,
    TypeII,
}

impl FeedbackType {
    pub fn for_clause(polarity: Polarity, y: bool) -> FeedbackType {
        match (polarity, y) {
            (Polarity::Positive, true) | (Polarity::Negative, false) => FeedbackType::TypeI,
            _ => FeedbackType::TypeII,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeedbackParams {
    pub t: u32,
    pub s: f64,
    pub boost: bool,
}

/// Everything decided for one training sample before the states move.
#[derive(Clone, Debug, PartialEq)]
pub struct FeedbackRound {
    /// Training-mode clause outputs.
    pub outputs: Vec<bool>,
    /// Clause selected for feedback (`P_i = 1`).
    pub selected: Vec<bool>,
    /// Weighted inference-mode vote sum the selection probability used.
    pub vote_sum: i64,
    pub probability: f64,
    pub matrices: FeedbackMatrices,
}

/// Samples clause selection and per-automaton moves for one sample.
///
/// Draws come from `rng` in a fixed order: for each clause, one selection
/// draw, then (if selected and the table needs it) one draw per literal.
pub fn sample_feedback<R: Rng + ?Sized>(
    states: &StateMatrix,
    weights: &[u32],
    lit: &LiteralVector,
    y: bool,
    params: &FeedbackParams,
    rng: &mut R,
) -> Result<FeedbackRound> {
    if lit.len() != states.literals() {
        return Err(Error::DimensionMismatch {
            what: "literal vector",
            expected: states.literals(),
            actual: lit.len(),
        });
    }
    if weights.len() != states.clauses() {
        return Err(Error::DimensionMismatch {
            what: "clause weights",
            expected: states.clauses(),
            actual: weights.len(),
        });
    }
    let n = states.clauses();
    let width = states.literals();
    let big_n = states.big_n();
    let outputs: Vec<bool> = (0..n)
        .map(|i| {
            let row: Vec<bool> = states.row(i).iter().map(|&s| s > big_n).collect();
            eval_unchecked(&row, lit.as_slice(), Mode::Train)
        })
        .collect();
    // Empty clauses fire only in training mode; the selection probability is
    // driven by the votes the classifier would actually cast.
    let vote_sum: i64 = (0..n)
        .filter(|&i| outputs[i] && states.row(i).iter().any(|&s| s > big_n))
        .map(|i| Polarity::of(i).sign() * i64::from(weights[i]))
        .sum();
    let probability = feedback_probability(vote_sum, params.t, y)?;

    let mut matrices = FeedbackMatrices::zeros(n, width);
    let mut selected = Vec::with_capacity(n);
    for (i, &fired) in outputs.iter().enumerate() {
        let pick = rng.random::<f64>() < probability;
        selected.push(pick);
        if !pick {
            continue;
        }
        match FeedbackType::for_clause(Polarity::of(i), y) {
            FeedbackType::TypeI => {
                for k in 0..width {
                    let act = states.action(i, k);
                    let probs = type_i_probs(fired, lit.get(k), act, params.s, params.boost);
                    let kind = match state_move(act, probs.sample(rng)) {
                        1 => FeedbackKind::Ia,
                        -1 => FeedbackKind::Ib,
                        _ => FeedbackKind::None,
                    };
                    matrices.set(i, k, kind);
                }
            }
            FeedbackType::TypeII if fired => {
                for k in 0..width {
                    let act = states.action(i, k);
                    let probs = type_ii_probs(true, lit.get(k), act);
                    if state_move(act, probs.sample(rng)) == 1 {
                        matrices.set(i, k, FeedbackKind::II);
                    }
                }
            }
            FeedbackType::TypeII => {}
        }
    }
    Ok(FeedbackRound {
        outputs,
        selected,
        vote_sum,
        probability,
        matrices,
    })
}
