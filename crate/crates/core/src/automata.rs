//! Tsetlin Automata state matrix.
//!
//! One automaton per `(clause, literal)` pair, stored row-major as an
//! `n x 2o` matrix. States `1..=N` select [`Action::Exclude`] and states
//! `N+1..=2N` select [`Action::Include`].

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Exclude,
    Include,
}

impl Action {
    pub fn is_include(self) -> bool {
        self == Action::Include
    }
}

/// Maps an automaton state to its action: include iff `state > N`.
pub fn action(state: u32, big_n: u32) -> Result<Action> {
    let max = 2 * big_n;
    if state == 0 || state > max {
        return Err(Error::StateOutOfRange { state, max });
    }
    Ok(if state > big_n {
        Action::Include
    } else {
        Action::Exclude
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateMatrix {
    clauses: usize,
    features: usize,
    big_n: u32,
    states: Vec<u32>,
}

/// Draws a fresh state matrix with every automaton on one of the two states
/// adjacent to the action boundary, `N` or `N + 1`.
pub fn init_states<R: Rng + ?Sized>(clauses: usize, features: usize, big_n: u32, rng: &mut R) -> Result<StateMatrix> {
    check_shape(clauses, features, big_n)?;
    let states = (0..clauses * 2 * features)
        .map(|_| big_n + u32::from(rng.random::<bool>()))
        .collect();
    Ok(StateMatrix {
        clauses,
        features,
        big_n,
        states,
    })
}

fn check_shape(clauses: usize, features: usize, big_n: u32) -> Result<()> {
    if clauses == 0 || !clauses.is_multiple_of(2) {
        return Err(Error::ClauseCount(clauses));
    }
    if features == 0 {
        return Err(Error::ZeroSize("feature count"));
    }
    if big_n == 0 {
        return Err(Error::ZeroSize("N"));
    }
    Ok(())
}

impl StateMatrix {
    /// Rebuilds a matrix from row-major states, validating every entry.
    pub fn from_raw(clauses: usize, features: usize, big_n: u32, states: Vec<u32>) -> Result<Self> {
        check_shape(clauses, features, big_n)?;
        let expected = clauses * 2 * features;
        if states.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "state matrix",
                expected,
                actual: states.len(),
            });
        }
        if let Some(&state) = states.iter().find(|&&s| s == 0 || s > 2 * big_n) {
            return Err(Error::StateOutOfRange { state, max: 2 * big_n });
        }
        Ok(StateMatrix {
            clauses,
            features,
            big_n,
            states,
        })
    }

    /// Number of clauses `n`.
    pub fn clauses(&self) -> usize {
        self.clauses
    }

    /// Number of input features `o`.
    pub fn features(&self) -> usize {
        self.features
    }

    /// Number of literals per clause, `2o`.
    pub fn literals(&self) -> usize {
        2 * self.features
    }

    pub fn big_n(&self) -> u32 {
        self.big_n
    }

    pub fn get(&self, clause: usize, literal: usize) -> u32 {
        self.states[clause * self.literals() + literal]
    }

    pub fn row(&self, clause: usize) -> &[u32] {
        let w = self.literals();
        &self.states[clause * w..(clause + 1) * w]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.states
    }

    pub fn action(&self, clause: usize, literal: usize) -> Action {
        if self.get(clause, literal) > self.big_n {
            Action::Include
        } else {
            Action::Exclude
        }
    }

    /// Include flags for one clause.
    pub fn include_row(&self, clause: usize) -> Vec<bool> {
        self.row(clause).iter().map(|&s| s > self.big_n).collect()
    }

    /// Include flags for every clause, row-major.
    pub fn include_mask(&self) -> Vec<bool> {
        self.states.iter().map(|&s| s > self.big_n).collect()
    }

    /// Total number of included literals.
    pub fn included_count(&self) -> usize {
        self.states.iter().filter(|&&s| s > self.big_n).count()
    }
}

/// Which feedback, if any, a single automaton receives in one step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FeedbackKind {
    #[default]
    None,
    /// Type Ia: move toward include.
    Ia,
    /// Type Ib: move toward exclude.
    Ib,
    /// Type II: move toward include.
    II,
}

impl FeedbackKind {
    pub fn delta(self) -> i64 {
        match self {
            FeedbackKind::None => 0,
            FeedbackKind::Ia | FeedbackKind::II => 1,
            FeedbackKind::Ib => -1,
        }
    }
}

/// The three 0/1 feedback matrices `F^Ia`, `F^Ib`, `F^II`, stored as one cell
/// per automaton so that at most one of them is set per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeedbackMatrices {
    clauses: usize,
    literals: usize,
    cells: Vec<FeedbackKind>,
}

impl FeedbackMatrices {
    pub fn zeros(clauses: usize, literals: usize) -> Self {
        FeedbackMatrices {
            clauses,
            literals,
            cells: vec![FeedbackKind::None; clauses * literals],
        }
    }

    pub fn clauses(&self) -> usize {
        self.clauses
    }

    pub fn literals(&self) -> usize {
        self.literals
    }

    pub fn get(&self, clause: usize, literal: usize) -> FeedbackKind {
        self.cells[clause * self.literals + literal]
    }

    pub fn set(&mut self, clause: usize, literal: usize, kind: FeedbackKind) {
        self.cells[clause * self.literals + literal] = kind;
    }

    pub fn ia(&self, clause: usize, literal: usize) -> bool {
        self.get(clause, literal) == FeedbackKind::Ia
    }

    pub fn ib(&self, clause: usize, literal: usize) -> bool {
        self.get(clause, literal) == FeedbackKind::Ib
    }

    pub fn ii(&self, clause: usize, literal: usize) -> bool {
        self.get(clause, literal) == FeedbackKind::II
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|&c| c == FeedbackKind::None)
    }

    pub fn count(&self, kind: FeedbackKind) -> usize {
        self.cells.iter().filter(|&&c| c == kind).count()
    }

    pub fn row(&self, clause: usize) -> &[FeedbackKind] {
        &self.cells[clause * self.literals..(clause + 1) * self.literals]
    }
}

/// `A + F^II + F^Ia - F^Ib`, clipped to `[1, 2N]`. The input is left untouched.
pub fn apply_feedback(a: &StateMatrix, f: &FeedbackMatrices) -> Result<StateMatrix> {
    let mut out = a.clone();
    apply_feedback_in_place(&mut out, f)?;
    Ok(out)
}

/// In-place form of [`apply_feedback`]. On error the matrix is not modified.
pub fn apply_feedback_in_place(a: &mut StateMatrix, f: &FeedbackMatrices) -> Result<()> {
    if f.clauses != a.clauses {
        return Err(Error::DimensionMismatch {
            what: "feedback clauses",
            expected: a.clauses,
            actual: f.clauses,
        });
    }
    if f.literals != a.literals() {
        return Err(Error::DimensionMismatch {
            what: "feedback literals",
            expected: a.literals(),
            actual: f.literals,
        });
    }
    let max = i64::from(2 * a.big_n);
    for (state, kind) in a.states.iter_mut().zip(&f.cells) {
        let next = (i64::from(*state) + kind.delta()).clamp(1, max);
        *state = next as u32;
    }
    Ok(())
}
