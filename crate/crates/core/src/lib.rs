//! Weighted Tsetlin Machine engine.
//!
//! A Tsetlin Machine learns conjunctive clauses over Boolean literals. Each
//! `(clause, literal)` pair is governed by a two-action Tsetlin Automaton that
//! decides whether the literal is included in the clause. Clauses vote with
//! integer weights and a polarity, and the vote sum decides the class.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, CSV ingestion
//! and the command-line driver live in the `tsetlin-cli` companion crate.
//!
//! Module map:
//!
//! - [`automata`]: the state matrix, the state to action mapping and the
//!   clipped feedback update.
//! - [`model`]: literals, clause evaluation, vote sums and prediction.
//! - [`feedback`]: Type Ia/Ib/II probability tables and stochastic sampling.
//! - [`trainer`]: the per-sample learning step, integer weight updates,
//!   learnable margin and the epoch loop.
//! - [`binarize`]: thermometer encoding of real-valued features and datasets.
//! - [`interpret`]: clause to term extraction, per-class DNF rules and an
//!   exhaustive equivalence oracle.
//! - [`boundary`]: 2-D decision-boundary grids.
//! - [`perceptron`]: a reference perceptron with mistake-bound accounting.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod automata;
pub mod binarize;
pub mod boundary;
pub mod error;
pub mod feedback;
pub mod interpret;
pub mod model;
pub mod perceptron;
pub mod trainer;

pub use automata::{Action, FeedbackKind, FeedbackMatrices, StateMatrix};
pub use binarize::{Binarizer, Dataset, RawDataset, Sample};
pub use error::{Error, Result};
pub use model::{ClauseBank, LiteralVector, Mode, Polarity, Prediction};
pub use trainer::{Classifier, Machine, TmConfig, TrainHistory, Trainer};

/// The PRNG used for every seeded stream in the crate.
pub type Rng = rand_chacha::ChaCha8Rng;
