//! Clause evaluation, weighted vote sums and prediction.

use alloc::vec::Vec;

use crate::automata::StateMatrix;
use crate::error::{Error, Result};

/// Evaluation mode. The only difference is the empty clause: it outputs 1
/// while training so that Type I feedback can grow it, and 0 at inference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Train,
    Infer,
}

/// `[x_0 .. x_{o-1}, ¬x_0 .. ¬x_{o-1}]`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralVector(Vec<bool>);

pub fn literals(x: &[bool]) -> Result<LiteralVector> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut bits = Vec::with_capacity(2 * x.len());
    bits.extend_from_slice(x);
    bits.extend(x.iter().map(|&b| !b));
    Ok(LiteralVector(bits))
}

impl LiteralVector {
    pub fn features(&self) -> usize {
        self.0.len() / 2
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, k: usize) -> bool {
        self.0[k]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }
}

/// Clause polarity. Clause 1, 3, 5, ... (1-based) vote for class 1; clause 2,
/// 4, 6, ... vote against. With 0-based indices, even indices are positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn of(index: usize) -> Polarity {
        if index.is_multiple_of(2) {
            Polarity::Positive
        } else {
            Polarity::Negative
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
        }
    }
}

/// AND over `include ⇒ literal` for every literal position.
pub fn eval_clause(include_row: &[bool], lit: &LiteralVector, mode: Mode) -> Result<bool> {
    if include_row.len() != lit.len() {
        return Err(Error::DimensionMismatch {
            what: "clause literals",
            expected: lit.len(),
            actual: include_row.len(),
        });
    }
    Ok(eval_unchecked(include_row, lit.as_slice(), mode))
}

pub(crate) fn eval_unchecked(include_row: &[bool], lit: &[bool], mode: Mode) -> bool {
    let mut any = false;
    for (&inc, &l) in include_row.iter().zip(lit) {
        if inc {
            if !l {
                return false;
            }
            any = true;
        }
    }
    any || mode == Mode::Train
}

/// Include masks plus non-negative integer weights for one binary machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseBank {
    literals: usize,
    include: Vec<bool>,
    weights: Vec<u32>,
}

impl ClauseBank {
    /// Builds a bank from explicit include rows, one per clause.
    pub fn from_rows(rows: &[Vec<bool>], weights: Vec<u32>) -> Result<Self> {
        if rows.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                what: "clause weights",
                expected: rows.len(),
                actual: weights.len(),
            });
        }
        let literals = rows.first().map_or(0, Vec::len);
        if literals == 0 || !literals.is_multiple_of(2) {
            return Err(Error::ZeroSize("literal count"));
        }
        let mut include = Vec::with_capacity(rows.len() * literals);
        for row in rows {
            if row.len() != literals {
                return Err(Error::DimensionMismatch {
                    what: "include row",
                    expected: literals,
                    actual: row.len(),
                });
            }
            include.extend_from_slice(row);
        }
        Ok(ClauseBank {
            literals,
            include,
            weights,
        })
    }

    /// Derives include masks from the automata states.
    pub fn from_states(states: &StateMatrix, weights: &[u32]) -> Result<Self> {
        if weights.len() != states.clauses() {
            return Err(Error::DimensionMismatch {
                what: "clause weights",
                expected: states.clauses(),
                actual: weights.len(),
            });
        }
        Ok(ClauseBank {
            literals: states.literals(),
            include: states.include_mask(),
            weights: weights.to_vec(),
        })
    }

    pub fn clauses(&self) -> usize {
        self.weights.len()
    }

    pub fn literals(&self) -> usize {
        self.literals
    }

    pub fn features(&self) -> usize {
        self.literals / 2
    }

    pub fn include_row(&self, clause: usize) -> &[bool] {
        &self.include[clause * self.literals..(clause + 1) * self.literals]
    }

    pub fn weight(&self, clause: usize) -> u32 {
        self.weights[clause]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn polarity(&self, clause: usize) -> Polarity {
        Polarity::of(clause)
    }

    pub fn include_count(&self, clause: usize) -> usize {
        self.include_row(clause).iter().filter(|&&b| b).count()
    }

    fn check(&self, lit: &LiteralVector) -> Result<()> {
        if lit.len() != self.literals {
            return Err(Error::DimensionMismatch {
                what: "literal vector",
                expected: self.literals,
                actual: lit.len(),
            });
        }
        Ok(())
    }

    pub fn outputs(&self, lit: &LiteralVector, mode: Mode) -> Result<Vec<bool>> {
        self.check(lit)?;
        Ok((0..self.clauses())
            .map(|i| eval_unchecked(self.include_row(i), lit.as_slice(), mode))
            .collect())
    }
}

/// `Σ_positive w_i C_i − Σ_negative w_i C_i`
pub fn vote_sum(bank: &ClauseBank, lit: &LiteralVector, mode: Mode) -> Result<i64> {
    bank.check(lit)?;
    Ok((0..bank.clauses())
        .filter(|&i| eval_unchecked(bank.include_row(i), lit.as_slice(), mode))
        .map(|i| bank.polarity(i).sign() * i64::from(bank.weight(i)))
        .sum())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub label: usize,
    /// Vote sum of the single binary machine, or of the winning class.
    pub vote_sum: i64,
    /// One entry per bank.
    pub class_sums: Vec<i64>,
}

impl Prediction {
    /// Binary: the vote sum itself. Multiclass: winner minus runner-up.
    pub fn margin(&self) -> i64 {
        if self.class_sums.len() == 1 {
            return self.vote_sum;
        }
        let runner_up = self
            .class_sums
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != self.label)
            .map(|(_, &v)| v)
            .max()
            .unwrap_or(self.vote_sum);
        self.vote_sum - runner_up
    }
}

/// Binary label from a single vote sum. With `tie_to_zero` a sum of exactly
/// zero maps to class 0.
pub fn binary_label(v: i64, tie_to_zero: bool) -> bool {
    if tie_to_zero {
        v >= 1
    } else {
        v >= 0
    }
}

/// One bank: binary decision on its vote sum. Several banks: argmax of the
/// per-class vote sums, ties going to the lowest class id.
pub fn predict(banks: &[ClauseBank], x: &[bool], tie_to_zero: bool) -> Result<Prediction> {
    if banks.is_empty() {
        return Err(Error::ZeroSize("class bank count"));
    }
    let lit = literals(x)?;
    let class_sums = banks
        .iter()
        .map(|b| vote_sum(b, &lit, Mode::Infer))
        .collect::<Result<Vec<_>>>()?;
    if let [v] = class_sums[..] {
        return Ok(Prediction {
            label: usize::from(binary_label(v, tie_to_zero)),
            vote_sum: v,
            class_sums,
        });
    }
    let mut label = 0;
    for (c, &v) in class_sums.iter().enumerate() {
        if v > class_sums[label] {
            label = c;
        }
    }
    Ok(Prediction {
        label,
        vote_sum: class_sums[label],
        class_sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn row(o: usize, pos: &[usize], neg: &[usize]) -> Vec<bool> {
        let mut r = vec![false; 2 * o];
        for &k in pos {
            r[k] = true;
        }
        for &k in neg {
            r[o + k] = true;
        }
        r
    }

    fn xor_bank() -> ClauseBank {
        // positive: x0 ∧ ¬x1, ¬x0 ∧ x1; negative: x0 ∧ x1, ¬x0 ∧ ¬x1
        let rows = [
            row(2, &[0], &[1]),
            row(2, &[0, 1], &[]),
            row(2, &[1], &[0]),
            row(2, &[], &[0, 1]),
        ];
        ClauseBank::from_rows(&rows, vec![1; 4]).unwrap()
    }

    #[test]
    fn literal_vectors() {
        assert_eq!(
            literals(&[false, true]).unwrap().as_slice(),
            &[false, true, true, false]
        );
        assert_eq!(literals(&[true]).unwrap().as_slice(), &[true, false]);
        assert_eq!(
            literals(&[false; 3]).unwrap().as_slice(),
            &[false, false, false, true, true, true]
        );
        assert_eq!(literals(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn clause_evaluation() {
        let inc = row(2, &[0], &[1]);
        let lit = literals(&[true, false]).unwrap();
        assert!(eval_clause(&inc, &lit, Mode::Infer).unwrap());

        let inc = row(2, &[0], &[]);
        let lit = literals(&[false, true]).unwrap();
        assert!(!eval_clause(&inc, &lit, Mode::Infer).unwrap());

        let empty = row(2, &[], &[]);
        assert!(!eval_clause(&empty, &lit, Mode::Infer).unwrap());
        assert!(eval_clause(&empty, &lit, Mode::Train).unwrap());

        assert!(eval_clause(&[true, false], &lit, Mode::Infer).is_err());
    }

    #[test]
    fn vote_sum_arithmetic() {
        // clauses 0 and 2 positive (weights 2, 3), clause 1 negative (weight 1)
        let fire = row(1, &[0], &[]);
        let rows = [fire.clone(), fire.clone(), fire, row(1, &[], &[0])];
        let bank = ClauseBank::from_rows(&rows, vec![2, 1, 3, 9]).unwrap();
        let lit = literals(&[true]).unwrap();
        assert_eq!(vote_sum(&bank, &lit, Mode::Infer).unwrap(), 4);

        let silent = [row(1, &[0], &[]), row(1, &[0], &[])];
        let bank = ClauseBank::from_rows(&silent, vec![3, 3]).unwrap();
        let lit = literals(&[false]).unwrap();
        assert_eq!(vote_sum(&bank, &lit, Mode::Infer).unwrap(), 0);
    }

    #[test]
    fn xor_bank_votes() {
        // Expected sums enumerated by hand: exactly one clause fires per input.
        let bank = xor_bank();
        let expected = [
            ((false, false), -1),
            ((false, true), 1),
            ((true, false), 1),
            ((true, true), -1),
        ];
        for ((a, b), v) in expected {
            let lit = literals(&[a, b]).unwrap();
            assert_eq!(vote_sum(&bank, &lit, Mode::Infer).unwrap(), v, "input ({a}, {b})");
            let p = predict(core::slice::from_ref(&bank), &[a, b], true).unwrap();
            assert_eq!(p.label, usize::from(a ^ b));
        }
    }

    #[test]
    fn zero_vote_sum_goes_to_class_zero() {
        // Two positive clauses x0 ∧ ¬x1 and ¬x0 ∧ ¬x1, negatives never fire.
        let rows = [
            row(2, &[0], &[1]),
            row(2, &[0], &[0]),
            row(2, &[], &[0, 1]),
            row(2, &[0], &[0]),
        ];
        let bank = ClauseBank::from_rows(&rows, vec![1; 4]).unwrap();
        let p = predict(core::slice::from_ref(&bank), &[false, true], true).unwrap();
        assert_eq!((p.vote_sum, p.label), (0, 0));
        let p = predict(core::slice::from_ref(&bank), &[false, true], false).unwrap();
        assert_eq!(p.label, 1);
    }

    #[test]
    fn single_firing_clause_predicts_one() {
        let rows = [row(1, &[0], &[]), row(1, &[0], &[0])];
        let bank = ClauseBank::from_rows(&rows, vec![5, 1]).unwrap();
        let p = predict(core::slice::from_ref(&bank), &[true], true).unwrap();
        assert_eq!((p.label, p.vote_sum), (1, 5));
    }

    #[test]
    fn multiclass_argmax_with_low_id_ties() {
        let fire = row(1, &[0], &[]);
        let never = row(1, &[0], &[0]);
        let bank = |w: u32| ClauseBank::from_rows(&[fire.clone(), never.clone()], vec![w, 1]).unwrap();
        let banks = [bank(2), bank(7), bank(7)];
        let p = predict(&banks, &[true], true).unwrap();
        assert_eq!(p.class_sums, vec![2, 7, 7]);
        assert_eq!((p.label, p.vote_sum, p.margin()), (1, 7, 0));

        let banks = [bank(9), bank(4), bank(1)];
        let p = predict(&banks, &[true], true).unwrap();
        assert_eq!((p.label, p.margin()), (0, 5));
        assert!(predict(&[], &[true], true).is_err());
    }

    proptest! {
        #[test]
        fn literal_complement(x in proptest::collection::vec(any::<bool>(), 1..40)) {
            let lit = literals(&x).unwrap();
            let o = x.len();
            prop_assert_eq!(lit.len(), 2 * o);
            for k in 0..o {
                prop_assert_eq!(lit.get(k), x[k]);
                prop_assert_eq!(lit.get(k + o), !x[k]);
            }
        }

        #[test]
        fn adding_an_include_never_turns_a_clause_on(
            x in proptest::collection::vec(any::<bool>(), 6),
            inc in proptest::collection::vec(any::<bool>(), 12),
            extra in 0usize..12,
        ) {
            let lit = literals(&x).unwrap();
            let before = eval_clause(&inc, &lit, Mode::Infer).unwrap();
            let mut more = inc.clone();
            more[extra] = true;
            let after = eval_clause(&more, &lit, Mode::Infer).unwrap();
            prop_assert!(!(after && !before) || inc.iter().all(|&b| !b));
        }
    }
}
