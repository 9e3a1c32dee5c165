//! Rule extraction.
//!
//! A clause is read back as a conjunction of literal ids (`0..o` for `x_k`,
//! `o..2o` for `¬x_k`). A class is summarized by OR-ing its highest-weighted
//! positive clauses and simplifying the result. [`equivalent`] checks two
//! expressions against each other over the whole truth table.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::model::{ClauseBank, Polarity};

/// A conjunction of literals, kept sorted and free of duplicates.
/// The empty term is the constant true.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    literals: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extracted {
    Term(Term),
    /// The clause includes some literal together with its negation.
    ConstantFalse,
}

impl Term {
    pub fn new(mut literals: Vec<usize>) -> Self {
        literals.sort_unstable();
        literals.dedup();
        Term { literals }
    }

    pub fn literals(&self) -> &[usize] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_constant_true(&self) -> bool {
        self.literals.is_empty()
    }

    fn contains(&self, lit: usize) -> bool {
        self.literals.binary_search(&lit).is_ok()
    }

    fn is_subset_of(&self, other: &Term) -> bool {
        self.literals.iter().all(|&l| other.contains(l))
    }

    pub fn is_contradictory(&self, arity: usize) -> bool {
        self.literals.iter().any(|&l| l < arity && self.contains(l + arity))
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        let o = x.len();
        self.literals.iter().all(|&l| if l < o { x[l] } else { !x[l - o] })
    }

    fn without(&self, lit: usize) -> Term {
        Term {
            literals: self.literals.iter().copied().filter(|&l| l != lit).collect(),
        }
    }
}

/// Reads the include row of one clause as a term.
pub fn extract_term(include_row: &[bool]) -> Extracted {
    let arity = include_row.len() / 2;
    let term = Term::new(
        include_row
            .iter()
            .enumerate()
            .filter(|&(_, &inc)| inc)
            .map(|(k, _)| k)
            .collect(),
    );
    if term.is_contradictory(arity) {
        Extracted::ConstantFalse
    } else {
        Extracted::Term(term)
    }
}

/// OR of terms over `arity` Boolean features. No terms is constant false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnfExpression {
    arity: usize,
    terms: Vec<Term>,
}

impl DnfExpression {
    pub fn new(arity: usize, terms: Vec<Term>) -> Self {
        DnfExpression { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_constant_false(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        self.terms.iter().any(|t| t.eval(x))
    }

    /// Signed 1-based feature ids: `x_k` is `k + 1`, `¬x_k` is `-(k + 1)`.
    pub fn to_signed(&self) -> Vec<Vec<i64>> {
        self.terms
            .iter()
            .map(|t| {
                t.literals
                    .iter()
                    .map(|&l| {
                        if l < self.arity {
                            l as i64 + 1
                        } else {
                            -((l - self.arity) as i64 + 1)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_signed(arity: usize, terms: &[Vec<i64>]) -> Result<Self> {
        let terms = terms
            .iter()
            .map(|t| {
                t.iter()
                    .map(|&id| {
                        let k = id.unsigned_abs() as usize;
                        if id == 0 || k > arity {
                            return Err(Error::Parse(format!("literal id {id} out of range")));
                        }
                        Ok(if id > 0 { k - 1 } else { arity + k - 1 })
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Term::new)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DnfExpression { arity, terms })
    }

    /// Parses the text produced by `Display`.
    pub fn parse(text: &str, arity: usize) -> Result<Self> {
        let text = text.trim();
        if text == "⊥" {
            return Ok(DnfExpression::new(arity, Vec::new()));
        }
        let mut terms = Vec::new();
        for part in text.split('∨') {
            let part = part.trim();
            let inner = part
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .unwrap_or(part)
                .trim();
            if inner == "⊤" {
                terms.push(Term::new(Vec::new()));
                continue;
            }
            let lits = inner
                .split('∧')
                .map(|l| parse_literal(l.trim(), arity))
                .collect::<Result<Vec<_>>>()?;
            terms.push(Term::new(lits));
        }
        Ok(DnfExpression { arity, terms })
    }
}

fn parse_literal(text: &str, arity: usize) -> Result<usize> {
    let (negated, rest) = match text.strip_prefix('¬') {
        Some(r) => (true, r),
        None => (false, text),
    };
    let k: usize = rest
        .strip_prefix('x')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::Parse(text.to_string()))?;
    if k >= arity {
        return Err(Error::Parse(format!("feature x{k} out of range")));
    }
    Ok(if negated { arity + k } else { k })
}

fn fmt_literal(f: &mut fmt::Formatter<'_>, lit: usize, arity: usize) -> fmt::Result {
    if lit < arity {
        write!(f, "x{lit}")
    } else {
        write!(f, "¬x{}", lit - arity)
    }
}

impl fmt::Display for DnfExpression {
    /// `x10 ∨ (x2 ∧ ¬x4)`; `⊥` when empty, `⊤` for the empty term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("⊥");
        }
        let bracket = self.terms.len() > 1;
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∨ ")?;
            }
            if term.is_empty() {
                f.write_str("⊤")?;
                continue;
            }
            let wrap = bracket && term.len() > 1;
            if wrap {
                f.write_str("(")?;
            }
            for (j, &lit) in term.literals.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ∧ ")?;
                }
                fmt_literal(f, lit, self.arity)?;
            }
            if wrap {
                f.write_str(")")?;
            }
        }
        Ok(())
    }
}

fn negate(lit: usize, arity: usize) -> usize {
    if lit < arity {
        lit + arity
    } else {
        lit - arity
    }
}

/// Drops contradictory and duplicate terms, applies absorption and
/// self-subsuming resolution to a fixpoint, then sorts terms by length and
/// literal ids.
///
/// Resolution: from `(A ∧ l)` and `(B ∧ ¬l)` with `B ⊆ A`, the first term is
/// replaced by `A`.
pub fn simplify(e: &DnfExpression) -> DnfExpression {
    let arity = e.arity;
    let mut terms: Vec<Term> = e.terms.iter().filter(|t| !t.is_contradictory(arity)).cloned().collect();
    loop {
        terms.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        terms.dedup();

        // absorption: shorter terms come first after the sort
        let mut kept: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            if !kept.iter().any(|k| k.is_subset_of(&t)) {
                kept.push(t);
            }
        }
        terms = kept;

        let mut changed = false;
        'outer: for i in 0..terms.len() {
            for &lit in &terms[i].literals {
                let reduced = terms[i].without(lit);
                let neg = negate(lit, arity);
                let resolves = terms
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != i && other.contains(neg) && other.without(neg).is_subset_of(&reduced));
                if resolves {
                    terms[i] = reduced;
                    changed = true;
                    break 'outer;
                }
            }
        }
        if !changed {
            return DnfExpression { arity, terms };
        }
    }
}

/// Exhaustive truth-table comparison, for arity up to 20.
pub fn equivalent(a: &DnfExpression, b: &DnfExpression) -> Result<bool> {
    if a.arity != b.arity {
        return Err(Error::ArityMismatch(a.arity, b.arity));
    }
    if a.arity > 20 {
        return Err(Error::ArityTooLarge(a.arity));
    }
    let mut x = alloc::vec![false; a.arity];
    for bits in 0u32..(1 << a.arity) {
        for (k, v) in x.iter_mut().enumerate() {
            *v = bits >> k & 1 == 1;
        }
        if a.eval(&x) != b.eval(&x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indices of the `top_k` positive clauses with non-zero weight, heaviest
/// first, ties by clause index.
pub fn top_clauses(bank: &ClauseBank, top_k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..bank.clauses())
        .filter(|&i| bank.polarity(i) == Polarity::Positive && bank.weight(i) > 0)
        .collect();
    idx.sort_by(|&a, &b| bank.weight(b).cmp(&bank.weight(a)).then(a.cmp(&b)));
    idx.truncate(top_k);
    idx
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRules {
    /// Simplified OR of the selected clauses.
    pub expression: DnfExpression,
    /// Clause indices that went into the expression, heaviest first.
    pub clauses: Vec<usize>,
    /// No positive clause had a non-zero weight.
    pub empty: bool,
}

/// OR of the `top_k` heaviest positive clauses, simplified. Empty clauses
/// never fire at inference and so contribute nothing.
pub fn class_dnf(bank: &ClauseBank, top_k: usize) -> ClassRules {
    let arity = bank.features();
    let clauses = top_clauses(bank, top_k);
    let terms = clauses
        .iter()
        .filter_map(|&i| match extract_term(bank.include_row(i)) {
            Extracted::Term(t) if !t.is_empty() => Some(t),
            _ => None,
        })
        .collect();
    ClassRules {
        expression: simplify(&DnfExpression::new(arity, terms)),
        empty: clauses.is_empty(),
        clauses,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LengthSummary {
    pub mean: f64,
    pub max: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ClauseLengthStats {
    pub all: LengthSummary,
    pub positive: LengthSummary,
    pub negative: LengthSummary,
}

fn summarize(lengths: impl Iterator<Item = usize>) -> LengthSummary {
    let (mut n, mut sum, mut max) = (0usize, 0usize, 0usize);
    for l in lengths {
        n += 1;
        sum += l;
        max = max.max(l);
    }
    LengthSummary {
        mean: if n == 0 { 0.0 } else { sum as f64 / n as f64 },
        max,
    }
}

/// Included-literal counts per clause, overall and per polarity.
pub fn clause_length_stats(bank: &ClauseBank) -> ClauseLengthStats {
    let of = |p: Option<Polarity>| {
        summarize(
            (0..bank.clauses())
                .filter(|&i| p.is_none_or(|p| bank.polarity(i) == p))
                .map(|i| bank.include_count(i)),
        )
    };
    ClauseLengthStats {
        all: of(None),
        positive: of(Some(Polarity::Positive)),
        negative: of(Some(Polarity::Negative)),
    }
}
