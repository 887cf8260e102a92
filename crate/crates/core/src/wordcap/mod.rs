//! The word-cap semigroup: words of length `< n` over the positive integers
//! plus two absorbing symbols `α` and `β`.
//!
//! Words concatenate while the total length stays below `n`; a product of
//! total length exactly `n` is `β`, longer products and anything involving
//! `α` or `β` give `α`. The family `A_q = {α} ∪ {[m] : m >= q}` is strictly
//! decreasing and its product intersection set is `ℕ ∖ {n}`.
//!
//! The alphabet is infinite, so subsets are handled symbolically
//! ([`SymbolicWordSet`]); [`WordCapModel`] tabulates a bounded-alphabet
//! version that only serves as a brute-force oracle.

mod model;
mod symbolic;

pub use model::{finite_instantiation, WordCapModel, WordCapParams};
pub use symbolic::{AffineBound, LetterBound, ParamWordSet, SymbolicWordSet, WordSet};

use std::fmt;
use std::str::FromStr;

use crate::algebra::{HReport, Tail};
use crate::error::{ensure, Error, Result};
use crate::natset::NatSet;

/// Default alphabet bound for oracle instantiations.
pub const DEFAULT_ALPHABET: u64 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordCapElem {
    Alpha,
    Beta,
    Word(Vec<u64>),
}

impl fmt::Display for WordCapElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordCapElem::Alpha => f.write_str("a"),
            WordCapElem::Beta => f.write_str("b"),
            WordCapElem::Word(letters) => {
                let parts: Vec<String> = letters.iter().map(u64::to_string).collect();
                write!(f, "w:{}", parts.join("."))
            }
        }
    }
}

impl FromStr for WordCapElem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(WordCapElem::Alpha),
            "b" => Ok(WordCapElem::Beta),
            _ => {
                let body = s
                    .strip_prefix("w:")
                    .ok_or_else(|| Error::InvalidElement(s.to_string()))?;
                let letters = body
                    .split('.')
                    .map(|p| match p.parse::<u64>() {
                        Ok(m) if m >= 1 => Ok(m),
                        _ => Err(Error::InvalidElement(s.to_string())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(WordCapElem::Word(letters))
            }
        }
    }
}

/// The word-cap semigroup with cap length `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordCap {
    n: usize,
}

impl WordCap {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("cap length must be >= 2, got {n}")));
        }
        Ok(WordCap { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn validate(&self, x: &WordCapElem) -> Result<()> {
        if let WordCapElem::Word(letters) = x {
            if letters.is_empty() || letters.len() >= self.n {
                return Err(Error::InvalidElement(format!(
                    "word {x} has length {}, allowed 1..{}",
                    letters.len(),
                    self.n
                )));
            }
            if letters.contains(&0) {
                return Err(Error::InvalidElement(format!("letters start at 1 in {x}")));
            }
        }
        Ok(())
    }

    pub fn mul(&self, x: &WordCapElem, y: &WordCapElem) -> Result<WordCapElem> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(match (x, y) {
            (WordCapElem::Word(u), WordCapElem::Word(v)) => {
                let len = u.len() + v.len();
                if len < self.n {
                    WordCapElem::Word(u.iter().chain(v).copied().collect())
                } else if len == self.n {
                    WordCapElem::Beta
                } else {
                    WordCapElem::Alpha
                }
            }
            _ => WordCapElem::Alpha,
        })
    }

    /// `A_q = {α} ∪ {[m] : m >= q}`.
    pub fn family_member(&self, q: u64) -> Result<WordSet> {
        if q == 0 {
            return Err(Error::InvalidParameter("family index q starts at 1".into()));
        }
        Ok(WordSet::new(true, false, vec![vec![q]]))
    }

    /// `A_q` with `q` left as a parameter.
    pub fn family_member_param(&self) -> ParamWordSet {
        ParamWordSet::new(true, false, vec![vec![AffineBound::PARAM]])
    }

    /// Exact product set `XY`.
    pub fn sym_mul<B: LetterBound>(
        &self,
        x: &SymbolicWordSet<B>,
        y: &SymbolicWordSet<B>,
    ) -> SymbolicWordSet<B> {
        if x.is_empty() || y.is_empty() {
            return SymbolicWordSet::empty();
        }
        // both sides are nonempty from here on, so an absorber on either side
        // produces α
        let mut alpha = x.has_alpha() || y.has_alpha() || x.has_beta() || y.has_beta();
        let mut beta = false;
        let mut patterns = Vec::new();
        for p in x.patterns() {
            for r in y.patterns() {
                let len = p.len() + r.len();
                if len < self.n {
                    patterns.push(p.iter().chain(r).cloned().collect());
                } else if len == self.n {
                    beta = true;
                } else {
                    alpha = true;
                }
            }
        }
        SymbolicWordSet::new(alpha, beta, patterns)
    }

    /// `X^h` by left fold.
    pub fn sym_power<B: LetterBound>(
        &self,
        x: &SymbolicWordSet<B>,
        h: usize,
    ) -> Result<SymbolicWordSet<B>> {
        if h == 0 {
            return Err(Error::Algebra(crate::algebra::AlgebraError::ZeroExponent));
        }
        let mut acc = x.clone();
        for _ in 1..h {
            acc = self.sym_mul(&acc, x);
        }
        Ok(acc)
    }

    /// Direct formula for `A_q^h`: for `h < n`, `α` plus all length-`h` words
    /// with letters `>= q`; `{α, β}` at `h = n`; `{α}` beyond.
    pub fn closed_form_power(&self, q: u64, h: usize) -> Result<WordSet> {
        if q == 0 || h == 0 {
            return Err(Error::InvalidParameter("q and h start at 1".into()));
        }
        Ok(if h < self.n {
            WordSet::new(true, false, vec![vec![q; h]])
        } else if h == self.n {
            WordSet::new(true, true, Vec::new())
        } else {
            WordSet::alpha_only()
        })
    }

    /// `⋂_{q >= 1} A_q^h`.
    ///
    /// Computes `A_q^h` once with `q` symbolic. The flags do not depend on
    /// `q`. A pattern with some bound growing in `q` contributes nothing:
    /// a word with largest letter `M` is excluded at `q = M + 1`. Patterns
    /// with constant bounds lie in every member and survive.
    pub fn intersect_all_q(&self, h: usize) -> Result<WordSet> {
        let power = self.sym_power(&self.family_member_param(), h)?;
        Ok(eliminate_parameter(&power))
    }

    /// Checks that the family is strictly decreasing for `q < qmax`, with
    /// witness `[q] ∈ A_q ∖ A_{q+1}`.
    pub fn decreasing_check(&self, qmax: u64) -> Result<bool> {
        if qmax < 2 {
            return Err(Error::InvalidParameter("qmax must be at least 2".into()));
        }
        for q in 1..qmax {
            let (outer, inner) = (self.family_member(q)?, self.family_member(q + 1)?);
            let witness = WordCapElem::Word(vec![q]);
            if !inner.is_subset(&outer) || !outer.contains(&witness) || inner.contains(&witness) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Verifies that the product intersection set of the family is `ℕ ∖ {n}`.
    ///
    /// Verdict at `h` compares `(⋂_q A_q)^h` with [`Self::intersect_all_q`].
    /// The tail starts where the symbolic power is `{α}` for every `q`; `α`
    /// absorbs, so every later power is `{α}` as well.
    pub fn verify_single_exclusion(&self, hmax: usize) -> Result<HReport> {
        if hmax < self.n + 1 {
            return Err(Error::InvalidParameter(format!(
                "horizon {hmax} must be at least n + 1 = {}",
                self.n + 1
            )));
        }
        let family = self.family_member_param();
        let meet = eliminate_parameter(&family);
        ensure(meet == WordSet::alpha_only(), || {
            format!("intersection of the family is {meet:?}, expected {{α}}")
        })?;

        let mut verdicts = Vec::with_capacity(hmax);
        let mut settled = None;
        for h in 1..=hmax {
            let lhs = self.sym_power(&meet, h)?;
            let rhs = self.intersect_all_q(h)?;
            ensure(lhs.is_subset(&rhs), || format!("containment fails at h = {h}"))?;
            verdicts.push(lhs == rhs);
            let collapsed = self.sym_power(&family, h)? == ParamWordSet::alpha_only()
                && lhs == WordSet::alpha_only();
            if settled.is_none() && collapsed {
                settled = Some(h);
            }
        }
        let tail = settled.map(|c| {
            let mut from = c;
            while from > 1 && verdicts[from - 2] {
                from -= 1;
            }
            Tail { from, verdict: true }
        });
        let report = HReport::new(verdicts, tail)?;
        let expected = NatSet::cofinite([self.n as u64])?;
        ensure(report.resolved() == Some(&expected), || {
            format!("resolved {:?}, expected {expected}", report.resolved())
        })?;
        Ok(report)
    }
}

/// Intersection over all `q >= 1` of a parameterised set.
fn eliminate_parameter(set: &ParamWordSet) -> WordSet {
    let fixed = set
        .patterns()
        .iter()
        .filter(|p| !p.iter().any(AffineBound::grows))
        .map(|p| p.iter().map(|b| b.offset).collect())
        .collect();
    WordSet::new(set.has_alpha(), set.has_beta(), fixed)
}
