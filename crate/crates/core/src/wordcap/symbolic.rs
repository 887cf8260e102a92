use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use super::WordCapElem;

/// Lower bound on a letter at one position of a word pattern.
pub trait LetterBound: Clone + Ord + Debug {
    /// `self <= other` holds for every admissible parameter value.
    fn always_le(&self, other: &Self) -> bool;
}

impl LetterBound for u64 {
    fn always_le(&self, other: &Self) -> bool {
        self <= other
    }
}

/// The bound `offset + slope * q`, valid for every `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineBound {
    pub offset: u64,
    pub slope: u64,
}

impl AffineBound {
    /// The bound `q` itself.
    pub const PARAM: AffineBound = AffineBound { offset: 0, slope: 1 };

    pub fn constant(c: u64) -> Self {
        AffineBound { offset: c, slope: 0 }
    }

    pub fn at(&self, q: u64) -> u64 {
        self.offset + self.slope * q
    }

    /// Exceeds every fixed letter for large enough `q`.
    pub fn grows(&self) -> bool {
        self.slope > 0
    }
}

impl LetterBound for AffineBound {
    // linear in q: compare at q = 1 and compare the slopes
    fn always_le(&self, other: &Self) -> bool {
        self.slope <= other.slope && self.at(1) <= other.at(1)
    }
}

/// A possibly infinite subset of the word-cap semigroup.
///
/// Each pattern `(b_1, ..., b_k)` stands for all words `[m_1 ... m_k]` with
/// `m_i >= b_i`. Patterns are kept as an antichain: none is dominated by
/// another of the same length, and the list is sorted by length, then
/// bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicWordSet<B> {
    alpha: bool,
    beta: bool,
    patterns: Vec<Vec<B>>,
}

/// Sets over concrete letter bounds.
pub type WordSet = SymbolicWordSet<u64>;
/// Sets whose bounds depend affinely on a family parameter `q`.
pub type ParamWordSet = SymbolicWordSet<AffineBound>;

fn dominates<B: LetterBound>(p: &[B], r: &[B]) -> bool {
    p.len() == r.len() && p.iter().zip(r).all(|(a, b)| a.always_le(b))
}

impl<B: LetterBound> SymbolicWordSet<B> {
    pub fn new(alpha: bool, beta: bool, patterns: Vec<Vec<B>>) -> Self {
        SymbolicWordSet { alpha, beta, patterns: canonicalize(patterns) }
    }

    pub fn empty() -> Self {
        Self::new(false, false, Vec::new())
    }

    pub fn alpha_only() -> Self {
        Self::new(true, false, Vec::new())
    }

    pub fn has_alpha(&self) -> bool {
        self.alpha
    }

    pub fn has_beta(&self) -> bool {
        self.beta
    }

    pub fn patterns(&self) -> &[Vec<B>] {
        &self.patterns
    }

    pub fn is_empty(&self) -> bool {
        !self.alpha && !self.beta && self.patterns.is_empty()
    }

    /// Containment, exact for concrete bounds: an up-closed box is covered by
    /// a union of up-closed boxes iff its corner lies in one of them.
    pub fn is_subset(&self, other: &Self) -> bool {
        (!self.alpha || other.alpha)
            && (!self.beta || other.beta)
            && self
                .patterns
                .iter()
                .all(|p| other.patterns.iter().any(|r| dominates(r, p)))
    }

    pub fn map_bounds<C: LetterBound, F: Fn(&B) -> C>(&self, f: F) -> SymbolicWordSet<C> {
        let patterns = self.patterns.iter().map(|p| p.iter().map(&f).collect()).collect();
        SymbolicWordSet::new(self.alpha, self.beta, patterns)
    }
}

fn canonicalize<B: LetterBound>(mut patterns: Vec<Vec<B>>) -> Vec<Vec<B>> {
    patterns.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    patterns.dedup();
    let keep: Vec<bool> = patterns
        .iter()
        .enumerate()
        .map(|(i, p)| {
            !patterns
                .iter()
                .enumerate()
                .any(|(j, r)| j != i && dominates(r, p))
        })
        .collect();
    patterns
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

impl WordSet {
    pub fn contains(&self, x: &WordCapElem) -> bool {
        match x {
            WordCapElem::Alpha => self.alpha,
            WordCapElem::Beta => self.beta,
            WordCapElem::Word(letters) => self.patterns.iter().any(|p| {
                p.len() == letters.len() && p.iter().zip(letters).all(|(b, m)| b <= m)
            }),
        }
    }
}

impl ParamWordSet {
    /// The concrete set for one value of the parameter.
    pub fn at(&self, q: u64) -> WordSet {
        self.map_bounds(|b| b.at(q))
    }
}

#[derive(Serialize, Deserialize)]
struct WordSetRepr {
    alpha: bool,
    beta: bool,
    patterns: Vec<Vec<u64>>,
}

impl Serialize for WordSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WordSetRepr { alpha: self.alpha, beta: self.beta, patterns: self.patterns.clone() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WordSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = WordSetRepr::deserialize(deserializer)?;
        if repr.patterns.iter().any(|p| p.is_empty() || p.contains(&0)) {
            return Err(serde::de::Error::custom("patterns must be nonempty with bounds >= 1"));
        }
        Ok(WordSet::new(repr.alpha, repr.beta, repr.patterns))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dominated_patterns_are_dropped() {
        let s = WordSet::new(false, false, vec![vec![3, 3], vec![2, 5], vec![2, 3], vec![1]]);
        assert_eq!(s.patterns(), &[vec![1], vec![2, 3]]);
        let s = WordSet::new(false, false, vec![vec![2, 5], vec![3, 1]]);
        assert_eq!(s.patterns(), &[vec![2, 5], vec![3, 1]]);
    }

    #[test]
    fn affine_order() {
        let q = AffineBound::PARAM;
        let q_plus = AffineBound { offset: 1, slope: 1 };
        let five = AffineBound::constant(5);
        assert!(q.always_le(&q_plus));
        assert!(!q_plus.always_le(&q));
        // q vs 5: neither bound holds for all q
        assert!(!q.always_le(&five));
        assert!(!five.always_le(&q));
        assert!(AffineBound::constant(1).always_le(&q));
    }

    #[test]
    fn json_schema() {
        let s = WordSet::new(true, false, vec![vec![2, 2]]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"alpha":true,"beta":false,"patterns":[[2,2]]}"#);
        assert_eq!(serde_json::from_str::<WordSet>(&json).unwrap(), s);
        assert!(serde_json::from_str::<WordSet>(r#"{"alpha":true,"beta":false,"patterns":[[]]}"#).is_err());
    }

    fn arb_patterns() -> impl Strategy<Value = Vec<Vec<u64>>> {
        prop::collection::vec(prop::collection::vec(1u64..6, 1..4), 0..6)
    }

    proptest! {
        #[test]
        fn membership_is_pointwise(patterns in arb_patterns(), word in prop::collection::vec(1u64..=10, 1..4)) {
            let s = WordSet::new(false, false, patterns.clone());
            let denoted = patterns
                .iter()
                .any(|p| p.len() == word.len() && p.iter().zip(&word).all(|(b, m)| b <= m));
            prop_assert_eq!(s.contains(&WordCapElem::Word(word)), denoted);
        }

        #[test]
        fn canonical_form_is_idempotent(patterns in arb_patterns()) {
            let once = WordSet::new(true, false, patterns);
            let twice = WordSet::new(true, false, once.patterns().to_vec());
            prop_assert_eq!(&once, &twice);
            for (i, p) in once.patterns().iter().enumerate() {
                for (j, r) in once.patterns().iter().enumerate() {
                    prop_assert!(i == j || !dominates(r, p));
                }
            }
        }

        #[test]
        fn subset_matches_bounded_enumeration(a in arb_patterns(), b in arb_patterns()) {
            let x = WordSet::new(false, false, a);
            let y = WordSet::new(false, false, b);
            // bounds are below 6, so words over [1,6] witness any difference
            let mut words = vec![vec![]];
            let mut universe = Vec::new();
            for _ in 0..3 {
                words = words
                    .iter()
                    .flat_map(|w: &Vec<u64>| (1..=6).map(move |m| { let mut v = w.clone(); v.push(m); v }))
                    .collect();
                universe.extend(words.clone());
            }
            let pointwise = universe
                .into_iter()
                .map(WordCapElem::Word)
                .all(|w| !x.contains(&w) || y.contains(&w));
            prop_assert_eq!(x.is_subset(&y), pointwise);
        }
    }
}
