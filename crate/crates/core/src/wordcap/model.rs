use std::collections::HashMap;

use crate::algebra::{FiniteSemigroup, Semigroup, SubsetMask};
use crate::error::{Error, Result};

use super::{WordCap, WordCapElem, WordSet};

/// A word-cap semigroup restricted to letters `1..=alphabet`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordCapParams {
    pub n: usize,
    pub alphabet: u64,
}

impl WordCapParams {
    /// `2 + L + L^2 + ... + L^(n-1)`, or `None` on overflow.
    pub fn carrier_size(&self) -> Option<usize> {
        let l = usize::try_from(self.alphabet).ok()?;
        let mut total: usize = 2;
        let mut layer: usize = 1;
        for _ in 1..self.n {
            layer = layer.checked_mul(l)?;
            total = total.checked_add(layer)?;
        }
        Some(total)
    }
}

/// Tabulated bounded-alphabet model, used as a brute-force oracle.
///
/// Element order: `α`, `β`, then words by length and lexicographically.
#[derive(Debug, Clone)]
pub struct WordCapModel {
    params: WordCapParams,
    elems: Vec<WordCapElem>,
    index: HashMap<WordCapElem, usize>,
    semigroup: FiniteSemigroup,
}

pub fn finite_instantiation(params: WordCapParams, budget: usize) -> Result<WordCapModel> {
    WordCap::new(params.n)?;
    if params.alphabet == 0 {
        return Err(Error::InvalidParameter("alphabet bound must be at least 1".into()));
    }
    let size = params
        .carrier_size()
        .filter(|&m| m <= budget)
        .ok_or_else(|| crate::algebra::AlgebraError::TableBudget {
            size: params.carrier_size().map_or(u128::MAX, |m| m as u128),
            budget,
        })?;

    let mut elems = Vec::with_capacity(size);
    elems.push(WordCapElem::Alpha);
    elems.push(WordCapElem::Beta);
    let mut layer: Vec<Vec<u64>> = vec![vec![]];
    for _ in 1..params.n {
        layer = layer
            .iter()
            .flat_map(|w| {
                (1..=params.alphabet).map(move |m| {
                    let mut v = w.clone();
                    v.push(m);
                    v
                })
            })
            .collect();
        elems.extend(layer.iter().cloned().map(WordCapElem::Word));
    }
    let index: HashMap<WordCapElem, usize> =
        elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();

    // a word of length k with base-L digit value v sits at 2 + offset[k] + v
    let l = params.alphabet as usize;
    let n = params.n;
    let mut offset = vec![0usize; n + 1];
    let mut pow = vec![1usize; n + 1];
    for k in 1..=n {
        pow[k] = pow[k - 1] * l;
    }
    for k in 2..n {
        offset[k] = offset[k - 1] + pow[k - 1];
    }
    let split = |i: usize| -> (usize, usize) {
        let mut rest = i - 2;
        let mut k = 1;
        while rest >= pow[k] {
            rest -= pow[k];
            k += 1;
        }
        (k, rest)
    };
    let semigroup = FiniteSemigroup::from_fn(size, |x, y| {
        if x < 2 || y < 2 {
            return 0;
        }
        let ((a, va), (b, vb)) = (split(x), split(y));
        match (a + b).cmp(&n) {
            std::cmp::Ordering::Less => 2 + offset[a + b] + va * pow[b] + vb,
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => 0,
        }
    });
    let labels = elems.iter().map(WordCapElem::to_string).collect();
    let semigroup = semigroup.with_labels(labels)?;
    Ok(WordCapModel { params, elems, index, semigroup })
}

impl WordCapModel {
    pub fn params(&self) -> WordCapParams {
        self.params
    }

    pub fn semigroup(&self) -> &FiniteSemigroup {
        &self.semigroup
    }

    pub fn into_semigroup(self) -> FiniteSemigroup {
        self.semigroup
    }

    pub fn index_of(&self, x: &WordCapElem) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn elem(&self, i: usize) -> &WordCapElem {
        &self.elems[i]
    }

    pub fn elems(&self) -> &[WordCapElem] {
        &self.elems
    }

    /// The part of a symbolic set that lives in the bounded alphabet.
    pub fn restrict(&self, set: &WordSet) -> SubsetMask {
        let members = self
            .elems
            .iter()
            .enumerate()
            .filter(|(_, e)| set.contains(e))
            .map(|(i, _)| i);
        SubsetMask::from_elements(self.semigroup.order(), members)
            .expect("indices come from the carrier")
    }

    /// `{α} ∪ {[m] : q <= m <= L}`: the bounded part of the family member at `q`.
    pub fn family_member(&self, q: u64) -> SubsetMask {
        let mut mask = SubsetMask::singleton(self.semigroup.order(), 0).expect("α is element 0");
        for m in q.max(1)..=self.params.alphabet {
            let i = self.index[&WordCapElem::Word(vec![m])];
            mask.insert(i).expect("indices come from the carrier");
        }
        mask
    }
}
