use std::fmt;

use fixedbitset::FixedBitSet;

use super::{AlgebraError, Semigroup};

/// A subset of a finite carrier `0..universe`, stored as a dense bit mask.
///
/// Masks carry only the carrier size; operations check it against the
/// semigroup they are given.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: FixedBitSet,
}

impl SubsetMask {
    pub fn empty(universe: usize) -> Self {
        SubsetMask { bits: FixedBitSet::with_capacity(universe) }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        SubsetMask { bits }
    }

    pub fn from_elements<I>(universe: usize, elements: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut mask = Self::empty(universe);
        for x in elements {
            mask.insert(x)?;
        }
        Ok(mask)
    }

    pub fn singleton(universe: usize, x: usize) -> Result<Self, AlgebraError> {
        Self::from_elements(universe, [x])
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, x: usize) -> Result<(), AlgebraError> {
        if x >= self.universe() {
            return Err(AlgebraError::ElementOutOfRange { element: x, size: self.universe() });
        }
        self.bits.insert(x);
        Ok(())
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.elements().collect()
    }

    /// The unique element, if the subset is a singleton.
    pub fn single(&self) -> Option<usize> {
        let mut it = self.elements();
        match (it.next(), it.next()) {
            (Some(x), None) => Some(x),
            _ => None,
        }
    }

    pub fn is_subset(&self, other: &SubsetMask) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &SubsetMask) -> Result<SubsetMask, AlgebraError> {
        same_universe(self.universe(), other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(SubsetMask { bits })
    }

    /// Some element of `self` outside `other`.
    pub fn first_outside(&self, other: &SubsetMask) -> Option<usize> {
        self.bits.difference(&other.bits).next()
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask<{}>", self.universe())?;
        f.debug_set().entries(self.elements()).finish()
    }
}

fn same_universe(expected: usize, mask: &SubsetMask) -> Result<(), AlgebraError> {
    if mask.universe() != expected {
        return Err(AlgebraError::UniverseMismatch { expected, found: mask.universe() });
    }
    Ok(())
}

/// The product set `XY = {xy : x in X, y in Y}`.
pub fn minkowski<S: Semigroup + ?Sized>(
    s: &S,
    x: &SubsetMask,
    y: &SubsetMask,
) -> Result<SubsetMask, AlgebraError> {
    let m = s.order();
    same_universe(m, x)?;
    same_universe(m, y)?;
    let mut out = SubsetMask::empty(m);
    let right = y.to_vec();
    for a in x.elements() {
        for &b in &right {
            out.bits.insert(s.mul(a, b));
        }
        // nothing left to add
        if out.is_full() {
            break;
        }
    }
    Ok(out)
}

/// `B^h`, computed as the left fold `B^{h+1} = B^h B`.
pub fn power<S: Semigroup + ?Sized>(
    s: &S,
    b: &SubsetMask,
    h: usize,
) -> Result<SubsetMask, AlgebraError> {
    if h == 0 {
        return Err(AlgebraError::ZeroExponent);
    }
    let mut seq = PowerSequence::new(s, b)?;
    for _ in 1..h {
        seq.advance()?;
    }
    Ok(seq.current().clone())
}

/// The successive powers `B, B^2, B^3, ...` of one subset.
///
/// Once `B^{k+1} = B^k` every later power is equal as well, so further
/// steps are free.
pub struct PowerSequence<'a, S: ?Sized> {
    semigroup: &'a S,
    base: SubsetMask,
    current: SubsetMask,
    exponent: usize,
    stable: bool,
}

impl<'a, S: Semigroup + ?Sized> PowerSequence<'a, S> {
    pub fn new(semigroup: &'a S, base: &SubsetMask) -> Result<Self, AlgebraError> {
        same_universe(semigroup.order(), base)?;
        Ok(PowerSequence {
            semigroup,
            base: base.clone(),
            current: base.clone(),
            exponent: 1,
            stable: false,
        })
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn current(&self) -> &SubsetMask {
        &self.current
    }

    pub fn advance(&mut self) -> Result<&SubsetMask, AlgebraError> {
        if !self.stable {
            let next = minkowski(self.semigroup, &self.current, &self.base)?;
            self.stable = next == self.current;
            self.current = next;
        }
        self.exponent += 1;
        Ok(&self.current)
    }
}

/// Brute-force `B^h`: enumerates all `|B|^h` ordered tuples and folds each
/// left to right. Refuses instances above `budget` tuples.
pub fn power_oracle<S: Semigroup + ?Sized>(
    s: &S,
    b: &SubsetMask,
    h: usize,
    budget: u128,
) -> Result<SubsetMask, AlgebraError> {
    let m = s.order();
    same_universe(m, b)?;
    if h == 0 {
        return Err(AlgebraError::ZeroExponent);
    }
    let gens = b.to_vec();
    let needed = u32::try_from(h)
        .ok()
        .and_then(|e| (gens.len() as u128).checked_pow(e))
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(AlgebraError::TupleBudget { needed, budget });
    }
    let mut out = SubsetMask::empty(m);
    if gens.is_empty() {
        return Ok(out);
    }
    let mut digits = vec![0usize; h];
    loop {
        let product = digits[1..]
            .iter()
            .fold(gens[digits[0]], |acc, &d| s.mul(acc, gens[d]));
        out.bits.insert(product);

        // odometer increment, last position fastest
        let mut pos = h;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < gens.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Elementwise intersection of a nonempty family of subsets.
pub fn family_intersection(subsets: &[SubsetMask]) -> Result<SubsetMask, AlgebraError> {
    let (first, rest) = subsets.split_first().ok_or(AlgebraError::EmptyFamily)?;
    rest.iter().try_fold(first.clone(), |acc, next| acc.intersection(next))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteSemigroup;
    use proptest::prelude::*;

    fn trunc_add(cap: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_fn(cap + 1, |x, y| (x + y).min(cap))
    }

    fn mask(m: usize, xs: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(m, xs.iter().copied()).unwrap()
    }

    #[test]
    fn minkowski_pairs() {
        let s = trunc_add(12);
        // all four pairs of {4,5} x {4,6}, capped at 12
        let mut expected = Vec::new();
        for a in [4, 5] {
            for b in [4, 6] {
                expected.push((a + b).min(12));
            }
        }
        expected.sort();
        expected.dedup();
        let got = minkowski(&s, &mask(13, &[4, 5]), &mask(13, &[4, 6])).unwrap();
        assert_eq!(got.to_vec(), expected);
        assert_eq!(got.to_vec(), vec![8, 9, 10, 11]);
    }

    #[test]
    fn empty_and_identity_operands() {
        let s = trunc_add(12);
        let b = mask(13, &[3, 7]);
        assert!(minkowski(&s, &SubsetMask::empty(13), &b).unwrap().is_empty());
        assert!(minkowski(&s, &b, &SubsetMask::empty(13)).unwrap().is_empty());
        assert_eq!(minkowski(&s, &mask(13, &[0]), &b).unwrap(), b);
    }

    #[test]
    fn mismatched_universe() {
        let s = trunc_add(12);
        let err = minkowski(&s, &mask(13, &[1]), &mask(5, &[1])).unwrap_err();
        assert_eq!(err, AlgebraError::UniverseMismatch { expected: 13, found: 5 });
        assert!(mask(5, &[1]).intersection(&mask(6, &[1])).is_err());
        assert!(SubsetMask::from_elements(3, [3]).is_err());
    }

    #[test]
    fn small_powers() {
        let s = trunc_add(12);
        assert_eq!(power(&s, &mask(13, &[4, 5]), 2).unwrap().to_vec(), vec![8, 9, 10]);
        assert_eq!(power(&s, &mask(13, &[4, 6]), 3).unwrap().to_vec(), vec![12]);
        let b = mask(13, &[1, 9]);
        assert_eq!(power(&s, &b, 1).unwrap(), b);
        assert_eq!(power(&s, &b, 0), Err(AlgebraError::ZeroExponent));
    }

    #[test]
    fn oracle_small_cases() {
        let s = trunc_add(12);
        assert_eq!(
            power_oracle(&s, &mask(13, &[4, 5]), 2, 1000).unwrap().to_vec(),
            vec![8, 9, 10]
        );
        assert_eq!(power_oracle(&s, &mask(13, &[3]), 3, 1000).unwrap().to_vec(), vec![9]);
        assert!(power_oracle(&s, &SubsetMask::empty(13), 4, 1000).unwrap().is_empty());
    }

    #[test]
    fn oracle_budget() {
        let s = trunc_add(12);
        let err = power_oracle(&s, &SubsetMask::full(13), 7, 1_000_000).unwrap_err();
        assert_eq!(err, AlgebraError::TupleBudget { needed: 13u128.pow(7), budget: 1_000_000 });
    }

    #[test]
    fn family_intersection_cases() {
        assert_eq!(
            family_intersection(&[mask(13, &[4, 5]), mask(13, &[4, 6])]).unwrap().to_vec(),
            vec![4]
        );
        let b = mask(13, &[2, 3]);
        assert_eq!(family_intersection(std::slice::from_ref(&b)).unwrap(), b);
        assert_eq!(family_intersection(&[]), Err(AlgebraError::EmptyFamily));
    }

    #[test]
    fn stable_sequence_keeps_counting() {
        let s = trunc_add(4);
        let mut seq = PowerSequence::new(&s, &mask(5, &[4])).unwrap();
        for h in 2..6 {
            assert_eq!(seq.advance().unwrap().to_vec(), vec![4]);
            assert_eq!(seq.exponent(), h);
        }
    }

    proptest! {
        #[test]
        fn power_matches_oracle(cap in 1usize..15, xs in prop::collection::vec(0usize..15, 0..4), h in 1usize..5) {
            let s = trunc_add(cap);
            let b = SubsetMask::from_elements(cap + 1, xs.into_iter().map(|x| x % (cap + 1))).unwrap();
            prop_assert_eq!(power(&s, &b, h).unwrap(), power_oracle(&s, &b, h, 1_000_000).unwrap());
        }

        #[test]
        fn power_is_monotone(xs in prop::collection::vec(0usize..13, 0..4), extra in 0usize..13, h in 1usize..5) {
            let s = trunc_add(12);
            let b = SubsetMask::from_elements(13, xs.iter().copied()).unwrap();
            let mut bigger = b.clone();
            bigger.insert(extra).unwrap();
            prop_assert!(power(&s, &b, h).unwrap().is_subset(&power(&s, &bigger, h).unwrap()));
        }
    }
}
