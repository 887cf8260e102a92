//! Truncated addition `x ⋆ y = min(x + y, n³ + n²)` on `{0, ..., n³ + n²}`,
//! with the pair `B = {n², n² + 1}`, `C = {n², n² + n}` whose product
//! intersection set is `ℕ ∖ {n}`.

mod nat0;

pub use nat0::{nat0_mult_bounded_check, nat0_power_contains};

use std::collections::BTreeSet;

use crate::algebra::{product_intersection_set, FiniteSemigroup, HReport, Semigroup, SubsetMask};
use crate::algebra::{AlgebraError, Tail};
use crate::error::{ensure, Error, Result};
use crate::natset::NatSet;

/// The truncated-addition monoid for a given `n >= 2`.
///
/// Multiplication is computed arithmetically; [`TruncAdd::table`] tabulates it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncAdd {
    n: usize,
}

/// Result of [`TruncAdd::verify_pair_single_exclusion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairExclusion {
    pub report: HReport,
    /// `n³ + n`, found in `B^n ∩ C^n` but not in `(B ∩ C)^n`.
    pub witness: usize,
}

impl TruncAdd {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("n must be >= 2, got {n}")));
        }
        // keep cap comfortably inside usize
        if n > 1 << 16 {
            return Err(Error::InvalidParameter(format!("n = {n} is too large")));
        }
        Ok(TruncAdd { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.n.pow(3) + self.n.pow(2)
    }

    /// The tabulated monoid, labels are the decimal values.
    pub fn table(&self, budget: usize) -> Result<FiniteSemigroup> {
        let size = self.cap() + 1;
        if size > budget {
            return Err(AlgebraError::TableBudget { size: size as u128, budget }.into());
        }
        let cap = self.cap();
        let table = FiniteSemigroup::from_fn(size, |x, y| (x + y).min(cap));
        Ok(table
            .with_labels((0..size).map(|x| x.to_string()).collect())?
            .with_identity(0)?)
    }

    /// `a_1 ⋆ ... ⋆ a_h = min(a_1 + ... + a_h, cap)`.
    pub fn fold(&self, elements: &[usize]) -> Result<usize> {
        if elements.is_empty() {
            return Err(Error::InvalidParameter("fold needs at least one element".into()));
        }
        let cap = self.cap();
        if let Some(&bad) = elements.iter().find(|&&a| a > cap) {
            return Err(AlgebraError::ElementOutOfRange { element: bad, size: cap + 1 }.into());
        }
        Ok(elements.iter().sum::<usize>().min(cap))
    }

    /// `(B, C) = ({n², n² + 1}, {n², n² + n})`.
    pub fn bc_sets(&self) -> (SubsetMask, SubsetMask) {
        let (m, sq) = (self.cap() + 1, self.n * self.n);
        let b = SubsetMask::from_elements(m, [sq, sq + 1]).expect("n² + n <= cap");
        let c = SubsetMask::from_elements(m, [sq, sq + self.n]).expect("n² + n <= cap");
        (b, c)
    }

    /// Direct formulas for `B^h` and `C^h`: `{hn² + j}` and `{hn² + jn}` for
    /// `0 <= j <= h` when `h <= n`, `{cap}` otherwise.
    pub fn closed_form_powers(&self, h: usize) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
        if h == 0 {
            return Err(AlgebraError::ZeroExponent.into());
        }
        let n = self.n;
        if h > n {
            let top = BTreeSet::from([self.cap()]);
            return Ok((top.clone(), top));
        }
        let b = (0..=h).map(|j| h * n * n + j).collect();
        let c = (0..=h).map(|j| h * n * n + j * n).collect();
        Ok((b, c))
    }

    /// Runs the product intersection set of `[B, C]` and checks the shape:
    /// resolved set `ℕ ∖ {n}`, both sides `{hn²}` below `n`, and the extra
    /// element `n³ + n` at `h = n`.
    pub fn verify_pair_single_exclusion(&self, hmax: usize) -> Result<PairExclusion> {
        let n = self.n;
        if hmax < n + 1 {
            return Err(Error::InvalidParameter(format!(
                "horizon {hmax} must be at least n + 1 = {}",
                n + 1
            )));
        }
        let (b, c) = self.bc_sets();
        let report = product_intersection_set(self, &[b.clone(), c.clone()], hmax)?;

        let expected = NatSet::cofinite([n as u64])?;
        ensure(report.resolved() == Some(&expected), || {
            format!("resolved {:?}, expected {expected}", report.resolved())
        })?;
        ensure(report.tail() == Some(Tail { from: n + 1, verdict: true }), || {
            format!("tail {:?} should start at {}", report.tail(), n + 1)
        })?;

        let meet = b.intersection(&c)?;
        for h in 1..n {
            let lhs = crate::algebra::power(self, &meet, h)?;
            let rhs = crate::algebra::power(self, &b, h)?
                .intersection(&crate::algebra::power(self, &c, h)?)?;
            ensure(lhs.to_vec() == vec![h * n * n] && rhs == lhs, || {
                format!("h = {h}: sides {:?} and {:?}, expected {{{}}}", lhs, rhs, h * n * n)
            })?;
        }

        let witness = n.pow(3) + n;
        let lhs = crate::algebra::power(self, &meet, n)?;
        let rhs = crate::algebra::power(self, &b, n)?.intersection(&crate::algebra::power(self, &c, n)?)?;
        ensure(rhs.contains(witness) && !lhs.contains(witness), || {
            format!("witness {witness} missing at h = n")
        })?;
        Ok(PairExclusion { report, witness })
    }

    /// `[B, C, S, S, ...]` of length `q_count`.
    pub fn hq_family(&self, q_count: usize) -> Result<Vec<SubsetMask>> {
        if q_count < 2 {
            return Err(Error::InvalidParameter(format!("need at least two indices, got {q_count}")));
        }
        let (b, c) = self.bc_sets();
        let mut family = vec![b, c];
        family.resize(q_count, SubsetMask::full(self.cap() + 1));
        Ok(family)
    }
}

impl Semigroup for TruncAdd {
    fn order(&self) -> usize {
        self.cap() + 1
    }

    #[inline]
    fn mul(&self, x: usize, y: usize) -> usize {
        (x + y).min(self.cap())
    }

    fn identity(&self) -> Option<usize> {
        Some(0)
    }

    // cap is the only absorbing element (cap ⋆ 0 = cap, and z ⋆ 1 = z forces z = cap)
    fn is_absorbing(&self, z: usize) -> bool {
        z == self.cap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_associativity, power, power_oracle, Associativity};

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn table_for_two() {
        let t = TruncAdd::new(2).unwrap().table(10_000).unwrap();
        assert_eq!(t.order(), 13);
        assert_eq!(t.mul(4, 6), 10);
        assert_eq!(t.mul(6, 6), 12);
        assert!((0..13).all(|x| t.mul(0, x) == x));
        assert!((0..13).all(|x| (0..13).all(|y| t.mul(x, y) == t.mul(y, x))));
        assert_eq!(check_associativity(&t.rows()).unwrap(), Associativity::Associative);
        assert_eq!(t.label(7), "7");
        assert!(TruncAdd::new(3).unwrap().table(10).unwrap_err().is_budget());
        assert!(TruncAdd::new(1).is_err());
    }

    #[test]
    fn folds() {
        let two = TruncAdd::new(2).unwrap();
        assert_eq!(two.fold(&[4, 4, 4]).unwrap(), 12);
        assert_eq!(two.fold(&[5, 5, 5]).unwrap(), 12);
        assert_eq!(TruncAdd::new(3).unwrap().fold(&[9, 9]).unwrap(), 18);
        assert!(two.fold(&[13]).is_err());
        assert!(two.fold(&[]).is_err());
    }

    #[test]
    fn fold_matches_table_exhaustively() {
        for n in [2, 3] {
            let s = TruncAdd::new(n).unwrap();
            let t = s.table(10_000).unwrap();
            let m = t.order();
            for a in 0..m {
                assert_eq!(s.fold(&[a]).unwrap(), a);
                for b in 0..m {
                    let ab = t.mul(a, b);
                    assert_eq!(s.fold(&[a, b]).unwrap(), ab);
                    for c in 0..m {
                        assert_eq!(s.fold(&[a, b, c]).unwrap(), t.mul(ab, c));
                    }
                }
            }
        }
    }

    #[test]
    fn b_and_c() {
        let (b, c) = TruncAdd::new(2).unwrap().bc_sets();
        assert_eq!((b.to_vec(), c.to_vec()), (vec![4, 5], vec![4, 6]));
        assert_eq!(b.intersection(&c).unwrap().to_vec(), vec![4]);
        let (b, c) = TruncAdd::new(3).unwrap().bc_sets();
        assert_eq!((b.to_vec(), c.to_vec()), (vec![9, 10], vec![9, 12]));
    }

    #[test]
    fn closed_forms() {
        let two = TruncAdd::new(2).unwrap();
        assert_eq!(two.closed_form_powers(2).unwrap(), (set(&[8, 9, 10]), set(&[8, 10, 12])));
        assert_eq!(two.closed_form_powers(5).unwrap(), (set(&[12]), set(&[12])));
        let three = TruncAdd::new(3).unwrap();
        assert_eq!(three.closed_form_powers(2).unwrap(), (set(&[18, 19, 20]), set(&[18, 21, 24])));
    }

    #[test]
    fn closed_forms_match_powers_and_oracle() {
        for n in 2..=6 {
            let s = TruncAdd::new(n).unwrap();
            let (b, c) = s.bc_sets();
            for h in 1..=n + 3 {
                let (cb, cc) = s.closed_form_powers(h).unwrap();
                for (closed, base) in [(cb, &b), (cc, &c)] {
                    let iterated = power(&s, base, h).unwrap();
                    let brute = power_oracle(&s, base, h, 10_000_000).unwrap();
                    assert_eq!(iterated, brute);
                    assert_eq!(iterated.elements().collect::<BTreeSet<_>>(), closed, "n={n} h={h}");
                }
            }
        }
    }

    #[test]
    fn pair_exclusion() {
        let out = TruncAdd::new(2).unwrap().verify_pair_single_exclusion(6).unwrap();
        assert_eq!(out.report.resolved().unwrap().to_string(), "all-except:2");
        assert_eq!(out.witness, 10);

        let out = TruncAdd::new(4).unwrap().verify_pair_single_exclusion(8).unwrap();
        let falses: Vec<usize> = (1..=8).filter(|&h| out.report.verdict(h) == Some(false)).collect();
        assert_eq!(falses, vec![4]);

        assert!(TruncAdd::new(4).unwrap().verify_pair_single_exclusion(4).is_err());
    }

    #[test]
    fn padded_families() {
        for (n, q_count) in [(2, 2), (2, 5), (3, 3)] {
            let s = TruncAdd::new(n).unwrap();
            let family = s.hq_family(q_count).unwrap();
            assert_eq!(family.len(), q_count);
            let r = product_intersection_set(&s, &family, n + 3).unwrap();
            assert_eq!(r.resolved(), Some(&NatSet::cofinite([n as u64]).unwrap()));
        }
        assert!(TruncAdd::new(2).unwrap().hq_family(1).is_err());
    }

    #[test]
    fn gap_between_b_and_c_below_n() {
        for n in 2..=6usize {
            let s = TruncAdd::new(n).unwrap();
            for h in 1..n {
                let (b, c) = s.closed_form_powers(h).unwrap();
                let max_b = *b.iter().max().unwrap();
                let min_c_rest = *c.iter().filter(|&&x| x != h * n * n).min().unwrap();
                assert_eq!(max_b, h * n * n + h);
                assert_eq!(min_c_rest, h * n * n + n);
                assert!(max_b < min_c_rest);
            }
        }
    }
}
