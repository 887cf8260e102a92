use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use super::subset::{family_intersection, minkowski, PowerSequence, SubsetMask};
use super::{AlgebraError, Semigroup};
use crate::natset::NatSet;

/// Verdict is `v` for every exponent `h >= from`, including all `h > hmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tail {
    pub from: usize,
    pub verdict: bool,
}

/// Equality verdicts `A^h == ⋂ A_q^h` for `h = 1..=hmax`, plus an optional
/// tail certificate that settles every larger `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawReport")]
pub struct HReport {
    hmax: usize,
    verdicts: Vec<bool>,
    tail: Option<Tail>,
    resolved: Option<NatSet>,
}

#[derive(Deserialize)]
struct RawReport {
    hmax: usize,
    verdicts: Vec<bool>,
    tail: Option<Tail>,
    resolved: Option<NatSet>,
}

impl TryFrom<RawReport> for HReport {
    type Error = AlgebraError;

    fn try_from(raw: RawReport) -> Result<Self, Self::Error> {
        if raw.hmax != raw.verdicts.len() {
            return Err(AlgebraError::InvalidReport(format!(
                "hmax {} but {} verdicts",
                raw.hmax,
                raw.verdicts.len()
            )));
        }
        let report = HReport::new(raw.verdicts, raw.tail)?;
        if report.resolved != raw.resolved {
            return Err(AlgebraError::InvalidReport("resolved set disagrees with verdicts".into()));
        }
        Ok(report)
    }
}

static PRODUCED: AtomicUsize = AtomicUsize::new(0);
static FIRST_VERDICT_FALSE: AtomicUsize = AtomicUsize::new(0);

/// Process-wide tally of reports built so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditCounts {
    pub produced: usize,
    /// Reports whose `h = 1` verdict was false. Always zero for genuine
    /// semigroup data; such reports are rejected.
    pub first_verdict_false: usize,
}

pub fn audit() -> AuditCounts {
    AuditCounts {
        produced: PRODUCED.load(Ordering::Relaxed),
        first_verdict_false: FIRST_VERDICT_FALSE.load(Ordering::Relaxed),
    }
}

impl HReport {
    /// Validates the verdict/tail invariants and derives the resolved set.
    pub fn new(verdicts: Vec<bool>, tail: Option<Tail>) -> Result<Self, AlgebraError> {
        PRODUCED.fetch_add(1, Ordering::Relaxed);
        match verdicts.first() {
            None => return Err(AlgebraError::InvalidReport("hmax must be at least 1".into())),
            Some(false) => {
                FIRST_VERDICT_FALSE.fetch_add(1, Ordering::Relaxed);
                return Err(AlgebraError::InvalidReport("verdict at h = 1 must be true".into()));
            }
            Some(true) => {}
        }
        let hmax = verdicts.len();
        let resolved = match tail {
            None => None,
            Some(Tail { from, verdict }) => {
                if from == 0 || from > hmax {
                    return Err(AlgebraError::InvalidReport(format!(
                        "tail start {from} outside [1, {hmax}]"
                    )));
                }
                if verdicts[from - 1..].iter().any(|&v| v != verdict) {
                    return Err(AlgebraError::InvalidReport(format!(
                        "verdicts from {from} are not constantly {verdict}"
                    )));
                }
                Some(NatSet::from_window(hmax as u64, verdict, |h| verdicts[h as usize - 1]))
            }
        };
        Ok(HReport { hmax, verdicts, tail, resolved })
    }

    pub fn hmax(&self) -> usize {
        self.hmax
    }

    pub fn verdicts(&self) -> &[bool] {
        &self.verdicts
    }

    /// Verdict at exponent `h`, for `1 <= h <= hmax`.
    pub fn verdict(&self, h: usize) -> Option<bool> {
        h.checked_sub(1).and_then(|i| self.verdicts.get(i)).copied()
    }

    pub fn tail(&self) -> Option<Tail> {
        self.tail
    }

    /// The exact H-set, present iff a tail certificate exists.
    pub fn resolved(&self) -> Option<&NatSet> {
        self.resolved.as_ref()
    }

    /// Exponents in the window whose verdict is `true`.
    pub fn window_set(&self) -> NatSet {
        NatSet::from_window(self.hmax as u64, false, |h| self.verdicts[h as usize - 1])
    }

    /// Whether the verdicts match `target` on `[1, hmax]`.
    pub fn agrees_with(&self, target: &NatSet) -> bool {
        target.equal_up_to(&self.window_set(), self.hmax as u64)
    }

    /// Inline rendering such as `1 ✓ 2 ✗ 3 ✓`.
    pub fn render_marks(&self) -> String {
        self.verdicts
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{} {}", i + 1, if v { '✓' } else { '✗' }))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Computes the product intersection set of `family` up to `hmax`.
///
/// A tail certificate is issued when, at some `h0 <= hmax`, either every power
/// involved is the same absorbing singleton, or the joint state
/// `(A^h, A_q^h ...)` recurs with a constant verdict over the cycle. The
/// recurrence check looks one step past `hmax`, which covers one-step
/// stabilization of every power sequence.
pub fn product_intersection_set<S: Semigroup + ?Sized>(
    s: &S,
    family: &[SubsetMask],
    hmax: usize,
) -> Result<HReport, AlgebraError> {
    if hmax == 0 {
        return Err(AlgebraError::ZeroExponent);
    }
    let a = family_intersection(family)?;

    // repeated members do not change any intersection
    let mut members: Vec<&SubsetMask> = Vec::new();
    for q in family {
        if !members.contains(&q) {
            members.push(q);
        }
    }

    let mut a_seq = PowerSequence::new(s, &a)?;
    let mut q_seqs = members
        .iter()
        .map(|q| PowerSequence::new(s, q))
        .collect::<Result<Vec<_>, _>>()?;

    let mut verdicts = Vec::with_capacity(hmax + 1);
    let mut seen: HashMap<Vec<SubsetMask>, usize> = HashMap::new();
    let mut certified_at: Option<usize> = None;

    for h in 1..=hmax + 1 {
        if h > 1 {
            a_seq.advance()?;
            for seq in &mut q_seqs {
                seq.advance()?;
            }
        }
        let a_pow = a_seq.current();
        let mut inter = q_seqs[0].current().clone();
        for seq in &q_seqs[1..] {
            inter = inter.intersection(seq.current())?;
        }
        if let Some(element) = a_pow.first_outside(&inter) {
            return Err(AlgebraError::ContainmentViolated { h, element });
        }
        verdicts.push(*a_pow == inter);

        if certified_at.is_some() {
            if h >= hmax {
                break;
            }
            continue;
        }
        if h <= hmax && absorbing_singleton(s, a_pow, &q_seqs) {
            certified_at = Some(h);
            continue;
        }
        let mut state = Vec::with_capacity(q_seqs.len() + 1);
        state.push(a_pow.clone());
        state.extend(q_seqs.iter().map(|seq| seq.current().clone()));
        if let Some(&start) = seen.get(&state) {
            let cycle = &verdicts[start - 1..h - 1];
            if cycle.iter().all(|&v| v == cycle[0]) {
                certified_at = Some(start);
            }
        } else {
            seen.insert(state, h);
        }
    }
    verdicts.truncate(hmax);

    let tail = certified_at.map(|c| {
        let v = verdicts[c - 1];
        let mut from = c;
        while from > 1 && verdicts[from - 2] == v {
            from -= 1;
        }
        Tail { from, verdict: v }
    });
    HReport::new(verdicts, tail)
}

fn absorbing_singleton<S: Semigroup + ?Sized>(
    s: &S,
    a_pow: &SubsetMask,
    q_seqs: &[PowerSequence<'_, S>],
) -> bool {
    match a_pow.single() {
        Some(z) => {
            q_seqs.iter().all(|seq| seq.current().single() == Some(z)) && s.is_absorbing(z)
        }
        None => false,
    }
}

/// H-set of the empty family, whose intersection is the whole carrier:
/// `ℕ` if `S^2 = S`, otherwise `{1}`.
pub fn empty_family_h<S: Semigroup + ?Sized>(s: &S) -> NatSet {
    let full = SubsetMask::full(s.order());
    let square = minkowski(s, &full, &full).expect("full mask matches its own carrier");
    if square == full {
        NatSet::all()
    } else {
        NatSet::finite([1]).expect("1 is positive")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{adjoin_identity, FiniteSemigroup};

    fn trunc_add(cap: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_fn(cap + 1, |x, y| (x + y).min(cap))
    }

    fn mask(m: usize, xs: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(m, xs.iter().copied()).unwrap()
    }

    #[test]
    fn pair_family_over_truncated_addition() {
        let s = trunc_add(12);
        let r = product_intersection_set(&s, &[mask(13, &[4, 5]), mask(13, &[4, 6])], 6).unwrap();
        assert_eq!(r.verdicts(), &[true, false, true, true, true, true]);
        assert_eq!(r.tail(), Some(Tail { from: 3, verdict: true }));
        assert_eq!(r.resolved().unwrap().to_string(), "all-except:2");
    }

    #[test]
    fn single_member_family_is_all_true() {
        let s = trunc_add(12);
        let r = product_intersection_set(&s, &[mask(13, &[1, 3])], 5).unwrap();
        assert!(r.verdicts().iter().all(|&v| v));
        assert_eq!(r.resolved(), None);
        // every power collapses to the absorbing cap by h = 12
        let r = product_intersection_set(&s, &[mask(13, &[1, 3])], 14).unwrap();
        assert_eq!(r.resolved(), Some(&NatSet::all()));
    }

    #[test]
    fn cyclic_group_recurrence_certifies() {
        // Z/3 under addition: {1}^h cycles with period 3 and never stabilizes
        let z3 = FiniteSemigroup::from_fn(3, |x, y| (x + y) % 3);
        let r = product_intersection_set(&z3, &[mask(3, &[1])], 6).unwrap();
        assert_eq!(r.tail(), Some(Tail { from: 1, verdict: true }));
        assert_eq!(r.resolved(), Some(&NatSet::all()));

        // too short a window to see the period: no certificate
        let r = product_intersection_set(&z3, &[mask(3, &[1])], 2).unwrap();
        assert_eq!(r.tail(), None);
        assert_eq!(r.resolved(), None);
    }

    #[test]
    fn rejects_bad_arguments() {
        let s = trunc_add(3);
        assert_eq!(product_intersection_set(&s, &[], 3), Err(AlgebraError::EmptyFamily));
        assert_eq!(
            product_intersection_set(&s, &[mask(4, &[1])], 0),
            Err(AlgebraError::ZeroExponent)
        );
        assert!(product_intersection_set(&s, &[mask(5, &[1])], 2).is_err());
    }

    #[test]
    fn empty_family_dichotomy() {
        assert_eq!(empty_family_h(&trunc_add(12)), NatSet::all());
        let null = FiniteSemigroup::null(2).unwrap();
        assert_eq!(empty_family_h(&null).to_string(), "1");
        assert_eq!(empty_family_h(&adjoin_identity(&null)), NatSet::all());
    }

    #[test]
    fn report_validation() {
        assert!(HReport::new(vec![], None).is_err());
        assert!(HReport::new(vec![false, true], None).is_err());
        assert!(HReport::new(vec![true, false, true], Some(Tail { from: 2, verdict: true })).is_err());
        assert!(HReport::new(vec![true, true], Some(Tail { from: 3, verdict: true })).is_err());
        let r = HReport::new(vec![true, false, false], Some(Tail { from: 2, verdict: false })).unwrap();
        assert_eq!(r.resolved().unwrap().to_string(), "1");
        assert_eq!(r.verdict(2), Some(false));
        assert_eq!(r.verdict(0), None);
        assert_eq!(r.render_marks(), "1 ✓ 2 ✗ 3 ✗");
    }

    #[test]
    fn json_schema() {
        let r = HReport::new(vec![true, false, true], Some(Tail { from: 3, verdict: true })).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"hmax":3,"verdicts":[true,false,true],"tail":{"from":3,"verdict":true},"resolved":"all-except:2"}"#
        );
        let back: HReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);

        let open = HReport::new(vec![true, true], None).unwrap();
        let json = serde_json::to_string(&open).unwrap();
        assert_eq!(json, r#"{"hmax":2,"verdicts":[true,true],"tail":null,"resolved":null}"#);

        let forged = r#"{"hmax":3,"verdicts":[true,false,true],"tail":{"from":3,"verdict":true},"resolved":"all"}"#;
        assert!(serde_json::from_str::<HReport>(forged).is_err());
    }
}
