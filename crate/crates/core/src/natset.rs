//! Finite and cofinite subsets of the positive integers.
//!
//! Every exponent set the engine produces is either finite or has a finite
//! complement, so a [`NatSet`] stores a kind tag plus a strictly increasing
//! support list. The representation is canonical: two sets are equal exactly
//! when their kinds and supports agree.
//!
//! The text form is used by the CLI and inside JSON documents:
//!
//! | set                    | text             |
//! |------------------------|------------------|
//! | `Finite []`            | `none`           |
//! | `Finite [1,3,7]`       | `1,3,7`          |
//! | `Cofinite []`          | `all`            |
//! | `Cofinite [2,4]`       | `all-except:2,4` |

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NatSetError {
    #[error("0 is not a positive integer")]
    Zero,
    #[error("cannot parse `{0}` as a set of positive integers")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Finite,
    Cofinite,
}

/// A finite or cofinite subset of `{1, 2, 3, ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NatSet {
    kind: Kind,
    // members if Finite, the complement if Cofinite
    support: Vec<u64>,
}

fn normalize(mut values: Vec<u64>) -> Result<Vec<u64>, NatSetError> {
    if values.contains(&0) {
        return Err(NatSetError::Zero);
    }
    values.sort_unstable();
    values.dedup();
    Ok(values)
}

impl NatSet {
    pub fn empty() -> Self {
        NatSet { kind: Kind::Finite, support: Vec::new() }
    }

    pub fn all() -> Self {
        NatSet { kind: Kind::Cofinite, support: Vec::new() }
    }

    /// The finite set with the given members. Order and repetition are ignored.
    pub fn finite<I: IntoIterator<Item = u64>>(members: I) -> Result<Self, NatSetError> {
        let support = normalize(members.into_iter().collect())?;
        Ok(NatSet { kind: Kind::Finite, support })
    }

    /// The set of all positive integers except the given ones.
    pub fn cofinite<I: IntoIterator<Item = u64>>(excluded: I) -> Result<Self, NatSetError> {
        let support = normalize(excluded.into_iter().collect())?;
        Ok(NatSet { kind: Kind::Cofinite, support })
    }

    /// Builds `{h in [1, window] : pred(h)}` extended by `tail` beyond the window.
    pub fn from_window<F: Fn(u64) -> bool>(window: u64, tail: bool, pred: F) -> Self {
        let support = (1..=window).filter(|&h| pred(h) != tail).collect();
        let kind = if tail { Kind::Cofinite } else { Kind::Finite };
        NatSet { kind, support }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn is_finite(&self) -> bool {
        self.kind == Kind::Finite
    }

    pub fn is_cofinite(&self) -> bool {
        self.kind == Kind::Cofinite
    }

    pub fn contains(&self, h: u64) -> Result<bool, NatSetError> {
        if h == 0 {
            return Err(NatSetError::Zero);
        }
        Ok(self.has(h))
    }

    // membership without the h >= 1 check; 0 is never a member
    fn has(&self, h: u64) -> bool {
        if h == 0 {
            return false;
        }
        let in_support = self.support.binary_search(&h).is_ok();
        match self.kind {
            Kind::Finite => in_support,
            Kind::Cofinite => !in_support,
        }
    }

    pub fn complement(&self) -> Self {
        let kind = match self.kind {
            Kind::Finite => Kind::Cofinite,
            Kind::Cofinite => Kind::Finite,
        };
        NatSet { kind, support: self.support.clone() }
    }

    pub fn intersect(&self, other: &NatSet) -> NatSet {
        match (self.kind, other.kind) {
            (Kind::Finite, Kind::Finite) => NatSet {
                kind: Kind::Finite,
                support: sorted_intersection(&self.support, &other.support),
            },
            (Kind::Cofinite, Kind::Cofinite) => NatSet {
                kind: Kind::Cofinite,
                support: sorted_union(&self.support, &other.support),
            },
            (Kind::Finite, Kind::Cofinite) => self.minus_support_of(other),
            (Kind::Cofinite, Kind::Finite) => other.minus_support_of(self),
        }
    }

    fn minus_support_of(&self, cofinite: &NatSet) -> NatSet {
        let support = self
            .support
            .iter()
            .copied()
            .filter(|h| cofinite.support.binary_search(h).is_err())
            .collect();
        NatSet { kind: Kind::Finite, support }
    }

    /// Whether `self` and `other` agree on `[1, hmax]`.
    pub fn equal_up_to(&self, other: &NatSet, hmax: u64) -> bool {
        // only support points can differ inside the window
        if self.kind == other.kind {
            let clip = |s: &[u64]| s.iter().copied().take_while(|&h| h <= hmax).collect::<Vec<_>>();
            return clip(&self.support) == clip(&other.support);
        }
        (1..=hmax).all(|h| self.has(h) == other.has(h))
    }

    /// Members inside `[1, hmax]`, ascending.
    pub fn members_up_to(&self, hmax: u64) -> Vec<u64> {
        match self.kind {
            Kind::Finite => self.support.iter().copied().take_while(|&h| h <= hmax).collect(),
            Kind::Cofinite => (1..=hmax).filter(|&h| self.has(h)).collect(),
        }
    }

    /// Largest support value, or 0 if the support is empty.
    pub fn max_support(&self) -> u64 {
        self.support.last().copied().unwrap_or(0)
    }
}

fn sorted_intersection(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn sorted_union(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn join(values: &[u64]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.support.is_empty()) {
            (Kind::Finite, true) => f.write_str("none"),
            (Kind::Finite, false) => f.write_str(&join(&self.support)),
            (Kind::Cofinite, true) => f.write_str("all"),
            (Kind::Cofinite, false) => write!(f, "all-except:{}", join(&self.support)),
        }
    }
}

fn parse_list(text: &str, whole: &str) -> Result<Vec<u64>, NatSetError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| NatSetError::Parse(whole.to_string()))
        })
        .collect()
}

impl FromStr for NatSet {
    type Err = NatSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        match text {
            "none" => Ok(NatSet::empty()),
            "all" => Ok(NatSet::all()),
            "" => Err(NatSetError::Parse(s.to_string())),
            _ => match text.strip_prefix("all-except:") {
                Some(rest) => NatSet::cofinite(parse_list(rest, s)?),
                None => NatSet::finite(parse_list(text, s)?),
            },
        }
    }
}

impl Serialize for NatSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NatSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
