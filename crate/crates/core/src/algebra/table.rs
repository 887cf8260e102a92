use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{AlgebraError, Semigroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Associativity {
    Associative,
    /// Lexicographically least `(x, y, z)` with `(xy)z != x(yz)`.
    Counterexample(usize, usize, usize),
}

/// Checks closure and associativity of a square operation table.
///
/// Closure violations are errors; a non-associative but closed table is a
/// regular result carrying the least violating triple.
pub fn check_associativity(table: &[Vec<usize>]) -> Result<Associativity, AlgebraError> {
    let flat = validate_shape(table)?;
    let m = table.len();
    let at = |x: usize, y: usize| flat[x * m + y] as usize;
    for x in 0..m {
        for y in 0..m {
            let xy = at(x, y);
            for z in 0..m {
                if at(xy, z) != at(x, at(y, z)) {
                    return Ok(Associativity::Counterexample(x, y, z));
                }
            }
        }
    }
    Ok(Associativity::Associative)
}

/// Exhaustive associativity search over any [`Semigroup`] implementation.
pub fn find_counterexample<S: Semigroup + ?Sized>(s: &S) -> Option<(usize, usize, usize)> {
    let m = s.order();
    for x in 0..m {
        for y in 0..m {
            let xy = s.mul(x, y);
            for z in 0..m {
                if s.mul(xy, z) != s.mul(x, s.mul(y, z)) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// Tests `samples` uniformly random triples; returns the first failure.
pub fn check_associativity_sampled<S: Semigroup + ?Sized, R: Rng>(
    s: &S,
    samples: usize,
    rng: &mut R,
) -> Option<(usize, usize, usize)> {
    let m = s.order();
    (0..samples)
        .map(|_| (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m)))
        .find(|&(x, y, z)| s.mul(s.mul(x, y), z) != s.mul(x, s.mul(y, z)))
}

fn validate_shape(table: &[Vec<usize>]) -> Result<Vec<u32>, AlgebraError> {
    let m = table.len();
    if m == 0 {
        return Err(AlgebraError::EmptyCarrier);
    }
    let mut flat = Vec::with_capacity(m * m);
    for (x, row) in table.iter().enumerate() {
        if row.len() != m {
            return Err(AlgebraError::TableShape { row: x, len: row.len(), expected: m });
        }
        for (y, &value) in row.iter().enumerate() {
            if value >= m {
                return Err(AlgebraError::Closure { x, y, value, size: m });
            }
            flat.push(value as u32);
        }
    }
    Ok(flat)
}

/// A semigroup given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    size: usize,
    table: Vec<u32>,
    labels: Option<Vec<String>>,
    identity: Option<usize>,
}

impl FiniteSemigroup {
    /// Validates closure and associativity.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, AlgebraError> {
        let flat = validate_shape(table)?;
        let s = FiniteSemigroup { size: table.len(), table: flat, labels: None, identity: None };
        if let Some((x, y, z)) = find_counterexample(&s) {
            return Err(AlgebraError::NotAssociative { x, y, z });
        }
        Ok(s)
    }

    /// Tabulates an operation whose associativity follows from how it was
    /// built (arithmetic, products of semigroups, adjoined identities).
    pub(crate) fn from_fn<F: Fn(usize, usize) -> usize>(size: usize, op: F) -> Self {
        let mut table = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                let v = op(x, y);
                debug_assert!(v < size);
                table.push(v as u32);
            }
        }
        FiniteSemigroup { size, table, labels: None, identity: None }
    }

    /// Tabulates any semigroup.
    pub fn tabulate<S: Semigroup + ?Sized>(s: &S) -> Self {
        let m = s.order();
        let mut out = Self::from_fn(m, |x, y| s.mul(x, y));
        out.labels = Some((0..m).map(|x| s.label(x)).collect());
        out.identity = s.identity();
        out
    }

    /// The null semigroup of order `m`: every product is `0`.
    pub fn null(m: usize) -> Result<Self, AlgebraError> {
        if m == 0 {
            return Err(AlgebraError::EmptyCarrier);
        }
        Ok(Self::from_fn(m, |_, _| 0))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, AlgebraError> {
        if labels.len() != self.size {
            return Err(AlgebraError::LabelCount { expected: self.size, got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_identity(mut self, e: usize) -> Result<Self, AlgebraError> {
        if !self.is_identity(e) {
            return Err(AlgebraError::NotIdentity(e));
        }
        self.identity = Some(e);
        Ok(self)
    }

    pub fn is_identity(&self, e: usize) -> bool {
        e < self.size && (0..self.size).all(|x| self.mul(e, x) == x && self.mul(x, e) == x)
    }

    /// Searches the table for a two-sided identity.
    pub fn find_identity(&self) -> Option<usize> {
        (0..self.size).find(|&e| self.is_identity(e))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.size)
            .map(|row| row.iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// Looks up an element by its label.
    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }
}

impl Semigroup for FiniteSemigroup {
    fn order(&self) -> usize {
        self.size
    }

    #[inline]
    fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y] as usize
    }

    fn identity(&self) -> Option<usize> {
        self.identity
    }

    fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(labels) => labels[x].clone(),
            None => x.to_string(),
        }
    }
}

/// Adds a fresh two-sided identity as element `m`; old products are unchanged.
pub fn adjoin_identity(s: &FiniteSemigroup) -> FiniteSemigroup {
    let m = s.size;
    let mut out = FiniteSemigroup::from_fn(m + 1, |x, y| match (x == m, y == m) {
        (true, _) => y,
        (_, true) => x,
        _ => s.mul(x, y),
    });
    if let Some(labels) = &s.labels {
        let mut labels = labels.clone();
        let mut fresh = "e".to_string();
        while labels.contains(&fresh) {
            fresh.push('\'');
        }
        labels.push(fresh);
        out.labels = Some(labels);
    }
    out.identity = Some(m);
    out
}

#[derive(Serialize, Deserialize)]
struct SemigroupRepr {
    size: usize,
    table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    identity: Option<usize>,
}

impl Serialize for FiniteSemigroup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SemigroupRepr {
            size: self.size,
            table: self.rows(),
            labels: self.labels.clone(),
            identity: self.identity,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteSemigroup {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SemigroupRepr::deserialize(deserializer)?;
        if repr.size != repr.table.len() {
            return Err(D::Error::custom(format!(
                "size {} does not match {} table rows",
                repr.size,
                repr.table.len()
            )));
        }
        let mut s = FiniteSemigroup::from_table(&repr.table).map_err(D::Error::custom)?;
        if let Some(labels) = repr.labels {
            s = s.with_labels(labels).map_err(D::Error::custom)?;
        }
        if let Some(e) = repr.identity {
            s = s.with_identity(e).map_err(D::Error::custom)?;
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // least failing triple by direct evaluation, independent of the checker
    fn least_violation(t: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
        let m = t.len();
        let mut all = Vec::new();
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if t[t[x][y]][z] != t[x][t[y][z]] {
                        all.push((x, y, z));
                    }
                }
            }
        }
        all.into_iter().min()
    }

    #[test]
    fn null_semigroup_is_associative() {
        let t = vec![vec![0, 0], vec![0, 0]];
        assert_eq!(check_associativity(&t).unwrap(), Associativity::Associative);
    }

    #[test]
    fn exhaustive_two_element_tables() {
        let mut bad = 0;
        for code in 0..16usize {
            let t: Vec<Vec<usize>> =
                (0..2).map(|x| (0..2).map(|y| (code >> (2 * x + y)) & 1).collect()).collect();
            let expected = least_violation(&t);
            let got = check_associativity(&t).unwrap();
            match expected {
                None => assert_eq!(got, Associativity::Associative),
                Some((x, y, z)) => {
                    bad += 1;
                    assert_eq!(got, Associativity::Counterexample(x, y, z));
                }
            }
        }
        // 8 of the 16 binary operations on two points are associative
        assert_eq!(bad, 8);
    }

    #[test]
    fn pinned_counterexample() {
        // 0*0 = 1, everything else 0: (0*0)*1 = 0 but 0*(0*1) = 1
        let t = vec![vec![1, 0], vec![0, 0]];
        assert_eq!(check_associativity(&t).unwrap(), Associativity::Counterexample(0, 0, 1));
        assert_eq!(
            FiniteSemigroup::from_table(&t),
            Err(AlgebraError::NotAssociative { x: 0, y: 0, z: 1 })
        );
    }

    #[test]
    fn closure_violation_names_the_cell() {
        let t = vec![vec![0, 1], vec![2, 0]];
        assert_eq!(
            check_associativity(&t),
            Err(AlgebraError::Closure { x: 1, y: 0, value: 2, size: 2 })
        );
        let ragged = vec![vec![0, 0], vec![0]];
        assert!(matches!(check_associativity(&ragged), Err(AlgebraError::TableShape { .. })));
        assert_eq!(check_associativity(&[]), Err(AlgebraError::EmptyCarrier));
    }

    #[test]
    fn adjoined_identity() {
        let null = FiniteSemigroup::null(2).unwrap();
        let monoid = adjoin_identity(&null);
        assert_eq!(monoid.size(), 3);
        assert_eq!(monoid.identity(), Some(2));
        assert_eq!(check_associativity(&monoid.rows()).unwrap(), Associativity::Associative);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(monoid.mul(x, y), null.mul(x, y));
            }
        }
    }

    #[test]
    fn adjoining_to_a_monoid_demotes_the_old_identity() {
        let t: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| (x + y).min(2)).collect()).collect();
        let m = FiniteSemigroup::from_table(&t).unwrap().with_identity(0).unwrap();
        let bigger = adjoin_identity(&m);
        assert_eq!(bigger.identity(), Some(3));
        assert!(!bigger.is_identity(0));
        assert_eq!(bigger.find_identity(), Some(3));
    }

    #[test]
    fn identity_is_validated() {
        let null = FiniteSemigroup::null(2).unwrap();
        assert_eq!(null.clone().with_identity(0), Err(AlgebraError::NotIdentity(0)));
        assert!(null.with_labels(vec!["a".into()]).is_err());
    }

    #[test]
    fn json_schema() {
        let s = FiniteSemigroup::null(2)
            .unwrap()
            .with_labels(vec!["0".into(), "1".into()])
            .unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"size":2,"table":[[0,0],[0,0]],"labels":["0","1"]}"#);
        let back: FiniteSemigroup = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);

        let bad = r#"{"size":2,"table":[[1,0],[0,0]]}"#;
        assert!(serde_json::from_str::<FiniteSemigroup>(bad).is_err());
    }
}
