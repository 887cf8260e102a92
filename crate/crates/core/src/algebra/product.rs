use super::subset::SubsetMask;
use super::table::FiniteSemigroup;
use super::{AlgebraError, Semigroup};

/// Direct product of semigroups with the componentwise operation.
///
/// Tuples are encoded mixed-radix with component 0 as the most significant
/// digit: `(x_0, ..., x_{k-1})` maps to
/// `((x_0 * m_1 + x_1) * m_2 + x_2) ...`. Products are computed on demand,
/// so no table is stored.
#[derive(Debug, Clone)]
pub struct ProductSemigroup<S> {
    components: Vec<S>,
    radices: Vec<usize>,
    size: usize,
}

impl<S: Semigroup> ProductSemigroup<S> {
    /// Fails if there are no components or the carrier exceeds `budget`.
    pub fn new(components: Vec<S>, budget: usize) -> Result<Self, AlgebraError> {
        if components.is_empty() {
            return Err(AlgebraError::EmptyCarrier);
        }
        let radices: Vec<usize> = components.iter().map(Semigroup::order).collect();
        let size = radices
            .iter()
            .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
            .unwrap_or(u128::MAX);
        if size > budget as u128 {
            return Err(AlgebraError::TableBudget { size, budget });
        }
        Ok(ProductSemigroup { components, radices, size: size as usize })
    }

    pub fn components(&self) -> &[S] {
        &self.components
    }

    pub fn encode(&self, coords: &[usize]) -> Result<usize, AlgebraError> {
        if coords.len() != self.radices.len() {
            return Err(AlgebraError::ComponentMismatch {
                expected: self.radices.len(),
                found: coords.len(),
            });
        }
        let mut code = 0;
        for (&c, &r) in coords.iter().zip(&self.radices) {
            if c >= r {
                return Err(AlgebraError::ElementOutOfRange { element: c, size: r });
            }
            code = code * r + c;
        }
        Ok(code)
    }

    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        let mut coords = vec![0; self.radices.len()];
        for (slot, &r) in coords.iter_mut().zip(&self.radices).rev() {
            *slot = code % r;
            code /= r;
        }
        coords
    }

    /// Tabulates the product.
    pub fn materialize(&self) -> FiniteSemigroup {
        FiniteSemigroup::tabulate(self)
    }
}

impl<S: Semigroup> Semigroup for ProductSemigroup<S> {
    fn order(&self) -> usize {
        self.size
    }

    fn mul(&self, mut x: usize, mut y: usize) -> usize {
        let mut out = 0;
        let mut place = 1;
        for (s, &r) in self.components.iter().zip(&self.radices).rev() {
            out += s.mul(x % r, y % r) * place;
            x /= r;
            y /= r;
            place *= r;
        }
        out
    }

    fn identity(&self) -> Option<usize> {
        let coords = self
            .components
            .iter()
            .map(Semigroup::identity)
            .collect::<Option<Vec<_>>>()?;
        self.encode(&coords).ok()
    }

    fn label(&self, x: usize) -> String {
        let parts: Vec<String> = self
            .decode(x)
            .iter()
            .zip(&self.components)
            .map(|(&c, s)| s.label(c))
            .collect();
        format!("({})", parts.join(","))
    }

    // an element is absorbing iff every coordinate is
    fn is_absorbing(&self, z: usize) -> bool {
        self.decode(z)
            .iter()
            .zip(&self.components)
            .all(|(&c, s)| s.is_absorbing(c))
    }
}

/// The tabulated direct product of `components`, refusing carriers above `budget`.
pub fn direct_product(
    components: &[FiniteSemigroup],
    budget: usize,
) -> Result<FiniteSemigroup, AlgebraError> {
    Ok(ProductSemigroup::new(components.to_vec(), budget)?.materialize())
}

/// The box `parts[0] x parts[1] x ...` inside the product.
pub fn box_subset<S: Semigroup>(
    product: &ProductSemigroup<S>,
    parts: &[SubsetMask],
) -> Result<SubsetMask, AlgebraError> {
    let k = product.components.len();
    if parts.len() != k {
        return Err(AlgebraError::ComponentMismatch { expected: k, found: parts.len() });
    }
    for (part, &r) in parts.iter().zip(&product.radices) {
        if part.universe() != r {
            return Err(AlgebraError::UniverseMismatch { expected: r, found: part.universe() });
        }
    }
    // grow the set of partial codes one component at a time
    let mut codes = vec![0usize];
    for (part, &r) in parts.iter().zip(&product.radices) {
        let digits = part.to_vec();
        codes = codes
            .iter()
            .flat_map(|&c| digits.iter().map(move |&d| c * r + d))
            .collect();
    }
    SubsetMask::from_elements(product.size, codes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_associativity, Associativity};

    fn trunc_add(cap: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_fn(cap + 1, |x, y| (x + y).min(cap))
            .with_identity(0)
            .unwrap()
    }

    #[test]
    fn sizes_multiply() {
        let p = ProductSemigroup::new(vec![trunc_add(12), trunc_add(36)], 10_000).unwrap();
        assert_eq!(p.order(), 481);
        assert_eq!(p.identity(), Some(0));
    }

    #[test]
    fn budget_is_enforced() {
        let err = ProductSemigroup::new(vec![trunc_add(12), trunc_add(36)], 400).unwrap_err();
        assert_eq!(err, AlgebraError::TableBudget { size: 481, budget: 400 });
        assert!(direct_product(&[], 10).is_err());
    }

    #[test]
    fn mixed_radix_encoding() {
        let p = ProductSemigroup::new(vec![trunc_add(2), trunc_add(3)], 100).unwrap();
        // (a, b) -> a * 4 + b
        assert_eq!(p.encode(&[1, 2]).unwrap(), 6);
        assert_eq!(p.decode(6), vec![1, 2]);
        assert_eq!(p.label(6), "(1,2)");
        assert!(p.encode(&[3, 0]).is_err());
        assert!(p.encode(&[1]).is_err());
        // (1,2)*(2,3) = (min(3,2), min(5,3))
        assert_eq!(p.decode(p.mul(6, p.encode(&[2, 3]).unwrap())), vec![2, 3]);
    }

    #[test]
    fn single_component_is_a_copy() {
        let s = trunc_add(5);
        let p = direct_product(std::slice::from_ref(&s), 100).unwrap();
        assert_eq!(p.rows(), s.rows());
        assert_eq!(p.identity(), Some(0));
    }

    #[test]
    fn tabulated_product_is_associative() {
        let p = direct_product(&[trunc_add(3), FiniteSemigroup::null(2).unwrap()], 100).unwrap();
        assert_eq!(check_associativity(&p.rows()).unwrap(), Associativity::Associative);
        // the null factor has no identity
        assert_eq!(p.identity(), None);
    }

    #[test]
    fn boxes() {
        let p = ProductSemigroup::new(vec![trunc_add(12), trunc_add(36)], 10_000).unwrap();
        let full = box_subset(&p, &[SubsetMask::full(13), SubsetMask::full(37)]).unwrap();
        assert!(full.is_full());
        let empty = box_subset(&p, &[SubsetMask::empty(13), SubsetMask::full(37)]).unwrap();
        assert!(empty.is_empty());
        let b = box_subset(
            &p,
            &[
                SubsetMask::from_elements(13, [4, 5]).unwrap(),
                SubsetMask::from_elements(37, [9, 10]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(b.len(), 4);
        assert!(b.contains(p.encode(&[5, 9]).unwrap()));
        assert!(box_subset(&p, &[SubsetMask::full(13)]).is_err());
        assert!(box_subset(&p, &[SubsetMask::full(13), SubsetMask::full(13)]).is_err());
    }

    #[test]
    fn absorbing_coordinates() {
        let p = ProductSemigroup::new(vec![trunc_add(2), trunc_add(3)], 100).unwrap();
        let z = p.encode(&[2, 3]).unwrap();
        assert!(p.is_absorbing(z));
        assert!(!p.is_absorbing(p.encode(&[2, 2]).unwrap()));
    }
}
