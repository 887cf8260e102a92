//! Finite semigroup backend: operation tables, subset products and powers,
//! product intersection sets and direct products.
//!
//! Elements of a semigroup of order `m` are the indices `0..m`. Anything that
//! can multiply two indices implements [`Semigroup`]; the table-backed
//! [`FiniteSemigroup`] is the universal representation, while arithmetic or
//! product semigroups can implement the trait directly and skip the table.

mod product;
mod report;
mod subset;
mod table;

pub use product::{box_subset, direct_product, ProductSemigroup};
pub use report::{audit, empty_family_h, product_intersection_set, AuditCounts, HReport, Tail};
pub use subset::{family_intersection, minkowski, power, power_oracle, PowerSequence, SubsetMask};
pub use table::{
    adjoin_identity, check_associativity, check_associativity_sampled, find_counterexample,
    Associativity, FiniteSemigroup,
};

use thiserror::Error;

/// Default limit on `|B|^h` for [`power_oracle`].
pub const DEFAULT_TUPLE_BUDGET: u128 = 10_000_000;
/// Default limit on the carrier size of materialized or product semigroups.
pub const DEFAULT_TABLE_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("a semigroup needs at least one element")]
    EmptyCarrier,
    #[error("row {row} has {len} entries, expected {expected}")]
    TableShape { row: usize, len: usize, expected: usize },
    #[error("table[{x}][{y}] = {value} is outside the carrier of size {size}")]
    Closure { x: usize, y: usize, value: usize, size: usize },
    #[error("operation is not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("element {0} is not a two-sided identity")]
    NotIdentity(usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("element {element} is outside the carrier of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("subset lives over a carrier of size {found}, expected {expected}")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("exponents start at 1")]
    ZeroExponent,
    #[error("enumeration needs {needed} tuples, budget is {budget}")]
    TupleBudget { needed: u128, budget: u128 },
    #[error("carrier of size {size} exceeds the table budget {budget}")]
    TableBudget { size: u128, budget: usize },
    #[error("the family of subsets is empty")]
    EmptyFamily,
    #[error("expected {expected} components, got {found}")]
    ComponentMismatch { expected: usize, found: usize },
    #[error("internal error: element {element} of A^{h} is missing from the intersection of powers")]
    ContainmentViolated { h: usize, element: usize },
    #[error("report is inconsistent: {0}")]
    InvalidReport(String),
}

/// A finite semigroup on the carrier `0..order()`.
///
/// Implementors promise that `mul` is associative and closed.
pub trait Semigroup {
    fn order(&self) -> usize;

    fn mul(&self, x: usize, y: usize) -> usize;

    fn identity(&self) -> Option<usize> {
        None
    }

    fn label(&self, x: usize) -> String {
        x.to_string()
    }

    /// `z * x = x * z = z` for every `x`.
    fn is_absorbing(&self, z: usize) -> bool {
        (0..self.order()).all(|x| self.mul(z, x) == z && self.mul(x, z) == z)
    }
}

impl<S: Semigroup + ?Sized> Semigroup for &S {
    fn order(&self) -> usize {
        (**self).order()
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        (**self).mul(x, y)
    }

    fn identity(&self) -> Option<usize> {
        (**self).identity()
    }

    fn label(&self, x: usize) -> String {
        (**self).label(x)
    }

    fn is_absorbing(&self, z: usize) -> bool {
        (**self).is_absorbing(z)
    }
}
