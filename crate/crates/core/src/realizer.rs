//! Builds a semigroup and family whose product intersection set is a given
//! target `X ∋ 1`, with a checked certificate.
//!
//! The excluded exponents `I = ℕ ∖ X` each get a single-exclusion block
//! (word-cap for decreasing families, truncated addition for arbitrary
//! index sets). The product of the blocks is evaluated componentwise: the
//! H-set of a box family in a direct product is the intersection of the
//! componentwise H-sets. When `I` is small the product is also built
//! explicitly and checked against the componentwise answer.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    box_subset, empty_family_h, family_intersection, power, product_intersection_set,
    FiniteSemigroup, HReport, PowerSequence, ProductSemigroup, Semigroup, SubsetMask, Tail,
    DEFAULT_TABLE_BUDGET,
};
use crate::error::{ensure, Error, Result};
use crate::gen;
use crate::natset::NatSet;
use crate::truncadd::{nat0_mult_bounded_check, TruncAdd};
use crate::wordcap::{finite_instantiation, WordCap, WordCapModel, WordCapParams};

/// Window bound for the `(ℕ₀, ·)` check used when `X = ℕ`.
pub const NAT0_BOUND: u64 = 50;
/// Alphabet of the bounded word-cap models in explicit checks.
pub const EXPLICIT_ALPHABET: u64 = 5;
/// Family indices `1..=EXPLICIT_QMAX` used in explicit word-cap checks.
pub const EXPLICIT_QMAX: u64 = 5;

/// A target set; always contains 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSpec {
    x: NatSet,
}

impl TargetSpec {
    pub fn new(x: NatSet) -> Result<Self> {
        if !x.contains(1)? {
            return Err(Error::Infeasible(x));
        }
        Ok(TargetSpec { x })
    }

    pub fn set(&self) -> &NatSet {
        &self.x
    }

    /// `max(8, m + 2)` where `m` is the largest excluded exponent (finite
    /// `I`) or the largest member (finite `X`).
    pub fn default_window(&self) -> usize {
        (self.x.max_support() as usize + 2).max(8)
    }

    fn min_window(&self) -> usize {
        self.x.max_support() as usize + 1
    }
}

/// `I = ℕ ∖ X`; every member is at least 2.
pub fn complement_i(target: &TargetSpec) -> NatSet {
    target.x.complement()
}

/// Intersection of componentwise H-sets; `ℕ` for no components.
pub fn virtual_product_h(component_hs: &[NatSet]) -> NatSet {
    component_hs
        .iter()
        .fold(NatSet::all(), |acc, h| acc.intersect(h))
}

/// `⋂_{n ∈ I} (ℕ ∖ {n}) = ℕ ∖ I`, exact also for infinite `I`.
pub fn virtual_product_closed(excluded: &NatSet) -> NatSet {
    excluded.complement()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    FullN,
    WordCapProduct,
    TruncAddProduct,
}

/// Limits for building the explicit product next to the componentwise answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplicitBudget {
    pub max_components: usize,
    pub max_size: usize,
}

impl Default for ExplicitBudget {
    fn default() -> Self {
        ExplicitBudget { max_components: 2, max_size: DEFAULT_TABLE_BUDGET }
    }
}

/// Outcome of an explicit product computation.
///
/// For truncated addition this is the real product and the report is its
/// H-set on the window. For word-cap it is a product of bounded-alphabet
/// models; truncating the alphabet changes the H-set, so only the product
/// identities are exercised there and the report is compared with the
/// componentwise reports of the same models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitCheck {
    pub size: usize,
    pub report: HReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub mode: Mode,
    /// Excluded exponents inside the window.
    pub components: Vec<u64>,
    pub q_count: Option<usize>,
    pub window: usize,
    pub certificate: HReport,
    pub target: NatSet,
    pub explicit: Option<ExplicitCheck>,
    /// Set for decreasing families: each `A_{q+1}` is a proper subset of `A_q`.
    pub strictly_decreasing: bool,
}

/// JSON form of a [`Realization`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationRecord {
    pub mode: Mode,
    pub components: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_count: Option<usize>,
    pub window: usize,
    pub certificate: HReport,
    pub target: NatSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit_product_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decreasing: Option<String>,
}

impl Realization {
    pub fn record(&self) -> RealizationRecord {
        RealizationRecord {
            mode: self.mode,
            components: self.components.clone(),
            q_count: self.q_count,
            window: self.window,
            certificate: self.certificate.clone(),
            target: self.target.clone(),
            explicit_product_size: self.explicit.as_ref().map(|e| e.size),
            decreasing: self.strictly_decreasing.then(|| "strict".to_string()),
        }
    }

    /// Whether the certificate matches the target on the window.
    pub fn matches_target(&self) -> bool {
        self.certificate.agrees_with(&self.target)
            && self.certificate.resolved().is_none_or(|r| *r == self.target)
    }
}

impl Serialize for Realization {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.record().serialize(serializer)
    }
}

fn resolve_window(target: &TargetSpec, hmax: Option<usize>) -> Result<usize> {
    let window = hmax.unwrap_or_else(|| target.default_window());
    if window < target.min_window() {
        return Err(Error::InvalidParameter(format!(
            "window {window} is too small for target {}; need at least {}",
            target.x,
            target.min_window()
        )));
    }
    Ok(window)
}

/// Combines single-exclusion reports into the certificate for the target.
fn assemble_certificate(
    target: &TargetSpec,
    window: usize,
    components: &[u64],
    reports: &[HReport],
) -> Result<HReport> {
    let verdicts: Vec<bool> = (1..=window)
        .map(|h| reports.iter().all(|r| r.verdict(h) == Some(true)))
        .collect();

    let component_hs = reports
        .iter()
        .map(|r| {
            r.resolved()
                .cloned()
                .ok_or_else(|| Error::Verification("component report lacks a tail".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let folded = virtual_product_h(&component_hs);
    ensure(folded == NatSet::cofinite(components.iter().copied())?, || {
        format!("componentwise fold gave {folded}")
    })?;

    let excluded = complement_i(target);
    let exact = if excluded.is_finite() { folded.clone() } else { virtual_product_closed(&excluded) };
    ensure(exact.equal_up_to(&folded, window as u64), || {
        format!("closed rule {exact} disagrees with the fold {folded} on the window")
    })?;

    // beyond the window the answer is constant: true past a finite I, false past a finite X
    let (from, verdict) = if exact.is_cofinite() {
        (exact.max_support() as usize + 1, true)
    } else {
        (exact.max_support() as usize + 1, false)
    };
    let report = HReport::new(verdicts, Some(Tail { from, verdict }))?;
    ensure(report.resolved() == Some(&exact), || {
        format!("certificate resolves to {:?}, expected {exact}", report.resolved())
    })?;
    ensure(exact == target.x, || format!("certificate {exact} differs from target {}", target.x))?;
    Ok(report)
}

fn windowed_components(target: &TargetSpec, window: usize) -> Vec<u64> {
    complement_i(target).members_up_to(window as u64)
}

/// Realizes `X` by a strictly decreasing family indexed by `ℕ`.
pub fn realize_hnstar(
    target: &TargetSpec,
    hmax: Option<usize>,
    explicit: Option<ExplicitBudget>,
) -> Result<Realization> {
    let window = resolve_window(target, hmax)?;
    if target.x == NatSet::all() {
        let certificate = nat0_mult_bounded_check(NAT0_BOUND, window)?;
        ensure(certificate.agrees_with(&target.x), || "(ℕ₀, ·) check failed".into())?;
        return Ok(Realization {
            mode: Mode::FullN,
            components: Vec::new(),
            q_count: None,
            window,
            certificate,
            target: target.x.clone(),
            explicit: None,
            strictly_decreasing: true,
        });
    }

    let components = windowed_components(target, window);
    let mut reports = Vec::with_capacity(components.len());
    for &n in &components {
        let block = WordCap::new(n as usize)?;
        ensure(block.decreasing_check(EXPLICIT_QMAX + 1)?, || format!("family for n = {n} not decreasing"))?;
        reports.push(block.verify_single_exclusion(window.max(n as usize + 1))?);
    }
    let certificate = assemble_certificate(target, window, &components, &reports)?;

    let explicit = match explicit {
        Some(budget) if !components.is_empty() && components.len() <= budget.max_components => {
            explicit_wordcap(&components, window, budget.max_size)?
        }
        _ => None,
    };
    Ok(Realization {
        mode: Mode::WordCapProduct,
        components,
        q_count: None,
        window,
        certificate,
        target: target.x.clone(),
        explicit,
        strictly_decreasing: true,
    })
}

/// Realizes `X` by a family over an index set of size `q_count >= 2`.
pub fn realize_hq(
    target: &TargetSpec,
    q_count: usize,
    hmax: Option<usize>,
    explicit: Option<ExplicitBudget>,
) -> Result<Realization> {
    if q_count < 2 {
        return Err(Error::InvalidParameter(format!(
            "index sets of size {q_count} only realize {{1}} or ℕ; need at least 2"
        )));
    }
    let window = resolve_window(target, hmax)?;
    if target.x == NatSet::all() {
        // any monoid with every A_q = S
        let monoid = TruncAdd::new(2)?;
        let family = vec![SubsetMask::full(monoid.order()); q_count];
        let certificate = product_intersection_set(&monoid, &family, window)?;
        ensure(certificate.resolved() == Some(&NatSet::all()), || "constant family failed".into())?;
        return Ok(Realization {
            mode: Mode::FullN,
            components: Vec::new(),
            q_count: Some(q_count),
            window,
            certificate,
            target: target.x.clone(),
            explicit: None,
            strictly_decreasing: false,
        });
    }

    let components = windowed_components(target, window);
    let mut reports = Vec::with_capacity(components.len());
    for &n in &components {
        let block = TruncAdd::new(n as usize)?;
        let horizon = window.max(n as usize + 1);
        let pair = block.verify_pair_single_exclusion(horizon)?;
        let family = block.hq_family(q_count)?;
        let report = product_intersection_set(&block, &family, horizon)?;
        ensure(report == pair.report, || format!("padding changed the report for n = {n}"))?;
        ensure(report.resolved() == Some(&NatSet::cofinite([n])?), || {
            format!("padded block for n = {n} resolved to {:?}", report.resolved())
        })?;
        reports.push(report);
    }
    let certificate = assemble_certificate(target, window, &components, &reports)?;

    let explicit = match explicit {
        Some(budget) if !components.is_empty() && components.len() <= budget.max_components => {
            explicit_truncadd(&components, q_count, window, budget.max_size, &certificate)?
        }
        _ => None,
    };
    Ok(Realization {
        mode: Mode::TruncAddProduct,
        components,
        q_count: Some(q_count),
        window,
        certificate,
        target: target.x.clone(),
        explicit,
        strictly_decreasing: false,
    })
}

fn product_size(sizes: impl IntoIterator<Item = usize>) -> Option<usize> {
    sizes.into_iter().try_fold(1usize, |acc, m| acc.checked_mul(m))
}

/// Direct product of the truncated-addition blocks with box subsets `B`, `C`
/// padded by full carriers; its H-set must match the certificate on the window.
fn explicit_truncadd(
    components: &[u64],
    q_count: usize,
    window: usize,
    max_size: usize,
    certificate: &HReport,
) -> Result<Option<ExplicitCheck>> {
    let blocks = components
        .iter()
        .map(|&n| TruncAdd::new(n as usize))
        .collect::<Result<Vec<_>>>()?;
    match product_size(blocks.iter().map(Semigroup::order)) {
        Some(size) if size <= max_size => {}
        _ => return Ok(None),
    }
    let product = ProductSemigroup::new(blocks.clone(), max_size)?;
    let (bs, cs): (Vec<_>, Vec<_>) = blocks.iter().map(TruncAdd::bc_sets).unzip();
    let b = box_subset(&product, &bs)?;
    let c = box_subset(&product, &cs)?;
    let mut family = vec![b, c];
    family.resize(q_count, SubsetMask::full(product.order()));

    let report = product_intersection_set(&product, &family, window)?;
    ensure(report.verdicts() == certificate.verdicts(), || {
        format!(
            "explicit product gives {} but the componentwise fold gives {}",
            report.render_marks(),
            certificate.render_marks()
        )
    })?;
    if let Some(resolved) = report.resolved() {
        ensure(resolved.equal_up_to(&certificate.window_set(), window as u64), || {
            format!("explicit product resolves to {resolved}")
        })?;
    }
    Ok(Some(ExplicitCheck { size: product.order(), report }))
}

/// Product of bounded-alphabet word-cap models with the box family
/// `∏ A_{n,q}`, `q = 1..=EXPLICIT_QMAX`. Checks strict decrease, the box
/// product and box intersection identities, and that the product's H-set is
/// the intersection of the models' H-sets.
fn explicit_wordcap(
    components: &[u64],
    window: usize,
    max_size: usize,
) -> Result<Option<ExplicitCheck>> {
    let params: Vec<WordCapParams> = components
        .iter()
        .map(|&n| WordCapParams { n: n as usize, alphabet: EXPLICIT_ALPHABET })
        .collect();
    let sizes: Option<Vec<usize>> = params.iter().map(WordCapParams::carrier_size).collect();
    match sizes.and_then(product_size) {
        Some(size) if size <= max_size => {}
        _ => return Ok(None),
    }
    let models = params
        .iter()
        .map(|&p| finite_instantiation(p, max_size))
        .collect::<Result<Vec<WordCapModel>>>()?;
    let product = ProductSemigroup::new(
        models.iter().map(|m| m.semigroup().clone()).collect::<Vec<FiniteSemigroup>>(),
        max_size,
    )?;

    let parts_at = |q: u64| -> Vec<SubsetMask> { models.iter().map(|m| m.family_member(q)).collect() };
    let boxes = (1..=EXPLICIT_QMAX + 1)
        .map(|q| box_subset(&product, &parts_at(q)))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    for (q, pair) in boxes.windows(2).enumerate() {
        ensure(pair[1].is_subset(&pair[0]) && pair[1] != pair[0], || {
            format!("box family not strictly decreasing at q = {}", q + 1)
        })?;
    }

    let family = &boxes[..EXPLICIT_QMAX as usize];
    for (i, base) in family.iter().enumerate() {
        let q = i as u64 + 1;
        let parts = parts_at(q);
        let mut seq = PowerSequence::new(&product, base)?;
        for h in 1..=window {
            if h > 1 {
                seq.advance()?;
            }
            let componentwise = models
                .iter()
                .zip(&parts)
                .map(|(m, a)| power(m.semigroup(), a, h))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            ensure(*seq.current() == box_subset(&product, &componentwise)?, || {
                format!("power of a box differs from the box of powers at q = {q}, h = {h}")
            })?;
        }
    }

    let meet = family_intersection(family)?;
    let component_meets = models
        .iter()
        .map(|m| family_intersection(&(1..=EXPLICIT_QMAX).map(|q| m.family_member(q)).collect::<Vec<_>>()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    ensure(meet == box_subset(&product, &component_meets)?, || {
        "intersection of boxes differs from the box of intersections".into()
    })?;

    let report = product_intersection_set(&product, family, window)?;
    let component_reports = models
        .iter()
        .map(|m| {
            let fam: Vec<_> = (1..=EXPLICIT_QMAX).map(|q| m.family_member(q)).collect();
            product_intersection_set(m.semigroup(), &fam, window)
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    for h in 1..=window {
        let folded = component_reports.iter().all(|r| r.verdict(h) == Some(true));
        ensure(report.verdict(h) == Some(folded), || {
            format!("explicit word-cap product disagrees with its components at h = {h}")
        })?;
    }
    Ok(Some(ExplicitCheck { size: product.order(), report }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QCardinality {
    Zero,
    One,
    AtLeastTwo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Realizable {
    /// Exactly these sets.
    Sets(Vec<NatSet>),
    /// Every set containing 1.
    ContainsOne,
}

/// The realizable H-sets for an index-set cardinality, with the checks run
/// to support it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HqClass {
    pub cardinality: QCardinality,
    pub realizable: Realizable,
    pub evidence: Vec<String>,
}

impl HqClass {
    pub fn admits(&self, x: &NatSet) -> bool {
        match &self.realizable {
            Realizable::Sets(sets) => sets.contains(x),
            Realizable::ContainsOne => x.contains(1).unwrap_or(false),
        }
    }
}

/// Samples used by the `|Q| = 1` case.
pub const SINGLE_INDEX_SAMPLES: usize = 50;

pub fn classify_hq(cardinality: QCardinality, seed: u64) -> Result<HqClass> {
    let mut evidence = Vec::new();
    let realizable = match cardinality {
        QCardinality::Zero => {
            let null = FiniteSemigroup::null(2)?;
            let one = NatSet::finite([1])?;
            ensure(empty_family_h(&null) == one, || "null semigroup should give {1}".into())?;
            evidence.push("null semigroup {0,1}, xy = 0: H = {1}".to_string());
            let monoid = TruncAdd::new(2)?;
            ensure(empty_family_h(&monoid) == NatSet::all(), || "a monoid should give ℕ".into())?;
            evidence.push(format!("monoid of order {}: H = ℕ", monoid.order()));
            Realizable::Sets(vec![one, NatSet::all()])
        }
        QCardinality::One => {
            let mut rng = gen::seeded_rng(seed);
            for _ in 0..SINGLE_INDEX_SAMPLES {
                let s = gen::random_semigroup(&mut rng, 27);
                let a = gen::random_subset(&mut rng, s.size());
                let report = product_intersection_set(&s, &[a], 6)?;
                ensure(report.verdicts().iter().all(|&v| v), || {
                    "single-member family with a false verdict".into()
                })?;
            }
            evidence.push(format!("{SINGLE_INDEX_SAMPLES} random single-member families: all verdicts true"));
            Realizable::Sets(vec![NatSet::all()])
        }
        QCardinality::AtLeastTwo => {
            let sample = TargetSpec::new(NatSet::cofinite([6])?)?;
            let r = realize_hq(&sample, 2, None, None)?;
            ensure(r.matches_target(), || "sample realization failed".into())?;
            evidence.push(format!("realized {} with |Q| = 2", sample.set()));
            Realizable::ContainsOne
        }
    };
    Ok(HqClass { cardinality, realizable, evidence })
}
