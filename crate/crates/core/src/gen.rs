//! Random finite semigroups for property checks.
//!
//! Random tables are almost never associative, so semigroups are generated
//! as closures of random transformations of a small set, or taken from the
//! explicit constructions at small parameters.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{adjoin_identity, FiniteSemigroup, SubsetMask};
use crate::truncadd::TruncAdd;
use crate::wordcap::{finite_instantiation, WordCapParams};

pub const DEFAULT_SEED: u64 = 0x5eed_2026;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A self-map of `{0, ..., k-1}` as its image list.
pub type Transformation = Vec<u8>;

// left to right: apply f, then g
fn compose(f: &[u8], g: &[u8]) -> Transformation {
    f.iter().map(|&i| g[i as usize]).collect()
}

/// The semigroup generated by `generators` under composition.
///
/// # Panics
/// If `generators` is empty or the maps have different lengths.
pub fn generated_by(generators: &[Transformation]) -> FiniteSemigroup {
    assert!(!generators.is_empty(), "need at least one generator");
    let k = generators[0].len();
    assert!(generators.iter().all(|g| g.len() == k), "generators act on different sets");

    let mut elems: Vec<Transformation> = Vec::new();
    let mut index: HashMap<Transformation, usize> = HashMap::new();
    for g in generators {
        if !index.contains_key(g) {
            index.insert(g.clone(), elems.len());
            elems.push(g.clone());
        }
    }
    // right-multiplying by generators reaches every product of generators
    let mut next = 0;
    while next < elems.len() {
        for g in generators {
            let p = compose(&elems[next], g);
            if !index.contains_key(&p) {
                index.insert(p.clone(), elems.len());
                elems.push(p);
            }
        }
        next += 1;
    }
    let m = elems.len();
    let table = FiniteSemigroup::from_fn(m, |x, y| index[&compose(&elems[x], &elems[y])]);
    let labels = elems
        .iter()
        .map(|t| format!("t:{}", t.iter().map(u8::to_string).collect::<String>()))
        .collect();
    let table = table.with_labels(labels).expect("one label per element");
    match table.find_identity() {
        Some(e) => table.with_identity(e).expect("found identity is an identity"),
        None => table,
    }
}

/// All self-maps of a `k`-element set.
pub fn full_transformation_monoid(k: usize) -> FiniteSemigroup {
    assert!((1..=4).contains(&k), "k must be in 1..=4");
    let count = k.pow(k as u32);
    let all: Vec<Transformation> = (0..count)
        .map(|mut code| {
            (0..k)
                .map(|_| {
                    let d = (code % k) as u8;
                    code /= k;
                    d
                })
                .collect()
        })
        .collect();
    generated_by(&all)
}

fn random_transformation<R: Rng>(rng: &mut R, k: usize) -> Transformation {
    (0..k).map(|_| rng.gen_range(0..k as u8)).collect()
}

/// Closure of one to three random maps on at most three points, retried
/// until it has at most `max_size` elements.
pub fn random_transformation_semigroup<R: Rng>(rng: &mut R, max_size: usize) -> FiniteSemigroup {
    for _ in 0..64 {
        let k = rng.gen_range(1..=3);
        let count = rng.gen_range(1..=3);
        let gens: Vec<_> = (0..count).map(|_| random_transformation(rng, k)).collect();
        let s = generated_by(&gens);
        if s.size() <= max_size {
            return s;
        }
    }
    // a constant map generates the trivial semigroup
    generated_by(&[vec![0]])
}

/// Explicit constructions with at most `max_size` elements.
pub fn construction_pool(max_size: usize) -> Vec<FiniteSemigroup> {
    let mut pool = Vec::new();
    let null = FiniteSemigroup::null(2).expect("nonempty");
    pool.push(adjoin_identity(&null));
    pool.push(null);
    for (n, alphabet) in [(2, 2), (2, 3), (3, 2), (2, 6), (3, 3)] {
        if let Ok(model) = finite_instantiation(WordCapParams { n, alphabet }, max_size) {
            pool.push(model.into_semigroup());
        }
    }
    for n in [2, 3] {
        if let Ok(t) = TruncAdd::new(n).and_then(|s| s.table(max_size)) {
            pool.push(t);
        }
    }
    pool.retain(|s| s.size() <= max_size);
    pool
}

/// A transformation-semigroup closure or an explicit construction, each
/// with probability one half.
pub fn random_semigroup<R: Rng>(rng: &mut R, max_size: usize) -> FiniteSemigroup {
    let pool = construction_pool(max_size);
    if pool.is_empty() || rng.gen_bool(0.5) {
        random_transformation_semigroup(rng, max_size)
    } else {
        pool.choose(rng).expect("pool is nonempty").clone()
    }
}

/// Each element included with probability one half.
pub fn random_subset<R: Rng>(rng: &mut R, universe: usize) -> SubsetMask {
    let members = (0..universe).filter(|_| rng.gen_bool(0.5));
    SubsetMask::from_elements(universe, members.collect::<Vec<_>>()).expect("in range")
}

pub fn random_nonempty_subset<R: Rng>(rng: &mut R, universe: usize) -> SubsetMask {
    let mut s = random_subset(rng, universe);
    if s.is_empty() {
        s.insert(rng.gen_range(0..universe)).expect("in range");
    }
    s
}
