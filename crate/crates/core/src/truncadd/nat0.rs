//! Windowed check for the multiplicative monoid `(ℕ₀, ·)` with the family
//! `A_q = {0} ∪ {m : m >= q}`.
//!
//! Every nonzero element of `A_q^h` is at least `q^h >= q`, so a positive
//! `m` already drops out of the intersection at `q = m + 1`. Intersecting
//! over `q = 1..=M+1` therefore decides the whole intersection on `[0, M]`.

use crate::algebra::HReport;
use crate::error::{ensure, Error, Result};

/// Whether `m ∈ A_q^h`, by searching factorizations into `h` factors `>= q`.
pub fn nat0_power_contains(m: u64, q: u64, h: usize) -> bool {
    if m == 0 {
        return true;
    }
    fn split(m: u64, h: usize, q: u64) -> bool {
        if h == 1 {
            return m >= q;
        }
        (q.max(1)..=m).any(|d| m.is_multiple_of(d) && split(m / d, h - 1, q))
    }
    h >= 1 && split(m, h, q)
}

/// Verdicts for `h = 1..=hmax` on the window `[0, bound]`. No tail
/// certificate: the structure is infinite and only the window is checked.
pub fn nat0_mult_bounded_check(bound: u64, hmax: usize) -> Result<HReport> {
    if bound < 2 || hmax == 0 {
        return Err(Error::InvalidParameter(format!(
            "need bound >= 2 and hmax >= 1, got {bound} and {hmax}"
        )));
    }
    let qs = 1..=bound + 1;

    // ⋂_q A_q on the window
    let meet: Vec<u64> = (0..=bound)
        .filter(|&m| qs.clone().all(|q| m == 0 || m >= q))
        .collect();
    ensure(meet == [0], || format!("intersection of the family is {meet:?}"))?;

    let mut verdicts = Vec::with_capacity(hmax);
    for h in 1..=hmax {
        for q in qs.clone() {
            ensure(nat0_power_contains(0, q, h), || format!("0 missing from A_{q}^{h}"))?;
            for m in 1..=bound {
                let member = nat0_power_contains(m, q, h);
                // nonzero members are at least q^h
                let floor = q.checked_pow(h as u32).unwrap_or(u64::MAX);
                ensure(!member || m >= floor, || format!("{m} in A_{q}^{h} below {q}^{h}"))?;
                ensure(q <= m || !member, || format!("{m} in A_{q}^{h} although q > m"))?;
            }
        }
        let inter: Vec<u64> = (0..=bound)
            .filter(|&m| qs.clone().all(|q| nat0_power_contains(m, q, h)))
            .collect();
        // {0}^h = {0}
        verdicts.push(inter == [0]);
    }
    Ok(HReport::new(verdicts, None)?)
}
