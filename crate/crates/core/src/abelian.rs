//! Invariant factors of finite abelian groups.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numtheory::{factorize, valuation};

/// Normalizes any list of cyclic factor orders into invariant factors
/// `d₁ | d₂ | …`, dropping trivial factors.
pub fn invariant_factors(cyclic_orders: &[u64]) -> Vec<u64> {
    let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &d in cyclic_orders {
        for (r, e) in factorize(d) {
            primary.entry(r).or_default().push(e);
        }
    }
    from_primary(primary)
}

// Per prime, exponents sorted descending; the i-th largest invariant factor
// takes the i-th largest power of every prime.
fn from_primary(mut primary: BTreeMap<u64, Vec<u32>>) -> Vec<u64> {
    let len = primary.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for (r, exps) in primary.iter_mut() {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (i, &e) in exps.iter().enumerate() {
            factors[len - 1 - i] *= r.pow(e);
        }
    }
    factors
}

/// Invariant factors of an abelian group given the order of every element.
///
/// For each prime `r` the number of elements of order dividing `r^k` is
/// `r^(Σ min(k, eᵢ))`, which pins down the exponents `eᵢ` of the `r`-primary part.
pub fn invariants_from_element_orders(orders: &[u64]) -> Vec<u64> {
    let group_order = orders.len() as u64;
    let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (r, top) in factorize(group_order) {
        let mut prev = 0u32;
        let mut at_least: Vec<u32> = Vec::new();
        for k in 1..=top {
            let rk = r.pow(k);
            let count = orders.iter().filter(|&&o| rk % o == 0).count() as u64;
            let s = valuation(count, r);
            at_least.push(s - prev);
            prev = s;
            if s == top {
                break;
            }
        }
        // at_least[k-1] = number of exponents ≥ k
        let mut exps = Vec::new();
        for (k, &c) in at_least.iter().enumerate() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(c - next) {
                exps.push(k as u32 + 1);
            }
        }
        primary.insert(r, exps);
    }
    from_primary(primary)
}

/// Checks that `invariants` is a divisibility chain of factors > 1.
pub fn check_invariants(invariants: &[u64]) -> Result<()> {
    let ok = invariants.iter().all(|&d| d > 1)
        && invariants.windows(2).all(|w| w[1] % w[0] == 0);
    if ok {
        Ok(())
    } else {
        Err(Error::BadInvariants(invariants.to_vec()))
    }
}

pub fn exponent(invariants: &[u64]) -> u64 {
    invariants.last().copied().unwrap_or(1)
}
