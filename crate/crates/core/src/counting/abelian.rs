//! Exact counts of abelian `G`-extensions of `Q`, weighted by `1/#Aut`.
//!
//! Over `Q` a `G`-extension is a tuple of local homomorphisms `Z_p^× → G`, so
//! the count is `(1/#G)` times the coefficient sum of `Π_p D_p` with `D_p`
//! summing over `Hom(Z_p^×, G)`.

use std::collections::HashMap;

use serde::Serialize;

use super::mass::LocalFactor;
use super::series::{box_sum, BoxCountResult};
use crate::arith::{gcd, is_prime, prime_factors, primes_up_to};
use crate::cyclotomic::{int, rational, Rational};
use crate::error::{Error, Result};
use crate::ramification::RamificationTypes;

/// `Hom(Z_p^×, G)` for a prime `p | #G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WildLocalCount {
    pub prime: u64,
    pub total: u64,
    /// Tamely ramified homomorphisms per type id.
    pub tame: Vec<u64>,
    pub wild: u64,
}

fn check_abelian_rational(types: &RamificationTypes) -> Result<()> {
    if !types.group().is_abelian() {
        return Err(Error::NotAbelian);
    }
    if !types.profile().is_full() {
        return Err(Error::InvalidProfile("abelian counting is over Q; use the profile \"Q\"".into()));
    }
    Ok(())
}

/// Nontrivial `g` with `g^d = 1`, bucketed by type.
fn tame_counts(types: &RamificationTypes, d: u64) -> Vec<u64> {
    let g = types.group();
    let mut out = vec![0; types.len()];
    for x in 1..g.order() {
        if (d as usize).is_multiple_of(g.element_order(x)) {
            out[types.classify(x).expect("nontrivial")] += 1;
        }
    }
    out
}

/// `Z_p^× ≅ C_{p−1} × Z_p` for odd `p` and `C_2 × Z_2` for `p = 2`. Only the
/// `C_{p−1}` part is tame, so at `p = 2` every nontrivial map is wild.
pub fn wild_local_count(types: &RamificationTypes, p: u64) -> Result<WildLocalCount> {
    let g = types.group();
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let order = g.order() as u64;
    if !order.is_multiple_of(p) {
        return Err(Error::NotWildPrime(p));
    }
    let torsion_exp = if p == 2 { 2 } else { p - 1 };
    let torsion = (0..g.order()).filter(|&x| (torsion_exp as usize).is_multiple_of(g.element_order(x))).count() as u64;
    let p_power = (0..g.order())
        .filter(|&x| prime_factors(g.element_order(x) as u64).iter().all(|&r| r == p))
        .count() as u64;
    let total = torsion * p_power;
    let tame = if p == 2 { vec![0; types.len()] } else { tame_counts(types, p - 1) };
    let wild = total - 1 - tame.iter().sum::<u64>();
    Ok(WildLocalCount { prime: p, total, tame, wild })
}

/// Euler factors of the abelian count: tame primes up to `max_prime` plus all
/// primes dividing `#G`.
pub fn abelian_factors(types: &RamificationTypes, max_prime: u64, exclude_wild: bool) -> Result<Vec<LocalFactor>> {
    check_abelian_rational(types)?;
    let order = types.group().order() as u64;
    let n = types.group().exponent();
    let mut cache: HashMap<u64, Vec<Rational>> = HashMap::new();
    let mut out = Vec::new();
    for p in prime_factors(order) {
        let w = wild_local_count(types, p)?;
        let b = if exclude_wild { 1 } else { w.wild + 1 };
        out.push(LocalFactor::new(p, int(b as i64), w.tame.iter().map(|&t| int(t as i64)).collect()));
    }
    for q in primes_up_to(max_prime) {
        if order.is_multiple_of(q) {
            continue;
        }
        let d = gcd(q - 1, n);
        let c = cache
            .entry(d)
            .or_insert_with(|| tame_counts(types, d).into_iter().map(|t| int(t as i64)).collect())
            .clone();
        if c.iter().any(|x| *x != int(0)) {
            out.push(LocalFactor::tame(q, c));
        }
    }
    Ok(out)
}

/// Exact `Σ 1/#Aut(L)` over abelian `G`-extensions of `Q` with `inv_i(L) ≤ X_i`
/// (or `= v` on pinned coordinates). With `exclude_wild`, extensions wildly
/// ramified anywhere are dropped.
pub fn abelian_count(
    types: &RamificationTypes,
    bounds: &[u64],
    pins: &[(usize, u64)],
    exclude_wild: bool,
) -> Result<BoxCountResult> {
    check_abelian_rational(types)?;
    if bounds.len() != types.len() {
        return Err(Error::InvalidBounds(format!("expected {} bounds, got {}", types.len(), bounds.len())));
    }
    let max_prime = bounds
        .iter()
        .chain(pins.iter().map(|(_, v)| v))
        .copied()
        .max()
        .unwrap_or(1);
    let factors = abelian_factors(types, max_prime, exclude_wild)?;
    box_sum(&factors, bounds, pins, &rational(1, types.group().order() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::preset;
    use crate::ramification::{ramification_types, CyclotomicProfile};
    use std::sync::Arc;

    fn types(name: &str) -> RamificationTypes {
        let g = Arc::new(preset(name).unwrap());
        let n = g.exponent();
        ramification_types(&g, &CyclotomicProfile::rational(n)).unwrap()
    }

    #[test]
    fn wild_counts() {
        let c2 = wild_local_count(&types("C2"), 2).unwrap();
        assert_eq!((c2.total, c2.tame.clone(), c2.wild), (4, vec![0], 3));
        let c3 = wild_local_count(&types("C3"), 3).unwrap();
        assert_eq!((c3.total, c3.tame.clone()), (3, vec![0]));
        assert_eq!(wild_local_count(&types("C2"), 3), Err(Error::NotWildPrime(3)));
        assert_eq!(wild_local_count(&types("S3"), 2), Err(Error::NotAbelian));
        // C6 at 3: Z_3^× = C2 × Z_3 gives 2·3 homs, one tame of order 2
        let c6 = types("C6");
        let w = wild_local_count(&c6, 3).unwrap();
        assert_eq!(w.total, 6);
        let order2 = c6.types().iter().find(|t| t.e == 2).unwrap().id;
        assert_eq!(w.tame[order2], 1);
        assert_eq!(w.tame.iter().sum::<u64>(), 1);
    }

    #[test]
    fn small_counts() {
        let c2 = types("C2");
        assert_eq!(abelian_count(&c2, &[10], &[], false).unwrap().value, int(8));
        assert_eq!(abelian_count(&c2, &[2], &[], false).unwrap().value, int(2));
        let v4 = types("C2xC2");
        assert_eq!(abelian_count(&v4, &[1, 1, 1], &[], true).unwrap().value, rational(1, 4));
        assert_eq!(abelian_count(&v4, &[1, 1, 1], &[], false).unwrap().value, int(4));
    }

    #[test]
    fn rejects() {
        assert_eq!(abelian_count(&types("S3"), &[5, 5], &[], false).unwrap_err(), Error::NotAbelian);
        let g = Arc::new(preset("C4").unwrap());
        let t = ramification_types(&g, &CyclotomicProfile::cyclotomic(4)).unwrap();
        assert!(matches!(abelian_count(&t, &[5, 5, 5], &[], false), Err(Error::InvalidProfile(_))));
    }
}
