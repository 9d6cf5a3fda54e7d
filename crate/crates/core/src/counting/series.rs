//! Exact coefficient sums of `prefactor · Π_q (b_q + Σ_i c_{q,i} q^{-s_i})`.
//!
//! Factors with `b ≠ 1` are expanded explicitly; the rest are enumerated by a
//! depth-first walk over primes in descending order, pruning on the remaining
//! budgets. Integer weights are summed in `i128` with a rational fallback on
//! overflow or fractional coefficients.

use std::collections::BTreeSet;

use num::{BigInt, BigUint, Integer, One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::mass::LocalFactor;
use crate::arith::prime_factors;
use crate::cyclotomic::{int, serde_rational, Rational};
use crate::error::{Error, Result};

/// Exact coefficient sum over a box, with the bounds it was taken over.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxCountResult {
    pub bounds: Vec<u64>,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    /// Largest prime carrying a nonzero term in the enumeration.
    pub prime_bound: u64,
}

trait Weight: Clone + Send + Sync {
    fn unit() -> Self;
    fn nothing() -> Self;
    fn add(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn into_rational(self) -> Rational;
}

impl Weight for i128 {
    fn unit() -> Self {
        1
    }
    fn nothing() -> Self {
        0
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn into_rational(self) -> Rational {
        Rational::from_integer(BigInt::from(self))
    }
}

impl Weight for Rational {
    fn unit() -> Self {
        One::one()
    }
    fn nothing() -> Self {
        Zero::zero()
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn into_rational(self) -> Rational {
        self
    }
}

/// One choice at a prime: divide budget `slot` by `cost`, multiply by `weight`.
#[derive(Clone, Debug)]
struct Choice<W> {
    slot: usize,
    cost: u128,
    weight: W,
}

#[derive(Clone, Debug)]
struct Item<W> {
    prime: u64,
    choices: Vec<Choice<W>>,
}

/// Largest prime that may still fit some budget.
trait Cap: Sync {
    fn cap(&self, budgets: &[u128]) -> u128;
}

struct BoxCap;

impl Cap for BoxCap {
    fn cap(&self, budgets: &[u128]) -> u128 {
        budgets.iter().copied().max().unwrap_or(0)
    }
}

/// Region budget: a single slot where a prime costs at least `q^min_exp`.
struct RootCap {
    min_exp: u32,
}

impl Cap for RootCap {
    fn cap(&self, budgets: &[u128]) -> u128 {
        integer_root(budgets[0], self.min_exp)
    }
}

fn integer_root(x: u128, k: u32) -> u128 {
    if k == 1 || x < 2 {
        return x;
    }
    let mut r = (x as f64).powf(1.0 / k as f64) as u128;
    while r.checked_add(1).and_then(|s| s.checked_pow(k)).is_some_and(|p| p <= x) {
        r += 1;
    }
    while r > 0 && r.checked_pow(k).is_none_or(|p| p > x) {
        r -= 1;
    }
    r
}

/// `Σ` of weights over all admissible subsets of `items[start..]`.
fn walk<W: Weight>(items: &[Item<W>], start: usize, budgets: &mut [u128], cap: &dyn Cap) -> Option<W> {
    let c = cap.cap(budgets);
    let first = start + items[start..].partition_point(|it| it.prime as u128 > c);
    let mut total = W::unit();
    for j in first..items.len() {
        for ch in &items[j].choices {
            let old = budgets[ch.slot];
            if ch.cost > old {
                continue;
            }
            budgets[ch.slot] = old / ch.cost;
            let sub = walk(items, j + 1, budgets, cap);
            budgets[ch.slot] = old;
            total = total.add(&ch.weight.mul(&sub?)?)?;
        }
    }
    Some(total)
}

fn walk_parallel<W: Weight>(items: &[Item<W>], budgets: &[u128], cap: &dyn Cap) -> Option<W> {
    let c = cap.cap(budgets);
    let first = items.partition_point(|it| it.prime as u128 > c);
    let parts: Vec<Option<W>> = (first..items.len())
        .into_par_iter()
        .map(|j| {
            let mut local = budgets.to_vec();
            let mut acc = W::nothing();
            for ch in &items[j].choices {
                let old = local[ch.slot];
                if ch.cost > old {
                    continue;
                }
                local[ch.slot] = old / ch.cost;
                let sub = walk(items, j + 1, &mut local, cap);
                local[ch.slot] = old;
                acc = acc.add(&ch.weight.mul(&sub?)?)?;
            }
            Some(acc)
        })
        .collect();
    parts.into_iter().try_fold(W::unit(), |acc, p| acc.add(&p?))
}

/// Items with rational weights, before choosing the accumulator.
struct Plan {
    special: Vec<(Rational, Item<Rational>)>,
    generic: Vec<Item<Rational>>,
    budgets: Vec<u128>,
    forced: Rational,
}

impl Plan {
    fn prime_bound(&self, cap: &dyn Cap) -> u64 {
        let c = cap.cap(&self.budgets);
        self.special
            .iter()
            .map(|(_, it)| it)
            .chain(&self.generic)
            .filter(|it| it.prime as u128 <= c && !it.choices.is_empty())
            .map(|it| it.prime)
            .max()
            .unwrap_or(1)
    }

    fn evaluate(&self, cap: &dyn Cap, parallel: bool) -> Rational {
        let integral: Option<Vec<Item<i128>>> = self
            .generic
            .iter()
            .map(|it| {
                let choices = it
                    .choices
                    .iter()
                    .map(|ch| {
                        let w = if ch.weight.is_integer() { ch.weight.numer().to_i128() } else { None };
                        w.map(|weight| Choice { slot: ch.slot, cost: ch.cost, weight })
                    })
                    .collect::<Option<Vec<_>>>()?;
                Some(Item { prime: it.prime, choices })
            })
            .collect();
        let generic = |budgets: &mut [u128]| -> Rational {
            if let Some(items) = &integral {
                let r = if parallel { walk_parallel(items, budgets, cap) } else { walk(items, 0, budgets, cap) };
                if let Some(v) = r {
                    return v.into_rational();
                }
            }
            let r = if parallel {
                walk_parallel(&self.generic, budgets, cap)
            } else {
                walk(&self.generic, 0, budgets, cap)
            };
            r.expect("rational accumulation cannot overflow")
        };
        let mut budgets = self.budgets.clone();
        &self.forced * expand_special(&self.special, &mut budgets, &generic)
    }
}

fn expand_special(
    special: &[(Rational, Item<Rational>)],
    budgets: &mut [u128],
    generic: &dyn Fn(&mut [u128]) -> Rational,
) -> Rational {
    let Some(((b, item), rest)) = special.split_first() else {
        return generic(budgets);
    };
    let mut total = if b.is_zero() { Rational::zero() } else { b * expand_special(rest, budgets, generic) };
    for ch in &item.choices {
        let old = budgets[ch.slot];
        if ch.cost > old || ch.weight.is_zero() {
            continue;
        }
        budgets[ch.slot] = old / ch.cost;
        total += &ch.weight * expand_special(rest, budgets, generic);
        budgets[ch.slot] = old;
    }
    total
}

fn check_factors(factors: &[LocalFactor], m: usize) -> Result<()> {
    let mut seen = BTreeSet::new();
    for f in factors {
        if f.prime < 2 {
            return Err(Error::InvalidArgument(format!("factor prime {} must be at least 2", f.prime)));
        }
        if !seen.insert(f.prime) {
            return Err(Error::InvalidArgument(format!("prime {} listed twice", f.prime)));
        }
        if f.c.len() != m {
            return Err(Error::InvalidArgument(format!(
                "factor at {} has {} coefficients, expected {m}",
                f.prime,
                f.c.len()
            )));
        }
        if f.c.iter().any(|c| *c < Rational::zero()) {
            return Err(Error::InvalidArgument(format!("negative coefficient at {}", f.prime)));
        }
    }
    Ok(())
}

fn split(
    factors: &[LocalFactor],
    choices: impl Fn(&LocalFactor) -> Vec<Choice<Rational>>,
) -> (Vec<(Rational, Item<Rational>)>, Vec<Item<Rational>>) {
    let mut special = Vec::new();
    let mut generic = Vec::new();
    for f in factors {
        let item = Item { prime: f.prime, choices: choices(f) };
        if f.b.is_one() {
            if !item.choices.is_empty() {
                generic.push(item);
            }
        } else {
            special.push((f.b.clone(), item));
        }
    }
    generic.sort_by_key(|it| std::cmp::Reverse(it.prime));
    (special, generic)
}

fn box_plan(factors: &[LocalFactor], bounds: &[u64], pins: &[(usize, u64)]) -> Result<Plan> {
    let m = bounds.len();
    check_factors(factors, m)?;
    let mut pinned = vec![None; m];
    for &(i, v) in pins {
        if i >= m {
            return Err(Error::InvalidArgument(format!("pinned coordinate {i} out of range 0..{m}")));
        }
        if v == 0 {
            return Err(Error::NotRepresentable { coord: i, value: v });
        }
        if pinned[i].replace(v).is_some() {
            return Err(Error::InvalidArgument(format!("coordinate {i} pinned twice")));
        }
    }
    for (i, &x) in bounds.iter().enumerate() {
        if x == 0 && pinned[i].is_none() {
            return Err(Error::InvalidBounds(format!("bound X_{i} must be positive")));
        }
    }
    let mut forced = int(1);
    let mut consumed = BTreeSet::new();
    for (i, v) in pinned.iter().enumerate() {
        let Some(v) = *v else { continue };
        let primes = prime_factors(v);
        if primes.iter().product::<u64>() != v {
            return Err(Error::NotRepresentable { coord: i, value: v });
        }
        for q in primes {
            let f = factors.iter().find(|f| f.prime == q);
            match f {
                Some(f) if !f.c[i].is_zero() && consumed.insert(q) => forced *= &f.c[i],
                _ => return Err(Error::NotRepresentable { coord: i, value: v }),
            }
        }
    }
    let rest: Vec<LocalFactor> = factors.iter().filter(|f| !consumed.contains(&f.prime)).cloned().collect();
    let (special, generic) = split(&rest, |f| {
        f.c.iter()
            .enumerate()
            .filter(|(i, c)| pinned[*i].is_none() && !c.is_zero())
            .map(|(i, c)| Choice { slot: i, cost: f.prime as u128, weight: c.clone() })
            .collect()
    });
    let budgets = bounds
        .iter()
        .zip(&pinned)
        .map(|(&x, p)| if p.is_some() { 0 } else { x as u128 })
        .collect();
    Ok(Plan { special, generic, budgets, forced })
}

/// `prefactor · Σ a_x` over `x_i ≤ X_i`, with pinned coordinates `x_i = v`
/// fixed exactly. Primes not listed contribute the factor 1.
pub fn box_sum(
    factors: &[LocalFactor],
    bounds: &[u64],
    pins: &[(usize, u64)],
    prefactor: &Rational,
) -> Result<BoxCountResult> {
    box_sum_with(factors, bounds, pins, prefactor, true)
}

/// [`box_sum`] with explicit control over the parallel top-level split.
pub fn box_sum_with(
    factors: &[LocalFactor],
    bounds: &[u64],
    pins: &[(usize, u64)],
    prefactor: &Rational,
    parallel: bool,
) -> Result<BoxCountResult> {
    let plan = box_plan(factors, bounds, pins)?;
    let value = prefactor * plan.evaluate(&BoxCap, parallel);
    Ok(BoxCountResult { bounds: bounds.to_vec(), value, prime_bound: plan.prime_bound(&BoxCap) })
}

/// Sum over the shell `δX_i < x_i ≤ X_i` by inclusion–exclusion over corners.
pub fn shell_sum(factors: &[LocalFactor], bounds: &[u64], delta: &Rational, prefactor: &Rational) -> Result<Rational> {
    if *delta <= Rational::zero() || *delta >= int(1) {
        return Err(Error::InvalidArgument("δ must lie strictly between 0 and 1".into()));
    }
    let m = bounds.len();
    if m > 20 {
        return Err(Error::InvalidArgument("too many coordinates for a shell".into()));
    }
    if bounds.contains(&0) {
        return Err(Error::InvalidBounds("bounds must be positive".into()));
    }
    let lower: Vec<u64> = bounds
        .iter()
        .map(|&x| (delta * int(x as i64)).floor().to_integer().to_u64().expect("δX is nonnegative"))
        .collect();
    let mut total = Rational::zero();
    for mask in 0u32..(1 << m) {
        let corner: Vec<u64> = (0..m).map(|i| if mask >> i & 1 == 1 { lower[i] } else { bounds[i] }).collect();
        if corner.contains(&0) {
            continue;
        }
        let v = box_sum(factors, &corner, &[], prefactor)?.value;
        if mask.count_ones() % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    Ok(total)
}

/// `prefactor · Σ a_x` over the region `Π x_i^{h_i} ≤ X`.
pub fn region_sum_product(
    factors: &[LocalFactor],
    h: &[Rational],
    bound: &Rational,
    prefactor: &Rational,
) -> Result<Rational> {
    let m = h.len();
    check_factors(factors, m)?;
    if h.iter().any(|x| *x <= Rational::zero()) {
        return Err(Error::InvalidArgument("weights h_i must be positive".into()));
    }
    if *bound <= Rational::zero() {
        return Err(Error::InvalidBounds("region bound must be positive".into()));
    }
    let d = h.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let d = d.to_u32().ok_or_else(|| Error::InvalidArgument("weight denominators too large".into()))?;
    let exps: Vec<u32> = h
        .iter()
        .map(|x| (x * int(d as i64)).to_integer().to_u32())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidArgument("weights too large".into()))?;
    // x^{h} ≤ X  ⇔  x^{H} ≤ ⌊X^d⌋ with integer exponents H = d·h
    let num = bound.numer().to_biguint().expect("positive");
    let den = bound.denom().to_biguint().expect("positive");
    let limit: BigUint = num.pow(d) / den.pow(d);
    let limit = limit
        .to_u128()
        .ok_or_else(|| Error::InvalidBounds("region bound too large".into()))?;
    if limit == 0 {
        return Ok(Rational::zero());
    }
    let (special, generic) = split(factors, |f| {
        f.c.iter()
            .zip(&exps)
            .filter(|(c, _)| !c.is_zero())
            .filter_map(|(c, &e)| {
                (f.prime as u128).checked_pow(e).map(|cost| Choice { slot: 0, cost, weight: c.clone() })
            })
            .collect()
    });
    let plan = Plan { special, generic, budgets: vec![limit], forced: int(1) };
    let cap = RootCap { min_exp: exps.iter().copied().min().unwrap_or(1) };
    Ok(prefactor * plan.evaluate(&cap, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::rational;

    fn c2_series() -> Vec<LocalFactor> {
        [3, 5, 7].iter().map(|&q| LocalFactor::tame(q, vec![int(1)])).collect()
    }

    #[test]
    fn c2_examples() {
        let f = c2_series();
        assert_eq!(box_sum(&f, &[10], &[], &int(2)).unwrap().value, int(8));
        assert_eq!(box_sum(&f, &[10], &[(0, 3)], &int(2)).unwrap().value, int(2));
        assert_eq!(shell_sum(&f, &[10], &rational(1, 2), &int(2)).unwrap(), int(2));
        assert_eq!(region_sum_product(&f, &[int(1)], &int(10), &int(2)).unwrap(), int(8));
    }

    #[test]
    fn zero_factors() {
        let f = vec![LocalFactor::tame(3, vec![int(0), int(0)])];
        assert_eq!(box_sum(&f, &[5, 7], &[], &int(1)).unwrap().value, int(1));
        assert_eq!(shell_sum(&f, &[5, 7], &rational(1, 2), &int(1)).unwrap(), int(0));
    }

    #[test]
    fn pins() {
        let f = c2_series();
        assert_eq!(box_sum(&f, &[10], &[(0, 1)], &int(1)).unwrap().value, int(1));
        assert_eq!(box_sum(&f, &[10], &[(0, 15)], &int(1)).unwrap().value, int(1));
        assert_eq!(box_sum(&f, &[10], &[(0, 9)], &int(1)), Err(Error::NotRepresentable { coord: 0, value: 9 }));
        assert_eq!(box_sum(&f, &[10], &[(0, 11)], &int(1)), Err(Error::NotRepresentable { coord: 0, value: 11 }));
        assert!(matches!(box_sum(&f, &[0], &[], &int(1)), Err(Error::InvalidBounds(_))));
    }

    #[test]
    fn special_factors() {
        // (4 + 0·2^{-s})(1 + 3^{-s})(1 + 5^{-s})
        let mut f = c2_series();
        f.push(LocalFactor::new(2, int(4), vec![int(0)]));
        assert_eq!(box_sum(&f, &[5], &[], &rational(1, 2)).unwrap().value, int(6));
        f.push(LocalFactor::new(11, rational(1, 3), vec![int(2)]));
        // supports ≤ 12: {1,3,5,7,11} with 11 weighted 2 and the rest 1/3
        assert_eq!(box_sum(&f, &[12], &[], &int(1)).unwrap().value, int(4) * (rational(4, 3) + int(2)));
    }

    #[test]
    fn region_with_weights() {
        let f: Vec<LocalFactor> = [3, 5, 7].iter().map(|&q| LocalFactor::tame(q, vec![int(1), int(1)])).collect();
        // h = (1, 2): x1 · x2^2 ≤ 30
        let v = region_sum_product(&f, &[int(1), int(2)], &int(30), &int(1)).unwrap();
        let mut oracle = 0;
        let sq = [1u64, 3, 5, 7, 15, 21, 35, 105];
        for &a in &sq {
            for &b in &sq {
                if crate::arith::gcd(a, b) == 1 && a * b * b <= 30 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(v, int(oracle));
        assert_eq!(region_sum_product(&f, &[rational(1, 2), int(1)], &rational(7, 2), &int(1)).unwrap(), {
            // x1^{1/2} x2 ≤ 7/2  ⇔  x1 x2^2 ≤ 12.25
            let mut n = 0;
            for &a in &sq {
                for &b in &sq {
                    if crate::arith::gcd(a, b) == 1 && 4 * a * b * b <= 49 {
                        n += 1;
                    }
                }
            }
            int(n)
        });
    }

    #[test]
    fn integer_roots() {
        assert_eq!(integer_root(26, 3), 2);
        assert_eq!(integer_root(27, 3), 3);
        assert_eq!(integer_root(u128::MAX, 2), u64::MAX as u128);
    }
}
