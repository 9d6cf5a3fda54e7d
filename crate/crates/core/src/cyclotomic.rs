//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored at a level `N` as its coordinate vector over the power
//! basis `1, ζ_N, …, ζ_N^{φ(N)-1}`, i.e. as a polynomial reduced modulo the
//! `N`-th cyclotomic polynomial. The reduced form is canonical, so equality at
//! a common level is coefficient equality. Operands at different levels are
//! lifted to the lcm of their levels first.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{euler_phi, gcd, lcm, rem, units};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Wire form of a rational: `num/den`, with the denominator omitted when it is 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter for `Rational` fields using the `num/den` string form.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(format_rational).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

type PolyCache = Mutex<HashMap<u64, Arc<Vec<i64>>>>;

fn cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
///
/// Obtained by exact division of `x^n - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic level must be positive");
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in crate::arith::divisors(n) {
        if d == n {
            continue;
        }
        let div = cyclotomic_polynomial(d);
        num = exact_monic_division(&num, &div);
    }
    let poly = Arc::new(num);
    cache().lock().unwrap().insert(n, poly.clone());
    poly
}

fn exact_monic_division(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// An exact element of `Q(ζ_N)`.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    level: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(level: u64) -> Self {
        assert!(level >= 1, "cyclotomic level must be positive");
        Self {
            level,
            coeffs: vec![Rational::zero(); euler_phi(level) as usize],
        }
    }

    pub fn from_rational(level: u64, q: Rational) -> Self {
        let mut z = Self::zero(level);
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(level: u64, n: i64) -> Self {
        Self::from_rational(level, int(n))
    }

    pub fn one(level: u64) -> Self {
        Self::from_int(level, 1)
    }

    /// Builds an element from an arbitrary-length polynomial in `ζ_N`.
    pub fn from_poly(level: u64, poly: Vec<Rational>) -> Self {
        Self {
            level,
            coeffs: reduce(level, poly),
        }
    }

    /// Builds an element from canonical coordinates; fails on a length mismatch.
    pub fn from_coeffs(level: u64, coeffs: Vec<Rational>) -> Result<Self> {
        if level == 0 || coeffs.len() != euler_phi(level) as usize {
            return Err(Error::Parse(format!(
                "level {level} expects {} coefficients, got {}",
                if level == 0 { 0 } else { euler_phi(level) },
                coeffs.len()
            )));
        }
        Ok(Self { level, coeffs })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express at a level that is a multiple of the current one.
    pub fn lift(&self, level: u64) -> Self {
        assert!(
            level.is_multiple_of(self.level),
            "cannot lift level {} to {}",
            self.level,
            level
        );
        if level == self.level {
            return self.clone();
        }
        let step = (level / self.level) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        Self::from_poly(level, poly)
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let l = lcm(self.level, other.level);
        (self.lift(l), other.lift(l))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// The automorphism `ζ_N ↦ ζ_N^k`.
    pub fn galois_apply(&self, k: i64) -> Result<Self> {
        let n = self.level;
        if gcd(rem(k, n), n) != 1 && n != 1 {
            return Err(Error::NotCoprime(k, n));
        }
        Ok(self.galois_unchecked(rem(k, n)))
    }

    fn galois_unchecked(&self, k: u64) -> Self {
        let n = self.level;
        if n <= 2 {
            return self.clone();
        }
        let mut poly = vec![Rational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let idx = ((j as u64 * k) % n) as usize;
                poly[idx] += c;
            }
        }
        Self::from_poly(n, poly)
    }

    /// Complex conjugation, the automorphism with `k = -1`.
    pub fn conj(&self) -> Self {
        self.galois_unchecked(rem(-1, self.level))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(self.level, q.recip()));
        }
        // x^{-1} = (prod of the other conjugates) / norm(x)
        let mut cofactor = Self::one(self.level);
        for k in units(self.level) {
            if k != 1 {
                cofactor = &cofactor * &self.galois_unchecked(k);
            }
        }
        let norm = (self * &cofactor)
            .to_rational()
            .expect("field norm is rational");
        Ok(cofactor.scale(&norm.recip()))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.level);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Total order on elements of the same level (level first, then coordinates).
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let n = self.level as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let v = rational_to_f64(c);
                let angle = 2.0 * std::f64::consts::PI * j as f64 / n;
                num_complex::Complex64::new(v * angle.cos(), v * angle.sin())
            })
            .sum()
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    use num::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// `ζ_N^j` in canonical form.
pub fn root_of_unity(level: u64, j: i64) -> CyclotomicNumber {
    assert!(level >= 1, "cyclotomic level must be positive");
    let j = rem(j, level) as usize;
    let mut poly = vec![Rational::zero(); j + 1];
    poly[j] = Rational::one();
    CyclotomicNumber::from_poly(level, poly)
}

fn reduce(level: u64, mut poly: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(level);
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for k in (deg..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[k], Rational::zero());
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    poly[k - deg + j] -= &c * BigInt::from(pj);
                }
            }
        }
    }
    poly.resize(deg, Rational::zero());
    poly
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = self.aligned(other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CyclotomicNumber {}

impl<'a> Add<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        if self.level != other.level {
            let (a, b) = self.aligned(other);
            return &a + &b;
        }
        CyclotomicNumber {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-other)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        if self.level != other.level {
            let (a, b) = self.aligned(other);
            return &a * &b;
        }
        let n = self.coeffs.len();
        let mut poly = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    poly[i + j] += a * b;
                }
            }
        }
        CyclotomicNumber::from_poly(self.level, poly)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, other: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$m(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{}", format_rational(&q));
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let base = match j {
                0 => String::new(),
                1 => format!("E({})", self.level),
                _ => format!("E({})^{}", self.level, j),
            };
            if j == 0 {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{base}")?;
            } else {
                write!(f, "{}*{base}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    level: u64,
    #[serde(with = "serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            level: self.level,
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        CyclotomicNumber::from_coeffs(w.level, w.coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u64, j: i64) -> CyclotomicNumber {
        root_of_unity(n, j)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(z(1, 0), CyclotomicNumber::one(1));
        assert_eq!(&z(3, 1) + &z(3, 2), CyclotomicNumber::from_int(3, -1));
        assert_eq!(z(4, 2), CyclotomicNumber::from_int(4, -1));
        assert_eq!(z(5, 5), CyclotomicNumber::one(5));
    }

    #[test]
    fn field_operations() {
        assert_eq!(z(5, 1).conj(), z(5, 4));
        assert_eq!(&z(6, 1) * &z(6, 5), CyclotomicNumber::one(6));
        let a = &CyclotomicNumber::one(4) + &z(4, 1);
        assert_eq!(a.try_div(&a).unwrap(), CyclotomicNumber::one(4));
        assert_eq!(
            a.try_div(&CyclotomicNumber::zero(4)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn galois_action() {
        assert_eq!(z(5, 1).galois_apply(2).unwrap(), z(5, 2));
        let q = CyclotomicNumber::from_rational(5, rational(3, 7));
        assert_eq!(q.galois_apply(3).unwrap(), q);
        let x = &z(7, 1) + &z(7, 3).scale(&int(2));
        assert_eq!(
            x.galois_apply(2).unwrap().galois_apply(3).unwrap(),
            x.galois_apply(6).unwrap()
        );
        assert_eq!(z(6, 1).galois_apply(2), Err(Error::NotCoprime(2, 6)));
    }

    #[test]
    fn cross_level_equality() {
        assert_eq!(z(3, 1), z(6, 2));
        assert_eq!(z(4, 1), z(12, 3));
        assert_ne!(z(3, 1), z(6, 1));
        assert_eq!(&z(3, 1) + &z(4, 1), &z(12, 4) + &z(12, 3));
    }

    #[test]
    fn wire_format() {
        let x = &z(5, 2).scale(&rational(-3, 2)) + &CyclotomicNumber::one(5);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"level":5,"coeffs":["1","0","-3/2","0"]}"#);
        let y: CyclotomicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert!(serde_json::from_str::<CyclotomicNumber>(r#"{"level":5,"coeffs":["1"]}"#).is_err());
        assert_eq!(parse_rational("4/6").unwrap(), rational(2, 3));
    }

    #[test]
    fn display() {
        assert_eq!(CyclotomicNumber::from_int(3, -1).to_string(), "-1");
        assert_eq!(z(5, 1).to_string(), "E(5)");
        let x = &z(5, 2).scale(&int(-2)) + &CyclotomicNumber::one(5);
        assert_eq!(x.to_string(), "1 - 2*E(5)^2");
    }

    fn element(level: u64) -> impl Strategy<Value = CyclotomicNumber> {
        let phi = euler_phi(level) as usize;
        prop::collection::vec((-6i64..=6, 1i64..=4), phi).prop_map(move |cs| {
            let coeffs = cs.into_iter().map(|(n, d)| rational(n, d)).collect();
            CyclotomicNumber::from_coeffs(level, coeffs).unwrap()
        })
    }

    fn level_and_three() -> impl Strategy<Value = (CyclotomicNumber, CyclotomicNumber, CyclotomicNumber)> {
        (1u64..=60).prop_flat_map(|n| (element(n), element(n), element(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms((a, b, c) in level_and_three()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inverse().unwrap(), CyclotomicNumber::one(a.level()));
            }
        }

        #[test]
        fn galois_is_ring_hom((a, b, _c) in level_and_three(), k in 1i64..200) {
            let n = a.level();
            prop_assume!(gcd(rem(k, n), n) == 1);
            let s = |x: &CyclotomicNumber| x.galois_apply(k).unwrap();
            prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
            prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
        }

        #[test]
        fn galois_multiplicative_in_k((a, _b, _c) in level_and_three(), k in 1i64..100, l in 1i64..100) {
            let n = a.level();
            prop_assume!(gcd(rem(k, n), n) == 1 && gcd(rem(l, n), n) == 1);
            prop_assert_eq!(
                a.galois_apply(k).unwrap().galois_apply(l).unwrap(),
                a.galois_apply(k * l).unwrap()
            );
        }

        #[test]
        fn norm_of_scaled_root_is_nonnegative(n in 1u64..=60, j in 0i64..60, p in -9i64..=9, q in 1i64..=5) {
            let x = root_of_unity(n, j).scale(&rational(p, q));
            let prod = &x.conj() * &x;
            let r = prod.to_rational().expect("|x|^2 is rational");
            prop_assert!(!r.is_negative());
            prop_assert_eq!(r, rational(p * p, q * q));
        }
    }
}
