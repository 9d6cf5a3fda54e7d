use num::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, mod_pow};
use crate::cyclotomic::{int, rational, serde_rational, serde_rational_vec, Rational};
use crate::error::{Error, Result};
use crate::ramification::RamificationTypes;

/// One Euler factor `b + Σ_i c_i q^{-s_i}` of a multivariate Dirichlet series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalFactor {
    pub prime: u64,
    #[serde(with = "serde_rational")]
    pub b: Rational,
    #[serde(with = "serde_rational_vec")]
    pub c: Vec<Rational>,
}

impl LocalFactor {
    pub fn new(prime: u64, b: Rational, c: Vec<Rational>) -> Self {
        Self { prime, b, c }
    }

    /// A factor with constant term 1.
    pub fn tame(prime: u64, c: Vec<Rational>) -> Self {
        Self { prime, b: int(1), c }
    }

    pub fn is_trivial(&self) -> bool {
        self.b == int(1) && self.c.iter().all(Zero::is_zero)
    }
}

/// Masses from the pair enumeration, indexed by type id.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassTable {
    #[serde(with = "serde_rational")]
    pub unramified: Rational,
    #[serde(with = "serde_rational_vec")]
    pub by_type: Vec<Rational>,
}

fn check_tame_norm(types: &RamificationTypes, norm: u64) -> Result<()> {
    let order = types.group().order() as u64;
    if norm < 2 {
        return Err(Error::InvalidArgument(format!("norm {norm} must be at least 2")));
    }
    if gcd(norm, order) != 1 {
        return Err(Error::WildPrime(norm));
    }
    Ok(())
}

/// Mass of type `id` at a prime of `K` with norm `norm`:
/// `[U_e : A]` if `norm mod e` lies in `A`, else 0.
///
/// The norm of a prime of `K` always reduces into the profile subgroup mod `n`;
/// other values are rejected.
pub fn local_mass_at_norm(types: &RamificationTypes, id: usize, norm: u64) -> Result<Rational> {
    check_tame_norm(types, norm)?;
    let profile = types.profile();
    let n = profile.modulus();
    if !profile.contains((norm % n) as i64) {
        return Err(Error::FrobeniusOutsideProfile { prime: norm, frobenius: norm % n, modulus: n });
    }
    let t = types.get(id)?;
    let frob = norm % t.e;
    Ok(if t.stabilizer_a.contains(&frob) { int(t.index_u_a as i64) } else { Rational::zero() })
}

/// [`local_mass_at_norm`] for a rational prime `q` that is the norm of a
/// degree-one prime of `K`.
pub fn local_mass(types: &RamificationTypes, id: usize, q: u64) -> Result<Rational> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    local_mass_at_norm(types, id, q)
}

/// Counts pairs `(φ, τ) ∈ G²` with `φτφ⁻¹ = τ^q`, bucketed by the type of `τ`,
/// divided by `#G`. `q` is any norm coprime to `#G`.
pub fn local_mass_bruteforce(types: &RamificationTypes, q: u64) -> Result<MassTable> {
    check_tame_norm(types, q)?;
    let g = types.group();
    let order = g.order();
    let exp = g.exponent();
    let k = (q % exp) as i64;
    let mut unramified = 0u64;
    let mut by_type = vec![0u64; types.len()];
    for tau in 0..order {
        let target = g.pow(tau, k);
        let count = (0..order).filter(|&phi| g.conjugate(phi, tau) == target).count() as u64;
        if count == 0 {
            continue;
        }
        if tau == 0 {
            unramified += count;
        } else {
            by_type[types.classify(tau)?] += count;
        }
    }
    let o = order as i64;
    Ok(MassTable {
        unramified: rational(unramified as i64, o),
        by_type: by_type.into_iter().map(|c| rational(c as i64, o)).collect(),
    })
}

/// `D_q = 1 + Σ_i mass_i q^{-s_i}` for a tame prime `q` of degree one.
pub fn local_factor(types: &RamificationTypes, q: u64) -> Result<LocalFactor> {
    let c = (0..types.len()).map(|i| local_mass(types, i, q)).collect::<Result<Vec<_>>>()?;
    Ok(LocalFactor::tame(q, c))
}

/// [`local_factor`] at a prime of `K` with the given norm.
pub fn local_factor_at_norm(types: &RamificationTypes, norm: u64) -> Result<LocalFactor> {
    let c = (0..types.len())
        .map(|i| local_mass_at_norm(types, i, norm))
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalFactor::tame(norm, c))
}

/// Residue degree of the rational prime `q ∤ n` in `K`: the order of `q` in
/// `(Z/nZ)^×` modulo the profile.
pub fn residue_degree(types: &RamificationTypes, q: u64) -> u64 {
    let profile = types.profile();
    let n = profile.modulus();
    let mut f = 1;
    while !profile.contains(mod_pow(q, f, n) as i64) {
        f += 1;
    }
    f
}
