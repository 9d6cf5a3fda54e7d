//! Numeric estimate of the heuristic leading constant
//!
//! ```text
//! C = (1/#G) · r_1⋯r_m · Π_{Nm 𝔭 ≤ E_0} D_𝔭(1) · Π_{Nm 𝔭 > E_0} D_𝔭(1) / Π_i D_{𝔭,i}(1)
//! ```
//!
//! where `D_{𝔭,i}(s) = 1 + c_{𝔭,i} Nm(𝔭)^{-s}` and `r_i` is the residue at
//! `s = 1` of `Π_{Nm 𝔭 > E_0} D_{𝔭,i}(s)`.
//!
//! `K` is the subfield of `Q(ζ_n)` fixed by the profile. For type `i` let
//! `B_i = {h ∈ H : h mod e_i ∈ A_i}`; the field `F_i` of the residue is fixed
//! by `B_i`, so `ζ_{F_i}` agrees away from `n` with
//! `Z_i(s) = Π_{χ mod n, χ|B_i = 1} L(s, χ)`, whose residue is
//! `φ(n)/n · Π_{χ ≠ 1} L(1, χ)`. Then
//! `r_i = Res Z_i · Π_q [Π_{𝔭|q, Nm 𝔭 > E_0} D_{𝔭,i}(1)] / Z_{i,q}(1)`,
//! truncated at `q ≤ P`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::Zero;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::abelian::wild_local_count;
use crate::arith::{euler_phi, mod_pow, prime_factors, primes_up_to, units};
use crate::character::{character_table, ClassFunction};
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::ramification::RamificationTypes;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WildMode {
    /// `AbelianExact` for abelian groups over `Q`, `Skip` otherwise.
    Auto,
    /// `D_p = 1` at primes dividing `#G`.
    Skip,
    /// Exact `D_p` from `Hom(Z_p^×, G)`.
    AbelianExact,
}

impl std::str::FromStr for WildMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "skip" => Ok(Self::Skip),
            "abelian-exact" => Ok(Self::AbelianExact),
            _ => Err(Error::InvalidArgument(format!("unknown wild mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstantOptions {
    pub prime_bound: u64,
    pub lseries_terms: u64,
    pub wild_mode: WildMode,
    /// Fail with `InsufficientPrecision` if the error bound exceeds this.
    pub tolerance: Option<f64>,
}

impl Default for ConstantOptions {
    fn default() -> Self {
        Self { prime_bound: 100_000, lseries_terms: 1_000_000, wild_mode: WildMode::Auto, tolerance: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LValue {
    /// Row of the character table of `(Z/nZ)^×`.
    pub character: usize,
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueEstimate {
    pub type_id: usize,
    pub value: f64,
    /// `Res Z_i`, before the Euler product correction.
    pub zeta_residue: f64,
    pub euler_correction: f64,
    pub characters: Vec<usize>,
    pub tail_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantComponents {
    pub prefactor: f64,
    pub e0: u64,
    pub residues: Vec<ResidueEstimate>,
    pub l_values: Vec<LValue>,
    /// `Π_{Nm 𝔭 ≤ E_0} D_𝔭(1)`, wild primes included.
    pub finite_product: f64,
    pub wild_factor: f64,
    pub wild_mode: WildMode,
    /// Truncated `Π_{Nm 𝔭 > E_0} D_𝔭(1) / Π_i D_{𝔭,i}(1)`.
    pub correction_product: f64,
    /// Product of the coefficients forced by pinned coordinates.
    pub pinned_weight: f64,
    pub caveats: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub prime_bound: u64,
    pub lseries_terms: u64,
    pub components: ConstantComponents,
}

fn unit_group(n: u64) -> Result<(Arc<FiniteGroup>, Vec<u64>)> {
    let us = units(n);
    let index: BTreeMap<u64, usize> = us.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let table = us
        .iter()
        .map(|&a| us.iter().map(|&b| index[&(a * b % n)]).collect())
        .collect();
    Ok((Arc::new(FiniteGroup::from_table(table, Some(format!("(Z/{n}Z)^x")))?), us))
}

/// Truncated `L(1, χ)` with the tail bound `2M/(N+1)`, `M` the largest
/// partial character sum over a period.
fn l_value(chi: &[Complex64], terms: u64) -> (Complex64, f64) {
    let n = chi.len() as u64;
    let mut partial = Complex64::zero();
    let mut m = 0.0f64;
    for v in chi.iter().cycle().skip(1).take(n as usize) {
        partial += v;
        m = m.max(partial.norm());
    }
    let mut sum = Complex64::zero();
    for k in 1..=terms {
        let v = chi[(k % n) as usize];
        if v != Complex64::zero() {
            sum += v / k as f64;
        }
    }
    let err = 2.0 * m / (terms as f64 + 1.0) + terms as f64 * 1e-16;
    (sum, err)
}

/// Smallest `f ≥ 1` with `r^f mod n` in `set`.
fn order_into(r: u64, n: u64, set: &BTreeSet<u64>) -> u64 {
    let mut f = 1;
    while !set.contains(&mod_pow(r, f, n)) {
        f += 1;
    }
    f
}

struct Residue {
    /// Residue degree in `K`.
    f: u64,
    /// Number of primes of `K` above `q`.
    g: u64,
    /// Masses `c_{𝔭,i}` per type.
    c: Vec<f64>,
    /// Order of `q` modulo `B_i`, per type.
    o: Vec<u64>,
}

/// Estimate of the constant for the full box (no pins).
pub fn predicted_constant(types: &RamificationTypes, options: &ConstantOptions) -> Result<ConstantEstimate> {
    predicted_slice_constant(types, &[], options)
}

/// Constant `C'` of the slice with coordinates `x_i = v` pinned, so that the
/// count over the free coordinates grows like `C' Π_{i free} X_i`. Pins are
/// supported over `Q` only.
pub fn predicted_slice_constant(
    types: &RamificationTypes,
    pins: &[(usize, u64)],
    options: &ConstantOptions,
) -> Result<ConstantEstimate> {
    let group = types.group();
    let order = group.order() as u64;
    let profile = types.profile();
    let n = profile.modulus();
    let m = types.len();
    let big_p = options.prime_bound;
    let terms = options.lseries_terms;
    let e0 = prime_factors(order).into_iter().max().unwrap_or(1);
    if big_p < e0.max(n).max(2) {
        return Err(Error::InsufficientPrecision(format!(
            "prime bound {big_p} must be at least the exponent {n} and E_0 = {e0}"
        )));
    }
    if terms == 0 {
        return Err(Error::InsufficientPrecision("L-series length must be positive".into()));
    }
    let exact_allowed = group.is_abelian() && profile.is_full();
    let wild_mode = match options.wild_mode {
        WildMode::Auto if exact_allowed => WildMode::AbelianExact,
        WildMode::Auto => WildMode::Skip,
        WildMode::AbelianExact if !exact_allowed => {
            return Err(Error::InvalidArgument(
                "abelian-exact wild factors need an abelian group over Q".into(),
            ))
        }
        w => w,
    };
    let mut caveats = Vec::new();
    if wild_mode == WildMode::Skip && order > 1 {
        caveats.push(format!(
            "wild primes {:?} were given the factor 1; the heuristic leaves them unspecified",
            prime_factors(order)
        ));
    }

    // pinned coordinates
    if !pins.is_empty() && !profile.is_full() {
        return Err(Error::InvalidArgument("pinned slices are supported over Q only".into()));
    }
    let mut pinned_types = BTreeSet::new();
    let mut pinned_primes: BTreeMap<u64, usize> = BTreeMap::new();
    for &(i, v) in pins {
        types.get(i)?;
        if !pinned_types.insert(i) {
            return Err(Error::InvalidArgument(format!("coordinate {i} pinned twice")));
        }
        let ps = prime_factors(v);
        if v == 0 || ps.iter().product::<u64>() != v {
            return Err(Error::NotRepresentable { coord: i, value: v });
        }
        for q in ps {
            if pinned_primes.insert(q, i).is_some() {
                return Err(Error::NotRepresentable { coord: i, value: v });
            }
        }
    }
    let free: Vec<usize> = (0..m).filter(|i| !pinned_types.contains(i)).collect();

    // per residue class data
    let h_set: BTreeSet<u64> = profile.elements().iter().copied().collect();
    let phi_n = euler_phi(n);
    let k_degree = phi_n / profile.len() as u64;
    let b_sets: Vec<BTreeSet<u64>> = types
        .types()
        .iter()
        .map(|t| h_set.iter().copied().filter(|h| t.stabilizer_a.contains(&(h % t.e))).collect())
        .collect();
    let residues: BTreeMap<u64, Residue> = units(n)
        .into_iter()
        .map(|r| {
            let f = order_into(r, n, &h_set);
            let norm = mod_pow(r, f, n);
            let c = types
                .types()
                .iter()
                .map(|t| if t.stabilizer_a.contains(&(norm % t.e)) { t.index_u_a as f64 } else { 0.0 })
                .collect();
            let o = b_sets.iter().map(|b| order_into(r, n, b)).collect();
            (r, Residue { f, g: k_degree / f, c, o })
        })
        .collect();

    // Dirichlet characters mod n
    let (ugroup, us) = unit_group(n)?;
    let table = character_table(&ugroup)?;
    let index: BTreeMap<u64, usize> = us.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut chars_of_type: Vec<Vec<usize>> = Vec::with_capacity(m);
    for b in &b_sets {
        let rows = table
            .rows()
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, row)| {
                b.iter().all(|h| {
                    let v = row.value(index[h]);
                    *v == CyclotomicNumber::one(v.level())
                })
            })
            .map(|(k, _)| k)
            .collect();
        chars_of_type.push(rows);
    }
    let needed: BTreeSet<usize> = free.iter().flat_map(|&i| chars_of_type[i].iter().copied()).collect();
    let l_values: Vec<LValue> = needed
        .into_par_iter()
        .map(|k| {
            let row = &table.rows()[k];
            let chi: Vec<Complex64> = (0..n)
                .map(|r| index.get(&r).map_or(Complex64::zero(), |&idx| row.value(idx).to_complex()))
                .collect();
            let (v, err) = l_value(&chi, terms);
            LValue { character: k, re: v.re, im: v.im, error: err }
        })
        .collect();
    let l_of: BTreeMap<usize, &LValue> = l_values.iter().map(|l| (l.character, l)).collect();

    // Euler products over q ≤ P
    let mut log_r = vec![0.0f64; m];
    let mut log_correction = 0.0f64;
    let mut finite = 1.0f64;
    let mut wild_factor = 1.0f64;
    let mut pinned_weight = 1.0f64;
    for (&q, &i) in &pinned_primes {
        let c = if order.is_multiple_of(q) {
            if wild_mode != WildMode::AbelianExact {
                return Err(Error::NotRepresentable { coord: i, value: q });
            }
            wild_local_count(types, q)?.tame[i] as f64
        } else {
            residues[&(q % n)].c[i]
        };
        if c == 0.0 {
            return Err(Error::NotRepresentable { coord: i, value: q });
        }
        pinned_weight *= c;
    }
    for q in primes_up_to(big_p) {
        let pinned = pinned_primes.contains_key(&q);
        if order.is_multiple_of(q) {
            if wild_mode == WildMode::AbelianExact && !pinned {
                let w = wild_local_count(types, q)?;
                let d = (w.wild + 1) as f64 + free.iter().map(|&i| w.tame[i] as f64).sum::<f64>() / q as f64;
                finite *= d;
                wild_factor *= d;
            }
            continue;
        }
        let res = &residues[&(q % n)];
        let norm = (q as f64).powi(res.f as i32);
        let g = res.g as f64;
        if !pinned {
            let total: f64 = free.iter().map(|&i| res.c[i]).sum();
            if norm <= e0 as f64 {
                finite *= (1.0 + total / norm).powf(g);
            } else {
                let mut lc = (total / norm).ln_1p();
                for &i in &free {
                    let li = (res.c[i] / norm).ln_1p();
                    lc -= li;
                    log_r[i] += g * li;
                }
                log_correction += g * lc;
            }
        }
        for &i in &free {
            let o = res.o[i];
            let x = chars_of_type[i].len() as f64 + 1.0;
            // −log Z_{i,q}(1) = (|X_i|/o) log(1 − q^{−o})
            log_r[i] += x / o as f64 * (-(q as f64).powi(o as i32).recip()).ln_1p();
        }
    }

    // assemble
    let mut residue_estimates = Vec::new();
    let mut log_tail = 0.0f64;
    let mut l_rel = 1.0f64;
    let mut product = 1.0f64;
    for &i in &free {
        let mut zres = Complex64::new(phi_n as f64 / n as f64, 0.0);
        for k in &chars_of_type[i] {
            let l = l_of[k];
            let v = Complex64::new(l.re, l.im);
            if v.norm() <= l.error {
                return Err(Error::InsufficientPrecision(format!(
                    "L(1, χ_{k}) is not separated from 0 with {terms} terms"
                )));
            }
            zres *= v;
            l_rel *= 1.0 + l.error / (v.norm() - l.error);
        }
        let idx = types.types()[i].index_u_a as f64;
        let tail = k_degree as f64 * (idx * idx + idx) / big_p as f64;
        log_tail += tail;
        let value = zres.re * log_r[i].exp();
        product *= value;
        residue_estimates.push(ResidueEstimate {
            type_id: i,
            value,
            zeta_residue: zres.re,
            euler_correction: log_r[i].exp(),
            characters: chars_of_type[i].clone(),
            tail_bound: tail,
        });
    }
    let idx_sum: f64 = free.iter().map(|&i| types.types()[i].index_u_a as f64).sum();
    log_tail += k_degree as f64 * idx_sum * idx_sum / (2.0 * big_p as f64);
    let prefactor = 1.0 / order as f64;
    let correction = log_correction.exp();
    let value = pinned_weight * prefactor * product * finite * correction;
    let rel = log_tail.exp() * l_rel - 1.0 + 1e-10;
    let error_bound = value.abs() * rel;
    if let Some(tol) = options.tolerance {
        if !(error_bound <= tol) {
            return Err(Error::InsufficientPrecision(format!(
                "error bound {error_bound:.3e} exceeds the tolerance {tol:.3e}; raise the prime bound or L-series length"
            )));
        }
    }
    Ok(ConstantEstimate {
        value,
        error_bound,
        prime_bound: big_p,
        lseries_terms: terms,
        components: ConstantComponents {
            prefactor,
            e0,
            residues: residue_estimates,
            l_values,
            finite_product: finite,
            wild_factor,
            wild_mode,
            correction_product: correction,
            pinned_weight,
            caveats,
        },
    })
}
