//! Fine Artin conductors, Artin conductors and Wood–Yasuda weights of abstract
//! ramification data, and the conductor matrix of a group and profile.
//!
//! For a datum with inertia `I`, wild chain `W_0 ⊋ … ⊋ 1` and tame label
//! `γ: I/W_0 → μ_{e_0}`:
//!
//! ```text
//! fine(ψ)  = ∫_0^∞ (ψ(1) − ⟨ψ,1⟩_{Ī^t}) dt + Σ_{d|e_0, d≠e_0} φ(e_0/d) ⟨ψ,γ^d⟩_I
//! artin(ψ) = ∫_0^∞ (ψ(1) − ⟨ψ,1⟩_{I^t}) dt
//! ```
//!
//! with `Ī^t = W_0` and `I^t = I` on `[0,1)`, and `Ī^t = I^t = W_k` on
//! `[u_k, u_{k+1})`.

use std::sync::Arc;

use num::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{divisors, euler_phi};
use crate::character::{galois_orbit_characters, galois_orbits, Character, CharacterTable, ClassFunction};
use crate::cyclotomic::{format_rational, int, rational, root_of_unity, CyclotomicNumber, Rational};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::linalg::determinant;
use crate::ramification::{make_tame_datum, RamificationDatum, RamificationTypes};

fn check_group(d: &RamificationDatum, psi: &Character) -> Result<()> {
    if Arc::ptr_eq(d.group(), psi.group()) || **d.group() == **psi.group() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("character and datum live on different groups".into()))
    }
}

fn to_rational(x: &CyclotomicNumber, what: &str) -> Result<Rational> {
    x.to_rational()
        .ok_or_else(|| Error::NotRational(format!("{what} = {x} is not rational")))
}

fn degree(psi: &Character) -> Result<Rational> {
    to_rational(psi.degree(), "ψ(1)")
}

fn average(psi: &Character, on: &Subgroup) -> Result<Rational> {
    let mut acc = CyclotomicNumber::zero(psi.group().exponent());
    for &h in on.elements() {
        acc = &acc + psi.value(h);
    }
    to_rational(&acc.scale(&rational(1, on.len() as i64)), "⟨ψ,1⟩")
}

/// `Σ_k (u_{k+1} − u_k)(ψ(1) − ⟨ψ,1⟩_{W_k})` over the bounded segments of the chain.
fn wild_part(d: &RamificationDatum, psi: &Character) -> Result<Rational> {
    let deg = degree(psi)?;
    let chain = d.chain();
    let mut total = Rational::zero();
    for pair in chain.windows(2) {
        let (u, w) = &pair[0];
        let (u_next, _) = &pair[1];
        total += (u_next - u) * (&deg - average(psi, w)?);
    }
    Ok(total)
}

/// `⟨ψ, γ^d⟩_I` for every `d` in `0..e_0`, sharing the per-label sums.
fn gamma_products(d: &RamificationDatum, psi: &Character) -> Result<Vec<Rational>> {
    let n = psi.group().exponent();
    let e0 = d.e0();
    let mut by_label = vec![CyclotomicNumber::zero(n); e0 as usize];
    for &x in d.inertia().elements() {
        let j = d.label(x) as usize;
        by_label[j] = &by_label[j] + psi.value(x);
    }
    let inv = rational(1, d.inertia().len() as i64);
    let step = (n / e0) as i64;
    (0..e0)
        .map(|k| {
            let mut acc = CyclotomicNumber::zero(n);
            for (j, s) in by_label.iter().enumerate() {
                if !s.is_zero() {
                    // conj(γ^k(x)) = ζ_{e0}^{-kj}
                    acc = &acc + &(s * &root_of_unity(n, -(k as i64) * j as i64 * step));
                }
            }
            to_rational(&acc.scale(&inv), "⟨ψ,γ^d⟩")
        })
        .collect()
}

/// `Σ_{d|e_0, d≠e_0} φ(e_0/d)⟨ψ,γ^d⟩_I`.
pub fn tame_part(d: &RamificationDatum, psi: &Character) -> Result<Rational> {
    check_group(d, psi)?;
    let e0 = d.e0();
    if e0 == 1 {
        return Ok(Rational::zero());
    }
    let products = gamma_products(d, psi)?;
    let mut total = Rational::zero();
    for dd in divisors(e0) {
        if dd != e0 {
            total += int(euler_phi(e0 / dd) as i64) * &products[dd as usize];
        }
    }
    Ok(total)
}

pub fn fine_conductor(d: &RamificationDatum, psi: &Character) -> Result<Rational> {
    check_group(d, psi)?;
    let deg = degree(psi)?;
    let first = &deg - average(psi, d.wild())?;
    Ok(first + wild_part(d, psi)? + tame_part(d, psi)?)
}

pub fn artin_conductor(d: &RamificationDatum, psi: &Character) -> Result<Rational> {
    check_group(d, psi)?;
    let deg = degree(psi)?;
    let first = &deg - average(psi, d.inertia())?;
    Ok(first + wild_part(d, psi)?)
}

/// `fine − artin` by the closed form
/// `⟨ψ,1⟩_I − ⟨ψ,1⟩_{W_0} + Σ_{d|e_0,d≠e_0} φ(e_0/d)⟨ψ,γ^d⟩_I`.
pub fn fine_minus_artin(d: &RamificationDatum, psi: &Character) -> Result<Rational> {
    check_group(d, psi)?;
    Ok(average(psi, d.inertia())? - average(psi, d.wild())? + tame_part(d, psi)?)
}

/// `ψ(1) − Σ_{k=1}^{e} (k/e)⟨ψ,γ^k⟩_I` for tame data.
pub fn wy_weight(d: &RamificationDatum, psi: &Character) -> Result<Rational> {
    check_group(d, psi)?;
    if !d.is_tame() {
        return Err(Error::WildDatum);
    }
    let e = d.e0();
    let products = gamma_products(d, psi)?;
    let mut total = degree(psi)?;
    for k in 1..=e {
        total -= rational(k as i64, e as i64) * &products[(k % e) as usize];
    }
    Ok(total)
}

/// The datum `φ ∘ f`: images of `I` and of the chain (equal consecutive terms
/// merged, keeping the smaller break), tame generator `φ(g_0)`.
pub fn pushforward_datum(d: &RamificationDatum, hom: &GroupHom) -> Result<RamificationDatum> {
    if **hom.source() != **d.group() {
        return Err(Error::InvalidArgument("hom source differs from the datum's group".into()));
    }
    let inertia = hom.image_of(d.inertia());
    let mut chain: Vec<(Rational, Subgroup)> = Vec::new();
    for (u, w) in d.chain() {
        let img = hom.image_of(w);
        if chain.last().is_some_and(|(_, prev)| *prev == img) {
            continue;
        }
        chain.push((u.clone(), img));
    }
    RamificationDatum::new(hom.target().clone(), inertia, chain, hom.apply(d.tame_generator()))
}

#[derive(Clone, Debug)]
pub struct ConductorMatrix {
    /// Row `i` is the tame datum of type `i`.
    pub type_ids: Vec<usize>,
    /// Column `j` is the sum of the irreducible rows listed here.
    pub column_orbits: Vec<Vec<usize>>,
    pub entries: Vec<Vec<Rational>>,
    pub determinant: Rational,
}

impl ConductorMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        json!({
            "rows": self.type_ids,
            "columns": self.column_orbits,
            "entries": entries,
            "determinant": format_rational(&self.determinant),
        })
    }
}

/// `a_ij = fine(tame datum of type i, ψ_j)` with `ψ_j` the Galois-orbit sums.
/// A singular matrix is reported as a theorem violation.
pub fn conductor_matrix(types: &RamificationTypes, table: &CharacterTable) -> Result<ConductorMatrix> {
    let columns = galois_orbit_characters(table, types.profile())?;
    let column_orbits = galois_orbits(table, types.profile())?;
    if columns.len() != types.len() {
        return Err(Error::TheoremViolation(format!(
            "{} ramification types but {} Galois-orbit characters",
            types.len(),
            columns.len()
        )));
    }
    let entries = (0..types.len())
        .into_par_iter()
        .map(|i| {
            let datum = make_tame_datum(types, i)?;
            columns.iter().map(|psi| fine_conductor(&datum, psi)).collect()
        })
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    let det = determinant(&entries);
    if det.is_zero() {
        return Err(Error::TheoremViolation("conductor matrix is singular".into()));
    }
    Ok(ConductorMatrix { type_ids: (0..types.len()).collect(), column_orbits, entries, determinant: det })
}

/// The unramified datum of a group (`I = 1`).
pub fn unramified(group: &Arc<FiniteGroup>) -> RamificationDatum {
    crate::ramification::tame_datum_of(group, 0).expect("identity datum is valid")
}

pub fn is_nonnegative_integer(q: &Rational) -> bool {
    q.is_integer() && *q >= Rational::zero()
}
