//! Ramification types `[I, γ]` of `G`-extensions and abstract local
//! ramification data.
//!
//! A base field `K` enters only through its cyclotomic profile: the image of
//! `Gal(K(μ_n)|K)` in `(Z/nZ)^×` for `n` the exponent of `G`. Types are the
//! orbits of nontrivial conjugacy classes under `C ↦ C^k`, `k` in the profile.
//! The representative `g` of a type is the element with `γ(g) = ζ_e`, using
//! the fixed roots `ζ_e := ζ_n^{n/e}`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::{One, Signed};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{gcd, rem, units};
use crate::cyclotomic::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

/// The image of `Gal(K(μ_n)|K)` in `(Z/nZ)^×`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CyclotomicProfile {
    modulus: u64,
    elements: Vec<u64>,
}

impl CyclotomicProfile {
    /// `K = Q`: all of `(Z/nZ)^×`.
    pub fn rational(n: u64) -> Self {
        Self { modulus: n, elements: units(n) }
    }

    /// `K ⊇ μ_n`: the trivial subgroup.
    pub fn cyclotomic(n: u64) -> Self {
        Self { modulus: n, elements: vec![1 % n] }
    }

    /// The subgroup generated by `generators`.
    pub fn generated(n: u64, generators: &[i64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProfile("modulus must be positive".into()));
        }
        let mut gens = Vec::new();
        for &k in generators {
            let r = rem(k, n);
            if n > 1 && gcd(r, n) != 1 {
                return Err(Error::NotCoprime(k, n));
            }
            gens.push(r);
        }
        let mut seen: BTreeSet<u64> = BTreeSet::from([1 % n]);
        let mut frontier = vec![1 % n];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = x * g % n;
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(Self { modulus: n, elements: seen.into_iter().collect() })
    }

    /// Validates an explicit residue list as a subgroup.
    pub fn from_elements(n: u64, elements: &[i64]) -> Result<Self> {
        let p = Self::generated(n, elements)?;
        let given: BTreeSet<u64> = elements.iter().map(|&k| rem(k, n)).collect();
        if given.len() != p.elements.len() {
            return Err(Error::InvalidProfile(format!(
                "{elements:?} is not a subgroup of (Z/{n}Z)^×"
            )));
        }
        Ok(p)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, k: i64) -> bool {
        self.elements.binary_search(&rem(k, self.modulus)).is_ok()
    }

    /// `U_e`: the image of the profile in `(Z/eZ)^×`, for `e | n`.
    pub fn projection(&self, e: u64) -> Vec<u64> {
        let set: BTreeSet<u64> = self.elements.iter().map(|&k| k % e).collect();
        set.into_iter().collect()
    }

    pub fn is_full(&self) -> bool {
        self.elements.len() == units(self.modulus).len()
    }
}

/// Profile selector accepted by [`make_profile`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileSpec {
    Rational,
    Cyclotomic,
    Generators(Vec<i64>),
}

impl std::str::FromStr for ProfileSpec {
    type Err = Error;

    /// `Q`, `cyclotomic`, or a comma-separated generator list such as `3,5`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" | "q" | "rational" => Ok(Self::Rational),
            "cyclotomic" => Ok(Self::Cyclotomic),
            other => other
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| Error::InvalidProfile(s.to_string())))
                .collect::<Result<Vec<_>>>()
                .map(Self::Generators),
        }
    }
}

pub fn make_profile(n: u64, spec: &ProfileSpec) -> Result<CyclotomicProfile> {
    match spec {
        ProfileSpec::Rational => Ok(CyclotomicProfile::rational(n)),
        ProfileSpec::Cyclotomic => Ok(CyclotomicProfile::cyclotomic(n)),
        ProfileSpec::Generators(g) => CyclotomicProfile::generated(n, g),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationType {
    pub id: usize,
    pub e: u64,
    pub representative: usize,
    pub class_orbit: Vec<usize>,
    #[serde(rename = "stabilizer_A")]
    pub stabilizer_a: Vec<u64>,
    #[serde(rename = "index_U_A")]
    pub index_u_a: u64,
}

/// All nontrivial ramification types of `(G, profile)`.
#[derive(Clone, Debug)]
pub struct RamificationTypes {
    group: Arc<FiniteGroup>,
    profile: CyclotomicProfile,
    types: Vec<RamificationType>,
    type_of_class: Vec<Option<usize>>,
}

pub fn ramification_types(group: &Arc<FiniteGroup>, profile: &CyclotomicProfile) -> Result<RamificationTypes> {
    let n = group.exponent();
    if profile.modulus() != n {
        return Err(Error::ModulusMismatch { profile: profile.modulus(), exponent: n });
    }
    let classes = group.conjugacy_classes();
    let mut type_of_class = vec![None; classes.len()];
    let mut types = Vec::new();
    for c in classes.iter().skip(1) {
        if type_of_class[c.id].is_some() {
            continue;
        }
        let id = types.len();
        let g = c.representative;
        let e = c.element_order as u64;
        let mut orbit = BTreeSet::new();
        for &k in profile.elements() {
            orbit.insert(group.class_of(group.pow(g, k as i64)));
        }
        for &cl in &orbit {
            type_of_class[cl] = Some(id);
        }
        let u_e = profile.projection(e);
        let stabilizer: Vec<u64> = u_e
            .iter()
            .copied()
            .filter(|&k| group.class_of(group.pow(g, k as i64)) == c.id)
            .collect();
        types.push(RamificationType {
            id,
            e,
            representative: g,
            class_orbit: orbit.into_iter().collect(),
            index_u_a: (u_e.len() / stabilizer.len()) as u64,
            stabilizer_a: stabilizer,
        });
    }
    Ok(RamificationTypes { group: group.clone(), profile: profile.clone(), types, type_of_class })
}

impl RamificationTypes {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn profile(&self) -> &CyclotomicProfile {
        &self.profile
    }

    pub fn types(&self) -> &[RamificationType] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn get(&self, id: usize) -> Result<&RamificationType> {
        self.types
            .get(id)
            .ok_or_else(|| Error::InvalidArgument(format!("no ramification type {id}")))
    }

    /// The type of tame data with inertia `⟨g⟩` and `γ(g) = ζ_e`.
    pub fn classify(&self, g: usize) -> Result<usize> {
        self.group.check_element(g)?;
        if g == 0 {
            return Err(Error::IdentityElement);
        }
        Ok(self.type_of_class[self.group.class_of(g)].expect("every nontrivial class has a type"))
    }

    /// Type id per conjugacy class, `None` for the identity class.
    pub fn type_of_class(&self) -> &[Option<usize>] {
        &self.type_of_class
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(&self.types).expect("types serialize")
    }
}

/// Result of [`kummer_type`]: inertia `⟨σ^r⟩` with `γ(σ^r) = ζ_n^{gcd(r,n)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KummerType {
    pub generator_exponent: u64,
    pub gamma_exponent: u64,
    pub inertia_order: u64,
    /// `None` when unramified (`r = 0`).
    pub type_id: Option<usize>,
}

/// Tame inertia of a Kummer extension `K(α^{1/n})` with `v(α) = r`, inside the
/// preset `C_n` (where element `k` is `σ^k`).
pub fn kummer_type(types: &RamificationTypes, r: u64) -> Result<KummerType> {
    let n = types.group.order() as u64;
    if !types.group.is_abelian() || types.group.exponent() != n {
        return Err(Error::InvalidArgument("Kummer types need the cyclic preset Cn".into()));
    }
    let r = r % n;
    if r == 0 {
        return Ok(KummerType { generator_exponent: 0, gamma_exponent: 0, inertia_order: 1, type_id: None });
    }
    let d = gcd(r, n);
    Ok(KummerType {
        generator_exponent: r,
        gamma_exponent: d,
        inertia_order: n / d,
        type_id: Some(types.classify(r as usize)?),
    })
}

/// A type whose cyclic inertia lies in no conjugate of the proper subgroup `h`.
/// Extensions realizing such a type cannot be induced from `h`-extensions, so
/// they are fields rather than products.
pub fn non_field_detector<'a>(types: &'a RamificationTypes, h: &Subgroup) -> Result<&'a RamificationType> {
    let g = &types.group;
    if h.len() == g.order() {
        return Err(Error::NotProper);
    }
    let conjugates: Vec<Subgroup> = (0..g.order()).map(|x| g.conjugate_subgroup(x, h)).collect();
    types
        .types
        .iter()
        .find(|t| conjugates.iter().all(|c| !c.contains(t.representative)))
        .ok_or_else(|| Error::TheoremViolation("G is a union of conjugates of a proper subgroup".into()))
}

/// A deterministic family of abstract wild data on `group`: for every subgroup
/// `I` and every nontrivial `W_0 ⊴ I` with `I/W_0` cyclic, the chain descending
/// through the largest proper `I`-normal subgroups of `W_0`, with breaks
/// `1, 5/2, 4, …` and the smallest element generating `I/W_0` as tame generator.
pub fn wild_data_family(group: &Arc<FiniteGroup>) -> Vec<RamificationDatum> {
    let subgroups = group.all_subgroups();
    let mut out = Vec::new();
    for inertia in &subgroups {
        let normal: Vec<&Subgroup> = subgroups
            .iter()
            .filter(|w| w.is_subset_of(inertia) && group.is_normal_in(w, inertia))
            .collect();
        for &w0 in normal.iter().filter(|w| !w.is_trivial()) {
            let Some(&g0) = inertia
                .elements()
                .iter()
                .find(|&&g| order_modulo(group, g, w0) * w0.len() == inertia.len())
            else {
                continue;
            };
            let mut chain = vec![(Rational::one(), w0.clone())];
            let mut current = w0;
            while !current.is_trivial() {
                let next = normal
                    .iter()
                    .filter(|w| w.is_subset_of(current) && w.len() < current.len())
                    .max_by_key(|w| w.len())
                    .expect("the trivial subgroup is normal");
                let k = chain.len() as i64;
                chain.push((Rational::new((2 + 3 * k).into(), 2.into()), (*next).clone()));
                current = next;
            }
            if let Ok(d) = RamificationDatum::new(group.clone(), inertia.clone(), chain, g0) {
                out.push(d);
            }
        }
    }
    out
}

fn order_modulo(group: &FiniteGroup, g: usize, w: &Subgroup) -> usize {
    let mut k = 1;
    let mut x = g;
    while !w.contains(x) {
        x = group.mul(x, g);
        k += 1;
    }
    k
}

/// Abstract local ramification data: inertia image `I`, a wild filtration
/// `W_0 ⊋ W_1 ⊋ … ⊋ {1}` with upper breaks `1 = u_0 < u_1 < …` (`W_k` is the
/// image of `I^t` for `t ∈ [u_k, u_{k+1})`), and the tame label
/// `γ: I/W_0 → μ_{e_0}` determined by `γ(g_0) = ζ_{e_0}`.
#[derive(Clone, Debug)]
pub struct RamificationDatum {
    group: Arc<FiniteGroup>,
    inertia: Subgroup,
    chain: Vec<(Rational, Subgroup)>,
    tame_generator: usize,
    e0: u64,
    labels: Vec<u64>,
}

impl PartialEq for RamificationDatum {
    fn eq(&self, other: &Self) -> bool {
        self.inertia == other.inertia
            && self.chain == other.chain
            && self.e0 == other.e0
            && self.labels == other.labels
    }
}

pub fn make_datum(
    group: &Arc<FiniteGroup>,
    inertia: &[usize],
    chain: &[(Rational, Vec<usize>)],
    tame_generator: usize,
) -> Result<RamificationDatum> {
    let inertia = group.subgroup(inertia)?;
    let chain = chain
        .iter()
        .map(|(u, w)| Ok((u.clone(), group.subgroup(w)?)))
        .collect::<Result<Vec<_>>>()?;
    RamificationDatum::new(group.clone(), inertia, chain, tame_generator)
}

/// The tame datum `I = ⟨g⟩`, `W_0 = 1`, `γ(g) = ζ_e` of a type representative.
pub fn make_tame_datum(types: &RamificationTypes, id: usize) -> Result<RamificationDatum> {
    let t = types.get(id)?;
    tame_datum_of(&types.group, t.representative)
}

/// Tame datum with inertia `⟨g⟩` and `γ(g) = ζ_{|g|}`; `g = 0` gives the
/// unramified datum.
pub fn tame_datum_of(group: &Arc<FiniteGroup>, g: usize) -> Result<RamificationDatum> {
    group.check_element(g)?;
    let inertia = group.cyclic(g);
    let chain = vec![(Rational::one(), group.identity_subgroup())];
    RamificationDatum::new(group.clone(), inertia, chain, g)
}

impl RamificationDatum {
    pub fn new(
        group: Arc<FiniteGroup>,
        inertia: Subgroup,
        chain: Vec<(Rational, Subgroup)>,
        tame_generator: usize,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidDatum(m));
        let Some((u0, w0)) = chain.first() else {
            return bad("wild chain is empty".into());
        };
        if !u0.is_one() {
            return bad(format!("first break must be 1, got {}", format_rational(u0)));
        }
        if !chain.last().expect("nonempty").1.is_trivial() {
            return bad("wild chain must end at the trivial group".into());
        }
        for (k, (u, w)) in chain.iter().enumerate() {
            if !w.is_subset_of(&inertia) {
                return bad(format!("W{k} is not contained in the inertia group"));
            }
            if !group.is_normal_in(w, &inertia) {
                return bad(format!("W{k} is not normal in the inertia group"));
            }
            if k > 0 {
                let (u_prev, w_prev) = &chain[k - 1];
                if u <= u_prev {
                    return bad(format!("breaks must increase strictly at W{k}"));
                }
                if !w.is_subset_of(w_prev) || w.len() == w_prev.len() {
                    return bad(format!("W{k} must be a proper subgroup of W{}", k - 1));
                }
            }
        }
        if !inertia.contains(tame_generator) {
            return bad("tame generator is not in the inertia group".into());
        }
        let mut e0 = 1u64;
        let mut x = tame_generator;
        while !w0.contains(x) {
            x = group.mul(x, tame_generator);
            e0 += 1;
        }
        if e0 as usize * w0.len() != inertia.len() {
            return bad("tame generator does not generate I/W0".into());
        }
        let mut labels = vec![0u64; group.order()];
        let mut coset_rep = 0;
        for j in 0..e0 {
            for &w in w0.elements() {
                labels[group.mul(coset_rep, w)] = j;
            }
            coset_rep = group.mul(coset_rep, tame_generator);
        }
        Ok(Self { group, inertia, chain, tame_generator, e0, labels })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn inertia(&self) -> &Subgroup {
        &self.inertia
    }

    /// `W_0`, the image of the wild inertia.
    pub fn wild(&self) -> &Subgroup {
        &self.chain[0].1
    }

    pub fn chain(&self) -> &[(Rational, Subgroup)] {
        &self.chain
    }

    pub fn tame_generator(&self) -> usize {
        self.tame_generator
    }

    pub fn e0(&self) -> u64 {
        self.e0
    }

    pub fn is_tame(&self) -> bool {
        self.wild().is_trivial()
    }

    /// `j` with `γ(x) = ζ_{e_0}^j`, for `x ∈ I`.
    pub fn label(&self, x: usize) -> u64 {
        debug_assert!(self.inertia.contains(x));
        self.labels[x]
    }

    /// The datum transported by the inner automorphism `g ↦ x g x⁻¹`.
    pub fn conjugate(&self, x: usize) -> Self {
        let g = &self.group;
        let chain = self
            .chain
            .iter()
            .map(|(u, w)| (u.clone(), g.conjugate_subgroup(x, w)))
            .collect();
        Self::new(g.clone(), g.conjugate_subgroup(x, &self.inertia), chain, g.conjugate(x, self.tame_generator))
            .expect("conjugation preserves datum invariants")
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(DatumSpec::from(self)).expect("datum serializes")
    }
}

/// JSON form of a datum: element lists and rational breaks as strings.
///
/// ```json
/// {"inertia":[0,1],"chain":[{"break":"1","group":[0,1]},{"break":"2","group":[0]}],"tame_generator":0}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumSpec {
    pub inertia: Vec<usize>,
    pub chain: Vec<ChainEntry>,
    pub tame_generator: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainEntry {
    #[serde(rename = "break")]
    pub upper_break: String,
    pub group: Vec<usize>,
}

impl DatumSpec {
    pub fn build(&self, group: &Arc<FiniteGroup>) -> Result<RamificationDatum> {
        let chain = self
            .chain
            .iter()
            .map(|c| {
                let u = parse_rational(&c.upper_break)?;
                if u.is_negative() {
                    return Err(Error::InvalidDatum("breaks must be positive".into()));
                }
                Ok((u, c.group.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        make_datum(group, &self.inertia, &chain, self.tame_generator)
    }
}

impl From<&RamificationDatum> for DatumSpec {
    fn from(d: &RamificationDatum) -> Self {
        Self {
            inertia: d.inertia.elements().to_vec(),
            chain: d
                .chain
                .iter()
                .map(|(u, w)| ChainEntry { upper_break: format_rational(u), group: w.elements().to_vec() })
                .collect(),
            tame_generator: d.tame_generator,
        }
    }
}

/// Every type as `{id, e, representative, class_orbit, stabilizer_A, index_U_A}`
/// plus the profile it was computed for.
pub fn types_document(types: &RamificationTypes) -> Value {
    json!({
        "group": types.group.name(),
        "modulus": types.profile.modulus(),
        "profile": types.profile.elements(),
        "types": types.to_json(),
    })
}
