//! Character tables by the Dixon–Burnside modular method, and class-function
//! arithmetic (inner products, restriction, induction, Galois orbits).

use std::fmt::Write as _;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{is_prime, lcm, mod_inv, mod_pow, primitive_root};
use crate::cyclotomic::{int, rational, root_of_unity, CyclotomicNumber, Rational};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::ramification::CyclotomicProfile;

/// Anything that can be evaluated on elements of a fixed group.
pub trait ClassFunction {
    fn group(&self) -> &Arc<FiniteGroup>;
    fn value(&self, g: usize) -> &CyclotomicNumber;
}

/// A (virtual) character of `G`, stored as one value per conjugacy class.
#[derive(Clone, Debug)]
pub struct Character {
    group: Arc<FiniteGroup>,
    values: Vec<CyclotomicNumber>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl Character {
    pub fn from_values(group: Arc<FiniteGroup>, values: Vec<CyclotomicNumber>) -> Result<Self> {
        if values.len() != group.num_classes() {
            return Err(Error::InvalidArgument(format!(
                "expected {} class values, got {}",
                group.num_classes(),
                values.len()
            )));
        }
        Ok(Self { group, values })
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let n = group.exponent();
        let values = vec![CyclotomicNumber::one(n); group.num_classes()];
        Self { group, values }
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let n = group.exponent();
        let values = vec![CyclotomicNumber::zero(n); group.num_classes()];
        Self { group, values }
    }

    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.exponent();
        let mut values = vec![CyclotomicNumber::zero(n); group.num_classes()];
        values[0] = CyclotomicNumber::from_int(n, group.order() as i64);
        Self { group, values }
    }

    pub fn values(&self) -> &[CyclotomicNumber] {
        &self.values
    }

    pub fn degree(&self) -> &CyclotomicNumber {
        &self.values[0]
    }

    pub fn scale(&self, k: i64) -> Self {
        let q = int(k);
        Self {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v.scale(&q)).collect(),
        }
    }

    /// The conjugate character `g ↦ σ_k(χ(g))`.
    pub fn galois_apply(&self, k: i64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .map(|v| v.galois_apply(k))
            .collect::<Result<_>>()?;
        Ok(Self { group: self.group.clone(), values })
    }

    /// True if every value is rational.
    pub fn is_rational(&self) -> bool {
        self.values.iter().all(|v| v.to_rational().is_some())
    }

    /// The pullback `ψ ∘ φ` to the source of `hom`.
    pub fn compose(&self, hom: &GroupHom) -> Result<Self> {
        if **hom.target() != *self.group {
            return Err(Error::InvalidArgument("character is not on the target of the hom".into()));
        }
        let src = hom.source().clone();
        let values = src
            .conjugacy_classes()
            .iter()
            .map(|c| self.value(hom.apply(c.representative)).clone())
            .collect();
        Ok(Self { group: src, values })
    }

    /// `⟨self, other⟩_G`, summed over classes.
    pub fn inner(&self, other: &Character) -> CyclotomicNumber {
        let g = &self.group;
        let mut acc = CyclotomicNumber::zero(g.exponent());
        for (c, (a, b)) in g.conjugacy_classes().iter().zip(self.values.iter().zip(&other.values)) {
            let term = (a * &b.conj()).scale(&int(c.size() as i64));
            acc = &acc + &term;
        }
        acc.scale(&rational(1, g.order() as i64))
    }

    /// Values formatted for text output.
    pub fn display_values(&self) -> Vec<String> {
        self.values.iter().map(ToString::to_string).collect()
    }
}

impl ClassFunction for Character {
    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn value(&self, g: usize) -> &CyclotomicNumber {
        &self.values[self.group.class_of(g)]
    }
}

impl Add for &Character {
    type Output = Character;
    fn add(self, other: &Character) -> Character {
        Character {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Character {
    type Output = Character;
    fn sub(self, other: &Character) -> Character {
        Character {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Character {
    type Output = Character;
    fn neg(self) -> Character {
        Character {
            group: self.group.clone(),
            values: self.values.iter().map(|a| -a).collect(),
        }
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.serialize(s)
    }
}

/// A function on a subgroup `H ≤ G`, extended by zero to all of `G`.
#[derive(Clone, Debug)]
pub struct SubgroupFunction {
    group: Arc<FiniteGroup>,
    subgroup: Subgroup,
    values: Vec<CyclotomicNumber>,
}

impl SubgroupFunction {
    /// Builds the function from values listed in the order of `subgroup.elements()`.
    pub fn new(group: Arc<FiniteGroup>, subgroup: Subgroup, values: Vec<CyclotomicNumber>) -> Result<Self> {
        if values.len() != subgroup.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} values on the subgroup, got {}",
                subgroup.len(),
                values.len()
            )));
        }
        let level = values.first().map_or(1, |v| v.level());
        let mut dense = vec![CyclotomicNumber::zero(level); group.order()];
        for (&h, v) in subgroup.elements().iter().zip(values) {
            dense[h] = v;
        }
        Ok(Self { group, subgroup, values: dense })
    }

    pub fn from_fn(
        group: Arc<FiniteGroup>,
        subgroup: Subgroup,
        f: impl Fn(usize) -> CyclotomicNumber,
    ) -> Self {
        let values = subgroup.elements().iter().map(|&h| f(h)).collect();
        Self::new(group, subgroup, values).expect("one value per element")
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }
}

impl ClassFunction for SubgroupFunction {
    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn value(&self, g: usize) -> &CyclotomicNumber {
        &self.values[g]
    }
}

/// `⟨a, b⟩_H = (1/|H|) Σ_{h∈H} a(h)·conj(b(h))`.
pub fn inner_product(a: &dyn ClassFunction, b: &dyn ClassFunction, on: &Subgroup) -> CyclotomicNumber {
    let level = a.group().exponent();
    let mut acc = CyclotomicNumber::zero(level);
    for &h in on.elements() {
        let bh = b.value(h);
        if bh.is_zero() {
            continue;
        }
        acc = &acc + &(a.value(h) * &bh.conj());
    }
    acc.scale(&rational(1, on.len() as i64))
}

/// `⟨a, 1⟩_H`, the average of `a` over `H`.
pub fn trivial_multiplicity(a: &dyn ClassFunction, on: &Subgroup) -> CyclotomicNumber {
    let mut acc = CyclotomicNumber::zero(a.group().exponent());
    for &h in on.elements() {
        acc = &acc + a.value(h);
    }
    acc.scale(&rational(1, on.len() as i64))
}

/// Like [`inner_product`], but checks that the element set is a subgroup first.
pub fn inner_product_on(
    a: &dyn ClassFunction,
    b: &dyn ClassFunction,
    elements: &[usize],
) -> Result<CyclotomicNumber> {
    let h = a.group().subgroup(elements)?;
    Ok(inner_product(a, b, &h))
}

pub fn restrict(psi: &Character, h: &Subgroup) -> SubgroupFunction {
    SubgroupFunction::from_fn(psi.group.clone(), h.clone(), |x| psi.value(x).clone())
}

/// `Ind_H^G ω (g) = (1/|H|) Σ_{x∈G, xgx⁻¹∈H} ω(xgx⁻¹)`.
pub fn induce(omega: &SubgroupFunction) -> Character {
    let g = omega.group.clone();
    let h = &omega.subgroup;
    let level = g.exponent();
    let values = g
        .conjugacy_classes()
        .iter()
        .map(|c| {
            let mut acc = CyclotomicNumber::zero(level);
            for x in 0..g.order() {
                let y = g.conjugate(x, c.representative);
                if h.contains(y) {
                    acc = &acc + omega.value(y);
                }
            }
            acc.scale(&rational(1, h.len() as i64))
        })
        .collect();
    Character { group: g, values }
}

/// The absolutely irreducible characters of a group.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    rows: Vec<Character>,
    prime: u64,
}

impl CharacterTable {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rows(&self) -> &[Character] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The prime used for the modular computation.
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.rows
            .iter()
            .map(|r| {
                let d = r.degree().to_rational().expect("degrees are integers");
                d.to_integer().try_into().expect("degree fits in u64")
            })
            .collect()
    }

    /// Multiplicities `⟨ψ, χ_i⟩_G` against every row.
    pub fn decompose(&self, psi: &Character) -> Vec<CyclotomicNumber> {
        self.rows.iter().map(|chi| psi.inner(chi)).collect()
    }

    /// Integer multiplicities of a virtual character, or an error if `ψ` is
    /// not an integer combination of rows.
    pub fn integer_multiplicities(&self, psi: &Character) -> Result<Vec<i64>> {
        self.decompose(psi)
            .into_iter()
            .map(|m| {
                m.to_rational()
                    .filter(|q| q.is_integer())
                    .and_then(|q| i64::try_from(q.to_integer()).ok())
                    .ok_or_else(|| Error::NotRational(format!("multiplicity {m} is not an integer")))
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let g = &self.group;
        let classes: Vec<Value> = g
            .conjugacy_classes()
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "representative": c.representative,
                    "size": c.size(),
                    "element_order": c.element_order,
                })
            })
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| serde_json::to_value(r).expect("character serializes"))
            .collect();
        json!({
            "group": g.name(),
            "order": g.order(),
            "exponent": g.exponent(),
            "classes": classes,
            "rows": rows,
        })
    }

    pub fn to_text(&self) -> String {
        let g = &self.group;
        let mut cells: Vec<Vec<String>> = Vec::new();
        let mut header = vec![String::new()];
        header.extend(g.conjugacy_classes().iter().map(|c| format!("{}{}", c.element_order, class_letter(c.id))));
        cells.push(header);
        let mut sizes = vec!["size".to_string()];
        sizes.extend(g.conjugacy_classes().iter().map(|c| c.size().to_string()));
        cells.push(sizes);
        for (i, r) in self.rows.iter().enumerate() {
            let mut line = vec![format!("X.{}", i + 1)];
            line.extend(r.display_values());
            cells.push(line);
        }
        let cols = cells[0].len();
        let widths: Vec<usize> = (0..cols)
            .map(|j| cells.iter().map(|l| l[j].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in &cells {
            let padded: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        }
        out
    }
}

fn class_letter(id: usize) -> String {
    // a, b, ..., z, aa, ab, ...
    let mut s = String::new();
    let mut n = id;
    loop {
        s.insert(0, (b'a' + (n % 26) as u8) as char);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    s
}

/// Character table by Dixon–Burnside: simultaneous eigenvectors of the class
/// multiplication matrices over `F_p`, lifted to `Q(ζ_exponent)`.
pub fn character_table(group: &Arc<FiniteGroup>) -> Result<CharacterTable> {
    let g = group.as_ref();
    let order = g.order() as u64;
    let e = g.exponent();
    let r = g.num_classes();
    let p = choose_prime(order, e);
    let classes = g.conjugacy_classes();
    let sizes: Vec<u64> = classes.iter().map(|c| c.size() as u64).collect();

    // coeff[i][j][k] = #{x ∈ C_i : x⁻¹ z_k ∈ C_j}
    let mut coeff = vec![vec![vec![0u64; r]; r]; r];
    for (k, ck) in classes.iter().enumerate() {
        let z = ck.representative;
        for x in 0..g.order() {
            let i = g.class_of(x);
            let j = g.class_of(g.mul(g.inv(x), z));
            coeff[i][j][k] += 1;
        }
    }

    let mut pending: Vec<Vec<Vec<u64>>> = vec![identity_basis(r)];
    let mut done: Vec<Vec<u64>> = Vec::new();
    for m in coeff.iter().skip(1) {
        if pending.is_empty() {
            break;
        }
        let matrix: Vec<Vec<u64>> = m.iter().map(|row| row.iter().map(|&c| c % p).collect()).collect();
        let mut next = Vec::new();
        for basis in pending {
            for piece in split_by(&matrix, &basis, p) {
                if piece.len() == 1 {
                    done.push(piece.into_iter().next().expect("one vector"));
                } else {
                    next.push(piece);
                }
            }
        }
        pending = next;
    }
    for basis in pending {
        // only reachable for the trivial group, whose one class gives no matrices to split by
        if basis.len() != 1 {
            return Err(Error::InvalidGroup("class algebra failed to split".into()));
        }
        done.extend(basis);
    }
    if done.len() != r {
        return Err(Error::InvalidGroup(format!("found {} characters for {r} classes", done.len())));
    }

    let root = mod_pow(primitive_root(p), (p - 1) / e, p);
    let inverse_class: Vec<usize> = classes.iter().map(|c| g.class_of(g.inv(c.representative))).collect();
    let max_degree = (order as f64).sqrt().floor() as u64 + 1;
    let mut rows = Vec::with_capacity(r);
    for w in done {
        let w0_inv = mod_inv(w[0], p);
        let w: Vec<u64> = w.iter().map(|&x| x * w0_inv % p).collect();
        let mut s = 0;
        for j in 0..r {
            s = (s + w[j] * w[inverse_class[j]] % p * mod_inv(sizes[j] % p, p)) % p;
        }
        let target = order % p * mod_inv(s, p) % p;
        let d = (1..=max_degree)
            .find(|&d| d * d % p == target && order.is_multiple_of(d))
            .ok_or_else(|| Error::InvalidGroup("no admissible character degree".into()))?;
        let modular: Vec<u64> = (0..r)
            .map(|j| w[j] * d % p * mod_inv(sizes[j] % p, p) % p)
            .collect();
        let values = classes
            .iter()
            .map(|c| lift_value(g, c.representative, &modular, root, e, d, p))
            .collect::<Result<Vec<_>>>()?;
        rows.push(Character { group: group.clone(), values });
    }
    rows.sort_by(|a, b| {
        let da = a.degree().coeffs()[0].clone();
        let db = b.degree().coeffs()[0].clone();
        let trivial_a = a.values.iter().all(|v| *v == CyclotomicNumber::one(1));
        let trivial_b = b.values.iter().all(|v| *v == CyclotomicNumber::one(1));
        da.cmp(&db)
            .then(trivial_b.cmp(&trivial_a))
            .then_with(|| {
                for (x, y) in a.values.iter().zip(&b.values) {
                    let o = y.cmp_canonical(x);
                    if o.is_ne() {
                        return o;
                    }
                }
                std::cmp::Ordering::Equal
            })
    });
    Ok(CharacterTable { group: group.clone(), rows, prime: p })
}

fn choose_prime(order: u64, e: u64) -> u64 {
    let bound = 2.0 * (order as f64).sqrt();
    let mut p = e + 1;
    loop {
        if p as f64 > bound && is_prime(p) {
            return p;
        }
        p += e;
    }
}

/// Recovers `χ(g)` from `χ(g^k) mod p` by discrete Fourier inversion on `⟨g⟩`.
fn lift_value(
    g: &FiniteGroup,
    rep: usize,
    modular: &[u64],
    root: u64,
    e: u64,
    degree: u64,
    p: u64,
) -> Result<CyclotomicNumber> {
    let o = g.element_order(rep) as u64;
    let z = mod_pow(root, e / o, p);
    let o_inv = mod_inv(o % p, p);
    let powers: Vec<u64> = (0..o).map(|k| modular[g.class_of(g.pow(rep, k as i64))]).collect();
    let mut value = CyclotomicNumber::zero(e);
    for l in 0..o {
        let mut m = 0;
        for (k, &chi) in powers.iter().enumerate() {
            let exp = (o - (l * k as u64) % o) % o;
            m = (m + chi * mod_pow(z, exp, p)) % p;
        }
        m = m * o_inv % p;
        if m > degree {
            return Err(Error::InvalidGroup(format!("eigenvalue multiplicity {m} exceeds degree {degree}")));
        }
        if m > 0 {
            let term = root_of_unity(e, (l * (e / o)) as i64).scale(&int(m as i64));
            value = &value + &term;
        }
    }
    Ok(value)
}

fn identity_basis(r: usize) -> Vec<Vec<u64>> {
    (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        })
        .collect()
}

/// Splits an invariant subspace (rows in reduced echelon form) into the
/// eigenspaces of `matrix` acting on column vectors.
fn split_by(matrix: &[Vec<u64>], basis: &[Vec<u64>], p: u64) -> Vec<Vec<Vec<u64>>> {
    let d = basis.len();
    let r = matrix.len();
    let pivots: Vec<usize> = basis
        .iter()
        .map(|b| b.iter().position(|&x| x != 0).expect("nonzero basis vector"))
        .collect();
    let images: Vec<Vec<u64>> = basis
        .iter()
        .map(|b| {
            (0..r)
                .map(|j| matrix[j].iter().zip(b).fold(0, |acc, (&m, &x)| (acc + m * x) % p))
                .collect()
        })
        .collect();
    // restricted[t][s] = coordinate t of M·b_s
    let restricted: Vec<Vec<u64>> = (0..d)
        .map(|t| (0..d).map(|s| images[s][pivots[t]]).collect())
        .collect();
    let mut pieces = Vec::new();
    let mut found = 0;
    for lambda in charpoly_roots(&restricted, p) {
        let mut shifted = restricted.clone();
        for (t, row) in shifted.iter_mut().enumerate() {
            row[t] = (row[t] + p - lambda) % p;
        }
        let kernel = nullspace(&shifted, p);
        if kernel.is_empty() {
            continue;
        }
        found += kernel.len();
        let vectors: Vec<Vec<u64>> = kernel
            .iter()
            .map(|y| {
                let mut v = vec![0; r];
                for (s, &ys) in y.iter().enumerate() {
                    if ys != 0 {
                        for (vi, &bi) in v.iter_mut().zip(&basis[s]) {
                            *vi = (*vi + ys * bi) % p;
                        }
                    }
                }
                v
            })
            .collect();
        pieces.push(rref(vectors, p));
        if found == d {
            break;
        }
    }
    debug_assert_eq!(found, d, "class matrices are simultaneously diagonalizable");
    pieces
}

/// Distinct roots in `F_p` of the characteristic polynomial.
fn charpoly_roots(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let d = a.len();
    if d == 1 {
        return vec![a[0][0]];
    }
    // Faddeev–LeVerrier: c_{d-k} = -(1/k) tr(A M_k), M_{k+1} = A M_k + c_{d-k} I
    let mut coeffs = vec![0u64; d + 1];
    coeffs[d] = 1;
    let mut m = identity_basis(d);
    for k in 1..=d {
        let am = mat_mul(a, &m, p);
        let trace = (0..d).fold(0, |acc, i| (acc + am[i][i]) % p);
        let c = (p - trace) % p * mod_inv(k as u64 % p, p) % p;
        coeffs[d - k] = c;
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = (row[i] + c) % p;
        }
    }
    (0..p)
        .filter(|&x| coeffs.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0)
        .collect()
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let d = a.len();
    let mut out = vec![vec![0; d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..d {
                out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % p;
            }
        }
    }
    out
}

fn rref(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = mod_inv(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col];
                for c in 0..ncols {
                    rows[i][c] = (rows[i][c] + p - f * rows[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Basis of `{y : A y = 0}`.
fn nullspace(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.first().map_or(0, Vec::len);
    let reduced = rref(a.to_vec(), p);
    let pivots: Vec<usize> = reduced
        .iter()
        .map(|row| row.iter().position(|&x| x != 0).expect("nonzero row"))
        .collect();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut y = vec![0; n];
            y[free] = 1;
            for (row, &pc) in reduced.iter().zip(&pivots) {
                y[pc] = (p - row[free]) % p;
            }
            y
        })
        .collect()
}

/// Sums of the nontrivial irreducible characters over orbits of the profile's
/// Galois action, ordered by the smallest row index in each orbit.
pub fn galois_orbit_characters(table: &CharacterTable, profile: &CyclotomicProfile) -> Result<Vec<Character>> {
    let g = &table.group;
    if profile.modulus() != g.exponent() {
        return Err(Error::ModulusMismatch { profile: profile.modulus(), exponent: g.exponent() });
    }
    let rows = &table.rows;
    let mut seen = vec![false; rows.len()];
    let mut out = Vec::new();
    for i in 1..rows.len() {
        if seen[i] {
            continue;
        }
        let mut sum = Character::zero(g.clone());
        for &k in profile.elements() {
            let conj = rows[i].galois_apply(k as i64)?;
            let j = rows
                .iter()
                .position(|r| *r == conj)
                .ok_or_else(|| Error::InvalidGroup("Galois conjugate is not a row".into()))?;
            if !seen[j] {
                seen[j] = true;
                sum = &sum + &rows[j];
            }
        }
        out.push(sum);
    }
    Ok(out)
}

/// The orbit of each nontrivial row index under the profile, as a partition
/// of `1..rows`.
pub fn galois_orbits(table: &CharacterTable, profile: &CyclotomicProfile) -> Result<Vec<Vec<usize>>> {
    let rows = &table.rows;
    let mut seen = vec![false; rows.len()];
    let mut out = Vec::new();
    for i in 1..rows.len() {
        if seen[i] {
            continue;
        }
        let mut orbit = Vec::new();
        for &k in profile.elements() {
            let conj = rows[i].galois_apply(k as i64)?;
            if let Some(j) = rows.iter().position(|r| *r == conj) {
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    Ok(out)
}

/// Checks that `χ(1)` divides `|G|` and the two orthogonality relations hold.
pub fn check_orthogonality(table: &CharacterTable) -> bool {
    let g = &table.group;
    let rows = &table.rows;
    let one = CyclotomicNumber::one(1);
    let zero = CyclotomicNumber::zero(1);
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate() {
            let ip = a.inner(b);
            if ip != if i == j { one.clone() } else { zero.clone() } {
                return false;
            }
        }
    }
    let classes = g.conjugacy_classes();
    for (s, cs) in classes.iter().enumerate() {
        for (t, _) in classes.iter().enumerate() {
            let mut acc = CyclotomicNumber::zero(g.exponent());
            for r in rows {
                acc = &acc + &(&r.values[s] * &r.values[t].conj());
            }
            let expected = if s == t {
                Rational::from_integer((g.order() / cs.size()).into())
            } else {
                Rational::zero()
            };
            if acc != CyclotomicNumber::from_rational(1, expected) {
                return false;
            }
        }
    }
    rows.iter().all(|r| {
        r.degree()
            .to_rational()
            .is_some_and(|d| d.is_integer() && (Rational::from_integer((g.order() as i64).into()) / d).is_integer())
    })
}

/// True if every coefficient of every value is an integer.
pub fn has_integral_values(table: &CharacterTable) -> bool {
    table
        .rows
        .iter()
        .all(|r| r.values.iter().all(|v| v.coeffs().iter().all(|c| c.is_integer())))
}

/// The irreducible character `g ↦ ζ^{j(g)}` of a cyclic subgroup, where `ζ`
/// is a primitive `level`-th root and `label` gives `j` per element.
pub fn cyclic_subgroup_character(
    group: Arc<FiniteGroup>,
    subgroup: Subgroup,
    level: u64,
    label: impl Fn(usize) -> i64,
) -> SubgroupFunction {
    let big = lcm(group.exponent(), level);
    SubgroupFunction::from_fn(group, subgroup, |h| root_of_unity(big, label(h) * (big / level) as i64))
}
