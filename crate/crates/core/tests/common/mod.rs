//! Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ramification::character::{character_table, galois_orbit_characters, Character, CharacterTable};
use ramification::counting::LocalFactor;
use ramification::cyclotomic::{int, rational};
use ramification::group::preset;
use ramification::ramification::{CyclotomicProfile, RamificationDatum};
use ramification::verify::DEFAULT_GROUPS;
use ramification::{FiniteGroup, GroupHom, Rational, Subgroup};

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A corpus group with everything the generators need, built once.
pub struct Fixture {
    pub group: Arc<FiniteGroup>,
    pub table: CharacterTable,
    pub subgroups: Vec<Subgroup>,
    /// Sums over `Gal(Q(ζ_n)/Q)`-orbits of nontrivial irreducibles.
    pub rational_chars: Vec<Character>,
}

pub fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        DEFAULT_GROUPS
            .iter()
            .map(|name| {
                let group = Arc::new(preset(name).unwrap());
                let table = character_table(&group).unwrap();
                let profile = CyclotomicProfile::rational(group.exponent());
                let rational_chars = galois_orbit_characters(&table, &profile).unwrap();
                Fixture { subgroups: group.all_subgroups(), group, table, rational_chars }
            })
            .collect()
    })
}

pub fn fixture(name: &str) -> &'static Fixture {
    let i = DEFAULT_GROUPS.iter().position(|g| *g == name).expect("corpus group");
    &fixtures()[i]
}

fn order_modulo(g: &FiniteGroup, x: usize, w: &Subgroup) -> usize {
    let mut k = 1;
    let mut y = x;
    while !w.contains(y) {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

fn random_break_step(rng: &mut TestRng) -> Rational {
    rational(rng.gen_range(1..=12), rng.gen_range(1..=4))
}

/// A random valid datum: any subgroup `I`, any `W_0 ⊴ I` with `I/W_0` cyclic,
/// a random descending chain of `I`-normal subgroups with random breaks.
/// `W_0 = 1` gives a tame datum.
pub fn random_datum(f: &Fixture, rng: &mut TestRng) -> RamificationDatum {
    let g = &f.group;
    loop {
        let inertia = f.subgroups.choose(rng).unwrap();
        let normal: Vec<&Subgroup> = f
            .subgroups
            .iter()
            .filter(|w| w.is_subset_of(inertia) && g.is_normal_in(w, inertia))
            .collect();
        let w0 = *normal.choose(rng).unwrap();
        let gens: Vec<usize> = inertia
            .elements()
            .iter()
            .copied()
            .filter(|&x| order_modulo(g, x, w0) * w0.len() == inertia.len())
            .collect();
        let Some(&g0) = gens.choose(rng) else { continue };
        let mut chain = vec![(Rational::one(), w0.clone())];
        let mut current = w0;
        let mut u = Rational::one();
        while !current.is_trivial() {
            let smaller: Vec<&&Subgroup> =
                normal.iter().filter(|w| w.is_subset_of(current) && w.len() < current.len()).collect();
            let next = **smaller.choose(rng).unwrap();
            u += random_break_step(rng);
            chain.push((u.clone(), next.clone()));
            current = next;
        }
        return RamificationDatum::new(g.clone(), inertia.clone(), chain, g0).expect("generated datum is valid");
    }
}

/// A datum with nontrivial wild part, for groups that have one.
pub fn random_wild_datum(f: &Fixture, rng: &mut TestRng) -> Option<RamificationDatum> {
    (0..200).map(|_| random_datum(f, rng)).find(|d| !d.is_tame())
}

/// `Σ a_i χ_i` with small integer coefficients over all irreducibles.
pub fn random_virtual(f: &Fixture, rng: &mut TestRng) -> Character {
    let mut acc = Character::zero(f.group.clone());
    for row in f.table.rows() {
        let a = rng.gen_range(-2..=2);
        if a != 0 {
            acc = &acc + &row.scale(a);
        }
    }
    acc
}

/// A random `Q`-rational virtual character.
pub fn random_rational_virtual(f: &Fixture, rng: &mut TestRng) -> Character {
    let mut acc = Character::trivial(f.group.clone()).scale(rng.gen_range(-2..=2));
    for psi in &f.rational_chars {
        let a = rng.gen_range(-3..=3);
        if a != 0 {
            acc = &acc + &psi.scale(a);
        }
    }
    acc
}

/// A random homomorphism out of `f.group` into some corpus group, found by
/// sampling generator images; falls back to the trivial map.
pub fn random_hom(f: &Fixture, rng: &mut TestRng) -> (GroupHom, &'static Fixture) {
    if rng.gen_bool(0.25) {
        let own = fixtures().iter().find(|t| Arc::ptr_eq(&t.group, &f.group)).unwrap();
        let x = rng.gen_range(0..f.group.order());
        return (GroupHom::conjugation(f.group.clone(), x), own);
    }
    let target = fixtures().choose(rng).unwrap();
    let gens = f.group.generating_set();
    for _ in 0..200 {
        let images: Vec<(usize, usize)> =
            gens.iter().map(|&s| (s, rng.gen_range(0..target.group.order()))).collect();
        if let Ok(h) = GroupHom::from_generators(f.group.clone(), target.group.clone(), &images) {
            return (h, target);
        }
    }
    let trivial = GroupHom::from_map(f.group.clone(), target.group.clone(), vec![0; f.group.order()]).unwrap();
    (trivial, target)
}

/// Coefficients of `Π_q (b_q + Σ_i c_{q,i} q^{-s_i})` with every `x_i ≤ limit_i`,
/// by multiplying out one factor at a time.
pub fn naive_expansion(factors: &[LocalFactor], limits: &[u64]) -> HashMap<Vec<u64>, Rational> {
    naive_expansion_where(factors, limits.len(), |x| x.iter().zip(limits).all(|(a, b)| a <= b))
}

/// As [`naive_expansion`], keeping only exponent vectors accepted by `keep`,
/// which must be monotone (rejecting `x` rejects every multiple of it).
pub fn naive_expansion_where(
    factors: &[LocalFactor],
    m: usize,
    keep: impl Fn(&[u64]) -> bool,
) -> HashMap<Vec<u64>, Rational> {
    let mut poly: HashMap<Vec<u64>, Rational> = HashMap::new();
    if keep(&vec![1; m]) {
        poly.insert(vec![1; m], int(1));
    }
    for f in factors {
        let mut next: HashMap<Vec<u64>, Rational> = HashMap::new();
        for (x, a) in &poly {
            if !f.b.is_zero() {
                *next.entry(x.clone()).or_insert_with(Rational::zero) += a * &f.b;
            }
            for (i, c) in f.c.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut y = x.clone();
                y[i] *= f.prime;
                if keep(&y) {
                    *next.entry(y).or_insert_with(Rational::zero) += a * c;
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        poly = next;
    }
    poly
}

/// Box sum with pins from the naive expansion.
pub fn naive_box(factors: &[LocalFactor], bounds: &[u64], pins: &[(usize, u64)]) -> Rational {
    let mut limits = bounds.to_vec();
    for &(i, v) in pins {
        limits[i] = v;
    }
    naive_expansion(factors, &limits)
        .into_iter()
        .filter(|(x, _)| {
            x.iter()
                .enumerate()
                .all(|(i, &xi)| match pins.iter().find(|p| p.0 == i) {
                    Some(&(_, v)) => xi == v,
                    None => xi <= bounds[i],
                })
        })
        .fold(Rational::zero(), |acc, (_, v)| acc + v)
}

pub const SMALL_PRIMES: [u64; 25] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn random_coefficient(rng: &mut TestRng) -> Rational {
    match rng.gen_range(0..10) {
        0..=2 => int(0),
        3..=6 => int(1),
        7 => int(rng.gen_range(2..=5)),
        8 => rational(1, rng.gen_range(2..=4)),
        _ => rational(rng.gen_range(1..=7), rng.gen_range(1..=3)),
    }
}

/// Random factors on at most 20 distinct primes for `m` coordinates; a few
/// have `b ≠ 1`.
pub fn random_factors(rng: &mut TestRng, m: usize) -> Vec<LocalFactor> {
    let k = rng.gen_range(0..=20);
    let primes: Vec<u64> = SMALL_PRIMES.choose_multiple(rng, k).copied().collect();
    primes
        .into_iter()
        .map(|q| {
            let c = (0..m).map(|_| random_coefficient(rng)).collect();
            let b = match rng.gen_range(0..8) {
                0 => int(0),
                1 => int(rng.gen_range(2..=4)),
                2 => rational(1, 2),
                _ => int(1),
            };
            LocalFactor::new(q, b, c)
        })
        .collect()
}
