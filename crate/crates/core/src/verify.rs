//! The verification corpus: exact invariant checks over a list of groups and
//! profiles, reporting the first witness of every violated invariant.

use std::sync::Arc;

use num::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{euler_phi, gcd, is_prime, mult_order};
use crate::character::{character_table, check_orthogonality, galois_orbit_characters, Character, CharacterTable};
use crate::conductor::{
    artin_conductor, conductor_matrix, fine_conductor, fine_minus_artin, is_nonnegative_integer,
};
use crate::counting::{local_mass, local_mass_at_norm, local_mass_bruteforce, residue_degree};
use crate::cyclotomic::{format_rational, int, Rational};
use crate::error::{Error, Result};
use crate::group::{preset, FiniteGroup};
use crate::ramification::{
    make_profile, make_tame_datum, non_field_detector, ramification_types, wild_data_family, CyclotomicProfile,
    ProfileSpec, RamificationDatum, RamificationTypes,
};

pub const DEFAULT_GROUPS: [&str; 17] = [
    "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C2xC2", "C2xC4", "C3xC3", "S3", "S4", "A4", "D4", "D5", "D6", "Q8",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub group: String,
    pub profile: String,
    #[serde(skip)]
    pub spec: ProfileSpec,
}

/// The subgroup `⟨k⟩` for the first `k` with `1 < |⟨k⟩| < φ(n)`, if any.
pub fn intermediate_generator(n: u64) -> Option<u64> {
    let phi = euler_phi(n);
    (2..n).find(|&k| gcd(k, n) == 1 && {
        let o = mult_order(k, n);
        o > 1 && o < phi
    })
}

/// Every default group with the profiles `Q`, `cyclotomic` and, when
/// `(Z/nZ)^×` has one, an intermediate cyclic subgroup.
pub fn default_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for name in DEFAULT_GROUPS {
        let n = preset(name).expect("preset").exponent();
        out.push(CorpusEntry { group: name.to_string(), profile: "Q".into(), spec: ProfileSpec::Rational });
        out.push(CorpusEntry { group: name.to_string(), profile: "cyclotomic".into(), spec: ProfileSpec::Cyclotomic });
        if let Some(k) = intermediate_generator(n) {
            out.push(CorpusEntry {
                group: name.to_string(),
                profile: format!("<{k}>"),
                spec: ProfileSpec::Generators(vec![k as i64]),
            });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub invariant: &'static str,
    pub group: String,
    pub profile: String,
    pub cases: usize,
    pub passed: bool,
    /// First counterexample, if any.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn violations(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

/// Collects cases of one invariant, keeping the first failure.
struct Check {
    cases: usize,
    witness: Option<String>,
}

impl Check {
    fn new() -> Self {
        Self { cases: 0, witness: None }
    }

    fn case(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn result(&mut self, r: Result<bool>, witness: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.case(ok, witness),
            Err(e) => self.case(false, || format!("{}: {e}", witness())),
        }
    }

    fn finish(self, invariant: &'static str, entry: &CorpusEntry) -> CheckOutcome {
        CheckOutcome {
            invariant,
            group: entry.group.clone(),
            profile: entry.profile.clone(),
            cases: self.cases,
            passed: self.witness.is_none(),
            witness: self.witness,
        }
    }
}

struct Context {
    group: Arc<FiniteGroup>,
    table: CharacterTable,
    types: RamificationTypes,
    rational_chars: Vec<Character>,
    profile_chars: Vec<Character>,
}

fn context(entry: &CorpusEntry) -> Result<Context> {
    let group = Arc::new(preset(&entry.group)?);
    let n = group.exponent();
    let profile = make_profile(n, &entry.spec)?;
    let table = character_table(&group)?;
    let types = ramification_types(&group, &profile)?;
    let rational_chars = galois_orbit_characters(&table, &CyclotomicProfile::rational(n))?;
    let profile_chars = galois_orbit_characters(&table, &profile)?;
    Ok(Context { group, table, types, rational_chars, profile_chars })
}

fn group_invariants(ctx: &Context) -> Check {
    let g = &ctx.group;
    let mut c = Check::new();
    let total: usize = g.conjugacy_classes().iter().map(|cl| cl.size()).sum();
    c.case(total == g.order(), || format!("class sizes sum to {total}"));
    for cl in g.conjugacy_classes() {
        let r = cl.representative;
        c.case(g.centralizer_order(r) * cl.size() == g.order(), || format!("class {} of element {r}", cl.id));
    }
    c
}

fn table_invariants(ctx: &Context) -> Check {
    let mut c = Check::new();
    c.case(check_orthogonality(&ctx.table), || "orthogonality fails".into());
    let sum: u64 = ctx.table.degrees().iter().map(|d| d * d).sum();
    c.case(sum == ctx.group.order() as u64, || format!("Σ χ(1)² = {sum}"));
    c
}

fn rational_family(chars: &[Character]) -> Vec<(String, Character)> {
    let mut out: Vec<(String, Character)> = chars.iter().enumerate().map(|(i, c)| (format!("ψ{i}"), c.clone())).collect();
    for i in 0..chars.len() {
        for j in 0..chars.len() {
            if i != j {
                out.push((format!("ψ{i} − 2ψ{j}"), &chars[i] - &chars[j].scale(2)));
            }
        }
    }
    out
}

fn data(ctx: &Context, wild: &[RamificationDatum]) -> Vec<(String, RamificationDatum)> {
    let mut out: Vec<(String, RamificationDatum)> = (0..ctx.types.len())
        .map(|i| (format!("tame type {i}"), make_tame_datum(&ctx.types, i).expect("type datum")))
        .collect();
    out.extend(wild.iter().enumerate().map(|(k, d)| (format!("wild datum {k} {}", d.to_json()), d.clone())));
    out
}

fn conductor_checks(ctx: &Context, wild: &[RamificationDatum]) -> (Check, Check, Check) {
    let data = data(ctx, wild);
    let mut same = Check::new();
    for (cname, psi) in rational_family(&ctx.rational_chars) {
        for (dname, d) in &data {
            let r = fine_conductor(d, &psi).and_then(|f| Ok(f == artin_conductor(d, &psi)?));
            same.result(r, || format!("{cname} on {dname}"));
        }
    }
    let mut diff = Check::new();
    let mut integral = Check::new();
    for (k, psi) in ctx.profile_chars.iter().enumerate() {
        for (dname, d) in &data {
            let r = (|| Ok(fine_conductor(d, psi)? - artin_conductor(d, psi)? == fine_minus_artin(d, psi)?))();
            diff.result(r, || format!("ψ{k} on {dname}"));
            if d.is_tame() {
                let r = fine_conductor(d, psi).map(|f| is_nonnegative_integer(&f));
                integral.result(r, || format!("ψ{k} on {dname}"));
            }
        }
    }
    (same, diff, integral)
}

fn mass_check(ctx: &Context) -> Check {
    let mut c = Check::new();
    let order = ctx.group.order() as u64;
    let n = ctx.group.exponent();
    let profile = ctx.types.profile();
    for q in (2..=50).filter(|&q| is_prime(q) && !order.is_multiple_of(q)) {
        let norm = if profile.contains((q % n) as i64) {
            q
        } else {
            let outside = matches!(local_mass(&ctx.types, 0, q), Err(Error::FrobeniusOutsideProfile { .. }));
            c.case(outside || ctx.types.is_empty(), || format!("q={q} outside the profile was accepted"));
            q.pow(residue_degree(&ctx.types, q) as u32)
        };
        let brute = match local_mass_bruteforce(&ctx.types, norm) {
            Ok(b) => b,
            Err(e) => {
                c.case(false, || format!("norm {norm}: {e}"));
                continue;
            }
        };
        c.case(brute.unramified == int(1), || format!("norm {norm}: unramified mass {}", format_rational(&brute.unramified)));
        for (i, b) in brute.by_type.iter().enumerate() {
            let r = local_mass_at_norm(&ctx.types, i, norm).map(|m| m == *b);
            c.result(r, || format!("norm {norm}, type {i}: brute force {}", format_rational(b)));
        }
        // Σ masses + 1 = (1/#G)·#{tame pairs}
        let pairs = (0..ctx.group.order())
            .map(|t| {
                let target = ctx.group.pow(t, (norm % n) as i64);
                (0..ctx.group.order()).filter(|&p| ctx.group.conjugate(p, t) == target).count()
            })
            .sum::<usize>();
        let total: Rational = brute.by_type.iter().fold(Rational::zero(), |a, b| a + b) + int(1);
        c.case(total == Rational::new((pairs as i64).into(), (order as i64).into()), || {
            format!("norm {norm}: total mass {}", format_rational(&total))
        });
    }
    c
}

fn detector_check(ctx: &Context) -> Check {
    let mut c = Check::new();
    if ctx.group.order() > 24 {
        return c;
    }
    for h in ctx.group.all_subgroups() {
        if h.len() == ctx.group.order() {
            continue;
        }
        let r = non_field_detector(&ctx.types, &h).map(|_| true);
        c.result(r, || format!("subgroup {:?}", h.elements()));
    }
    c
}

/// All invariants for one corpus entry. `wild` is the wild data family of
/// the entry's group.
fn verify_entry(entry: &CorpusEntry, wild: &[RamificationDatum]) -> Vec<CheckOutcome> {
    let ctx = match context(entry) {
        Ok(c) => c,
        Err(e) => {
            let mut c = Check::new();
            c.case(false, || e.to_string());
            return vec![c.finish("setup", entry)];
        }
    };
    let mut out = vec![
        group_invariants(&ctx).finish("group-invariants", entry),
        table_invariants(&ctx).finish("character-table", entry),
    ];
    let mut count = Check::new();
    count.case(ctx.types.len() == ctx.profile_chars.len(), || {
        format!("{} types, {} orbit characters", ctx.types.len(), ctx.profile_chars.len())
    });
    out.push(count.finish("type-character-count", entry));
    let mut matrix = Check::new();
    matrix.result(conductor_matrix(&ctx.types, &ctx.table).map(|m| !m.determinant.is_zero()), || {
        "conductor matrix".into()
    });
    out.push(matrix.finish("conductor-matrix-invertible", entry));
    let (same, diff, integral) = conductor_checks(&ctx, wild);
    out.push(same.finish("fine-equals-artin-rational", entry));
    out.push(diff.finish("fine-minus-artin-identity", entry));
    out.push(integral.finish("tame-fine-integral", entry));
    out.push(mass_check(&ctx).finish("local-mass-oracle", entry));
    out.push(detector_check(&ctx).finish("non-field-detector", entry));
    out
}

/// Runs every entry (in parallel) and reports in corpus order.
pub fn run_verify(corpus: &[CorpusEntry]) -> VerifyReport {
    let outcomes = corpus
        .par_iter()
        .map(|e| {
            let wild = preset(&e.group).map(|g| wild_data_family(&Arc::new(g))).unwrap_or_default();
            verify_entry(e, &wild)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    VerifyReport { outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intermediate_profiles() {
        assert_eq!(intermediate_generator(8), Some(3));
        assert_eq!(intermediate_generator(5), Some(4));
        assert_eq!(intermediate_generator(6), None);
        assert_eq!(intermediate_generator(2), None);
    }

    #[test]
    fn small_corpus_passes() {
        let corpus: Vec<CorpusEntry> = default_corpus().into_iter().filter(|e| e.group == "S3" || e.group == "C4").collect();
        let report = run_verify(&corpus);
        let bad: Vec<_> = report.violations().collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(report.outcomes.iter().all(|o| o.cases > 0 || o.invariant == "non-field-detector"));
    }
}
