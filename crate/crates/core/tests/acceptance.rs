//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num::Zero;
use rand::Rng;

use ramification::character::{character_table, galois_orbit_characters};
use ramification::conductor::{
    artin_conductor, conductor_matrix, fine_conductor, fine_minus_artin, pushforward_datum, wy_weight,
};
use ramification::counting::{
    abelian_count, box_sum, local_mass, local_mass_at_norm, local_mass_bruteforce, predicted_constant,
    predicted_slice_constant, residue_degree, ConstantOptions,
};
use ramification::cyclotomic::{int, rational_to_f64};
use ramification::arith::is_prime;
use ramification::ramification::{
    make_profile, make_tame_datum, non_field_detector, ramification_types, tame_datum_of, ProfileSpec,
    RamificationTypes,
};
use ramification::verify::default_corpus;
use ramification::{Error, Rational};

type Outcome = Result<String, String>;

fn corpus() -> Vec<(String, RamificationTypes)> {
    default_corpus()
        .iter()
        .map(|e| {
            let g = fixture(&e.group).group.clone();
            let profile = make_profile(g.exponent(), &e.spec).unwrap();
            (format!("{}/{}", e.group, e.profile), ramification_types(&g, &profile).unwrap())
        })
        .collect()
}

fn types_for(name: &str, spec: ProfileSpec) -> RamificationTypes {
    let g = fixture(name).group.clone();
    let profile = make_profile(g.exponent(), &spec).unwrap();
    ramification_types(&g, &profile).unwrap()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    if start.elapsed() > limit {
        Err(format!("took {:.1?}, limit {limit:?}", start.elapsed()))
    } else {
        Ok(())
    }
}

/// Equal up to permuting rows and columns.
fn same_up_to_permutation(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let ps = perms(n);
    ps.iter().any(|r| ps.iter().any(|c| (0..n).all(|i| (0..n).all(|j| a[r[i]][c[j]] == b[i][j]))))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let entries = corpus();
    for (label, types) in &entries {
        let table = character_table(types.group()).unwrap();
        let m = conductor_matrix(types, &table).map_err(|e| format!("{label}: {e}"))?;
        if m.determinant.is_zero() {
            return Err(format!("{label}: singular"));
        }
    }
    let s3 = types_for("S3", ProfileSpec::Rational);
    let m = conductor_matrix(&s3, &fixture("S3").table).unwrap();
    let expected = vec![vec![int(1), int(1)], vec![int(0), int(2)]];
    if !same_up_to_permutation(&m.entries, &expected) {
        return Err(format!("S3/Q matrix {:?}", m.entries));
    }
    let c5 = types_for("C5", ProfileSpec::Cyclotomic);
    let m = conductor_matrix(&c5, &fixture("C5").table).unwrap();
    let perm_like = m.entries.iter().all(|r| r.iter().filter(|x| **x == int(4)).count() == 1
        && r.iter().filter(|x| x.is_zero()).count() == r.len() - 1)
        && (0..m.size()).all(|j| m.entries.iter().filter(|r| r[j] == int(4)).count() == 1);
    if !perm_like {
        return Err(format!("C5/cyclotomic matrix {:?}", m.entries));
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{} matrices nonsingular, S3 and C5 shapes match, {:.1?}", entries.len(), start.elapsed()))
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let mut checks = 0usize;
    for f in fixtures() {
        let mut data: Vec<_> = (0..f.group.order()).map(|g| tame_datum_of(&f.group, g).unwrap()).collect();
        let mut wild = 0;
        while wild < 20 {
            let d = random_wild_datum(f, &mut r).ok_or_else(|| format!("{:?}: no wild datum", f.group.name()))?;
            data.push(d);
            wild += 1;
        }
        for _ in 0..100 {
            let psi = random_rational_virtual(f, &mut r);
            for d in &data {
                let fine = fine_conductor(d, &psi).map_err(|e| e.to_string())?;
                let artin = artin_conductor(d, &psi).map_err(|e| e.to_string())?;
                if fine != artin {
                    return Err(format!("{:?}: datum {} differs", f.group.name(), d.to_json()));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} exact comparisons over {} groups", fixtures().len()))
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let triples = 1200;
    for t in 0..triples {
        let f = &fixtures()[r.gen_range(0..fixtures().len())];
        let d = random_datum(f, &mut r);
        let a = random_virtual(f, &mut r);
        let b = random_virtual(f, &mut r);
        let (hom, target) = random_hom(f, &mut r);
        let psi = random_virtual(target, &mut r);
        let x = r.gen_range(0..f.group.order());
        let fine = |d: &ramification::ramification::RamificationDatum, c: &ramification::character::Character| {
            fine_conductor(d, c).unwrap()
        };
        let fail = |what: &str| Err(format!("triple {t} ({:?}): {what} fails for {}", f.group.name(), d.to_json()));
        if fine(&d, &(&a + &b)) != fine(&d, &a) + fine(&d, &b) {
            return fail("additivity");
        }
        if fine(&d.conjugate(x), &a) != fine(&d, &a) {
            return fail("conjugation invariance");
        }
        let pushed = pushforward_datum(&d, &hom).unwrap();
        if fine(&pushed, &psi) != fine(&d, &psi.compose(&hom).unwrap()) {
            return fail("functoriality");
        }
        for c in [&a, &b] {
            if fine(&d, c) - artin_conductor(&d, c).unwrap() != fine_minus_artin(&d, c).unwrap() {
                return fail("difference identity");
            }
        }
        if fine(&pushed, &psi) - artin_conductor(&pushed, &psi).unwrap() != fine_minus_artin(&pushed, &psi).unwrap() {
            return fail("difference identity (pushforward)");
        }
    }
    Ok(format!("{triples} random (datum, character, hom) triples"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for (label, types) in corpus() {
        let g = types.group();
        let n = g.exponent();
        for q in (2..=50).filter(|&q| is_prime(q) && !(g.order() as u64).is_multiple_of(q)) {
            let norm = if types.profile().contains((q % n) as i64) {
                q
            } else {
                if !types.is_empty() && !matches!(local_mass(&types, 0, q), Err(Error::FrobeniusOutsideProfile { .. })) {
                    return Err(format!("{label}: q={q} outside the profile not rejected"));
                }
                q.pow(residue_degree(&types, q) as u32)
            };
            let brute = local_mass_bruteforce(&types, norm).map_err(|e| format!("{label}: {e}"))?;
            if brute.unramified != int(1) {
                return Err(format!("{label}: unramified mass at {norm}"));
            }
            for (i, b) in brute.by_type.iter().enumerate() {
                if local_mass_at_norm(&types, i, norm).map_err(|e| e.to_string())? != *b {
                    return Err(format!("{label}: type {i} at norm {norm}"));
                }
                cases += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{cases} (entry, prime, type) cases, {:.1?}", start.elapsed()))
}

fn criterion_5() -> Outcome {
    let types = types_for("C5", ProfileSpec::Cyclotomic);
    let table = &fixture("C5").table;
    let rho = &table.rows()[1];
    let powers: Vec<_> = (1..=4).map(|k| rho.galois_apply(k).unwrap()).collect();
    for t in types.types() {
        let d = make_tame_datum(&types, t.id).unwrap();
        let w: Vec<Rational> = powers.iter().map(|p| wy_weight(&d, p).unwrap()).collect();
        if &w[0] + &w[3] != &w[1] + &w[2] {
            return Err(format!("type {}: weights {:?}", t.id, w));
        }
    }
    let m = conductor_matrix(&types, table).unwrap();
    if m.determinant.is_zero() {
        return Err("fine matrix singular".into());
    }
    Ok(format!("dependence holds on {} types, fine determinant {}", types.len(), m.determinant))
}

fn odd_squarefree_up_to(x: u64) -> u64 {
    let mut sf = vec![true; x as usize + 1];
    let mut d = 2u64;
    while d * d <= x {
        for k in (d * d..=x).step_by((d * d) as usize) {
            sf[k as usize] = false;
        }
        d += 1;
    }
    (1..=x).filter(|&n| n % 2 == 1 && sf[n as usize]).count() as u64
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let x = 1_000_000u64;
    let types = types_for("C2", ProfileSpec::Rational);
    let count = abelian_count(&types, &[x], &[], false).map_err(|e| e.to_string())?.value;
    let oracle = int(2 * odd_squarefree_up_to(x) as i64);
    if count != oracle {
        return Err(format!("count {count} vs sieve {oracle}"));
    }
    let ratio = rational_to_f64(&count) / x as f64;
    let c = predicted_constant(&types, &ConstantOptions::default()).map_err(|e| e.to_string())?.value;
    let exact = 8.0 / std::f64::consts::PI.powi(2);
    if (ratio / c - 1.0).abs() > 0.01 {
        return Err(format!("ratio {ratio} vs constant {c}"));
    }
    if (ratio - exact).abs() > 1.5e-3 {
        return Err(format!("ratio {ratio} vs 8/π² {exact}"));
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("count/X = {ratio:.6}, constant {c:.6}, 8/π² = {exact:.6}, {:.1?}", start.elapsed()))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let types = types_for("C2xC2", ProfileSpec::Rational);
    let opts = ConstantOptions::default();
    let c = predicted_constant(&types, &opts).map_err(|e| e.to_string())?.value;
    let mut report = vec![format!("constant {c:.4}")];
    let mut errors = Vec::new();
    for (x, tol) in [(30u64, 0.20), (100, 0.15)] {
        let v = abelian_count(&types, &[x, x, x], &[], false).map_err(|e| e.to_string())?.value;
        let ratio = rational_to_f64(&v) / (x as f64).powi(3) / c;
        report.push(format!("X={x}: {ratio:.4}"));
        if (ratio - 1.0).abs() > tol {
            return Err(format!("X={x}: ratio {ratio:.4} outside ±{tol}"));
        }
        errors.push((ratio - 1.0).abs());
    }
    if errors[1] >= errors[0] {
        return Err(format!("no improvement: {errors:?}"));
    }
    for v in [1u64, 3] {
        let sc = predicted_slice_constant(&types, &[(0, v)], &opts).map_err(|e| e.to_string())?.value;
        for x in [30u64, 100] {
            let s = abelian_count(&types, &[x, x, x], &[(0, v)], false).map_err(|e| e.to_string())?.value;
            let ratio = rational_to_f64(&s) / (x * x) as f64 / sc;
            report.push(format!("x1={v}, X={x}: {ratio:.4}"));
            if (ratio - 1.0).abs() > 0.20 {
                return Err(format!("slice x1={v} at X={x}: ratio {ratio:.4}"));
            }
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(report.join(", "))
}

fn criterion_8() -> Outcome {
    let entries = corpus();
    for (label, types) in &entries {
        let table = &fixture(types.group().name().unwrap()).table;
        let chars = galois_orbit_characters(table, types.profile()).unwrap();
        if chars.len() != types.len() {
            return Err(format!("{label}: {} types, {} orbit characters", types.len(), chars.len()));
        }
    }
    Ok(format!("{} corpus entries", entries.len()))
}

fn criterion_9() -> Outcome {
    let mut checked = 0;
    for (label, types) in corpus() {
        let g = types.group();
        let f = fixture(g.name().unwrap());
        for h in f.subgroups.iter().filter(|h| h.len() < g.order()) {
            let t = non_field_detector(&types, h).map_err(|e| format!("{label}: {e}"))?;
            if (0..g.order()).any(|x| h.contains(g.conjugate(x, t.representative))) {
                return Err(format!("{label}: type {} meets a conjugate of {:?}", t.id, h.elements()));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} proper subgroups"))
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let cases = 500;
    for k in 0..cases {
        let m = r.gen_range(1..=3);
        let factors = random_factors(&mut r, m);
        let bounds: Vec<u64> = (0..m).map(|_| r.gen_range(1..=500)).collect();
        let got = box_sum(&factors, &bounds, &[], &int(1)).map_err(|e| e.to_string())?.value;
        let oracle = naive_box(&factors, &bounds, &[]);
        if got != oracle {
            return Err(format!("case {k}: bounds {bounds:?}, {got} vs {oracle}"));
        }
    }
    Ok(format!("{cases} random cases"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("conductor matrices invertible", criterion_1),
        ("fine = Artin on rational characters", criterion_2),
        ("conductor axioms", criterion_3),
        ("local mass oracle", criterion_4),
        ("Wood-Yasuda dependence, fine independence", criterion_5),
        ("abelian count over Q for C2", criterion_6),
        ("C2xC2 box asymptotics and slices", criterion_7),
        ("types = orbit characters", criterion_8),
        ("non-field detector", criterion_9),
        ("box_sum oracle", criterion_10),
    ];
    fixtures();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
