mod common;

use std::sync::OnceLock;

use common::*;
use proptest::prelude::*;
use rand::Rng;

use ramification::arith::{gcd, is_prime};
use ramification::character::galois_orbit_characters;
use ramification::counting::{local_mass_at_norm, local_mass_bruteforce};
use ramification::cyclotomic::int;
use ramification::ramification::{make_profile, non_field_detector, ramification_types, RamificationTypes};
use ramification::verify::{default_corpus, DEFAULT_GROUPS};

fn corpus_types() -> &'static [RamificationTypes] {
    static CELL: OnceLock<Vec<RamificationTypes>> = OnceLock::new();
    CELL.get_or_init(|| {
        default_corpus()
            .iter()
            .map(|e| {
                let f = fixture(&e.group);
                let profile = make_profile(f.group.exponent(), &e.spec).unwrap();
                ramification_types(&f.group, &profile).unwrap()
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_axioms((gi, seed) in (0..DEFAULT_GROUPS.len(), any::<u64>())) {
        let g = &fixtures()[gi].group;
        let mut r = rng(seed);
        let n = g.order();
        let (a, b, c) = (r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n));
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), 0);
        prop_assert_eq!(g.mul(0, a), a);
        prop_assert_eq!(g.pow(a, g.element_order(a) as i64), 0);
        prop_assert_eq!(g.class_of(g.conjugate(b, a)), g.class_of(a));
        let units: Vec<i64> = (-12i64..=12).filter(|&k| gcd(k.unsigned_abs(), g.exponent()) == 1).collect();
        let k = units[r.gen_range(0..units.len())];
        let map = g.power_class_map(k).unwrap();
        prop_assert_eq!(map[g.class_of(a)], g.class_of(g.pow(a, k)));
        prop_assert_eq!(g.exponent() % g.element_order(a) as u64, 0);
    }

    #[test]
    fn local_mass_matches_enumeration((ci, q) in (0..default_corpus().len(), 2u64..200)) {
        prop_assume!(is_prime(q));
        let types = &corpus_types()[ci];
        let g = types.group();
        prop_assume!(!(g.order() as u64).is_multiple_of(q));
        let n = g.exponent();
        // the smallest power of q whose residue lies in the profile
        let mut norm = q;
        while !types.profile().contains((norm % n) as i64) {
            norm *= q;
        }
        let brute = local_mass_bruteforce(types, norm).unwrap();
        prop_assert_eq!(&brute.unramified, &int(1));
        for (i, b) in brute.by_type.iter().enumerate() {
            prop_assert_eq!(&local_mass_at_norm(types, i, norm).unwrap(), b);
        }
    }
}

#[test]
fn class_equations() {
    for f in fixtures() {
        let g = &f.group;
        let sizes: usize = g.conjugacy_classes().iter().map(|c| c.size()).sum();
        assert_eq!(sizes, g.order());
        for c in g.conjugacy_classes() {
            assert_eq!(c.size() * g.centralizer_order(c.representative), g.order());
        }
        assert_eq!(f.table.len(), g.num_classes());
        let degrees: u64 = f.table.degrees().iter().map(|d| d * d).sum();
        assert_eq!(degrees, g.order() as u64);
    }
}

#[test]
fn types_match_orbit_characters() {
    for types in corpus_types().iter() {
        let f = fixture(types.group().name().unwrap());
        let chars = galois_orbit_characters(&f.table, types.profile()).unwrap();
        assert_eq!(types.len(), chars.len(), "{:?}", types.group().name());
    }
}

#[test]
fn types_partition_nontrivial_elements() {
    for types in corpus_types().iter() {
        let g = types.group();
        let mut seen = vec![0usize; types.len()];
        for x in 1..g.order() {
            let t = types.classify(x).unwrap();
            seen[t] += 1;
            assert_eq!(types.get(t).unwrap().e as usize, g.element_order(x));
        }
        assert!(seen.iter().all(|&s| s > 0));
        for t in types.types() {
            let u = types.profile().projection(t.e);
            assert!(t.stabilizer_a.iter().all(|a| u.contains(a) && gcd(*a, t.e) == 1));
            assert_eq!(t.index_u_a as usize * t.stabilizer_a.len(), u.len());
        }
    }
}

#[test]
fn rational_types_are_conjugacy_classes_of_cyclic_subgroups() {
    for f in fixtures() {
        let profile = make_profile(f.group.exponent(), &"Q".parse().unwrap()).unwrap();
        let types = ramification_types(&f.group, &profile).unwrap();
        let cyclic = f.group.cyclic_subgroups_up_to_conjugacy();
        assert_eq!(types.len() + 1, cyclic.len(), "{:?}", f.group.name());
    }
}

#[test]
fn cyclotomic_types_of_cyclic_groups_are_elements() {
    for name in ["C2", "C3", "C4", "C5", "C6", "C7", "C8"] {
        let f = fixture(name);
        let profile = make_profile(f.group.exponent(), &"cyclotomic".parse().unwrap()).unwrap();
        let types = ramification_types(&f.group, &profile).unwrap();
        assert_eq!(types.len(), f.group.order() - 1);
    }
}

#[test]
fn detector_avoids_every_conjugate() {
    for types in corpus_types().iter() {
        let g = types.group();
        let f = fixture(g.name().unwrap());
        for h in f.subgroups.iter().filter(|h| h.len() < g.order()) {
            let t = non_field_detector(types, h).unwrap();
            for x in 0..g.order() {
                let conj = g.conjugate(x, t.representative);
                assert!(!h.contains(conj), "{:?}: type {} meets {:?}", g.name(), t.id, h.elements());
            }
        }
    }
}
