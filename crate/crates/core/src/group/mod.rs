//! Finite groups given by full multiplication tables.
//!
//! Every group is stored as an indexed element set `0..order` with `0` the
//! identity. Conjugacy classes, inverses, element orders and the exponent are
//! derived once at construction; all later queries are table lookups.

mod hom;
mod presets;
mod spec;

pub use hom::GroupHom;
pub use presets::preset;
pub use spec::{load_group, GroupSpec, DEFAULT_ORDER_BOUND};

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::{gcd, lcm, rem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub id: usize,
    pub members: Vec<usize>,
    pub representative: usize,
    pub element_order: usize,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: Option<String>,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<usize>,
    element_orders: Vec<usize>,
    exponent: usize,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl FiniteGroup {
    /// Validates a multiplication table and derives conjugacy data.
    ///
    /// Associativity is checked exhaustively, so this is cubic in the order.
    pub fn from_table(table: Vec<Vec<usize>>, name: Option<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidGroup("table is not square".into()));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::ElementOutOfRange(x, n));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let flat = table.into_iter().flatten().map(|x| x as u32).collect();
        Self::from_flat_table_unchecked_assoc(n, flat, name)
    }

    /// Builds a group from a table already known to be associative
    /// (permutation closures, direct constructions).
    pub(crate) fn from_flat_table_unchecked_assoc(
        n: usize,
        table: Vec<u32>,
        name: Option<String>,
    ) -> Result<Self> {
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        for a in 0..n {
            if at(0, a) != a || at(a, 0) != a {
                return Err(Error::InvalidGroup(format!(
                    "element 0 is not a two-sided identity (fails at {a})"
                )));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            let right = (0..n).find(|&b| at(a, b) == 0);
            match right {
                Some(b) if at(b, a) == 0 => inverses[a] = b,
                _ => {
                    return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
                }
            }
        }
        let mut element_orders = vec![0; n];
        for (a, ord) in element_orders.iter_mut().enumerate() {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = at(x, a);
                k += 1;
                if k > n {
                    return Err(Error::InvalidGroup(format!("element {a} has no finite order")));
                }
            }
            *ord = k;
        }
        let exponent = element_orders.iter().fold(1, |acc, &o| lcm(acc as u64, o as u64) as usize);

        let mut class_of = vec![usize::MAX; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let id = raw.len();
            let mut members = BTreeSet::new();
            for x in 0..n {
                members.insert(at(at(x, g), inverses[x]));
            }
            for &m in &members {
                class_of[m] = id;
            }
            raw.push(members.into_iter().collect());
        }
        let mut order_idx: Vec<usize> = (0..raw.len()).collect();
        order_idx.sort_by_key(|&i| (element_orders[raw[i][0]], raw[i][0]));
        let mut classes = Vec::with_capacity(raw.len());
        let mut remap = vec![0; raw.len()];
        for (new_id, &old) in order_idx.iter().enumerate() {
            remap[old] = new_id;
            let members = raw[old].clone();
            classes.push(ConjugacyClass {
                id: new_id,
                representative: members[0],
                element_order: element_orders[members[0]],
                members,
            });
        }
        for c in class_of.iter_mut() {
            *c = remap[*c];
        }
        Ok(Self {
            name,
            order: n,
            table,
            inverses,
            element_orders,
            exponent,
            classes,
            class_of,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent as u64
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.element_orders[a]
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let e = rem(k, self.element_orders[a] as u64);
        let mut acc = 0;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x g x^{-1}`.
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inverses[x])
    }

    pub fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange(g, self.order))
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes sorted by `(element_order, representative)`; class 0
    /// is the identity class.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn centralizer_order(&self, g: usize) -> usize {
        (0..self.order).filter(|&h| self.mul(h, g) == self.mul(g, h)).count()
    }

    /// The permutation `C ↦ C^k` of class ids.
    pub fn power_class_map(&self, k: i64) -> Result<Vec<usize>> {
        let n = self.exponent as u64;
        if n > 1 && gcd(rem(k, n), n) != 1 {
            return Err(Error::NotCoprime(k, n));
        }
        Ok(self
            .classes
            .iter()
            .map(|c| self.class_of[self.pow(c.representative, k)])
            .collect())
    }

    pub fn identity_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, vec![0])
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, (0..self.order).collect())
    }

    /// Validates that `elements` form a subgroup.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut sorted: Vec<usize> = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &g in &sorted {
            self.check_element(g)?;
        }
        let s = Subgroup::from_sorted(self.order, sorted);
        if !s.contains(0) {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        for &a in s.elements() {
            for &b in s.elements() {
                if !s.contains(self.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!(
                        "product of {a} and {b} leaves the set"
                    )));
                }
            }
        }
        Ok(s)
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut stack = vec![0];
        let mut elems = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    elems.push(y);
                    stack.push(y);
                }
            }
        }
        elems.sort_unstable();
        Subgroup { elements: elems, mask }
    }

    pub fn cyclic(&self, g: usize) -> Subgroup {
        self.generate(&[g])
    }

    /// A small generating set, chosen greedily by element index.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.identity_subgroup();
        let mut candidates: Vec<usize> = (1..self.order).collect();
        // prefer elements of large order so cyclic factors come out in one step
        candidates.sort_by_key(|&g| (std::cmp::Reverse(self.element_orders[g]), g));
        for g in candidates {
            if current.len() == self.order {
                break;
            }
            if !current.contains(g) {
                gens.push(g);
                current = self.generate(&gens);
            }
        }
        gens
    }

    pub fn conjugate_subgroup(&self, x: usize, h: &Subgroup) -> Subgroup {
        let mut elems: Vec<usize> = h.elements().iter().map(|&g| self.conjugate(x, g)).collect();
        elems.sort_unstable();
        Subgroup::from_sorted(self.order, elems)
    }

    /// Is `n` normal in `within` (both subgroups of this group)?
    pub fn is_normal_in(&self, n: &Subgroup, within: &Subgroup) -> bool {
        within
            .elements()
            .iter()
            .all(|&x| n.elements().iter().all(|&g| n.contains(self.conjugate(x, g))))
    }

    /// One representative `(generator, order)` per conjugacy class of cyclic
    /// subgroups, ordered by `(order, smallest generator index)`. The generator
    /// is the smallest element generating any member of the class.
    pub fn cyclic_subgroups_up_to_conjugacy(&self) -> Vec<(usize, usize)> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        let mut by_order: Vec<usize> = (0..self.order).collect();
        by_order.sort_by_key(|&g| (self.element_orders[g], g));
        for g in by_order {
            if seen[g] {
                continue;
            }
            let e = self.element_orders[g];
            // every generator of every conjugate of <g>
            for x in 0..self.order {
                let c = self.conjugate(x, g);
                for k in 1..=e {
                    if gcd(k as u64, e as u64) == 1 {
                        seen[self.pow(c, k as i64)] = true;
                    }
                }
            }
            out.push((g, e));
        }
        out
    }

    /// Every subgroup, by iterated closure. Intended for small groups.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier = vec![self.identity_subgroup()];
        found.insert(vec![0]);
        while let Some(s) = frontier.pop() {
            for g in 0..self.order {
                if s.contains(g) {
                    continue;
                }
                let mut gens: Vec<usize> = s.elements().to_vec();
                gens.push(g);
                let t = self.generate(&gens);
                if found.insert(t.elements().to_vec()) {
                    frontier.push(t);
                }
            }
        }
        found
            .into_iter()
            .map(|e| Subgroup::from_sorted(self.order, e))
            .collect()
    }
}

/// A subgroup, stored as a sorted element list plus a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    pub(crate) fn from_sorted(order: usize, elements: Vec<usize>) -> Self {
        let mut mask = vec![false; order];
        for &e in &elements {
            mask[e] = true;
        }
        Self { elements, mask }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, g: usize) -> bool {
        self.mask.get(g).copied().unwrap_or(false)
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> FiniteGroup {
        preset(name).unwrap()
    }

    fn brute_class_sizes(group: &FiniteGroup) -> Vec<usize> {
        let n = group.order();
        let mut seen = vec![false; n];
        let mut sizes = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let mut size = 0;
            for b in 0..n {
                if (0..n).any(|x| group.mul(group.mul(x, a), group.inv(x)) == b) {
                    seen[b] = true;
                    size += 1;
                }
            }
            sizes.push(size);
        }
        sizes
    }

    #[test]
    fn class_counts() {
        assert_eq!(g("C2").num_classes(), 2);
        let s3 = g("S3");
        let sizes: Vec<usize> = s3.conjugacy_classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        let mut brute = brute_class_sizes(&s3);
        brute.sort_unstable();
        let mut ours = sizes.clone();
        ours.sort_unstable();
        assert_eq!(brute, ours);
        let q8 = g("Q8");
        let sizes: Vec<usize> = q8.conjugacy_classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn class_invariants_across_presets() {
        for name in ["C1", "C6", "C2xC4", "C3xC3", "S4", "A4", "A5", "D5", "D6", "Q8", "S5"] {
            let grp = g(name);
            let total: usize = grp.conjugacy_classes().iter().map(|c| c.size()).sum();
            assert_eq!(total, grp.order(), "{name}");
            for c in grp.conjugacy_classes() {
                assert_eq!(grp.order() % c.size(), 0);
                assert_eq!(grp.centralizer_order(c.representative) * c.size(), grp.order());
                assert!(c.members.iter().all(|&m| grp.element_order(m) == c.element_order));
            }
            assert_eq!(grp.order() as u64 % grp.exponent(), 0);
            let mut keys: Vec<_> = grp
                .conjugacy_classes()
                .iter()
                .map(|c| (c.element_order, c.representative))
                .collect();
            let sorted = {
                let mut k = keys.clone();
                k.sort();
                k
            };
            assert_eq!(keys, sorted);
            keys.dedup();
        }
    }

    #[test]
    fn centralizers_in_s3() {
        let s3 = g("S3");
        assert_eq!(s3.centralizer_order(0), 6);
        let transposition = s3.conjugacy_classes()[1].representative;
        let three_cycle = s3.conjugacy_classes()[2].representative;
        assert_eq!(s3.element_order(transposition), 2);
        assert_eq!(s3.centralizer_order(transposition), 2);
        assert_eq!(s3.centralizer_order(three_cycle), 3);
    }

    #[test]
    fn power_maps() {
        let s3 = g("S3");
        assert_eq!(s3.power_class_map(1).unwrap(), vec![0, 1, 2]);
        assert_eq!(s3.power_class_map(5).unwrap(), vec![0, 1, 2]);
        assert_eq!(s3.power_class_map(-1).unwrap(), vec![0, 1, 2]);
        assert!(matches!(s3.power_class_map(2), Err(Error::NotCoprime(2, 6))));
        let c5 = g("C5");
        // classes of C5 are {σ^k}, ordered by representative
        assert_eq!(c5.power_class_map(2).unwrap(), vec![0, 2, 4, 1, 3]);
        assert!(matches!(s3.power_class_map(3), Err(Error::NotCoprime(3, 6))));
    }

    #[test]
    fn power_maps_compose() {
        for name in ["C8", "S4", "D5", "C3xC3", "Q8", "A4"] {
            let grp = g(name);
            let n = grp.exponent();
            let units = crate::arith::units(n);
            for &k in &units {
                for &l in &units {
                    let pk = grp.power_class_map(k as i64).unwrap();
                    let pl = grp.power_class_map(l as i64).unwrap();
                    let pkl = grp.power_class_map((k * l % n) as i64).unwrap();
                    let composed: Vec<usize> = (0..grp.num_classes()).map(|c| pk[pl[c]]).collect();
                    assert_eq!(composed, pkl, "{name} k={k} l={l}");
                }
            }
        }
    }

    fn brute_cyclic_classes(grp: &FiniteGroup) -> usize {
        let mut subs: BTreeSet<Vec<usize>> = BTreeSet::new();
        for x in 0..grp.order() {
            subs.insert(grp.cyclic(x).elements().to_vec());
        }
        let subs: Vec<Subgroup> = subs.into_iter().map(|e| Subgroup::from_sorted(grp.order(), e)).collect();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut assigned = vec![false; subs.len()];
        for i in 0..subs.len() {
            if assigned[i] {
                continue;
            }
            let mut cls = vec![i];
            assigned[i] = true;
            for j in 0..subs.len() {
                if !assigned[j] && (0..grp.order()).any(|x| grp.conjugate_subgroup(x, &subs[i]) == subs[j]) {
                    assigned[j] = true;
                    cls.push(j);
                }
            }
            classes.push(cls);
        }
        classes.len()
    }

    #[test]
    fn cyclic_subgroup_classes() {
        let s3 = g("S3");
        let cs = s3.cyclic_subgroups_up_to_conjugacy();
        assert_eq!(cs.iter().map(|c| c.1).collect::<Vec<_>>(), vec![1, 2, 3]);
        let s4 = g("S4");
        let orders: Vec<usize> = s4.cyclic_subgroups_up_to_conjugacy().iter().map(|c| c.1).collect();
        assert_eq!(orders, vec![1, 2, 2, 3, 4]);
        let c4 = g("C4");
        assert_eq!(
            c4.cyclic_subgroups_up_to_conjugacy(),
            vec![(0, 1), (2, 2), (1, 4)]
        );
        for name in ["C6", "C2xC2", "C2xC4", "C3xC3", "S4", "A4", "D4", "D5", "D6", "Q8", "C8"] {
            let grp = g(name);
            let reps = grp.cyclic_subgroups_up_to_conjugacy();
            assert_eq!(reps.len(), brute_cyclic_classes(&grp), "{name}");
            // pairwise non-conjugate
            for (i, &(a, _)) in reps.iter().enumerate() {
                for &(b, _) in &reps[..i] {
                    let sa = grp.cyclic(a);
                    let sb = grp.cyclic(b);
                    assert!((0..grp.order()).all(|x| grp.conjugate_subgroup(x, &sa) != sb));
                }
            }
        }
    }

    #[test]
    fn subgroup_validation() {
        let s3 = g("S3");
        let t = s3.conjugacy_classes()[1].representative;
        assert!(s3.subgroup(&[0, t]).is_ok());
        assert!(matches!(s3.subgroup(&[t]), Err(Error::NotSubgroup(_))));
        let other = s3.conjugacy_classes()[1].members[1];
        assert!(matches!(s3.subgroup(&[0, t, other]), Err(Error::NotSubgroup(_))));
        assert_eq!(s3.all_subgroups().len(), 6);
        assert_eq!(g("S4").all_subgroups().len(), 30);
        assert_eq!(g("Q8").all_subgroups().len(), 6);
    }

    #[test]
    fn generating_sets_generate() {
        for name in ["C1", "C7", "C2xC2", "C3xC3", "S4", "A5", "D6", "Q8"] {
            let grp = g(name);
            let gens = grp.generating_set();
            assert_eq!(grp.generate(&gens).len(), grp.order(), "{name}");
        }
    }
}
