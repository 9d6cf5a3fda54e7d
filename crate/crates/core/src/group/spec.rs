use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{preset, FiniteGroup};
use crate::error::{Error, Result};

pub const DEFAULT_ORDER_BOUND: usize = 10_000;

/// JSON group description.
///
/// ```json
/// {"kind":"named","name":"S3"}
/// {"kind":"table","order":2,"table":[[0,1],[1,0]]}
/// {"kind":"perm","degree":3,"generators":[[1,0,2],[1,2,0]]}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Named { name: String },
    Table { order: usize, table: Vec<Vec<usize>> },
    Perm { degree: usize, generators: Vec<Vec<usize>> },
}

pub fn load_group(spec: &GroupSpec, order_bound: usize) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Named { name } => preset(name),
        GroupSpec::Table { order, table } => {
            if table.len() != *order {
                return Err(Error::InvalidGroup(format!(
                    "declared order {order} but table has {} rows",
                    table.len()
                )));
            }
            if *order > order_bound {
                return Err(Error::OrderBoundExceeded(order_bound));
            }
            FiniteGroup::from_table(table.clone(), None)
        }
        GroupSpec::Perm { degree, generators } => {
            perm_closure(*degree, generators, order_bound).map(|(g, _)| g)
        }
    }
}

/// Closes a set of permutations (image arrays on `0..degree`) under
/// composition. Elements are sorted lexicographically, so the identity is
/// element 0. The product `a * b` applies `b` first: `(a*b)(x) = a(b(x))`.
pub(crate) fn perm_closure(
    degree: usize,
    generators: &[Vec<usize>],
    order_bound: usize,
) -> Result<(FiniteGroup, Vec<Vec<usize>>)> {
    for g in generators {
        if g.len() != degree {
            return Err(Error::InvalidGroup(format!(
                "generator {g:?} does not have degree {degree}"
            )));
        }
        let distinct: BTreeSet<usize> = g.iter().copied().collect();
        if distinct.len() != degree || g.iter().any(|&x| x >= degree) {
            return Err(Error::InvalidGroup(format!("{g:?} is not a permutation")));
        }
    }
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
    let identity: Vec<usize> = (0..degree).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(identity.clone());
    let mut stack = vec![identity];
    while let Some(p) = stack.pop() {
        for g in generators {
            let q = compose(&p, g);
            if seen.insert(q.clone()) {
                if seen.len() > order_bound {
                    return Err(Error::OrderBoundExceeded(order_bound));
                }
                stack.push(q);
            }
        }
    }
    let elements: Vec<Vec<usize>> = seen.into_iter().collect();
    let index: HashMap<&[usize], usize> = elements
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elements {
        for b in &elements {
            table.push(index[compose(a, b).as_slice()] as u32);
        }
    }
    let group = FiniteGroup::from_flat_table_unchecked_assoc(n, table, None)?;
    Ok((group, elements))
}
