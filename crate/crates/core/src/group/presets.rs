//! Named groups with documented element orderings.
//!
//! | name        | elements                                                    |
//! |-------------|-------------------------------------------------------------|
//! | `Cn`        | index `k` is `σ^k`, `n <= 30`                               |
//! | `CmxCn`     | index `a*n + b` is `(σ^a, τ^b)`; `C2xC2`, `C2xC4`, `C3xC3`  |
//! | `Sn`, `An`  | permutations of `0..n`, sorted lexicographically, `n <= 5`  |
//! | `Dn`        | index `k + n*j` is `r^k s^j`, order `2n`, `n <= 12`         |
//! | `Q8`        | `1, -1, i, -i, j, -j, k, -k`                                |
//!
//! `×` is accepted in place of `x`.

use super::spec::perm_closure;
use super::FiniteGroup;
use crate::error::{Error, Result};

pub fn preset(name: &str) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownPreset(name.to_string());
    let norm = name.trim().replace('×', "x");
    let parse = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    let group = if norm == "Q8" {
        quaternion()
    } else if let Some((a, b)) = norm.split_once('x') {
        let m = parse(a.strip_prefix('C').ok_or_else(unknown)?)?;
        let n = parse(b.strip_prefix('C').ok_or_else(unknown)?)?;
        if !(1..=30).contains(&m) || !(1..=30).contains(&n) {
            return Err(unknown());
        }
        cyclic_product(m, n)
    } else if let Some(rest) = norm.strip_prefix('C') {
        let n = parse(rest)?;
        if !(1..=30).contains(&n) {
            return Err(unknown());
        }
        cyclic(n)
    } else if let Some(rest) = norm.strip_prefix('S') {
        let n = parse(rest)?;
        if !(1..=5).contains(&n) {
            return Err(unknown());
        }
        symmetric(n, false)
    } else if let Some(rest) = norm.strip_prefix('A') {
        let n = parse(rest)?;
        if !(1..=5).contains(&n) {
            return Err(unknown());
        }
        symmetric(n, true)
    } else if let Some(rest) = norm.strip_prefix('D') {
        let n = parse(rest)?;
        if !(1..=12).contains(&n) {
            return Err(unknown());
        }
        dihedral(n)
    } else {
        return Err(unknown());
    };
    let mut g = group?;
    g.name = Some(norm);
    Ok(g)
}

fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup> {
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push(f(a, b) as u32);
        }
    }
    FiniteGroup::from_flat_table_unchecked_assoc(n, table, None)
}

fn cyclic(n: usize) -> Result<FiniteGroup> {
    from_fn(n, |a, b| (a + b) % n)
}

fn cyclic_product(m: usize, n: usize) -> Result<FiniteGroup> {
    from_fn(m * n, |x, y| {
        let (a1, b1) = (x / n, x % n);
        let (a2, b2) = (y / n, y % n);
        ((a1 + a2) % m) * n + (b1 + b2) % n
    })
}

fn dihedral(n: usize) -> Result<FiniteGroup> {
    // (r^a s^i)(r^b s^j) = r^{a + (-1)^i b} s^{i+j}
    from_fn(2 * n, |x, y| {
        let (a, i) = (x % n, x / n);
        let (b, j) = (y % n, y / n);
        let k = if i == 0 { (a + b) % n } else { (a + n - b) % n };
        k + n * ((i + j) % 2)
    })
}

fn quaternion() -> Result<FiniteGroup> {
    // units 1, i, j, k as 0..4; product table gives (sign, unit)
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    from_fn(8, |x, y| {
        let (ux, sx) = (x / 2, x % 2 == 1);
        let (uy, sy) = (y / 2, y % 2 == 1);
        let (s, u) = UNIT[ux][uy];
        2 * u + usize::from(s ^ sx ^ sy)
    })
}

fn symmetric(n: usize, alternating: bool) -> Result<FiniteGroup> {
    let mut gens: Vec<Vec<usize>> = Vec::new();
    if n >= 2 {
        if alternating {
            // 3-cycles (0 1 k) generate A_n
            for k in 2..n {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                gens.push(p);
            }
        } else {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            gens.push(cycle);
        }
    }
    perm_closure(n, &gens, usize::MAX).map(|(g, _)| g)
}
