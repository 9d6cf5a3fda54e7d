use num::{BigInt, Integer, One, Signed, Zero};

use crate::cyclotomic::Rational;

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Each row is first cleared of denominators; the integer determinant is then
/// divided by the product of the row scalings.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n, "matrix must be square");
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &l;
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Rational::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = sign * &a[n - 1][n - 1];
    Rational::new(det, scale)
}

/// True if the matrix is a positive multiple of a permutation matrix.
pub fn is_scaled_permutation(matrix: &[Vec<Rational>]) -> bool {
    let n = matrix.len();
    let mut used = vec![false; n];
    let mut scalar: Option<&Rational> = None;
    for row in matrix {
        let nonzero: Vec<usize> = (0..n).filter(|&j| !row[j].is_zero()).collect();
        let [j] = nonzero[..] else { return false };
        if used[j] || !row[j].is_positive() || scalar.is_some_and(|s| *s != row[j]) {
            return false;
        }
        used[j] = true;
        scalar = Some(&row[j]);
    }
    true
}
