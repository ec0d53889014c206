//! Exact square linear solves by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::{denominator_lcm, Rational};

/// Solves `a · x = b` for square `a`; `None` if `a` is singular.
///
/// Each row is scaled to integers first, so elimination runs entirely in
/// `BigInt` with exact divisions.
pub fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side length");
    assert!(a.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        return Some(Vec::new());
    }

    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let scale = denominator_lcm(row.iter().chain(std::iter::once(rhs)));
            row.iter()
                .chain(std::iter::once(rhs))
                .map(|r| r.numer() * (&scale / r.denom()))
                .collect()
        })
        .collect();

    let mut prev = BigInt::from(1);
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }

    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_big(m[i][n].clone(), BigInt::from(1));
        for j in i + 1..n {
            acc = acc - Rational::from_big(m[i][j].clone(), BigInt::from(1)) * &x[j];
        }
        x[i] = acc / Rational::from_big(m[i][i].clone(), BigInt::from(1));
    }
    Some(x)
}
