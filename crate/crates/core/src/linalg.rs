//! Exact determinants: fraction-free (Bareiss) elimination over `Z` and
//! `Z[x]`, and polynomial determinants by evaluation and interpolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::IntPolynomial;

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn det_int(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant of a square matrix over `Z[x]` by Bareiss elimination.
/// Every division is exact in `Z[x]`.
pub fn det_poly_bareiss(mut a: Vec<Vec<IntPolynomial>>) -> IntPolynomial {
    let n = a.len();
    if n == 0 {
        return IntPolynomial::one();
    }
    let mut negate = false;
    let mut prev = IntPolynomial::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return IntPolynomial::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = v.exact_div(&prev).expect("Bareiss step divides exactly");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Interpolates the unique polynomial of degree `< points.len()` through
/// the given integer nodes (Newton divided differences over `Q`).
///
/// Panics if the nodes repeat or the interpolant has non-integral
/// coefficients.
pub fn interpolate(points: &[(BigInt, BigInt)]) -> IntPolynomial {
    let n = points.len();
    let xs: Vec<BigRational> = points
        .iter()
        .map(|(x, _)| BigRational::from_integer(x.clone()))
        .collect();
    let mut dd: Vec<BigRational> = points
        .iter()
        .map(|(_, y)| BigRational::from_integer(y.clone()))
        .collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let den = &xs[i] - &xs[i - level];
            assert!(!den.is_zero(), "repeated interpolation node");
            dd[i] = (&dd[i] - &dd[i - 1]) / den;
        }
    }
    // Horner-style expansion of the Newton form, in Q[x].
    let mut coeffs: Vec<BigRational> = vec![BigRational::zero(); n.max(1)];
    for i in (0..n).rev() {
        // coeffs <- coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); n.max(1)];
        for k in 0..n {
            if coeffs[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &coeffs[k];
            }
            next[k] -= &coeffs[k] * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    IntPolynomial::new(
        coeffs
            .into_iter()
            .map(|c| {
                assert!(c.is_integer(), "interpolant is not integral");
                c.to_integer()
            })
            .collect(),
    )
}

/// Determinant of a polynomial matrix, given as an evaluator `x -> M(x)`,
/// whose determinant has degree at most `degree_bound`. Evaluates at the
/// nodes `0, 1, ..., degree_bound` and interpolates.
pub fn det_poly_by_interpolation<F>(degree_bound: usize, eval: F) -> IntPolynomial
where
    F: Fn(&BigInt) -> Vec<Vec<BigInt>>,
{
    let points: Vec<(BigInt, BigInt)> = (0..=degree_bound)
        .map(|k| {
            let x = BigInt::from(k);
            let d = det_int(eval(&x));
            (x, d)
        })
        .collect();
    interpolate(&points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    // Leibniz expansion, only for tiny matrices.
    fn leibniz(a: &[Vec<BigInt>]) -> BigInt {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = a.len();
        perms(n)
            .into_iter()
            .map(|p| {
                let inv = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let prod: BigInt = (0..n).map(|i| a[i][p[i]].clone()).product();
                if inv % 2 == 0 {
                    prod
                } else {
                    -prod
                }
            })
            .sum()
    }

    #[test]
    fn integer_determinants_match_leibniz() {
        let cases = [
            m(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]),
            m(&[&[0, 1, 2], &[0, 3, 4], &[5, 6, 7]]),
            m(&[&[1, 2], &[2, 4]]),
            m(&[&[0, 0, 1, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 1, 0, 0]]),
        ];
        for a in cases {
            assert_eq!(det_int(a.clone()), leibniz(&a));
        }
        assert_eq!(det_int(vec![]), BigInt::one());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = IntPolynomial::from_i64s(&[-3, 0, 2, -1, 5]);
        let pts: Vec<_> = (0..6)
            .map(|k| {
                let x = BigInt::from(k * 2 - 5);
                let y = p.eval_int(&x);
                (x, y)
            })
            .collect();
        assert_eq!(interpolate(&pts), p);
    }

    #[test]
    fn polynomial_determinant_routes_agree() {
        // [[1 - x, x], [2, x^2 + 1]]
        let a = vec![
            vec![
                IntPolynomial::from_i64s(&[1, -1]),
                IntPolynomial::from_i64s(&[0, 1]),
            ],
            vec![
                IntPolynomial::from_i64s(&[2]),
                IntPolynomial::from_i64s(&[1, 0, 1]),
            ],
        ];
        let by_elim = det_poly_bareiss(a.clone());
        let by_interp = det_poly_by_interpolation(3, |x| {
            a.iter()
                .map(|row| row.iter().map(|p| p.eval_int(x)).collect())
                .collect()
        });
        assert_eq!(by_elim, by_interp);
        assert_eq!(by_elim, IntPolynomial::from_i64s(&[1, -3, 1, -1]));
    }
}
