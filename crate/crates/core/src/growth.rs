//! Perron eigenvalues, asymptotic constants, and the closed form of the
//! characteristic polynomials.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::transfer::{charpoly, generating_function};

/// Step of the downward scan from 3 that looks for the topmost sign change.
const SCAN_STEP_DENOM: i64 = 64;

/// Growth data of the path counts in a strip of fixed height.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthData {
    pub m: u32,
    /// Perron eigenvalue `r_m`.
    pub r: f64,
    /// `q_m` in `c_m(n) ~ q_m r_m^n`; absent when only the root was asked for.
    pub q: Option<f64>,
    /// `1 / (r^2 (r-1)^2)`.
    pub c: Option<f64>,
    /// Absolute error bound on `r`.
    pub tol: f64,
    /// Exact rational bracket `[lo, hi]` containing the root.
    #[serde(serialize_with = "ser_bracket")]
    pub bracket: (BigRational, BigRational),
}

fn ser_bracket<S: serde::Serializer>(
    b: &(BigRational, BigRational),
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq([b.0.to_string(), b.1.to_string()])
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial with rational coefficients, lowest degree first; only used
/// for Sturm chains.
type RatPoly = Vec<BigRational>;

fn rp_trim(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rp_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        if lr.is_zero() {
            r.pop();
            continue;
        }
        let t = lr / &lb;
        let shift = r.len() - 1 - db;
        for (k, bc) in b.iter().enumerate() {
            r[shift + k] -= &t * bc;
        }
        r.pop();
    }
    rp_trim(r)
}

fn rp_eval_sign(p: &RatPoly, x: &BigRational) -> i8 {
    let v = p
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of a squarefree-or-not polynomial; counts distinct real
/// roots.
struct SturmChain(Vec<RatPoly>);

impl SturmChain {
    fn new(p: &IntPolynomial) -> Self {
        let to_rat = |q: &IntPolynomial| -> RatPoly {
            q.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        };
        let mut chain = vec![to_rat(p), to_rat(&p.derivative())];
        while chain.last().is_some_and(|q| !q.is_empty()) {
            let k = chain.len();
            let r = rp_rem(&chain[k - 2], &chain[k - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        chain.retain(|q| !q.is_empty());
        SturmChain(chain)
    }

    fn sign_changes(&self, x: &BigRational) -> usize {
        let signs: Vec<i8> = self
            .0
            .iter()
            .map(|q| rp_eval_sign(q, x))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in `(a, b]`.
    fn count_in(&self, a: &BigRational, b: &BigRational) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}

/// Largest real root of `a_m` in `[1, 3]`, bracketed to width `<= tol`.
///
/// The bracket comes from a downward scan with step 1/64 for the topmost
/// sign change, certified by a Sturm count (exactly one root in
/// `(lo, 3]`), then bisected with exact sign evaluations.
pub fn perron(m: u32, tol: f64) -> Result<GrowthData> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::DomainError(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let a = charpoly(m);
    let (lo, hi) = isolate_top_root(&a, tol);
    let r = ((&lo + &hi) / rat(2, 1)).to_f64().unwrap();
    Ok(GrowthData {
        m,
        r,
        q: None,
        c: None,
        tol,
        bracket: (lo, hi),
    })
}

fn isolate_top_root(a: &IntPolynomial, tol: f64) -> (BigRational, BigRational) {
    let top = rat(3, 1);
    let bottom = rat(1, 1);
    let sturm = SturmChain::new(a);
    let top_sign = a.sign_at(&top);
    assert!(
        top_sign != 0,
        "a_m(3) = 0 would need every column sum to be 3"
    );

    // Downward scan for the first sign change or exact zero.
    let step = rat(1, SCAN_STEP_DENOM);
    let mut upper = top.clone();
    let mut lower = &top - &step;
    let certified = loop {
        let s = a.sign_at(&lower);
        if s == 0 {
            if sturm.count_in(&lower, &top) == 0 {
                return (lower.clone(), lower);
            }
            break false;
        }
        if s != top_sign {
            break sturm.count_in(&lower, &top) == 1;
        }
        assert!(lower > bottom, "no sign change in [1, 3]");
        upper = lower.clone();
        lower = &lower - &step;
    };
    if !certified {
        // Roots hid between grid points above the cell: isolate the topmost
        // root by Sturm bisection instead.
        let (mut lo, mut hi) = (&bottom - &step, top.clone());
        while sturm.count_in(&lo, &hi) > 1 {
            let mid = (&lo + &hi) / rat(2, 1);
            if sturm.count_in(&mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if a.sign_at(&hi) == 0 {
            return (hi.clone(), hi);
        }
        lower = lo;
        upper = hi;
    }

    // Exact-sign bisection; the Perron root is simple so the sign flips
    // across it and nowhere else in the bracket.
    let tol_q = BigRational::from_float(tol).unwrap_or_else(|| rat(1, 1 << 40));
    let (mut lo, mut hi) = (lower, upper);
    let hi_sign = a.sign_at(&hi);
    while &hi - &lo > tol_q {
        let mid = (&lo + &hi) / rat(2, 1);
        let s = a.sign_at(&mid);
        if s == 0 {
            return (mid.clone(), mid);
        }
        if s == hi_sign {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Perron root plus `q_m = -r P(1/r) / Q'(1/r)` from the reduced generating
/// function `P/Q`, and `C_m = 1/(r^2 (r-1)^2)`.
pub fn growth_constants(m: u32, tol: f64) -> Result<GrowthData> {
    if m == 0 {
        return Err(Error::TooSmall("growth constants need m >= 1".into()));
    }
    let mut g = perron(m, tol)?;
    let gf = generating_function(m);
    let r = g.r;
    let x = 1.0 / r;
    let dq = gf.denominator.derivative().eval_f64(x);
    if dq.abs() < tol {
        return Err(Error::DegenerateRoot(dq.abs()));
    }
    let q = -r * gf.numerator.eval_f64(x) / dq;
    g.q = Some(q);
    g.c = Some(bottleneck_fraction(r));
    Ok(g)
}

pub fn bottleneck_fraction(r: f64) -> f64 {
    1.0 / (r * r * (r - 1.0) * (r - 1.0))
}

/// Roots of the discriminant `(x^4 - 1)(x^2 - 2x - 1)`.
pub fn discriminant_roots() -> [Complex64; 6] {
    let s2 = std::f64::consts::SQRT_2;
    [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(1.0 + s2, 0.0),
        Complex64::new(1.0 - s2, 0.0),
    ]
}

/// Tolerance around the discriminant roots where the closed form is
/// rejected.
pub const EXCLUSION_RADIUS: f64 = 1e-9;

/// `a_m(x) = alpha_+ beta_+^m + alpha_- beta_-^m` with principal square
/// roots.
pub fn charpoly_closed_form(m: u32, x: Complex64) -> Result<Complex64> {
    if discriminant_roots()
        .iter()
        .any(|r| (x - r).norm() < EXCLUSION_RADIUS)
    {
        return Err(Error::ExcludedPoint(format!("{x}")));
    }
    let one = Complex64::one();
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x2 * x2;
    let gamma = (x4 - one) * (x2 - 2.0 * x - one);
    let s = gamma.sqrt();
    let half_diff = (x4 - 2.0 * x3 - one) / (2.0 * s);
    let alpha_p = half_diff + (one - x) / 2.0;
    let alpha_m = -half_diff + (one - x) / 2.0;
    let b = -x3 + x2 - x - one;
    let beta_p = (b + s) / 2.0;
    let beta_m = (b - s) / 2.0;
    let m = m as i32;
    Ok(alpha_p * beta_p.powi(m) + alpha_m * beta_m.powi(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_counts_known_roots() {
        // (x - 1)(x - 2)(x + 1) = x^3 - 2x^2 - x + 2
        let p = IntPolynomial::from_i64s(&[2, -1, -2, 1]);
        let s = SturmChain::new(&p);
        assert_eq!(s.count_in(&rat(-3, 1), &rat(3, 1)), 3);
        assert_eq!(s.count_in(&rat(0, 1), &rat(3, 2)), 1);
        assert_eq!(s.count_in(&rat(5, 2), &rat(3, 1)), 0);
    }

    #[test]
    fn isolates_top_root_of_close_pair() {
        // (x - 2)(x - 2 - 1/1000) scaled: roots 2 and 2.001, both inside one
        // scan cell; the Sturm fallback must find the top one.
        let p = IntPolynomial::from_i64s(&[4002, -4001, 1000]);
        let (lo, hi) = isolate_top_root(&p, 1e-9);
        let mid = ((lo + hi) / rat(2, 1)).to_f64().unwrap();
        assert!((mid - 2.001).abs() < 1e-8, "{mid}");
    }

    #[test]
    fn perron_m0_is_exactly_one() {
        let g = perron(0, 1e-10).unwrap();
        assert_eq!(g.bracket.0, rat(1, 1));
        assert_eq!(g.r, 1.0);
    }

    #[test]
    fn closed_form_rejects_excluded_points() {
        for r in discriminant_roots() {
            assert!(matches!(
                charpoly_closed_form(3, r),
                Err(Error::ExcludedPoint(_))
            ));
        }
    }

    #[test]
    fn closed_form_at_two_for_m2() {
        // a_2(2) = -128 + 192 - 96 + 16 + 16 - 8 + 2 + 1
        let v = charpoly_closed_form(2, Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re + 5.0).abs() < 1e-9 && v.im.abs() < 1e-9, "{v}");
    }

    #[test]
    fn growth_rejects_bad_input() {
        assert!(matches!(perron(2, 0.0), Err(Error::DomainError(_))));
        assert!(matches!(growth_constants(0, 1e-9), Err(Error::TooSmall(_))));
    }
}
