//! Dense univariate polynomials with arbitrary-precision integer
//! coefficients, and reduced rational generating functions built on them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Polynomial over the integers, coefficients stored lowest degree first.
///
/// The representation is kept trimmed: the last stored coefficient is
/// nonzero, and the zero polynomial has no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// `x^d p(1/x)` where `d` is the degree; the zero polynomial maps to itself.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// `p(-x)`
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| {
            acc * x + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
        })
    }

    /// Sign of `p(x)` at a rational point, exactly.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let v = self.eval_rational(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `self / content`, with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "pseudo-remainder by zero polynomial");
        let dd = d.degree().unwrap();
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            r = &r.scale(&lc) - &d.shift(rd - dd).scale(&lr);
        }
        r
    }

    /// Exact division in `Z[x]`; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.degree().unwrap();
        let lc = d.leading().unwrap();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                return None;
            }
            let (t, rem) = r.leading().unwrap().div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            r = &r - &d.shift(rd - dd).scale(&t);
            q[rd - dd] = t;
        }
        Some(Self::new(q))
    }

    /// Greatest common divisor over the rationals, returned primitive with
    /// positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// First `terms` Taylor coefficients of `self / den` at 0.
    ///
    /// Panics unless `den(0) = ±1`, which keeps every coefficient integral.
    pub fn series_div(&self, den: &Self, terms: usize) -> Vec<BigInt> {
        let d0 = den.coeff(0);
        assert!(
            d0.abs().is_one(),
            "series division needs a unit constant term in the denominator"
        );
        let mut out: Vec<BigInt> = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(den.coeffs.len().saturating_sub(1)) {
                acc -= &den.coeffs[j] * &out[k - j];
            }
            out.push(acc * &d0);
        }
        out
    }
}

impl<'a> Add<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<IntPolynomial> for IntPolynomial {
            type Output = IntPolynomial;
            fn $method(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        -&self
    }
}

/// Human-readable form, highest degree first: `-x^7 + 3x^6 - ... + 1`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Serialized as the list of coefficients (lowest degree first), each a
/// decimal string so arbitrarily large values survive JSON.
impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

/// Reduced rational function `numerator / denominator` with
/// `denominator(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalGF {
    pub numerator: IntPolynomial,
    pub denominator: IntPolynomial,
}

impl RationalGF {
    /// Cancels the common factor and normalizes the denominator's constant
    /// term to `+1`.
    ///
    /// Panics if the denominator vanishes at 0 or the normalized fraction
    /// would leave `Z[x]`; generating functions of counting sequences
    /// never do either.
    pub fn reduced(numerator: &IntPolynomial, denominator: &IntPolynomial) -> Self {
        assert!(!denominator.coeff(0).is_zero(), "denominator vanishes at 0");
        let g = numerator.gcd(denominator);
        let (mut num, mut den) = if g.is_zero() || g.degree() == Some(0) {
            (numerator.clone(), denominator.clone())
        } else {
            (
                numerator.exact_div(&g).expect("gcd divides numerator"),
                denominator.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let c = num.content().gcd(&den.content());
        if !c.is_zero() && !c.is_one() {
            num = num.exact_div(&IntPolynomial::constant(c.clone())).unwrap();
            den = den.exact_div(&IntPolynomial::constant(c)).unwrap();
        }
        let d0 = den.coeff(0);
        if !d0.is_one() {
            let d0p = IntPolynomial::constant(d0);
            num = num
                .exact_div(&d0p)
                .expect("normalized numerator is integral");
            den = den
                .exact_div(&d0p)
                .expect("normalized denominator is integral");
        }
        RationalGF {
            numerator: num,
            denominator: den,
        }
    }

    pub fn series(&self, terms: usize) -> Vec<BigInt> {
        self.numerator.series_div(&self.denominator, terms)
    }
}

impl fmt::Display for RationalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[]).degree(), None);
    }

    #[test]
    fn display_matches_usual_notation() {
        let a2 = p(&[1, 1, -2, 2, 1, -3, 3, -1]);
        assert_eq!(
            a2.to_string(),
            "-x^7 + 3x^6 - 3x^5 + x^4 + 2x^3 - 2x^2 + x + 1"
        );
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        assert_eq!(p(&[-1]).to_string(), "-1");
    }

    #[test]
    fn exact_division_and_gcd() {
        let a = p(&[1, 1]); // 1 + x
        let b = p(&[-1, 0, 1]); // x^2 - 1
        let c = p(&[2, 0, 1]); // x^2 + 2
        assert_eq!((&a * &c).exact_div(&a), Some(c.clone()));
        assert_eq!(c.exact_div(&a), None);
        assert_eq!(b.gcd(&(&a * &c)), a);
        assert_eq!(p(&[6, 12]).gcd(&p(&[4, 8])), p(&[1, 2]));
        assert_eq!(c.gcd(&p(&[1, 1])).degree(), Some(0));
    }

    #[test]
    fn series_of_geometric() {
        let s = p(&[1]).series_div(&p(&[1, -1]), 5);
        assert_eq!(s, vec![BigInt::one(); 5]);
    }

    #[test]
    fn reduce_gf_example() {
        // (1 + x)(1 + x^2) / ((1 + x)(1 - 2x))
        let num = &p(&[1, 1]) * &p(&[1, 0, 1]);
        let den = &p(&[1, 1]) * &p(&[1, -2]);
        let gf = RationalGF::reduced(&num, &den);
        assert_eq!(gf.numerator, p(&[1, 0, 1]));
        assert_eq!(gf.denominator, p(&[1, -2]));
        // negated inputs normalize to the same pair
        let gf2 = RationalGF::reduced(&-&num, &-&den);
        assert_eq!(gf, gf2);
    }

    #[test]
    fn evaluation_paths_agree() {
        let a = p(&[3, -1, 0, 2]);
        let x = BigRational::new(BigInt::from(3), BigInt::from(2));
        let exact = a.eval_rational(&x);
        assert!((exact.to_f64().unwrap() - a.eval_f64(1.5)).abs() < 1e-12);
        assert_eq!(a.eval_int(&BigInt::from(2)), BigInt::from(3 - 2 + 16));
        assert_eq!(a.derivative(), p(&[-1, 0, 6]));
        assert_eq!(a.reversed(), p(&[2, 0, -1, 3]));
    }
}
