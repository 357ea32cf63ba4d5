//! Univariate polynomials with exact rational coefficients.
//!
//! [`UniPoly`] stores coefficients in ascending order of degree with no
//! trailing zeros, so the zero polynomial is the empty list and equality is
//! coefficient equality.  Division is Euclidean; [`UniPoly::exact_div`]
//! additionally insists on a zero remainder and is what the cyclotomic
//! tower is built from.

use std::ops::{Add, Mul, Neg, Sub};

use num::traits::Zero;

use crate::rational::{rat, Rational};

/// A polynomial `c0 + c1*x + c2*x^2 + ...` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Builds a polynomial from ascending integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| rat(c as i128)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        UniPoly::from_ints(&[0, 1])
    }

    /// `x^n - 1`, the polynomial whose roots are the n-th roots of unity.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![rat(0); n + 1];
        coeffs[0] = rat(-1);
        coeffs[n] = rat(1);
        UniPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(|| rat(0))
    }

    /// Ascending coefficient slice with no trailing zeros.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Evaluation by Horner's rule.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = rat(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// First derivative.
    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat(i as i128 + 1))
                .collect(),
        )
    }

    /// `r`-th derivative (the zero polynomial once `r` exceeds the degree).
    pub fn nth_derivative(&self, r: usize) -> UniPoly {
        let mut p = self.clone();
        for _ in 0..r {
            if p.is_zero() {
                break;
            }
            p = p.derivative();
        }
        p
    }

    /// Euclidean division: returns `(q, r)` with `self = q*divisor + r` and
    /// `deg r < deg divisor`.  Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let d = divisor.coeffs.len();
        if self.coeffs.len() < d {
            return (UniPoly::zero(), self.clone());
        }
        let lead_inv = divisor.coeffs[d - 1].clone().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![rat(0); self.coeffs.len() - d + 1];
        for i in (0..quot.len()).rev() {
            let factor = &rem[i + d - 1] * &lead_inv;
            if factor.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let sub = dc * &factor;
                rem[i + j] = &rem[i + j] - sub;
            }
            quot[i] = factor;
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "exact_div called with a non-divisor");
        q
    }

    /// Product of the linear factors `(x - roots[0]) ... (x - roots[m-1])`.
    pub fn from_roots(roots: &[Rational]) -> UniPoly {
        let mut acc = UniPoly::one();
        for r in roots {
            acc = &acc * &UniPoly::new(vec![-r.clone(), rat(1)]);
        }
        acc
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        UniPoly::new(coeffs)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - other.coeff(i));
        }
        UniPoly::new(coeffs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![rat(0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + a * b;
            }
        }
        UniPoly::new(coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, other: UniPoly) -> UniPoly {
        &self + &other
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, other: UniPoly) -> UniPoly {
        &self - &other
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, other: UniPoly) -> UniPoly {
        &self * &other
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn canonical_form_trims_trailing_zeros() {
        let p = UniPoly::new(vec![rat(1), rat(0), rat(0)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(UniPoly::new(vec![rat(0)]), UniPoly::zero());
        assert_eq!(UniPoly::zero().degree(), None);
    }

    #[test]
    fn ring_ops() {
        // (x^2 + 1) + (2x + 3) = x^2 + 2x + 4
        let a = UniPoly::from_ints(&[1, 0, 1]);
        let b = UniPoly::from_ints(&[3, 2]);
        assert_eq!(&a + &b, UniPoly::from_ints(&[4, 2, 1]));
        // (x + 1)(x - 1) = x^2 - 1
        let c = UniPoly::from_ints(&[1, 1]);
        let d = UniPoly::from_ints(&[-1, 1]);
        assert_eq!(&c * &d, UniPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(&a - &a, UniPoly::zero());
        assert_eq!(-&c, UniPoly::from_ints(&[-1, -1]));
    }

    #[test]
    fn division_with_remainder() {
        // x^3 - 2x + 5 = (x^2 + x - 1)(x - 1) + 4
        let f = UniPoly::from_ints(&[5, -2, 0, 1]);
        let g = UniPoly::from_ints(&[-1, 1]);
        let (q, r) = f.div_rem(&g);
        assert_eq!(q, UniPoly::from_ints(&[-1, 1, 1]));
        assert_eq!(r, UniPoly::from_ints(&[4]));
        assert_eq!(&(&q * &g) + &r, f);
    }

    #[test]
    fn exact_division_of_root_of_unity_polys() {
        // (x^4 - 1)/(x^2 - 1) = x^2 + 1
        let num = UniPoly::x_pow_minus_one(4);
        let den = UniPoly::x_pow_minus_one(2);
        assert_eq!(num.exact_div(&den), UniPoly::from_ints(&[1, 0, 1]));
    }

    #[test]
    #[should_panic(expected = "non-divisor")]
    fn exact_division_rejects_remainders() {
        let f = UniPoly::from_ints(&[1, 1]);
        let g = UniPoly::from_ints(&[0, 1]);
        f.exact_div(&g);
    }

    #[test]
    fn evaluation_and_derivatives() {
        // p = x^2 - 2x, p(3) = 3, p'(3) = 4, p''(3) = 2, p''' = 0
        let p = UniPoly::from_ints(&[0, -2, 1]);
        assert_eq!(p.eval(&rat(3)), rat(3));
        assert_eq!(p.derivative().eval(&rat(3)), rat(4));
        assert_eq!(p.nth_derivative(2).eval(&rat(3)), rat(2));
        assert!(p.nth_derivative(3).is_zero());
        assert_eq!(p.eval(&frac(1, 2)), frac(-3, 4));
    }

    #[test]
    fn product_of_linear_factors() {
        // (x - 0)(x - 2) = x^2 - 2x
        let p = UniPoly::from_roots(&[rat(0), rat(2)]);
        assert_eq!(p, UniPoly::from_ints(&[0, -2, 1]));
    }
}
