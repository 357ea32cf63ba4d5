//! Combinatorial kernels shared by every counting formula in the crate.
//!
//! The central object is the partial product
//!
//! ```text
//! f_k(a, m) = 1/(a + k)                   m = 1   (pole at a = -k)
//!           = 1                           m = 2
//!           = a (a - k) ... (a - (m-3)k)  m >= 3
//! ```
//!
//! together with the descending k-step factorial `a!_(k)` and the binomial
//! coefficient.  Everything is exact; results that can be fractional are
//! [`Rational`], genuinely integral ones are [`BigInt`].

use num::bigint::BigInt;
use num::traits::One;

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::rational::{frac, rat, Rational};

/// The partial product `f_k(a, m)` defined above.
///
/// The only data-dependent failure is the pole of the `m = 1` branch at
/// `a = -k`; `k >= 1` and `m >= 1` are caller contracts.
pub fn partial_product(k: i64, a: i128, m: u32) -> Result<Rational> {
    assert!(k >= 1, "partial products need k >= 1");
    assert!(m >= 1, "partial products need m >= 1");
    match m {
        1 => {
            if a == -(k as i128) {
                Err(Error::PartialProductPole { k, a })
            } else {
                Ok(frac(1, a + k as i128))
            }
        }
        2 => Ok(rat(1)),
        _ => {
            let mut acc = rat(1);
            for j in 0..=(m as i128 - 3) {
                acc *= rat(a - k as i128 * j);
            }
            Ok(acc)
        }
    }
}

/// The descending factorial `a!_(k) = a (a-k) (a-2k) ...`, stopping at the
/// last positive factor.  Empty (hence 1) for `a <= 0`.  For `k = 2` this is
/// the double factorial.
pub fn k_factorial(k: i64, a: i128) -> BigInt {
    assert!(k >= 1, "k-factorials need k >= 1");
    let mut acc = BigInt::one();
    let mut x = a;
    while x > 0 {
        acc *= BigInt::from(x);
        x -= k as i128;
    }
    acc
}

/// The step-one partial product `f(a, p) = f_1(a, p)`, the weight a resonant
/// subset of size `p - 1` contributes to a fiber count.
pub fn abelian_f(a: i128, p: u32) -> Result<Rational> {
    partial_product(1, a, p)
}

/// `f_k(a, m)` as a polynomial in `a` (degree `m - 2`).  The `m = 1` branch
/// is a reciprocal, not a polynomial, and is rejected.
pub fn fk_as_polynomial(k: i64, m: u32) -> Result<UniPoly> {
    assert!(k >= 1, "partial products need k >= 1");
    assert!(m >= 1, "partial products need m >= 1");
    match m {
        1 => Err(Error::NotPolynomialInA),
        2 => Ok(UniPoly::one()),
        _ => {
            let roots: Vec<Rational> = (0..=(m as i128 - 3)).map(|j| rat(k as i128 * j)).collect();
            Ok(UniPoly::from_roots(&roots))
        }
    }
}

/// Binomial coefficient, with `binomial(n, r) = 0` for `r < 0` or `r > n`.
pub fn binomial(n: i64, r: i64) -> BigInt {
    if r < 0 || r > n {
        return BigInt::ZERO;
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 1..=r {
        acc = acc * BigInt::from(n - r + i) / BigInt::from(i);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pp(k: i64, a: i128, m: u32) -> Rational {
        partial_product(k, a, m).unwrap()
    }

    #[test]
    fn partial_product_branches() {
        assert_eq!(pp(3, 4, 1), frac(1, 7));
        assert_eq!(pp(5, 9, 2), rat(1));
        // f_3(-1, 4) = (-1)(-4) = 4
        assert_eq!(pp(3, -1, 4), rat(4));
        // f_2(3, 5) = 3 * 1 * (-1) = -3
        assert_eq!(pp(2, 3, 5), rat(-3));
        assert_eq!(pp(4, 13, 5), rat(13 * 9 * 5));
    }

    #[test]
    fn partial_product_pole() {
        assert_eq!(
            partial_product(4, -4, 1),
            Err(Error::PartialProductPole { k: 4, a: -4 })
        );
        // Away from m = 1 the same argument is fine.
        assert_eq!(pp(4, -4, 2), rat(1));
    }

    #[test]
    fn k_factorial_stops_at_last_positive_factor() {
        assert_eq!(k_factorial(4, 13), BigInt::from(585)); // 13 * 9 * 5 * 1
        assert_eq!(k_factorial(4, 3), BigInt::from(3));
        assert_eq!(k_factorial(2, 7), BigInt::from(105)); // double factorial
        assert_eq!(k_factorial(2, -1), BigInt::one());
        assert_eq!(k_factorial(3, 0), BigInt::one());
        assert_eq!(k_factorial(1, 5), BigInt::from(120)); // plain factorial
    }

    #[test]
    fn abelian_f_small_values() {
        // f(a, p) = a! / (a - p + 2)! for a >= p - 2
        assert_eq!(abelian_f(2, 4).unwrap(), rat(2));
        assert_eq!(abelian_f(5, 7).unwrap(), rat(120));
        assert_eq!(abelian_f(1, 3).unwrap(), rat(1));
        assert_eq!(abelian_f(3, 5).unwrap(), rat(6));
        assert_eq!(abelian_f(2, 1).unwrap(), frac(1, 3));
    }

    #[test]
    fn polynomial_form_matches_pointwise_values() {
        assert_eq!(fk_as_polynomial(2, 2).unwrap(), UniPoly::one());
        // f_2(a, 4) = a(a - 2) = a^2 - 2a
        let p = fk_as_polynomial(2, 4).unwrap();
        assert_eq!(p, UniPoly::from_ints(&[0, -2, 1]));
        assert_eq!(p.derivative().eval(&rat(3)), rat(4));
        assert_eq!(fk_as_polynomial(2, 1), Err(Error::NotPolynomialInA));
        for a in -6..=6 {
            assert_eq!(p.eval(&rat(a)), pp(2, a, 4), "a = {a}");
        }
    }

    #[test]
    fn binomial_values_and_out_of_range_zeros() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 0), BigInt::one());
        assert_eq!(binomial(5, 5), BigInt::one());
        assert_eq!(binomial(5, -1), BigInt::ZERO);
        assert_eq!(binomial(5, 6), BigInt::ZERO);
        assert_eq!(binomial(-2, 1), BigInt::ZERO);
        assert_eq!(binomial(52, 5), BigInt::from(2_598_960));
    }

    proptest! {
        // f_k(a, m) = (a - (m-3)k) f_k(a, m-1) for m >= 3.
        #[test]
        fn recurrence(k in 1i64..=6, a in -30i128..=30, m in 3u32..=9) {
            let lhs = pp(k, a, m);
            let rhs = rat(a - k as i128 * (m as i128 - 3)) * pp(k, a, m - 1);
            prop_assert_eq!(lhs, rhs);
        }

        // (a + k) f_k(a, 1) = 1 = f_k(a, 2) away from the pole.
        #[test]
        fn reciprocal_branch_inverts(k in 1i64..=6, a in -30i128..=30) {
            prop_assume!(a != -(k as i128));
            prop_assert_eq!(rat(a + k as i128) * pp(k, a, 1), rat(1));
        }

        // (a - (i-1)k) f_k(a, i+1) = f_k(a, i+2): one more factor absorbed.
        #[test]
        fn absorption(k in 1i64..=6, a in -30i128..=30, i in 1u32..=8) {
            let lhs = rat(a - k as i128 * (i as i128 - 1)) * pp(k, a, i + 1);
            prop_assert_eq!(lhs, pp(k, a, i + 2));
        }

        // f_k(B - k, m) = k^(m-2) f(B/k - 1, m) for k | B: rescaling by k
        // turns the k-step product into the step-one product.
        #[test]
        fn rescaling_bridge(k in 1i64..=6, q in -8i128..=8, m in 2u32..=9) {
            let b = k as i128 * q;
            let lhs = pp(k, b - k as i128, m);
            let scale = crate::rational::pow_i64(&rat(k as i128), m as i64 - 2).unwrap();
            let rhs = scale * abelian_f(b / k as i128 - 1, m).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        // Polynomial form agrees with the scalar branch everywhere.
        #[test]
        fn polynomial_form_is_pointwise_equal(k in 1i64..=6, a in -30i128..=30, m in 2u32..=9) {
            let p = fk_as_polynomial(k, m).unwrap();
            prop_assert_eq!(p.eval(&rat(a)), pp(k, a, m));
            prop_assert_eq!(p.degree().map(|d| d as u32).unwrap_or(0), m.saturating_sub(2));
        }
    }
}
