//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! An element is stored as its coordinate vector over the power basis
//! `1, zeta_N, ..., zeta_N^(phi(N)-1)`, i.e. as the canonical representative
//! modulo the `N`-th cyclotomic polynomial `Phi_N`.  Because `Phi_N` is the
//! minimal polynomial of `zeta_N`, two elements are equal exactly when their
//! coordinate vectors agree, so the zero test — the decision every resonance
//! question reduces to — is plain coefficient comparison.
//!
//! Elements of different conductors mix freely: binary operations embed both
//! sides into `Q(zeta_L)` for `L = lcm` of the conductors via
//! `zeta_M = zeta_L^(L/M)`.  Conductors are never shrunk automatically;
//! [`CyclotomicElement::try_reduce_to`] recovers a smaller field on request.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::complex::Complex64;
use num::integer::lcm;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::rational::{rat, to_f64, Rational};

/// Euler's totient `phi(n)`, the degree of `Q(zeta_n)` over `Q`.
pub fn euler_phi(n: u32) -> u32 {
    assert!(n >= 1, "phi is defined for n >= 1");
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u32) -> Vec<u32> {
    assert!(n >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<UniPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<UniPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cyclotomic_cached(n: u32) -> Arc<UniPoly> {
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // Phi_n = (x^n - 1) / prod of Phi_d over proper divisors d of n.  The
    // divisions are exact; doing them one factor at a time keeps every
    // intermediate result an integer polynomial.
    let mut quotient = UniPoly::x_pow_minus_one(n as usize);
    for d in divisors(n) {
        if d < n {
            quotient = quotient.exact_div(&cyclotomic_cached(d));
        }
    }
    let arc = Arc::new(quotient);
    phi_cache()
        .lock()
        .unwrap()
        .entry(n)
        .or_insert_with(|| arc.clone())
        .clone()
}

/// The `n`-th cyclotomic polynomial `Phi_n`, monic of degree `phi(n)`.
pub fn cyclotomic_polynomial(n: u32) -> UniPoly {
    assert!(n >= 1, "cyclotomic polynomials are indexed by n >= 1");
    cyclotomic_cached(n).as_ref().clone()
}

/// An element of `Q(zeta_conductor)` in the power basis modulo `Phi_conductor`.
#[derive(Debug, Clone)]
pub struct CyclotomicElement {
    conductor: u32,
    coords: Vec<Rational>,
}

impl CyclotomicElement {
    fn reduced(conductor: u32, raw: Vec<Rational>) -> Self {
        let (_, rem) = UniPoly::new(raw).div_rem(&cyclotomic_cached(conductor));
        let mut coords = rem.coeffs().to_vec();
        coords.resize(euler_phi(conductor) as usize, rat(0));
        CyclotomicElement { conductor, coords }
    }

    pub fn zero(conductor: u32) -> Self {
        assert!(conductor >= 1);
        CyclotomicElement {
            conductor,
            coords: vec![rat(0); euler_phi(conductor) as usize],
        }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_rational(conductor, rat(1))
    }

    pub fn from_rational(conductor: u32, q: Rational) -> Self {
        assert!(conductor >= 1);
        let mut coords = vec![rat(0); euler_phi(conductor) as usize];
        coords[0] = q;
        CyclotomicElement { conductor, coords }
    }

    /// `zeta_conductor^e`, with the exponent reduced modulo the conductor.
    pub fn root_of_unity(conductor: u32, e: i64) -> Self {
        assert!(conductor >= 1);
        let e = e.rem_euclid(conductor as i64) as usize;
        let mut raw = vec![rat(0); e + 1];
        raw[e] = rat(1);
        Self::reduced(conductor, raw)
    }

    /// Interprets `coeffs[i]` as the coefficient of `zeta_conductor^i`.
    /// Indices beyond the conductor wrap around (`zeta^N = 1`).
    pub fn from_power_coeffs(conductor: u32, coeffs: &[Rational]) -> Self {
        assert!(conductor >= 1);
        let mut raw = vec![rat(0); conductor as usize];
        for (i, c) in coeffs.iter().enumerate() {
            let e = i % conductor as usize;
            raw[e] = &raw[e] + c;
        }
        Self::reduced(conductor, raw)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Coordinates over `1, zeta, ..., zeta^(phi(N)-1)`.
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The value as a rational if it lies in the prime field.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Embeds into `Q(zeta_n)` for a multiple `n` of the conductor, using
    /// `zeta_M = zeta_n^(n/M)`.  This is an injective ring homomorphism.
    pub fn embed(&self, n: u32) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(self.conductor) {
            return Err(Error::ConductorNotMultiple {
                from: self.conductor,
                to: n,
            });
        }
        if n == self.conductor {
            return Ok(self.clone());
        }
        let stride = (n / self.conductor) as usize;
        let mut raw = vec![rat(0); (self.coords.len() - 1) * stride + 1];
        for (i, c) in self.coords.iter().enumerate() {
            raw[i * stride] = c.clone();
        }
        Ok(Self::reduced(n, raw))
    }

    /// Rewrites the element in `Q(zeta_m)` for a divisor `m` of the conductor,
    /// if it actually lies in that subfield.  Together with [`embed`] this is
    /// the identity on the subfield, which is how the embedding's injectivity
    /// is exercised in tests.
    ///
    /// [`embed`]: CyclotomicElement::embed
    pub fn try_reduce_to(&self, m: u32) -> Result<Option<Self>> {
        if m == 0 || !self.conductor.is_multiple_of(m) {
            return Err(Error::ConductorNotMultiple {
                from: m,
                to: self.conductor,
            });
        }
        if m == self.conductor {
            return Ok(Some(self.clone()));
        }
        // Solve for coordinates over the embedded basis of Q(zeta_m).
        let dim = self.coords.len();
        let small_dim = euler_phi(m) as usize;
        let mut columns = Vec::with_capacity(small_dim);
        for j in 0..small_dim {
            let basis = Self::root_of_unity(m, j as i64).embed(self.conductor)?;
            columns.push(basis.coords);
        }
        let solution = solve_linear(dim, small_dim, &columns, &self.coords);
        Ok(solution.map(|coords| CyclotomicElement {
            conductor: m,
            coords,
        }))
    }

    /// Multiplicative inverse.  Fails only on zero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Extended Euclid against Phi_N: u * self + v * Phi_N = g with g a
        // nonzero constant, since Phi_N is irreducible and deg(self) < deg Phi_N.
        let phi = cyclotomic_cached(self.conductor);
        let a = UniPoly::new(self.coords.clone());
        let (g, u) = poly_half_egcd(&a, &phi);
        let g_const = g.coeff(0);
        debug_assert_eq!(g.degree(), Some(0), "gcd with an irreducible must be constant");
        let scaled: Vec<Rational> = u.coeffs().iter().map(|c| c / &g_const).collect();
        Ok(Self::reduced(self.conductor, scaled))
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.conductor);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Numerical value under `zeta_N = exp(2*pi*i/N)`.  Each coordinate is
    /// rounded to the nearest `f64`, so the result carries roughly 15
    /// significant digits; exactness questions must go through [`is_zero`]
    /// or equality, never through this embedding.
    ///
    /// [`is_zero`]: CyclotomicElement::is_zero
    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = std::f64::consts::TAU * j as f64 / self.conductor as f64;
            acc += to_f64(c) * Complex64::new(angle.cos(), angle.sin());
        }
        acc
    }

    /// Modulus of the numerical value.
    pub fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }

    fn unified(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let l = lcm(self.conductor, other.conductor);
        (
            self.embed(l).expect("lcm is a multiple"),
            other.embed(l).expect("lcm is a multiple"),
        )
    }

    /// Parses the textual grammar used for exact residues and roots.
    ///
    /// ```text
    /// expr     = [sign] term { sign term }
    /// term     = rational [ "*" zpower ] | zpower
    /// zpower   = "z" [ "^" natural ]
    /// rational = integer [ "/" integer ]
    /// ```
    ///
    /// `z` denotes `zeta_conductor`; exponents are reduced modulo the
    /// conductor.  Examples: `"1"`, `"-3/4"`, `"1+z"`, `"1/2*z^3"`, `"z^5"`.
    pub fn parse(input: &str, conductor: u32) -> Result<Self> {
        assert!(conductor >= 1);
        Parser::new(input, conductor).run()
    }
}

/// Evaluates `p` at a cyclotomic point by Horner's rule.
pub fn eval_poly(p: &UniPoly, x: &CyclotomicElement) -> CyclotomicElement {
    let mut acc = CyclotomicElement::zero(x.conductor());
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * x) + &CyclotomicElement::from_rational(x.conductor(), c.clone());
    }
    acc
}

/// Half extended gcd: returns `(g, u)` with `u*a = g  (mod b)` and `g` the gcd.
fn poly_half_egcd(a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = UniPoly::one();
    let mut s1 = UniPoly::zero();
    while !r1.is_zero() {
        let (q, rem) = r0.div_rem(&r1);
        let s_next = &s0 - &(&q * &s1);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s_next;
    }
    (r0, s0)
}

/// Solves the `rows x cols` system given by `columns` (each of length `rows`)
/// against `target`.  Returns `None` when the system is inconsistent.
fn solve_linear(
    rows: usize,
    cols: usize,
    columns: &[Vec<Rational>],
    target: &[Rational],
) -> Option<Vec<Rational>> {
    // Dense Gaussian elimination on the augmented matrix; sizes here are the
    // field degrees, so quadratic fill-in is acceptable.
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = columns.iter().map(|col| col[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; cols];
    let mut next_row = 0;
    for col in 0..cols {
        let Some(pr) = (next_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(next_row, pr);
        let inv = m[next_row][col].clone().recip();
        for x in m[next_row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = std::mem::take(&mut m[next_row]);
        for (r, row) in m.iter_mut().enumerate() {
            if r != next_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..=cols].iter_mut().zip(&pivot[col..=cols]) {
                    *x = &*x - &(p * &factor);
                }
            }
        }
        m[next_row] = pivot;
        pivot_of_col[col] = next_row;
        next_row += 1;
        if next_row == rows {
            break;
        }
    }
    // Inconsistent if any zero row has a nonzero augmented entry.
    if m[next_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut solution = vec![rat(0); cols];
    for col in 0..cols {
        if pivot_of_col[col] != usize::MAX {
            solution[col] = m[pivot_of_col[col]][cols].clone();
        }
    }
    Some(solution)
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.unified(other);
        a.coords == b.coords
    }
}

impl Eq for CyclotomicElement {}

impl std::ops::Add for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, other: &CyclotomicElement) -> CyclotomicElement {
        let (mut a, b) = self.unified(other);
        for (x, y) in a.coords.iter_mut().zip(&b.coords) {
            *x = &*x + y;
        }
        a
    }
}

impl std::ops::Sub for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, other: &CyclotomicElement) -> CyclotomicElement {
        let (mut a, b) = self.unified(other);
        for (x, y) in a.coords.iter_mut().zip(&b.coords) {
            *x = &*x - y;
        }
        a
    }
}

impl std::ops::Mul for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, other: &CyclotomicElement) -> CyclotomicElement {
        let (a, b) = self.unified(other);
        let product = &UniPoly::new(a.coords) * &UniPoly::new(b.coords);
        CyclotomicElement::reduced(a.conductor, product.coeffs().to_vec())
    }
}

impl std::ops::Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            conductor: self.conductor,
            coords: self.coords.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl std::ops::Add for CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, other: CyclotomicElement) -> CyclotomicElement {
        &self + &other
    }
}

impl std::ops::Sub for CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, other: CyclotomicElement) -> CyclotomicElement {
        &self - &other
    }
}

impl std::ops::Mul for CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, other: CyclotomicElement) -> CyclotomicElement {
        &self * &other
    }
}

impl std::ops::Neg for CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        -&self
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (_, true) => write!(f, "z^{e}")?,
                (_, false) => write!(f, "{mag}*z^{e}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    input: &'a str,
    conductor: u32,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, conductor: u32) -> Self {
        Parser {
            chars: input.chars().peekable(),
            input,
            conductor,
        }
    }

    fn fail<T>(&self, reason: &str) -> Result<T> {
        Err(Error::Parse {
            input: self.input.to_string(),
            reason: reason.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.chars.peek() == Some(&c) {
            self.chars.next();
            true
        } else {
            false
        }
    }

    fn natural(&mut self) -> Result<u64> {
        let mut digits = String::new();
        while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
            digits.push(self.chars.next().unwrap());
        }
        if digits.is_empty() {
            return self.fail("expected a number");
        }
        digits
            .parse()
            .or_else(|_| self.fail("number out of range"))
    }

    fn run(mut self) -> Result<CyclotomicElement> {
        let n = self.conductor;
        let mut raw = vec![rat(0); n as usize];
        self.skip_ws();
        if self.chars.peek().is_none() {
            return self.fail("empty expression");
        }
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            self.skip_ws();
            let (mut coeff, exponent) = self.term()?;
            if negative {
                coeff = -coeff;
            }
            let e = (exponent % n as u64) as usize;
            raw[e] = &raw[e] + coeff;
            self.skip_ws();
            match self.chars.next() {
                None => break,
                Some('+') => negative = false,
                Some('-') => negative = true,
                Some(c) => return self.fail(&format!("unexpected character {c:?}")),
            }
        }
        Ok(CyclotomicElement::reduced(n, raw))
    }

    /// One term: a rational, `q*z^e`, or a bare `z` power.
    fn term(&mut self) -> Result<(Rational, u64)> {
        if self.eat('z') {
            return Ok((rat(1), self.maybe_exponent()?));
        }
        let numer = self.natural()? as i128;
        let denom = if self.eat('/') {
            let d = self.natural()? as i128;
            if d == 0 {
                return self.fail("zero denominator");
            }
            d
        } else {
            1
        };
        let q = Rational::new(numer.into(), denom.into());
        self.skip_ws();
        if self.eat('*') {
            self.skip_ws();
            if !self.eat('z') {
                return self.fail("expected z after '*'");
            }
            Ok((q, self.maybe_exponent()?))
        } else {
            Ok((q, 0))
        }
    }

    /// Exponent of a `z` power; a bare `z` means exponent 1.
    fn maybe_exponent(&mut self) -> Result<u64> {
        if self.eat('^') {
            self.natural()
        } else {
            Ok(1)
        }
    }
}
