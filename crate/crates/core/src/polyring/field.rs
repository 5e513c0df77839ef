//! Coefficient fields.
//!
//! Two scalar fields are supported: exact rationals ([`Q`], arbitrary
//! precision) and complex doubles ([`C`]). Rational functions and matrices
//! reuse the same [`Field`] interface so elimination code is written once.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linsolve::{rref_solve, svd_solve, DenseSolution};

/// Exact rational numbers.
pub type Q = BigRational;
/// Complex double-precision numbers.
pub type C = Complex64;

/// A commutative field with exact-zero test.
///
/// Method names are deliberately plain; the std operator traits are not
/// in the prelude so there is no ambiguity at call sites.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn try_inv(&self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;

    /// Division. Panics on a zero divisor, like integer division.
    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.try_inv().expect("division by zero"))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Heuristic size used to pick elimination pivots. Zero iff `is_zero`.
    fn pivot_weight(&self) -> f64;

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// A scalar coefficient field: [`Q`] or [`C`].
pub trait Scalar: Field + 'static {
    /// True for exact arithmetic.
    const EXACT: bool;

    /// |x| as a double.
    fn modulus(&self) -> f64;
    fn to_c64(&self) -> C;
    fn from_q(q: &Q) -> Self;
    /// Convert from a complex double. Exact mode rationalizes the real part
    /// and refuses values with a non-negligible imaginary part.
    fn from_c64(c: C) -> Option<Self>;
    /// The exact value, when the field is exact.
    fn as_exact(&self) -> Option<Q>;
    fn label() -> &'static str;

    /// Solve a dense linear system `a·x = b` with `ncols` unknowns.
    fn solve_dense(a: &[Vec<Self>], ncols: usize, b: &[Self], tol: f64) -> DenseSolution<Self> {
        let _ = tol;
        rref_solve(a, ncols, b)
    }
}

impl Field for Q {
    fn zero() -> Self {
        <Q as Zero>::zero()
    }
    fn one() -> Self {
        <Q as One>::one()
    }
    fn is_zero(&self) -> bool {
        <Q as Zero>::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        if Field::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }
    fn pivot_weight(&self) -> f64 {
        if Field::is_zero(self) {
            0.0
        } else {
            // Prefer small-height pivots; any nonzero pivot is exact.
            1.0 / (1.0 + self.numer().bits() as f64 + self.denom().bits() as f64)
        }
    }
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn modulus(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn to_c64(&self) -> C {
        C::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn from_c64(c: C) -> Option<Self> {
        if c.im.abs() > 1e-9 * (1.0 + c.re.abs()) {
            return None;
        }
        rationalize(c.re, 1e-12, 1_000_000_000)
    }
    fn as_exact(&self) -> Option<Q> {
        Some(self.clone())
    }
    fn label() -> &'static str {
        "exact"
    }
}

impl Field for C {
    fn zero() -> Self {
        C::new(0.0, 0.0)
    }
    fn one() -> Self {
        C::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        if Field::is_zero(self) {
            None
        } else {
            Some(C::new(1.0, 0.0) / self)
        }
    }
    fn from_i64(n: i64) -> Self {
        C::new(n as f64, 0.0)
    }
    fn pivot_weight(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for C {
    const EXACT: bool = false;

    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> C {
        *self
    }
    fn from_q(q: &Q) -> Self {
        q.to_c64()
    }
    fn from_c64(c: C) -> Option<Self> {
        Some(c)
    }
    fn as_exact(&self) -> Option<Q> {
        None
    }
    fn label() -> &'static str {
        "float"
    }
    fn solve_dense(a: &[Vec<Self>], ncols: usize, b: &[Self], tol: f64) -> DenseSolution<Self> {
        svd_solve(a, ncols, b, tol)
    }
}

/// Continued-fraction approximation of `x` by the first convergent within
/// `tol·max(1,|x|)`, with denominator at most `max_den`.
pub fn rationalize(x: f64, tol: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let target = tol * x.abs().max(1.0);
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e18 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= target {
            return Some(Q::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = r - a;
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Parse a rational written as `"p/q"`, `"p"` or a decimal literal like
/// `"0.25"`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Q::new(p, q));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Q::from_integer(n));
    }
    // Exact decimal expansion.
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.')?;
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = if digits.is_empty() { return None } else { digits.parse().ok()? };
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let q = Q::new(num, den);
    Some(if neg { -q } else { q })
}

/// Format a rational as `"p/q"` (or `"p"` for integers).
pub fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Shorthand for a small rational constant.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for a real complex constant.
pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(-1.0, 1e-12, 1000), Some(q(-1, 1)));
        assert_eq!(rationalize(0.5, 1e-12, 1000), Some(q(1, 2)));
        assert_eq!(rationalize(-2.0 / 3.0, 1e-12, 1000), Some(q(-2, 3)));
        assert_eq!(rationalize(std::f64::consts::PI, 1e-14, 1000), None);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("1/2"), Some(q(1, 2)));
        assert_eq!(parse_rational("-3"), Some(q(-3, 1)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(format_rational(&q(6, 4)), "3/2");
        assert_eq!(format_rational(&q(-4, 2)), "-2");
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(Field::pow(&q(2, 3), 5), q(32, 243));
        assert_eq!(Field::pow(&q(7, 1), 0), q(1, 1));
    }

    #[test]
    fn exact_from_c64_rejects_complex() {
        assert_eq!(Q::from_c64(c(0.75, 0.0)), Some(q(3, 4)));
        assert_eq!(Q::from_c64(c(0.75, 0.5)), None);
    }
}
