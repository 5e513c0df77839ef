//! Rational functions `num/den` in one variable.

use std::fmt;

use super::field::{Field, Scalar, C, Q};
use super::poly::Poly;

/// A univariate rational function.
///
/// Exact mode keeps `num/den` coprime with `den` monic, so structural
/// equality is equality of functions. Float mode only makes `den` monic;
/// compare float values with [`RatFunc::approx_eq`].
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Scalar> RatFunc<F> {
    /// Build and normalize `num/den`. Returns `None` when `den` is zero.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::normalized(num, den))
    }

    fn normalized(num: Poly<F>, den: Poly<F>) -> Self {
        if num.is_zero() {
            return Self::from_poly(Poly::zero());
        }
        let (num, den) = if F::EXACT {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides numerator"),
                    den.exact_div(&g).expect("gcd divides denominator"),
                )
            }
        } else {
            (num, den)
        };
        let lead = den.leading().try_inv().expect("nonzero denominator");
        RatFunc {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    /// Polynomial value if the denominator is constant.
    pub fn as_poly(&self) -> Option<Poly<F>> {
        if self.den.is_constant() {
            let inv = self.den.leading().try_inv()?;
            Some(self.num.scale(&inv))
        } else {
            None
        }
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    /// Constant value if this is a constant function.
    pub fn as_constant(&self) -> Option<F> {
        if self.is_poly() && self.num.is_constant() {
            Some(self.as_poly()?.coeff(0))
        } else {
            None
        }
    }

    /// Degree as a rational function, `deg num − deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.num.degree().map(|d| d as i64 - self.den.degree_i())
    }

    pub fn derivative(&self) -> Self {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::normalized(n, self.den.mul(&self.den))
    }

    /// Logarithmic derivative `p'/p` of a nonzero polynomial.
    pub fn log_derivative(p: &Poly<F>) -> Option<Self> {
        Self::new(p.derivative(), p.clone())
    }

    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        d.try_inv().map(|di| self.num.eval(x).mul(&di))
    }

    pub fn eval_c64(&self, x: C) -> Option<C> {
        let d = self.den.eval_c64(x);
        if d.norm() == 0.0 {
            None
        } else {
            Some(self.num.eval_c64(x) / d)
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::normalized(self.num.scale(s), self.den.clone())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G + Copy) -> RatFunc<G> {
        RatFunc::normalized(self.num.map(f), self.den.map(f))
    }

    pub fn to_float(&self) -> RatFunc<C> {
        self.map(|c| c.to_c64())
    }

    /// Maximum of `|self(x) − other(x)|` over `points`, skipping poles.
    pub fn max_diff_at(&self, other: &Self, points: &[C]) -> f64 {
        points
            .iter()
            .filter_map(|&x| Some((self.eval_c64(x)? - other.eval_c64(x)?).norm()))
            .fold(0.0, f64::max)
    }

    /// Maximum of `|self(x)|` over `points`, skipping poles.
    pub fn max_abs_at(&self, points: &[C]) -> f64 {
        points
            .iter()
            .filter_map(|&x| Some(self.eval_c64(x)?.norm()))
            .fold(0.0, f64::max)
    }

    /// Float comparison at sample points, relative to the larger magnitude.
    pub fn approx_eq(&self, other: &Self, points: &[C], tol: f64) -> bool {
        let scale = self.max_abs_at(points).max(other.max_abs_at(points)).max(1.0);
        self.max_diff_at(other, points) <= tol * scale
    }
}

impl<F: Scalar> Field for RatFunc<F> {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        Self::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn try_inv(&self) -> Option<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else if F::EXACT {
            1.0 / (1.0 + (self.num.coeffs().len() + self.den.coeffs().len()) as f64)
        } else {
            self.num.max_modulus() / self.den.max_modulus().max(1e-300)
        }
    }
}

impl<F: Scalar> From<Poly<F>> for RatFunc<F> {
    fn from(p: Poly<F>) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RatFunc<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Display for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}
