//! Dense univariate polynomials, lowest degree first.

use std::fmt;

use super::field::{format_rational, Field, Scalar, C, Q};

/// A dense univariate polynomial over a [`Scalar`] field.
///
/// Invariant: `coeffs` is empty for the zero polynomial, otherwise the last
/// entry is nonzero. Float polynomials only strip exact zeros; use
/// [`Poly::trim_relative`] to drop numerically negligible leading terms.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·z^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `z`.
    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    /// `z - a`.
    pub fn linear(a: &F) -> Self {
        Self::new(vec![a.neg(), F::one()])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[F]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, r| acc.mul(&Self::linear(r)))
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn degree_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&rhs.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&F::from_i64(k as i64)))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// Evaluate at a complex point regardless of coefficient field.
    pub fn eval_c64(&self, x: C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::new(0.0, 0.0), |acc, c| acc * x + c.to_c64())
    }

    /// Euclidean division. Panics if `rhs` is zero.
    pub fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        let dr = rhs.coeffs.len() - 1;
        let lead_inv = rhs.leading().try_inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dr {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![F::zero(); rem.len() - dr];
        for k in (0..quo.len()).rev() {
            let c = rem[k + dr].mul(&lead_inv);
            if !c.is_zero() {
                for (j, b) in rhs.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].sub(&c.mul(b));
                }
            }
            // Eliminated exactly in theory; force it for float inputs.
            rem[k + dr] = F::zero();
            quo[k] = c;
        }
        (Self::new(quo), Self::new(rem))
    }

    /// Exact quotient when `rhs` divides `self`.
    pub fn exact_div(&self, rhs: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(rhs);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Scale to leading coefficient one. The zero polynomial is unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().try_inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    ///
    /// Meaningful in exact mode; float callers should prefer root-based
    /// coprimality tests.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = if F::EXACT { r } else { r.trim_relative(1e-12) };
        }
        a.monic()
    }

    /// Squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).unwrap_or_else(|| self.clone()).monic()
    }

    /// Drop leading coefficients whose modulus is below `rel` times the
    /// largest coefficient modulus.
    pub fn trim_relative(&self, rel: f64) -> Self {
        let scale = self.max_modulus();
        let mut v = self.coeffs.clone();
        while v.last().is_some_and(|c| c.modulus() <= rel * scale) {
            v.pop();
        }
        Self::new(v)
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.modulus()).fold(0.0, f64::max)
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_float(&self) -> Poly<C> {
        self.map(|c| c.to_c64())
    }
}

impl Poly<C> {
    /// Rationalize every coefficient; `None` if any fails.
    pub fn to_exact(&self) -> Option<Poly<Q>> {
        self.coeffs
            .iter()
            .map(|c| Q::from_c64(*c))
            .collect::<Option<Vec<_>>>()
            .map(Poly::new)
    }
}

impl<F: Scalar> Default for Poly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Poly<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if Field::is_zero(c) {
                continue;
            }
            let neg = c < &<Q as Field>::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                let s = format_rational(&mag);
                if mag.is_integer() || k == 0 {
                    write!(f, "{s}")?;
                } else {
                    write!(f, "({s})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !Field::is_zero(*c))
            .map(|(k, c)| match k {
                0 => format!("({:.6}{:+.6}i)", c.re, c.im),
                1 => format!("({:.6}{:+.6}i)z", c.re, c.im),
                _ => format!("({:.6}{:+.6}i)z^{k}", c.re, c.im),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Wronskian-type combination `p·q' − q·p'`.
pub fn wronskian2<F: Scalar>(p: &Poly<F>, q: &Poly<F>) -> Poly<F> {
    p.mul(&q.derivative()).sub(&q.mul(&p.derivative()))
}

/// Exact comparison after normalization, for checking float against exact
/// results: max coefficient difference relative to the exact scale.
pub fn relative_distance(exact: &Poly<Q>, float: &Poly<C>) -> f64 {
    let n = exact.coeffs().len().max(float.coeffs().len());
    let scale = exact.max_modulus().max(1e-300);
    (0..n)
        .map(|k| (exact.coeff(k).to_c64() - float.coeff(k)).norm())
        .fold(0.0, f64::max)
        / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::field::q;
    use proptest::prelude::*;

    fn pz(c: &[i64]) -> Poly<Q> {
        Poly::from_i64(c)
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(pz(&[1, 1]).derivative(), pz(&[1]));
        assert_eq!(pz(&[0, 0, 0, 1]).derivative(), pz(&[0, 0, 3]));
        assert_eq!(pz(&[5]).derivative(), Poly::zero());
    }

    #[test]
    fn wronskian_examples() {
        let p = pz(&[3, 1, 4]);
        assert!(wronskian2(&p, &p).is_zero());
        assert_eq!(wronskian2(&pz(&[1, 1]), &pz(&[1])), pz(&[-1]));
        assert_eq!(wronskian2(&pz(&[0, 0, 1]), &pz(&[0, 1])), pz(&[0, 0, -1]));
    }

    #[test]
    fn division_and_gcd() {
        let a = pz(&[-1, 0, 1]); // z^2 - 1
        let b = pz(&[1, 1]);
        let (q_, r) = a.div_rem(&b);
        assert_eq!(q_, pz(&[-1, 1]));
        assert!(r.is_zero());
        let g = pz(&[-2, 1]).mul(&pz(&[1, 1])).gcd(&pz(&[-2, 1]).mul(&pz(&[3, 1])));
        assert_eq!(g, pz(&[-2, 1]));
        assert_eq!(pz(&[1, 1]).gcd(&pz(&[2, 1])), pz(&[1]));
        let sq = pz(&[-2, 1]).pow(2).mul(&pz(&[1, 1]));
        assert_eq!(sq.squarefree_part(), pz(&[-2, 1]).mul(&pz(&[1, 1])));
    }

    #[test]
    fn display_exact() {
        let p = Poly::new(vec![q(-1, 2), q(0, 1), q(3, 1), q(1, 1)]);
        assert_eq!(p.to_string(), "z^3 + 3z^2 - 1/2");
        assert_eq!(Poly::<Q>::zero().to_string(), "0");
    }

    fn arb_poly() -> impl Strategy<Value = Poly<Q>> {
        prop::collection::vec((-9i64..10, 1i64..5), 0..6)
            .prop_map(|v| Poly::new(v.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn distributive_and_degree_additive(a in arb_poly(), b in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(a.add(&b).mul(&r), a.mul(&r).add(&b.mul(&r)));
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!(a.mul(&b).degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
            }
        }

        #[test]
        fn leibniz_rule(a in arb_poly(), b in arb_poly()) {
            let lhs = a.mul(&b).derivative();
            let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn float_agrees_with_exact(a in arb_poly(), b in arb_poly()) {
            let exact = a.mul(&b).derivative().add(&a);
            let float = a.to_float().mul(&b.to_float()).derivative().add(&a.to_float());
            prop_assert!(relative_distance(&exact, &float) <= 1e-10);
        }

        #[test]
        fn div_rem_reconstructs(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q_, r) = a.div_rem(&b);
            prop_assert_eq!(q_.mul(&b).add(&r), a);
            prop_assert!(r.degree_i() < b.degree_i());
        }
    }
}
