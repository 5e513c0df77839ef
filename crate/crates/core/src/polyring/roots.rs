//! Polynomial roots.
//!
//! Float mode: eigenvalues of the companion matrix, polished by Newton and
//! clustered into multiplicities. Exact mode: rational roots are split off
//! (float-guided candidates, verified exactly) and the remainder is kept as
//! a cofactor.

use nalgebra::DMatrix;

use super::field::{Field, Scalar, C, Q};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Default closeness test for roots: `|a − b| < 1e−7·(1 + |a|)`.
pub fn roots_coincide(a: C, b: C) -> bool {
    (a - b).norm() < ROOT_CLOSENESS * (1.0 + a.norm())
}

/// Relative closeness threshold used by [`roots_coincide`].
pub const ROOT_CLOSENESS: f64 = 1e-7;

/// Complex roots with multiplicity, as found numerically.
#[derive(Clone, Debug, PartialEq)]
pub struct RootList {
    /// Every root repeated according to multiplicity, sorted by (re, im).
    pub roots: Vec<C>,
    pub leading: C,
}

impl RootList {
    /// Distinct roots with multiplicities.
    pub fn clusters(&self) -> Vec<(C, usize)> {
        let mut out: Vec<(C, usize)> = Vec::new();
        for &r in &self.roots {
            if let Some(entry) = out.iter_mut().find(|(c, _)| roots_coincide(*c, r)) {
                entry.1 += 1;
            } else {
                out.push((r, 1));
            }
        }
        out
    }

    pub fn has_multiple_root(&self) -> bool {
        self.clusters().iter().any(|(_, m)| *m > 1)
    }

    /// Rebuild `leading · Π (z − r)`.
    pub fn reconstruct(&self) -> Poly<C> {
        Poly::from_roots(&self.roots).scale(&self.leading)
    }
}

/// Numerical roots of a polynomial (any coefficient field).
///
/// `tol` is the relative residual target for the Newton polish.
pub fn roots<F: Scalar>(p: &Poly<F>, tol: f64) -> Result<RootList> {
    let p = p.to_float();
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.degree().unwrap_or(0);
    let leading = p.leading();
    if n == 0 {
        return Ok(RootList { roots: vec![], leading });
    }
    // Strip zero roots first: they are exact and keep the companion matrix
    // nonsingular.
    let zeros = p.coeffs().iter().take_while(|c| Field::is_zero(*c)).count();
    let core = Poly::new(p.coeffs()[zeros..].to_vec());
    let mut found = vec![C::new(0.0, 0.0); zeros];
    found.extend(companion_eigenvalues(&core)?);

    let dp = p.derivative();
    let scale: f64 = p.coeffs().iter().map(|c| c.norm()).sum();
    for r in found.iter_mut().skip(zeros) {
        for _ in 0..8 {
            let v = p.eval(r);
            if v.norm() <= tol * scale * (1.0 + r.norm()).powi(n as i32) * 1e-3 {
                break;
            }
            let d = dp.eval(r);
            if d.norm() == 0.0 {
                break;
            }
            let next = *r - v / d;
            if p.eval(&next).norm() < v.norm() {
                *r = next;
            } else {
                break;
            }
        }
    }

    // Replace near-coincident roots by their cluster mean; the mean of a
    // cluster is far more accurate than its members.
    let mut clusters: Vec<Vec<C>> = Vec::new();
    for r in found {
        if let Some(cl) = clusters.iter_mut().find(|cl| roots_coincide(cl[0], r)) {
            cl.push(r);
        } else {
            clusters.push(vec![r]);
        }
    }
    let mut roots: Vec<C> = Vec::with_capacity(n);
    for cl in clusters {
        let mean = cl.iter().sum::<C>() / cl.len() as f64;
        roots.extend(std::iter::repeat_n(mean, cl.len()));
    }
    sort_complex(&mut roots);
    Ok(RootList { roots, leading })
}

fn companion_eigenvalues(p: &Poly<C>) -> Result<Vec<C>> {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![-p.coeff(0) / p.coeff(1)]);
    }
    let lead = p.leading();
    let mut m = DMatrix::<C>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = C::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -p.coeff(i) / lead;
    }
    let schur = m
        .try_schur(1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("companion eigenvalue iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Sort lexicographically by real then imaginary part.
pub fn sort_complex(v: &mut [C]) {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Exact-mode root split: rational roots with multiplicity and the
/// remaining cofactor (no rational roots, reported symbolically).
#[derive(Clone, Debug, PartialEq)]
pub struct ExactRoots {
    pub rational: Vec<(Q, usize)>,
    pub cofactor: Poly<Q>,
}

impl ExactRoots {
    /// All rational roots with multiplicity if the cofactor is constant.
    pub fn all_rational(&self) -> Option<Vec<Q>> {
        if !self.cofactor.is_constant() {
            return None;
        }
        Some(
            self.rational
                .iter()
                .flat_map(|(r, m)| std::iter::repeat_n(r.clone(), *m))
                .collect(),
        )
    }
}

/// Split off the rational roots of an exact polynomial.
pub fn rational_roots(p: &Poly<Q>) -> Result<ExactRoots> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rest = p.clone();
    let mut rational: Vec<(Q, usize)> = Vec::new();
    let approx = roots(p, 1e-12)?;
    for (r, _) in approx.clusters() {
        let Some(cand) = Q::from_c64(r) else { continue };
        if rational.iter().any(|(x, _)| *x == cand) {
            continue;
        }
        let lin = Poly::linear(&cand);
        let mut mult = 0;
        while let Some(qt) = rest.exact_div(&lin) {
            rest = qt;
            mult += 1;
        }
        if mult > 0 {
            rational.push((cand, mult));
        }
    }
    rational.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(ExactRoots {
        rational,
        cofactor: rest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::field::{c, q};

    #[test]
    fn simple_roots() {
        let r = roots(&Poly::<Q>::from_i64(&[1, 1]), 1e-12).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - c(-1.0, 0.0)).norm() < 1e-14);

        let r = roots(&Poly::<Q>::from_i64(&[-1, 0, 1]), 1e-12).unwrap();
        assert!((r.roots[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((r.roots[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(!r.has_multiple_root());
    }

    #[test]
    fn double_root_is_flagged() {
        let p = Poly::<Q>::from_i64(&[4, -4, 1]); // (z-2)^2
        let r = roots(&p, 1e-12).unwrap();
        let cl = r.clusters();
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].1, 2);
        assert!((cl[0].0 - c(2.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert!(matches!(roots(&Poly::<Q>::zero(), 1e-12), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn reconstruction_roundtrip_degree_12() {
        let rs: Vec<C> = (0..12)
            .map(|k| c((k as f64 * 0.7).cos() * (1.0 + k as f64 / 5.0), (k as f64 * 1.3).sin()))
            .collect();
        let p = Poly::from_roots(&rs).scale(&c(2.0, -1.0));
        let found = roots(&p, 1e-12).unwrap();
        let rebuilt = found.reconstruct();
        let scale = p.max_modulus();
        let err = (0..=12)
            .map(|k| (p.coeff(k) - rebuilt.coeff(k)).norm())
            .fold(0.0, f64::max);
        assert!(err / scale < 1e-8, "relative error {err}");
    }

    #[test]
    fn exact_rational_split() {
        // (2z - 1)(z + 3)^2 (z^2 + 1)
        let p = Poly::<Q>::from_i64(&[-1, 2])
            .mul(&Poly::from_i64(&[3, 1]).pow(2))
            .mul(&Poly::from_i64(&[1, 0, 1]));
        let er = rational_roots(&p).unwrap();
        assert_eq!(er.rational, vec![(q(-3, 1), 2), (q(1, 2), 1)]);
        assert_eq!(er.cofactor.monic(), Poly::from_i64(&[1, 0, 1]));
        assert!(er.all_rational().is_none());
    }
}
