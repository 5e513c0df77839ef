//! The G-Wronskian `𝒢 = ℬ₋ 𝒩₊` of a type-A qq-solution, the Wronskian
//! differential equation and its minor relations, and the comparison of
//! minors with the full qq-system.

use crate::backlund::FullQQSystem;
use crate::cartan::{CartanData, WeylElement};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::minors::{gauss_decompose, generalized_minor, WeylLift};
use crate::oper::{compare_matrices, exp_e, gauge, log_derivative, miura_connection, sample_points, Connection, GroupElement};
use crate::polyring::{poly_linear_solve, roots, Field, LinearTerm, Poly, PolyEquation, PolySolution, PolySystem, RatFunc, Scalar, C};
use crate::qqcore::{is_resonant, QQSolution};

/// Order of the factors `exp(u_i e_i)` in `𝒩₊`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ProductOrder {
    /// `exp(u_1 e_1) exp(u_2 e_2) ⋯`
    #[default]
    Ascending,
    Descending,
}

/// `u_i = (∂ log q₊ⁱ − ζ_i) / Λ_i`.
pub fn n_plus_coefficients<F: Scalar>(sol: &QQSolution<F>) -> Result<Vec<RatFunc<F>>> {
    (0..sol.rank())
        .map(|i| {
            let lam = sol.master.lambda(i);
            if lam.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            Ok(log_derivative(&sol.q_plus[i])?
                .sub(&RatFunc::constant(sol.twist.zeta[i].clone()))
                .div(&RatFunc::from_poly(lam.clone())))
        })
        .collect()
}

/// `𝒩₊ = Π_i exp(u_i e_i)`.
pub fn build_n_plus<F: Scalar>(sol: &QQSolution<F>, order: ProductOrder) -> Result<GroupElement<F>> {
    if !sol.cd.is_type_a() {
        return Err(Error::NotTypeA(sol.cd.label()));
    }
    let u = n_plus_coefficients(sol)?;
    let n = sol.rank() + 1;
    let mut idx: Vec<usize> = (0..sol.rank()).collect();
    if order == ProductOrder::Descending {
        idx.reverse();
    }
    Ok(idx
        .into_iter()
        .fold(Matrix::identity(n), |acc, i| acc.mul(&exp_e(n, i, &u[i]))))
}

/// Lower-triangular `ℬ₋` with `ℬ₋ · (−Z) = A`, plus the entries where the
/// first-order equation was resonant and a constant of integration was
/// fixed to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BMinus<F> {
    pub matrix: GroupElement<F>,
    pub resonant_entries: Vec<(usize, usize)>,
}

/// Rational solution of `t' + γ t = R`. With `R = P/Q` (lowest terms)
/// any rational solution has poles only at zeros of `Q`, of no larger
/// order, so `t = p/Q` and `p' Q − p Q' + γ p Q = P Q`. When `γ = 0` the
/// constant of integration is fixed by making the `z^{deg Q}` coefficient
/// of `p` vanish; the flag reports this.
pub fn solve_first_order<F: Scalar>(gamma: &F, r: &RatFunc<F>, tol: f64) -> Option<(RatFunc<F>, bool)> {
    let resonant = is_resonant(gamma, tol);
    if r.is_zero() {
        return Some((RatFunc::zero(), resonant));
    }
    let (p_num, q) = (r.num(), r.den());
    let g = if resonant { F::zero() } else { gamma.clone() };
    // Away from resonance t ~ R/γ at infinity, so deg p = deg P; otherwise
    // t ~ ∫R and the constant of integration contributes Q.
    let bound = if resonant { (p_num.degree_i() + 1).max(q.degree_i()) } else { p_num.degree_i() };
    let sys = PolySystem {
        degree_bounds: vec![bound],
        equations: vec![PolyEquation {
            terms: vec![LinearTerm::first_order(0, q.scale(&g).sub(&q.derivative()), q.clone())],
            rhs: p_num.mul(q),
        }],
    };
    let p = match poly_linear_solve(&sys, tol) {
        PolySolution::Unique(mut v) => v.remove(0),
        PolySolution::Affine { particular, .. } => {
            let p = &particular[0];
            p.sub(&q.scale(&p.coeff(q.degree().unwrap_or(0)).div(&q.leading())))
        }
        PolySolution::Inconsistent { .. } => return None,
    };
    Some((RatFunc::new(p, q.clone()).expect("nonzero denominator"), resonant))
}

/// Solve `ℬ' = Z ℬ + ℬ A` for lower-triangular `ℬ`: closed forms on the
/// diagonal (`q₊ᵏ/q₊^{k−1}`) and first subdiagonal (`q₋ᵏ/q₊^{k−1}`), then
/// one first-order equation per deeper entry, level by level.
pub fn build_b_minus<F: Scalar>(sol: &QQSolution<F>, tol: f64) -> Result<BMinus<F>> {
    if !sol.cd.is_type_a() {
        return Err(Error::NotTypeA(sol.cd.label()));
    }
    let r = sol.rank();
    let n = r + 1;
    let qp = |k: isize| -> Poly<F> {
        if k < 0 || k as usize >= r {
            Poly::one()
        } else {
            sol.q_plus[k as usize].clone()
        }
    };
    let zdiag = crate::oper::coroot_diagonal(&sol.twist.zeta);
    let mut b: GroupElement<F> = Matrix::zeros(n, n);
    for k in 0..n {
        b[(k, k)] = RatFunc::new(qp(k as isize), qp(k as isize - 1)).ok_or(Error::ZeroPolynomial)?;
    }
    for l in 0..r {
        b[(l + 1, l)] = RatFunc::new(sol.q_minus[l].clone(), qp(l as isize - 1)).ok_or(Error::ZeroPolynomial)?;
    }
    let mut resonant_entries = Vec::new();
    for level in 2..n {
        for l in 0..n - level {
            let k = l + level;
            let lam = RatFunc::from_poly(sol.master.lambda(l).clone());
            let rhs = lam.mul(&b[(k, l + 1)]).div(&b[(l, l)]);
            let gamma = zdiag[l].sub(&zdiag[k]);
            let (t, res) = solve_first_order(&gamma, &rhs, tol).ok_or(Error::TailUnsolvable { row: k + 1, col: l + 1 })?;
            if res {
                resonant_entries.push((k, l));
            }
            b[(k, l)] = b[(l, l)].mul(&t);
        }
    }
    Ok(BMinus {
        matrix: b,
        resonant_entries,
    })
}

/// `ℬ₋`, `𝒩₊` and `𝒢 = ℬ₋ 𝒩₊`.
#[derive(Clone, Debug, PartialEq)]
pub struct WronskianData<F> {
    pub sol: QQSolution<F>,
    pub b_minus: GroupElement<F>,
    pub n_plus: GroupElement<F>,
    pub g: GroupElement<F>,
    pub resonant_entries: Vec<(usize, usize)>,
}

impl<F: Scalar> WronskianData<F> {
    /// `𝒩₊ · A = ∂ + p₋₁ + n₊`, the connection with its Cartan part removed.
    pub fn reduced_connection(&self) -> Result<Connection<F>> {
        gauge(&miura_connection(&self.sol)?, &self.n_plus)
    }

    /// Copy with `𝒢` replaced by `𝒢 · u₊` (`u₊` upper unitriangular).
    pub fn right_multiplied(&self, u_plus: &GroupElement<F>) -> Self {
        let mut out = self.clone();
        out.g = self.g.mul(u_plus);
        out.n_plus = self.n_plus.mul(u_plus);
        out
    }
}

pub fn build_g<F: Scalar>(sol: &QQSolution<F>, tol: f64) -> Result<WronskianData<F>> {
    let b = build_b_minus(sol, tol)?;
    let n_plus = build_n_plus(sol, ProductOrder::Ascending)?;
    let g = b.matrix.mul(&n_plus);
    Ok(WronskianData {
        sol: sol.clone(),
        b_minus: b.matrix,
        n_plus,
        g,
        resonant_entries: b.resonant_entries,
    })
}

/// `x` is zero: structurally (exact) or at sample points (float).
fn vanishes<F: Scalar>(x: &RatFunc<F>, scale: &[&RatFunc<F>], tol: f64) -> (bool, f64) {
    if F::EXACT {
        let z = x.is_zero();
        return (z, if z { 0.0 } else { f64::INFINITY });
    }
    let pts = sample_points(2 * (x.num().degree().unwrap_or(0) + x.den().degree().unwrap_or(0)) + 5);
    let s = scale.iter().map(|y| y.max_abs_at(&pts)).fold(1.0, f64::max);
    let v = x.max_abs_at(&pts) / s;
    (v <= tol, v)
}

/// One of the two minor relations at node `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationResidual<F> {
    pub node: usize,
    /// 1: `(∂ − ⟨Z,ω_i⟩) Δ_{ω_i,ω_i} = Λ_i Δ_{ω_i,s_iω_i}`;
    /// 2: `(∂ − ⟨Z,ω_i−α_i⟩) Δ_{s_iω_i,ω_i} = Λ_i Δ_{s_iω_i,s_iω_i}`.
    pub relation: u8,
    pub residual: RatFunc<F>,
    pub norm: f64,
    pub holds: bool,
}

/// Check both minor relations at every node. Float mode evaluates the
/// minors and their derivatives at sample points, since unreduced float
/// rational functions lose all accuracy to cancellation.
pub fn verify_wronskian_equation<F: Scalar>(wd: &WronskianData<F>, tol: f64) -> Result<Vec<RelationResidual<F>>> {
    let cd = &wd.sol.cd;
    let e = cd.identity();
    let pointwise = if F::EXACT { None } else { Some(PointwiseG::new(&wd.g)) };
    let mut out = Vec::new();
    for i in 0..cd.rank() {
        let s = cd.generator(i)?;
        let lam = RatFunc::from_poly(wd.sol.master.lambda(i).clone());
        let zeta = RatFunc::constant(wd.sol.twist.zeta[i].clone());
        let c = RatFunc::constant(wd.sol.twist_pairing(i));
        let d_ee = generalized_minor(cd, &wd.g, &e, &e, i)?;
        let d_es = generalized_minor(cd, &wd.g, &e, &s, i)?;
        let d_se = generalized_minor(cd, &wd.g, &s, &e, i)?;
        let d_ss = generalized_minor(cd, &wd.g, &s, &s, i)?;
        let shift1 = wd.sol.twist.zeta[i].clone();
        let shift2 = shift1.sub(&wd.sol.twist_pairing(i));
        let lhs1 = d_ee.derivative().sub(&zeta.mul(&d_ee));
        let rhs1 = lam.mul(&d_es);
        let lhs2 = d_se.derivative().sub(&zeta.sub(&c).mul(&d_se));
        let rhs2 = lam.mul(&d_ss);
        let rels = [(1u8, lhs1, rhs1, &e, shift1), (2u8, lhs2, rhs2, &s, shift2)];
        for (relation, lhs, rhs, u, shift) in rels {
            let residual = lhs.sub(&rhs);
            let (holds, norm) = match &pointwise {
                None => vanishes(&residual, &[&lhs, &rhs], tol),
                Some(pg) => {
                    let norm = pg.relation_norm(cd, u, &s, i, shift.to_c64(), wd.sol.master.lambda(i))?;
                    (norm <= tol, norm)
                }
            };
            out.push(RelationResidual {
                node: i,
                relation,
                residual,
                norm,
                holds,
            });
        }
    }
    Ok(out)
}

/// Values of `𝒢` and `𝒢'` at sample points.
struct PointwiseG {
    samples: Vec<(C, Matrix<C>, Matrix<C>)>,
}

impl PointwiseG {
    fn new<F: Scalar>(g: &GroupElement<F>) -> Self {
        let dg = g.derivative();
        let maxdeg = g
            .entries()
            .map(|(_, _, x)| x.num().degree().unwrap_or(0) + x.den().degree().unwrap_or(0))
            .max()
            .unwrap_or(0);
        // Entries of 𝒢 have poles that cancel in its minors; evaluating near
        // them loses precision, so keep the candidates farthest from poles.
        let mut poles: Vec<C> = Vec::new();
        for (_, _, x) in g.entries() {
            if let Ok(list) = roots(x.den(), 1e-12) {
                poles.extend(list.roots);
            }
        }
        let need = 2 * maxdeg + 5;
        let clearance = |x: &C| poles.iter().map(|p| (x - p).norm()).fold(f64::INFINITY, f64::min);
        let mut candidates: Vec<(f64, C)> = sample_points(6 * need).into_iter().map(|x| (clearance(&x), x)).collect();
        candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
        let samples = candidates
            .into_iter()
            .take(need)
            .map(|(_, x)| x)
            .filter_map(|x| {
                let at = |m: &GroupElement<F>| -> Option<Matrix<C>> {
                    let rows = (0..m.rows())
                        .map(|r| (0..m.cols()).map(|k| m[(r, k)].eval_c64(x)).collect::<Option<Vec<_>>>())
                        .collect::<Option<Vec<_>>>()?;
                    Some(Matrix::from_rows(rows))
                };
                Some((x, at(g)?, at(&dg)?))
            })
            .collect();
        PointwiseG { samples }
    }

    /// `Δ_{u,v}` and its derivative at each sample, by replacing one row at
    /// a time with its derivative.
    fn minor_values(&self, cd: &CartanData, u: &WeylElement, v: &WeylElement, i: usize) -> Result<Vec<(C, C, C)>> {
        let lu = WeylLift::<C>::new(cd, u)?.matrix.transpose();
        let lv = WeylLift::<C>::new(cd, v)?.matrix;
        Ok(self
            .samples
            .iter()
            .map(|(x, g, dg)| {
                let m = lu.mul(g).mul(&lv).leading_block(i + 1);
                let dm = lu.mul(dg).mul(&lv).leading_block(i + 1);
                let d = (0..=i)
                    .map(|r| {
                        let mut mr = m.clone();
                        for k in 0..=i {
                            mr[(r, k)] = dm[(r, k)];
                        }
                        mr.det()
                    })
                    .fold(C::new(0.0, 0.0), |a, b| a + b);
                (*x, m.det(), d)
            })
            .collect())
    }

    /// `max |Δ'_{u,e} − κ Δ_{u,e} − Λ Δ_{u,s}|` relative to the largest term.
    fn relation_norm<F: Scalar>(&self, cd: &CartanData, u: &WeylElement, s: &WeylElement, i: usize, kappa: C, lam: &Poly<F>) -> Result<f64> {
        let e = cd.identity();
        let left = self.minor_values(cd, u, &e, i)?;
        let right = self.minor_values(cd, u, s, i)?;
        let lam = lam.to_float();
        let mut res = 0.0f64;
        for ((x, d, dd), (_, r, _)) in left.iter().zip(&right) {
            let a = dd - kappa * d;
            let b = lam.eval(x) * r;
            let size = dd.norm().max((kappa * d).norm()).max(b.norm()).max(1.0);
            res = res.max((a - b).norm() / size);
        }
        Ok(res)
    }
}

/// Whole-matrix form of the Wronskian equation: in `𝒢 · (−Z)` the
/// diagonal vanishes and the strictly lower part is `p₋₁ = Σ Λ_i f_i`.
/// Float mode compares values at sample points.
pub fn wronskian_connection_check<F: Scalar>(wd: &WronskianData<F>, tol: f64) -> Result<bool> {
    let zm = crate::oper::twist_matrix(&wd.sol.twist).neg();
    let n = zm.rows();
    let lam = |i: usize, j: usize| -> Option<&Poly<F>> { (i == j + 1).then(|| wd.sol.master.lambda(j)) };
    if !F::EXACT {
        let zc = zm.map(|x| x.eval_c64(C::new(0.0, 0.0)).expect("constant"));
        let pg = PointwiseG::new(&wd.g);
        let abs = |m: &Matrix<C>| m.map(|v| C::new(v.norm(), 0.0));
        let mut worst = 0.0f64;
        for (x, g, dg) in &pg.samples {
            let ginv = g.inverse()?;
            let m = ginv.mul(&zc).mul(g).add(&ginv.mul(dg));
            // Size of the terms that cancel in each entry.
            let size = abs(&ginv).mul(&abs(&zc)).mul(&abs(g)).add(&abs(&ginv).mul(&abs(dg)));
            for (i, j, v) in m.entries() {
                let expect = if j > i { *v } else { lam(i, j).map_or(C::new(0.0, 0.0), |p| p.to_float().eval(x)) };
                worst = worst.max((v - expect).norm() / size[(i, j)].re.max(expect.norm()).max(1.0));
            }
        }
        return Ok(worst <= tol);
    }
    let m = gauge(&Connection::new(zm), &wd.g)?;
    let mut expected = m.a.clone();
    for i in 0..n {
        for j in 0..=i {
            expected[(i, j)] = lam(i, j).map_or(RatFunc::zero(), |p| RatFunc::from_poly(p.clone()));
        }
    }
    Ok(compare_matrices(&m.a, &expected, tol).matches)
}

/// `det 𝒢 − 1` vanishes; float mode evaluates at sample points.
pub fn det_is_one<F: Scalar>(g: &GroupElement<F>, tol: f64) -> bool {
    if F::EXACT {
        return g.det().sub(&RatFunc::one()).is_zero();
    }
    let pg = PointwiseG::new(g);
    !pg.samples.is_empty() && pg.samples.iter().all(|(_, m, _)| (m.det() - C::new(1.0, 0.0)).norm() <= tol)
}

/// All principal minors of `𝒢` are nonzero and the Gaussian factors of
/// `𝒢` are `ℬ₋` (as `n₋h`) and `𝒩₊`. Exact mode also requires the
/// principal minors to be polynomials.
pub fn gauss_matches_construction<F: Scalar>(wd: &WronskianData<F>, tol: f64) -> Result<bool> {
    if !F::EXACT {
        let pg = PointwiseG::new(&wd.g);
        let at = |m: &GroupElement<F>, x: C| -> Option<Matrix<C>> {
            let rows = (0..m.rows())
                .map(|r| (0..m.cols()).map(|k| m[(r, k)].eval_c64(x)).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()?;
            Some(Matrix::from_rows(rows))
        };
        for (x, g, _) in &pg.samples {
            let f = gauss_decompose(g)?;
            let (Some(b), Some(n)) = (at(&wd.b_minus, *x), at(&wd.n_plus, *x)) else { continue };
            let scale = g.entries().map(|(_, _, v)| v.norm()).fold(1.0, f64::max);
            let diff = |p: &Matrix<C>, q: &Matrix<C>| p.sub(q).entries().map(|(_, _, v)| v.norm()).fold(0.0, f64::max);
            if diff(&f.n_minus.mul(&f.h), &b) > tol * scale || diff(&f.n_plus, &n) > tol * scale {
                return Ok(false);
            }
        }
        return Ok(!pg.samples.is_empty());
    }
    let f = gauss_decompose(&wd.g)?;
    let b = f.n_minus.mul(&f.h);
    let ok_b = compare_matrices(&b, &wd.b_minus, tol).matches;
    let ok_n = compare_matrices(&f.n_plus, &wd.n_plus, tol).matches;
    let minors_poly = (0..wd.sol.rank()).all(|i| {
        let d = crate::minors::principal_minor(&wd.g, i);
        !d.is_zero() && d.is_poly()
    });
    Ok(ok_b && ok_n && minors_poly)
}

/// One row of [`minor_qq_match`].
#[derive(Clone, Debug, PartialEq)]
pub struct MinorMatch<F> {
    /// Reduced word of `w` (0-based letters).
    pub word: Vec<usize>,
    pub node: usize,
    /// `Δ_{w⁻¹ω_i, ω_i}(𝒢)`.
    pub minor: RatFunc<F>,
    pub q_plus: Poly<F>,
    pub is_polynomial: bool,
    /// `minor / q₊^{i,w}` when constant.
    pub constant: Option<F>,
}

impl<F: Scalar> MinorMatch<F> {
    pub fn passes(&self) -> bool {
        self.is_polynomial && self.constant.as_ref().is_some_and(|c| !c.is_zero())
    }
}

/// Compare `Δ_{w⁻¹ω_i, ω_i}(𝒢)` with `q₊^{i,w}` over the full qq-system.
/// Float mode tests the ratio for constancy at sample points.
pub fn minor_qq_match<F: Scalar>(wd: &WronskianData<F>, full: &FullQQSystem<F>, tol: f64) -> Result<Vec<MinorMatch<F>>> {
    let cd = &wd.sol.cd;
    let e = cd.identity();
    let pointwise = if F::EXACT { None } else { Some(PointwiseG::new(&wd.g)) };
    let mut out = Vec::new();
    for entry in &full.entries {
        let winv = cd.inverse(&entry.element);
        for i in 0..cd.rank() {
            let minor = generalized_minor(cd, &wd.g, &winv, &e, i)?;
            let qp = entry.solution.q_plus[i].clone();
            let (is_polynomial, constant) = match &pointwise {
                None => (
                    minor.is_poly(),
                    minor.div(&RatFunc::from_poly(qp.clone())).as_constant().filter(|c| !c.is_zero()),
                ),
                Some(pg) => {
                    let vals = pg.minor_values(cd, &winv, &e, i)?;
                    let qf = qp.to_float();
                    let ratios: Vec<C> = vals.iter().map(|(x, d, _)| d / qf.eval(x)).collect();
                    let first = ratios.first().copied().unwrap_or_default();
                    let spread = ratios.iter().map(|r| (r - first).norm()).fold(0.0, f64::max);
                    let ok = first.norm() > tol && spread <= tol * first.norm().max(1.0);
                    if ok {
                        (true, F::from_c64(first))
                    } else {
                        (false, None)
                    }
                }
            };
            out.push(MinorMatch {
                word: entry.element.word().to_vec(),
                node: i,
                minor,
                q_plus: qp,
                is_polynomial,
                constant,
            });
        }
    }
    Ok(out)
}
