//! Bethe ansatz equations and their numerical solution.
//!
//! For every root `w = w_ℓ^i` the equation is
//!
//! ```text
//! ⟨α_i, Z⟩ + Σ_j ⟨α_i, λ̌_j⟩/(w − z_j) − Σ_{(j,s)≠(i,ℓ)} a_ji/(w − w_s^j) = 0
//! ```

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::cartan::{CartanData, CartanTwist};
use crate::error::{Error, Result};
use crate::polyring::{roots, roots_coincide, sort_complex, Poly, Scalar, C, Q};
use crate::qqcore::{degree_weight, MasterData, QQSolution};

/// Problem data: Cartan type, singularities, twist and target degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct GaudinProblem<F> {
    pub cd: CartanData,
    pub master: MasterData<F>,
    pub twist: CartanTwist<F>,
    pub degrees: Vec<usize>,
}

impl<F: Scalar> GaudinProblem<F> {
    pub fn new(cd: CartanData, master: MasterData<F>, twist: CartanTwist<F>, degrees: Vec<usize>) -> Result<Self> {
        if degrees.len() != cd.rank() {
            return Err(Error::InvalidProblem(format!(
                "{} degrees given for rank {}",
                degrees.len(),
                cd.rank()
            )));
        }
        if twist.zeta.len() != cd.rank() {
            return Err(Error::InvalidProblem("twist length differs from rank".into()));
        }
        Ok(GaudinProblem {
            cd,
            master,
            twist,
            degrees,
        })
    }

    pub fn total_degree(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// `Σ λ̌_j − Σ d_i α̌_i` in fundamental-coweight coordinates.
    pub fn weight(&self) -> Vec<i64> {
        degree_weight(&self.cd, &self.master, &self.degrees)
    }

    pub fn to_float(&self) -> GaudinProblem<C> {
        GaudinProblem {
            cd: self.cd.clone(),
            master: self.master.to_float(),
            twist: self.twist.to_float(),
            degrees: self.degrees.clone(),
        }
    }

    fn pairings(&self) -> Vec<F> {
        (0..self.cd.rank())
            .map(|i| self.cd.pairing(i, &self.twist).expect("validated"))
            .collect()
    }
}

/// Bethe roots, one list per node.
#[derive(Clone, Debug, PartialEq)]
pub struct BetheConfiguration<F> {
    pub roots: Vec<Vec<F>>,
}

impl<F: Scalar> BetheConfiguration<F> {
    pub fn empty(rank: usize) -> Self {
        BetheConfiguration { roots: vec![vec![]; rank] }
    }

    fn flatten(&self) -> Vec<(usize, F)> {
        self.roots
            .iter()
            .enumerate()
            .flat_map(|(i, rs)| rs.iter().map(move |w| (i, w.clone())))
            .collect()
    }
}

impl BetheConfiguration<C> {
    /// Roots sorted within each node, by real then imaginary part.
    pub fn sorted(&self) -> Self {
        let mut roots = self.roots.clone();
        for r in roots.iter_mut() {
            sort_complex(r);
        }
        BetheConfiguration { roots }
    }

    /// Node-wise distance after sorting (∞ if the shapes differ).
    pub fn distance(&self, other: &Self) -> f64 {
        let (a, b) = (self.sorted(), other.sorted());
        if a.roots.len() != b.roots.len() {
            return f64::INFINITY;
        }
        let mut d: f64 = 0.0;
        for (x, y) in a.roots.iter().zip(&b.roots) {
            if x.len() != y.len() {
                return f64::INFINITY;
            }
            for (p, q) in x.iter().zip(y) {
                d = d.max((p - q).norm());
            }
        }
        d
    }
}

fn check_shape<F: Scalar>(prob: &GaudinProblem<F>, cfg: &BetheConfiguration<F>) -> Result<()> {
    if cfg.roots.len() != prob.cd.rank()
        || cfg.roots.iter().zip(&prob.degrees).any(|(r, &d)| r.len() != d)
    {
        return Err(Error::InvalidProblem("configuration does not match the declared degrees".into()));
    }
    Ok(())
}

/// Residual vector, ordered node by node and root by root.
pub fn bethe_residual<F: Scalar>(prob: &GaudinProblem<F>, cfg: &BetheConfiguration<F>) -> Result<Vec<F>> {
    check_shape(prob, cfg)?;
    let cd = &prob.cd;
    let pairings = prob.pairings();
    let all = cfg.flatten();
    let from_points = !prob.master.points().is_empty();
    let mut out = Vec::with_capacity(all.len());
    for (a, (i, w)) in all.iter().enumerate() {
        let mut acc = pairings[*i].clone();
        if from_points {
            for (j, zj) in prob.master.points().iter().enumerate() {
                let m = prob.master.multiplicity(*i, j);
                if m == 0 {
                    continue;
                }
                let inv = w.sub(zj).try_inv().ok_or_else(|| {
                    Error::DivisionByZero(format!(
                        "root {} of node {} meets marked point {}",
                        a + 1,
                        i + 1,
                        j + 1
                    ))
                })?;
                acc = acc.add(&inv.mul(&F::from_i64(m)));
            }
        } else {
            // Custom master polynomials: Σ_j m_ij/(w − z_j) = Λ_i'(w)/Λ_i(w).
            let lam = prob.master.lambda(*i);
            let inv = lam.eval(w).try_inv().ok_or_else(|| {
                Error::DivisionByZero(format!("root {} of node {} is a zero of the master polynomial", a + 1, i + 1))
            })?;
            acc = acc.add(&lam.derivative().eval(w).mul(&inv));
        }
        for (b, (j, v)) in all.iter().enumerate() {
            let aji = cd.entry(*j, *i);
            if a == b || aji == 0 {
                continue;
            }
            let inv = w.sub(v).try_inv().ok_or_else(|| {
                Error::DivisionByZero(format!("roots {} and {} coincide", a + 1, b + 1))
            })?;
            acc = acc.sub(&inv.mul(&F::from_i64(aji)));
        }
        out.push(acc);
    }
    Ok(out)
}

/// Newton data at a float point: the rational residual `f`, the cleared
/// residual `g_a = D_a f_a` with `D_a = Λ_i(w_a) Π_b (w_a − w_b)` over
/// linked roots `b`, the Jacobian of `g`, and the smallest denominator
/// modulus. Clearing denominators keeps Newton from drifting to infinity,
/// where `f` tends to the constant twist term.
struct NewtonPoint {
    f: Vec<C>,
    g: Vec<C>,
    jac: DMatrix<C>,
    min_den: f64,
}

fn newton_point(prob: &GaudinProblem<C>, nodes: &[usize], x: &[C], pairings: &[C]) -> NewtonPoint {
    let n = x.len();
    let cd = &prob.cd;
    let mut f = vec![C::new(0.0, 0.0); n];
    let mut jac = DMatrix::<C>::zeros(n, n);
    let mut min_den = f64::INFINITY;
    let from_points = !prob.master.points().is_empty();
    let mut d_val = vec![C::new(1.0, 0.0); n];
    // ∂ log D_a / ∂ x_c
    let mut d_log = DMatrix::<C>::zeros(n, n);
    for a in 0..n {
        let i = nodes[a];
        let w = x[a];
        let mut acc = pairings[i];
        let mut diag = C::new(0.0, 0.0);
        if from_points {
            for (j, zj) in prob.master.points().iter().enumerate() {
                let m = prob.master.multiplicity(i, j);
                if m == 0 {
                    continue;
                }
                let d = w - zj;
                min_den = min_den.min(d.norm());
                acc += m as f64 / d;
                diag -= m as f64 / (d * d);
                d_val[a] *= d.powi(m as i32);
                d_log[(a, a)] += m as f64 / d;
            }
        } else {
            let lam = prob.master.lambda(i);
            let (l0, l1, l2) = (lam.eval(&w), lam.derivative().eval(&w), lam.derivative().derivative().eval(&w));
            min_den = min_den.min(l0.norm());
            acc += l1 / l0;
            diag += (l2 * l0 - l1 * l1) / (l0 * l0);
            d_val[a] *= l0;
            d_log[(a, a)] += l1 / l0;
        }
        for b in 0..n {
            let aji = cd.entry(nodes[b], i) as f64;
            if a == b || aji == 0.0 {
                continue;
            }
            let d = w - x[b];
            min_den = min_den.min(d.norm());
            let inv = 1.0 / d;
            acc -= aji * inv;
            diag += aji * inv * inv;
            jac[(a, b)] = -aji * inv * inv;
            d_val[a] *= d;
            d_log[(a, a)] += inv;
            d_log[(a, b)] -= inv;
        }
        f[a] = acc;
        jac[(a, a)] = diag;
    }
    let g: Vec<C> = (0..n).map(|a| d_val[a] * f[a]).collect();
    let mut gjac = DMatrix::<C>::zeros(n, n);
    for a in 0..n {
        for c in 0..n {
            gjac[(a, c)] = d_val[a] * (jac[(a, c)] + f[a] * d_log[(a, c)]);
        }
    }
    NewtonPoint {
        f,
        g,
        jac: gjac,
        min_den,
    }
}

fn max_norm(v: &[C]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Settings for [`bethe_solve`].
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Number of multistart points.
    pub starts: usize,
    /// Offset into the low-discrepancy start sequence.
    pub seed: u64,
    /// Acceptance threshold on the maximum residual.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            starts: 64,
            seed: 0,
            tol: 1e-10,
            max_iter: 200,
        }
    }
}

fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut x = 0.0;
    while k > 0 {
        x += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    x
}

/// First `count` primes.
fn primes(count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(count);
    let mut k = 2;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= k).all(|&p| k % p != 0) {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// Point `k` of the Halton sequence in bases `(bu, bv)`, mapped uniformly
/// into a disk.
fn halton_disk(k: u64, bu: u64, bv: u64, radius: f64) -> C {
    let u = radical_inverse(k, bu);
    let v = radical_inverse(k, bv);
    C::from_polar(radius * u.sqrt(), std::f64::consts::TAU * v)
}

fn newton(prob: &GaudinProblem<C>, nodes: &[usize], mut x: Vec<C>, opts: &SolveOptions) -> Option<Vec<C>> {
    let pairings = prob.pairings();
    let n = x.len();
    let mut pt = newton_point(prob, nodes, &x, &pairings);
    let mut gnorm = max_norm(&pt.g);
    for _ in 0..opts.max_iter {
        if !gnorm.is_finite() {
            return None;
        }
        if max_norm(&pt.f) <= opts.tol * 1e-3 {
            break;
        }
        let rhs = DVector::from_iterator(n, pt.g.iter().map(|v| -v));
        let step = pt.jac.clone().lu().solve(&rhs)?;
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let trial: Vec<C> = x.iter().zip(step.iter()).map(|(a, d)| a + d * t).collect();
            let p2 = newton_point(prob, nodes, &trial, &pairings);
            let n2 = max_norm(&p2.g);
            if p2.min_den > 1e-12 && n2.is_finite() && n2 < gnorm {
                x = trial;
                pt = p2;
                gnorm = n2;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (max_norm(&pt.f) <= opts.tol).then_some(x)
}

/// Admissible: distinct roots on each node, no root at an active marked
/// point, no root at a zero of an active master polynomial.
fn admissible(prob: &GaudinProblem<C>, cfg: &BetheConfiguration<C>) -> bool {
    for (i, rs) in cfg.roots.iter().enumerate() {
        for a in 0..rs.len() {
            for b in a + 1..rs.len() {
                if roots_coincide(rs[a], rs[b]) {
                    return false;
                }
            }
            for (j, zj) in prob.master.points().iter().enumerate() {
                if prob.master.multiplicity(i, j) != 0 && roots_coincide(rs[a], *zj) {
                    return false;
                }
            }
        }
    }
    true
}

/// Multistart damped Newton solve. Returns distinct configurations with
/// maximal residual at most `opts.tol`, sorted node-wise and
/// deduplicated; the result depends only on the problem and `opts`.
pub fn bethe_solve(prob: &GaudinProblem<C>, opts: &SolveOptions) -> Vec<BetheConfiguration<C>> {
    let n = prob.total_degree();
    if n == 0 {
        return vec![BetheConfiguration::empty(prob.cd.rank())];
    }
    let nodes: Vec<usize> = prob
        .degrees
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| std::iter::repeat_n(i, d))
        .collect();
    let radius = 2.0 * (1.0 + prob.master.points().iter().map(|z| z.norm()).fold(0.0, f64::max));
    // One point of the 2n-dimensional Halton sequence per start: unknown k
    // uses the prime pair (p_2k, p_2k+1).
    let bases = primes(2 * n);
    let found: Vec<Vec<C>> = (0..opts.starts)
        .into_par_iter()
        .filter_map(|s| {
            let index = opts.seed.wrapping_mul(1_000_003).wrapping_add(s as u64) + 1;
            let x0: Vec<C> = (0..n).map(|k| halton_disk(index, bases[2 * k], bases[2 * k + 1], radius)).collect();
            newton(prob, &nodes, x0, opts)
        })
        .collect();

    let mut configs: Vec<BetheConfiguration<C>> = found
        .into_iter()
        .map(|x| {
            let mut roots = vec![Vec::new(); prob.cd.rank()];
            for (k, w) in x.into_iter().enumerate() {
                roots[nodes[k]].push(w);
            }
            BetheConfiguration { roots }.sorted()
        })
        .filter(|c| admissible(prob, c))
        .collect();
    configs.sort_by(|a, b| compare_configs(a, b));
    let mut out: Vec<BetheConfiguration<C>> = Vec::new();
    for c in configs {
        if !out.iter().any(|o| o.distance(&c) < 1e-6) {
            out.push(c);
        }
    }
    out
}

fn compare_configs(a: &BetheConfiguration<C>, b: &BetheConfiguration<C>) -> std::cmp::Ordering {
    let key = |c: &BetheConfiguration<C>| -> Vec<f64> {
        c.roots.iter().flatten().flat_map(|w| [w.re, w.im]).collect()
    };
    key(a)
        .iter()
        .zip(key(b).iter())
        .map(|(x, y)| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// `q₊ⁱ = Π_ℓ (z − w_ℓ^i)` and `q₋ⁱ` from the qq-equation.
pub fn roots_to_qq<F: Scalar>(prob: &GaudinProblem<F>, cfg: &BetheConfiguration<F>, tol: f64) -> Result<QQSolution<F>> {
    check_shape(prob, cfg)?;
    let q_plus = cfg.roots.iter().map(|r| Poly::from_roots(r)).collect();
    QQSolution::from_q_plus(&prob.cd, &prob.twist, &prob.master, q_plus, tol)
}

/// Roots of every `q₊ⁱ` (numerical).
pub fn qq_to_roots<F: Scalar>(sol: &QQSolution<F>) -> Result<BetheConfiguration<C>> {
    let mut out = Vec::with_capacity(sol.rank());
    for p in &sol.q_plus {
        out.push(roots(p, 1e-14)?.roots);
    }
    Ok(BetheConfiguration { roots: out }.sorted())
}

/// Exact-mode solve: numerical roots, rationalized `q₊` coefficients, and
/// an exact reconstruction of `q₋`. Solutions whose `q₊` is not rational
/// (within the rationalization tolerance) or fails exact verification are
/// dropped.
pub fn bethe_solve_exact(prob: &GaudinProblem<Q>, opts: &SolveOptions) -> Vec<QQSolution<Q>> {
    let fprob = prob.to_float();
    let mut out: Vec<QQSolution<Q>> = Vec::new();
    for cfg in bethe_solve(&fprob, opts) {
        let exact: Option<Vec<Poly<Q>>> = cfg
            .roots
            .iter()
            .map(|r| {
                let p = Poly::from_roots(r);
                p.coeffs()
                    .iter()
                    .map(|c| Q::from_c64(*c))
                    .collect::<Option<Vec<Q>>>()
                    .map(Poly::new)
            })
            .collect();
        let Some(q_plus) = exact else { continue };
        if let Ok(sol) = QQSolution::from_q_plus(&prob.cd, &prob.twist, &prob.master, q_plus, 0.0) {
            if !out.iter().any(|s| s.q_plus == sol.q_plus) {
                out.push(sol);
            }
        }
    }
    out
}
