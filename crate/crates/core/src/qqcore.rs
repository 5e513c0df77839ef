//! The qq-system: residuals, reconstruction of `q₋` from `q₊`, and
//! nondegeneracy conditions.
//!
//! For node `i` the equation reads
//!
//! ```text
//! q₊ⁱ ∂q₋ⁱ − q₋ⁱ ∂q₊ⁱ + ⟨α_i, Z⟩ q₊ⁱ q₋ⁱ = Λ_i Π_{j≠i} (q₊ʲ)^{−a_ji}
//! ```

use crate::cartan::{CartanData, CartanTwist};
use crate::error::{Error, Result};
use crate::polyring::{
    poly_linear_solve, roots, roots_coincide, LinearTerm, Poly, PolyEquation, PolySolution,
    PolySystem, Scalar, C,
};

/// Marked points, coweights and the master polynomials `Λ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct MasterData<F> {
    points: Vec<F>,
    coweights: Vec<Vec<i64>>,
    lambda: Vec<Poly<F>>,
}

impl<F: Scalar> MasterData<F> {
    /// `Λ_i = Π_j (z − z_j)^{⟨α_i, λ̌_j⟩}`, with `coweights[j]` given in
    /// fundamental-coweight coordinates.
    pub fn new(cd: &CartanData, points: Vec<F>, coweights: Vec<Vec<i64>>) -> Result<Self> {
        let r = cd.rank();
        if points.len() != coweights.len() {
            return Err(Error::InvalidProblem(format!(
                "{} marked points but {} coweights",
                points.len(),
                coweights.len()
            )));
        }
        for (j, cw) in coweights.iter().enumerate() {
            if cw.len() != r {
                return Err(Error::InvalidProblem(format!(
                    "coweight {} has length {}, expected rank {r}",
                    j + 1,
                    cw.len()
                )));
            }
            if cw.iter().any(|&m| m < 0) {
                return Err(Error::InvalidProblem(format!("coweight {} is not dominant", j + 1)));
            }
        }
        for a in 0..points.len() {
            for b in a + 1..points.len() {
                if points_coincide(&points[a], &points[b]) {
                    return Err(Error::InvalidProblem(format!(
                        "marked points {} and {} coincide",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        let lambda = (0..r)
            .map(|i| {
                points.iter().zip(&coweights).fold(Poly::one(), |acc, (z, cw)| {
                    acc.mul(&Poly::linear(z).pow(cw[i] as u32))
                })
            })
            .collect();
        Ok(MasterData {
            points,
            coweights,
            lambda,
        })
    }

    /// Master polynomials given directly, without marked-point data.
    pub fn from_lambdas(cd: &CartanData, lambda: Vec<Poly<F>>) -> Result<Self> {
        if lambda.len() != cd.rank() {
            return Err(Error::InvalidProblem("one master polynomial per node required".into()));
        }
        if lambda.iter().any(|l| l.is_zero()) {
            return Err(Error::InvalidProblem("master polynomials must be nonzero".into()));
        }
        Ok(MasterData {
            points: vec![],
            coweights: vec![],
            lambda,
        })
    }

    pub fn points(&self) -> &[F] {
        &self.points
    }

    pub fn coweights(&self) -> &[Vec<i64>] {
        &self.coweights
    }

    /// True when built from marked points and coweights.
    pub fn has_points(&self) -> bool {
        !self.points.is_empty() || self.lambda.iter().all(|l| l.is_constant())
    }

    pub fn lambda(&self, i: usize) -> &Poly<F> {
        &self.lambda[i]
    }

    pub fn lambdas(&self) -> &[Poly<F>] {
        &self.lambda
    }

    /// `⟨α_i, λ̌_j⟩`.
    pub fn multiplicity(&self, i: usize, j: usize) -> i64 {
        self.coweights[j][i]
    }

    pub fn to_float(&self) -> MasterData<C> {
        MasterData {
            points: self.points.iter().map(|p| p.to_c64()).collect(),
            coweights: self.coweights.clone(),
            lambda: self.lambda.iter().map(|l| l.to_float()).collect(),
        }
    }
}

fn points_coincide<F: Scalar>(a: &F, b: &F) -> bool {
    if F::EXACT {
        a == b
    } else {
        roots_coincide(a.to_c64(), b.to_c64())
    }
}

/// Right-hand side `Λ_i Π_{j≠i} (q₊ʲ)^{−a_ji}` of equation `i`.
pub fn qq_rhs<F: Scalar>(cd: &CartanData, master: &MasterData<F>, q_plus: &[Poly<F>], i: usize) -> Poly<F> {
    (0..cd.rank())
        .filter(|&j| j != i && cd.entry(j, i) != 0)
        .fold(master.lambda(i).clone(), |acc, j| {
            acc.mul(&q_plus[j].pow((-cd.entry(j, i)) as u32))
        })
}

/// Bookkeeping weight `Λ̌ = Σ λ̌_j − Σ d_i α̌_i` in fundamental-coweight
/// coordinates (`deg Λ_i` is the `i`-th coordinate of `Σ λ̌_j`).
pub fn degree_weight<F: Scalar>(cd: &CartanData, master: &MasterData<F>, degrees: &[usize]) -> Vec<i64> {
    (0..cd.rank())
        .map(|i| {
            let base = master.lambda(i).degree_i();
            base - (0..cd.rank()).map(|k| degrees[k] as i64 * cd.entry(k, i)).sum::<i64>()
        })
        .collect()
}

/// The tuple `{q₊ⁱ, q₋ⁱ}` with its twist and master data.
#[derive(Clone, Debug, PartialEq)]
pub struct QQSolution<F> {
    pub cd: CartanData,
    pub twist: CartanTwist<F>,
    pub master: MasterData<F>,
    pub q_plus: Vec<Poly<F>>,
    pub q_minus: Vec<Poly<F>>,
    /// `true` where `q₋ⁱ` is the canonical representative of a family
    /// `q₋ⁱ + c·q₊ⁱ` (resonant node).
    pub family: Vec<bool>,
}

impl<F: Scalar> QQSolution<F> {
    /// Fill in every `q₋ⁱ` from monic `q₊` by [`solve_q_minus`].
    pub fn from_q_plus(
        cd: &CartanData,
        twist: &CartanTwist<F>,
        master: &MasterData<F>,
        q_plus: Vec<Poly<F>>,
        tol: f64,
    ) -> Result<Self> {
        if q_plus.len() != cd.rank() || twist.zeta.len() != cd.rank() {
            return Err(Error::InvalidProblem("q+ and twist must have one entry per node".into()));
        }
        let q_plus: Vec<Poly<F>> = q_plus.iter().map(|p| p.monic()).collect();
        let mut q_minus = Vec::with_capacity(cd.rank());
        let mut family = Vec::with_capacity(cd.rank());
        for i in 0..cd.rank() {
            match solve_q_minus(cd, twist, master, &q_plus, i, tol)? {
                QMinus::Unique(p) => {
                    q_minus.push(p);
                    family.push(false);
                }
                QMinus::Family { representative, .. } => {
                    q_minus.push(representative);
                    family.push(true);
                }
                QMinus::Inconsistent { .. } => return Err(Error::InconsistentQMinus { node: i }),
            }
        }
        Ok(QQSolution {
            cd: cd.clone(),
            twist: twist.clone(),
            master: master.clone(),
            q_plus,
            q_minus,
            family,
        })
    }

    pub fn rank(&self) -> usize {
        self.cd.rank()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.q_plus.iter().map(|p| p.degree().unwrap_or(0)).collect()
    }

    /// `⟨α_i, Z⟩`.
    pub fn twist_pairing(&self, i: usize) -> F {
        self.cd.pairing(i, &self.twist).expect("node index checked by caller")
    }

    pub fn to_float(&self) -> QQSolution<C> {
        QQSolution {
            cd: self.cd.clone(),
            twist: self.twist.to_float(),
            master: self.master.to_float(),
            q_plus: self.q_plus.iter().map(|p| p.to_float()).collect(),
            q_minus: self.q_minus.iter().map(|p| p.to_float()).collect(),
            family: self.family.clone(),
        }
    }
}

/// LHS − RHS of equation `i`.
pub fn qq_residual<F: Scalar>(sol: &QQSolution<F>, i: usize) -> Result<Poly<F>> {
    check_node(&sol.cd, i)?;
    Ok(residual_with(&sol.cd, &sol.twist, &sol.master, &sol.q_plus, &sol.q_minus[i], i))
}

fn residual_with<F: Scalar>(
    cd: &CartanData,
    twist: &CartanTwist<F>,
    master: &MasterData<F>,
    q_plus: &[Poly<F>],
    q_minus: &Poly<F>,
    i: usize,
) -> Poly<F> {
    let qp = &q_plus[i];
    let c = cd.pairing(i, twist).expect("checked");
    qp.mul(&q_minus.derivative())
        .sub(&q_minus.mul(&qp.derivative()))
        .add(&qp.mul(q_minus).scale(&c))
        .sub(&qq_rhs(cd, master, q_plus, i))
}

/// Residual size relative to the right-hand side: `‖LHS − RHS‖∞ / max(1, ‖RHS‖∞)`.
pub fn qq_residual_norm<F: Scalar>(sol: &QQSolution<F>, i: usize) -> Result<f64> {
    let r = qq_residual(sol, i)?;
    let scale = qq_rhs(&sol.cd, &sol.master, &sol.q_plus, i).max_modulus().max(1.0);
    Ok(r.max_modulus() / scale)
}

fn check_node(cd: &CartanData, i: usize) -> Result<()> {
    if i < cd.rank() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, rank: cd.rank() })
    }
}

/// Outcome of [`solve_q_minus`].
#[derive(Clone, Debug, PartialEq)]
pub enum QMinus<F> {
    Unique(Poly<F>),
    /// Resonant node: every `representative + c·direction` solves the
    /// equation; `direction` is `q₊ⁱ` and the representative has zero
    /// coefficient at `z^{deg q₊ⁱ}`.
    Family {
        representative: Poly<F>,
        direction: Poly<F>,
    },
    /// No polynomial solution within the degree bound; `witness` is the
    /// residual of the best candidate.
    Inconsistent { witness: Poly<F> },
}

impl<F: Scalar> QMinus<F> {
    pub fn solution(&self) -> Option<&Poly<F>> {
        match self {
            QMinus::Unique(p) => Some(p),
            QMinus::Family { representative, .. } => Some(representative),
            QMinus::Inconsistent { .. } => None,
        }
    }
}

/// Resonance test `⟨α_i, Z⟩ = 0` (exactly, or within `tol` in float mode).
pub fn is_resonant<F: Scalar>(c: &F, tol: f64) -> bool {
    if F::EXACT {
        c.is_zero()
    } else {
        c.modulus() <= tol
    }
}

/// Solve equation `i` for `q₋ⁱ`, which enters linearly.
///
/// Degree bound: `deg RHS − deg q₊ⁱ` when `⟨α_i, Z⟩ ≠ 0`. In the resonant
/// case the leading terms of `q₊∂q₋ − q₋∂q₊` only cancel at
/// `deg q₋ = deg q₊`, so the bound is `max(deg RHS − deg q₊ + 1, deg q₊)`;
/// this keeps the homogeneous direction `q₊` inside the ansatz.
pub fn solve_q_minus<F: Scalar>(
    cd: &CartanData,
    twist: &CartanTwist<F>,
    master: &MasterData<F>,
    q_plus: &[Poly<F>],
    i: usize,
    tol: f64,
) -> Result<QMinus<F>> {
    check_node(cd, i)?;
    let qp = &q_plus[i];
    if qp.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c = cd.pairing(i, twist)?;
    let resonant = is_resonant(&c, tol);
    let c = if resonant { F::zero() } else { c };
    let rhs = qq_rhs(cd, master, q_plus, i);
    let d = qp.degree_i();
    let bound = if resonant {
        (rhs.degree_i() - d + 1).max(d)
    } else {
        rhs.degree_i() - d
    };
    let sys = PolySystem {
        degree_bounds: vec![bound],
        equations: vec![PolyEquation {
            terms: vec![LinearTerm::first_order(0, qp.scale(&c).sub(&qp.derivative()), qp.clone())],
            rhs,
        }],
    };
    Ok(match poly_linear_solve(&sys, tol) {
        PolySolution::Unique(mut v) => QMinus::Unique(v.remove(0)),
        PolySolution::Affine { particular, kernel } => {
            if !resonant || kernel.len() != 1 {
                // A regular node has no homogeneous polynomial solution.
                return Err(Error::Numerical(format!(
                    "unexpected {}-dimensional kernel on node {i}",
                    kernel.len()
                )));
            }
            let k = &kernel[0][0];
            let direction = k.scale(&qp.leading().div(&k.leading()));
            let p = &particular[0];
            let representative = p.sub(&qp.scale(&p.coeff(d as usize)));
            QMinus::Family {
                representative,
                direction,
            }
        }
        PolySolution::Inconsistent { mut witness } => QMinus::Inconsistent {
            witness: witness.remove(0),
        },
    })
}

/// Per-condition outcome of [`check_nondegenerate`].
#[derive(Clone, Debug, PartialEq)]
pub struct NondegeneracyReport {
    /// (1) `q₊ⁱ` has no multiple zeros.
    pub squarefree: Vec<bool>,
    /// (2) zeros of `q₊ⁱ` avoid the zeros of `Λ_k` for every `k` with `a_ik ≠ 0`.
    pub avoids_singularities: Vec<bool>,
    /// (3) `(i, j, ok)` for `i < j` sharing a neighbour: zeros of `q₊ⁱ`, `q₊ʲ` distinct.
    pub neighbours_distinct: Vec<(usize, usize, bool)>,
    /// (4) `gcd(q₊ⁱ, q₋ⁱ) = 1`.
    pub coprime: Vec<bool>,
}

impl NondegeneracyReport {
    pub fn all_pass(&self) -> bool {
        self.squarefree.iter().all(|&b| b)
            && self.avoids_singularities.iter().all(|&b| b)
            && self.neighbours_distinct.iter().all(|t| t.2)
            && self.coprime.iter().all(|&b| b)
    }
}

/// Whether two polynomials have a common zero.
pub fn share_zero<F: Scalar>(p: &Poly<F>, q: &Poly<F>, tol: f64) -> bool {
    if p.is_zero() || q.is_zero() {
        return true;
    }
    if p.is_constant() || q.is_constant() {
        return false;
    }
    if F::EXACT {
        return !p.gcd(q).is_constant();
    }
    let (Ok(rp), Ok(rq)) = (roots(p, tol), roots(q, tol)) else {
        return true;
    };
    rp.roots
        .iter()
        .any(|a| rq.roots.iter().any(|b| roots_coincide(*a, *b)))
}

/// Whether `p` has a repeated zero.
pub fn has_multiple_zero<F: Scalar>(p: &Poly<F>, tol: f64) -> bool {
    if p.degree().unwrap_or(0) < 2 {
        return false;
    }
    if F::EXACT {
        return !p.gcd(&p.derivative()).is_constant();
    }
    roots(p, tol).map(|r| r.has_multiple_root()).unwrap_or(true)
}

/// Nondegeneracy conditions on a qq-solution. Only zeros of `q₊ⁱ` are
/// compared with the marked points in (2), since `q₊ⁱ` is polynomial.
pub fn check_nondegenerate<F: Scalar>(sol: &QQSolution<F>, tol: f64) -> NondegeneracyReport {
    let r = sol.rank();
    let cd = &sol.cd;
    let squarefree = sol.q_plus.iter().map(|p| !has_multiple_zero(p, tol)).collect();
    let avoids_singularities = (0..r)
        .map(|i| {
            (0..r)
                .filter(|&k| cd.entry(i, k) != 0)
                .all(|k| !share_zero(&sol.q_plus[i], sol.master.lambda(k), tol))
        })
        .collect();
    let mut neighbours_distinct = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let linked = (0..r).any(|k| k != i && k != j && cd.entry(i, k) != 0 && cd.entry(j, k) != 0);
            if linked {
                neighbours_distinct.push((i, j, !share_zero(&sol.q_plus[i], &sol.q_plus[j], tol)));
            }
        }
    }
    let coprime = (0..r)
        .map(|i| !share_zero(&sol.q_plus[i], &sol.q_minus[i], tol))
        .collect();
    NondegeneracyReport {
        squarefree,
        avoids_singularities,
        neighbours_distinct,
        coprime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{q, Field, Q};
    use proptest::prelude::*;

    fn a1() -> CartanData {
        CartanData::from_label("A1").unwrap()
    }

    /// A1 with `⟨α, Z⟩ = 2ζ` and one master polynomial.
    fn a1_solution(zeta: Q, lambda: Poly<Q>, qp: Poly<Q>, qm: Poly<Q>) -> QQSolution<Q> {
        let cd = a1();
        QQSolution {
            master: MasterData::from_lambdas(&cd, vec![lambda]).unwrap(),
            cd,
            twist: CartanTwist::new(vec![zeta]),
            q_plus: vec![qp],
            q_minus: vec![qm],
            family: vec![false],
        }
    }

    fn z() -> Poly<Q> {
        Poly::x()
    }

    #[test]
    fn residual_examples() {
        let s = a1_solution(q(3, 2), Poly::constant(q(3, 1)), Poly::one(), Poly::one());
        assert!(qq_residual(&s, 0).unwrap().is_zero());
        let s = a1_solution(q(1, 2), z(), Poly::from_i64(&[1, 1]), Poly::one());
        assert!(qq_residual(&s, 0).unwrap().is_zero());
        let s = a1_solution(q(1, 2), z(), Poly::from_i64(&[1, 1]), z());
        // 1 + z(z+1) − z = z² + 1
        assert_eq!(qq_residual(&s, 0).unwrap(), Poly::from_i64(&[1, 0, 1]));
        assert!(qq_residual(&s, 1).is_err());
    }

    #[test]
    fn master_polynomials_from_points() {
        let cd = CartanData::from_label("A2").unwrap();
        let m = MasterData::new(&cd, vec![q(0, 1), q(1, 1)], vec![vec![1, 0], vec![2, 1]]).unwrap();
        assert_eq!(m.lambda(0), &Poly::from_i64(&[0, 1]).mul(&Poly::from_i64(&[-1, 1]).pow(2)));
        assert_eq!(m.lambda(1), &Poly::from_i64(&[-1, 1]));
        assert!(MasterData::new(&cd, vec![q(1, 1), q(1, 1)], vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(MasterData::<Q>::new(&cd, vec![q(1, 1)], vec![vec![-1, 0]]).is_err());
    }

    #[test]
    fn solve_q_minus_examples() {
        let cd = a1();
        let master = MasterData::from_lambdas(&cd, vec![z()]).unwrap();
        let half = CartanTwist::new(vec![q(1, 2)]);
        let r = solve_q_minus(&cd, &half, &master, &[Poly::from_i64(&[1, 1])], 0, 0.0).unwrap();
        assert_eq!(r, QMinus::Unique(Poly::one()));

        let one = MasterData::from_lambdas(&cd, vec![Poly::one()]).unwrap();
        let zero = CartanTwist::new(vec![q(0, 1)]);
        match solve_q_minus(&cd, &zero, &one, &[Poly::one()], 0, 0.0).unwrap() {
            QMinus::Family {
                representative,
                direction,
            } => {
                assert_eq!(representative, z());
                assert_eq!(direction, Poly::one());
            }
            other => panic!("expected a family, got {other:?}"),
        }

        match solve_q_minus(&cd, &half, &master, &[z()], 0, 0.0).unwrap() {
            QMinus::Inconsistent { witness } => assert!(!witness.is_zero()),
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn resonant_family_direction_is_q_plus() {
        // q₊ = z² − 1 with Λ chosen so that a polynomial q₋ exists:
        // take q₋ = z³ and set Λ = q₊q₋' − q₋q₊'.
        let cd = a1();
        let qp = Poly::from_i64(&[-1, 0, 1]);
        let qm = Poly::from_i64(&[0, 0, 0, 1]);
        let lam = qp.mul(&qm.derivative()).sub(&qm.mul(&qp.derivative()));
        let master = MasterData::from_lambdas(&cd, vec![lam]).unwrap();
        let zero = CartanTwist::new(vec![q(0, 1)]);
        match solve_q_minus(&cd, &zero, &master, std::slice::from_ref(&qp), 0, 0.0).unwrap() {
            QMinus::Family {
                representative,
                direction,
            } => {
                assert_eq!(direction, qp);
                // z³ has zero z² coefficient already.
                assert_eq!(representative, qm);
            }
            other => panic!("expected a family, got {other:?}"),
        }
    }

    #[test]
    fn nondegeneracy_examples() {
        let s = a1_solution(q(1, 2), z(), Poly::from_i64(&[1, 1]), Poly::one());
        assert!(check_nondegenerate(&s, 1e-9).all_pass());
        let s = a1_solution(q(1, 2), z(), Poly::from_i64(&[4, -4, 1]), Poly::one());
        let rep = check_nondegenerate(&s, 1e-9);
        assert_eq!(rep.squarefree, vec![false]);
        let s = a1_solution(q(1, 2), z(), z(), Poly::one());
        let rep = check_nondegenerate(&s, 1e-9);
        assert_eq!(rep.avoids_singularities, vec![false]);
        // Float mode agrees.
        let f = a1_solution(q(1, 2), z(), Poly::from_i64(&[4, -4, 1]), Poly::one()).to_float();
        assert_eq!(check_nondegenerate(&f, 1e-9).squarefree, vec![false]);
    }

    #[test]
    fn float_reconstruction_matches_exact() {
        let cd = CartanData::from_label("A2").unwrap();
        let master = MasterData::new(&cd, vec![q(0, 1), q(2, 1)], vec![vec![1, 0], vec![0, 1]]).unwrap();
        let twist = CartanTwist::new(vec![q(1, 3), q(2, 5)]);
        let exact = QQSolution::from_q_plus(&cd, &twist, &master, vec![Poly::one(), Poly::one()], 0.0).unwrap();
        let float = QQSolution::from_q_plus(
            &cd,
            &twist.to_float(),
            &master.to_float(),
            vec![Poly::one(), Poly::one()],
            1e-12,
        )
        .unwrap();
        for i in 0..2 {
            assert!(crate::polyring::relative_distance(&exact.q_minus[i], &float.q_minus[i]) < 1e-12);
            assert!(qq_residual_norm(&float, i).unwrap() < 1e-12);
        }
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly<Q>> {
        prop::collection::vec(-5i64..6, 0..=max_deg + 1).prop_map(|v| Poly::from_i64(&v))
    }

    proptest! {
        #[test]
        fn residual_is_affine_in_q_minus(a in arb_poly(3), b in arb_poly(3), s in -4i64..5, zeta in -3i64..4) {
            // R(a + s·b) − R(0) = (R(a) − R(0)) + s·(R(b) − R(0)).
            let qp = Poly::from_i64(&[2, -3, 1]);
            let lam = Poly::from_i64(&[0, 1, 1]);
            let res = |qm: Poly<Q>| qq_residual(&a1_solution(q(zeta, 2), lam.clone(), qp.clone(), qm), 0).unwrap();
            let r0 = res(Poly::zero());
            let lhs = res(a.add(&b.scale(&q(s, 1)))).sub(&r0);
            let rhs = res(a.clone()).sub(&r0).add(&res(b.clone()).sub(&r0).scale(&q(s, 1)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reconstruction_is_consistent(roots in prop::collection::vec(-6i64..7, 0..3), zeta in 1i64..5, qm in arb_poly(2)) {
            // Build a valid solution by choosing q₊, q₋ and defining Λ from
            // them, then recover q₋ from q₊ alone.
            let cd = a1();
            let qp = roots.iter().fold(Poly::<Q>::one(), |acc, &r| acc.mul(&Poly::linear(&q(r, 1))));
            let c = q(zeta, 1);
            let lam = qp.mul(&qm.derivative()).sub(&qm.mul(&qp.derivative())).add(&qp.mul(&qm).scale(&c));
            prop_assume!(!lam.is_zero());
            let master = MasterData::from_lambdas(&cd, vec![lam.clone()]).unwrap();
            let twist = CartanTwist::new(vec![c.div(&q(2, 1))]);
            let got = solve_q_minus(&cd, &twist, &master, std::slice::from_ref(&qp), 0, 0.0).unwrap();
            prop_assert_eq!(got, QMinus::Unique(qm.clone()));
            // Degree consistency of the two sides.
            prop_assert_eq!(lam.degree_i(), qp.degree_i() + qm.degree_i());
        }
    }
}
