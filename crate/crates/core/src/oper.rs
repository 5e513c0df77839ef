//! Miura oper connections `∂_z + A(z)` for type A in the defining
//! representation, gauge transformations, and the matrix form of the
//! Bäcklund step.
//!
//! Chevalley generators: `e_i = E_{i,i+1}`, `f_i = E_{i+1,i}`,
//! `α̌_i = E_{ii} − E_{i+1,i+1}` (0-based). Gauge action is on the right:
//! `g · A = g⁻¹ A g + g⁻¹ ∂g`, so that `∂ + g·A = g⁻¹ (∂ + A) g`.

use crate::cartan::{CartanTwist, DEFAULT_WEYL_CAP};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::minors::lift_word;
use crate::polyring::{Field, Poly, RatFunc, Scalar, C};
use crate::qqcore::QQSolution;

/// `SL(N)` element over `ℂ(z)` or `ℚ(z)`.
pub type GroupElement<F> = Matrix<RatFunc<F>>;

/// The connection `∂_z + A(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<F> {
    pub a: Matrix<RatFunc<F>>,
}

impl<F: Scalar> Connection<F> {
    pub fn new(a: Matrix<RatFunc<F>>) -> Self {
        Connection { a }
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn trace(&self) -> RatFunc<F> {
        self.a.trace()
    }

    /// Coefficients of the diagonal in the coroot basis:
    /// `diag = Σ_i c_i α̌_i`, so `c_i = Σ_{k≤i} diag_k`.
    pub fn cartan_coordinates(&self) -> Vec<RatFunc<F>> {
        let n = self.dim();
        let mut acc = RatFunc::zero();
        (0..n - 1)
            .map(|i| {
                acc = acc.add(&self.a[(i, i)]);
                acc.clone()
            })
            .collect()
    }
}

/// Diagonal of `Σ_i v_i α̌_i`: entry `k` is `v_k − v_{k−1}`.
pub fn coroot_diagonal<T: Field>(v: &[T]) -> Vec<T> {
    let r = v.len();
    (0..=r)
        .map(|k| {
            let hi = if k < r { v[k].clone() } else { T::zero() };
            let lo = if k > 0 { v[k - 1].clone() } else { T::zero() };
            hi.sub(&lo)
        })
        .collect()
}

/// The constant Cartan element `Z` as a diagonal matrix.
pub fn twist_matrix<F: Scalar>(z: &CartanTwist<F>) -> GroupElement<F> {
    Matrix::diagonal(coroot_diagonal(&z.zeta).into_iter().map(RatFunc::constant).collect())
}

fn require_type_a<F: Scalar>(sol: &QQSolution<F>) -> Result<()> {
    if sol.cd.is_type_a() {
        Ok(())
    } else {
        Err(Error::NotTypeA(sol.cd.label()))
    }
}

/// `A = −Z + Σ ∂log(q₊ⁱ) α̌_i + Σ Λ_i f_i` (lower form).
pub fn miura_connection<F: Scalar>(sol: &QQSolution<F>) -> Result<Connection<F>> {
    require_type_a(sol)?;
    let r = sol.rank();
    let logs = sol
        .q_plus
        .iter()
        .map(|p| RatFunc::log_derivative(p).ok_or(Error::ZeroPolynomial))
        .collect::<Result<Vec<_>>>()?;
    let y = coroot_diagonal(&logs);
    let z = coroot_diagonal(&sol.twist.zeta);
    let mut a = Matrix::zeros(r + 1, r + 1);
    for k in 0..=r {
        a[(k, k)] = y[k].sub(&RatFunc::constant(z[k].clone()));
    }
    for i in 0..r {
        a[(i + 1, i)] = RatFunc::from_poly(sol.master.lambda(i).clone());
    }
    Ok(Connection::new(a))
}

/// The same connection conjugated by the lift of the longest element:
/// `Λ_i` sits above the diagonal and the diagonal is reversed.
pub fn miura_connection_upper<F: Scalar>(sol: &QQSolution<F>) -> Result<Connection<F>> {
    let lower = miura_connection(sol)?;
    let w0 = sol.cd.longest_element(DEFAULT_WEYL_CAP)?;
    let lift: Matrix<RatFunc<F>> = lift_word(&sol.cd, w0.word())?;
    gauge(&lower, &lift)
}

/// `g⁻¹ A g + g⁻¹ ∂g`.
pub fn gauge<F: Scalar>(conn: &Connection<F>, g: &GroupElement<F>) -> Result<Connection<F>> {
    let inv = g.inverse()?;
    Ok(Connection::new(inv.mul(&conn.a).mul(g).add(&inv.mul(&g.derivative()))))
}

/// `exp(t e_i) = 1 + t E_{i,i+1}`.
pub fn exp_e<F: Scalar>(n: usize, i: usize, t: &RatFunc<F>) -> GroupElement<F> {
    let mut m = Matrix::identity(n);
    m[(i, i + 1)] = t.clone();
    m
}

/// `exp(t f_i) = 1 + t E_{i+1,i}`.
pub fn exp_f<F: Scalar>(n: usize, i: usize, t: &RatFunc<F>) -> GroupElement<F> {
    let mut m = Matrix::identity(n);
    m[(i + 1, i)] = t.clone();
    m
}

/// Deterministic sample points for float-mode identity checks.
pub fn sample_points(count: usize) -> Vec<C> {
    (1..=count as u64)
        .map(|k| {
            let u = radical_inverse(k, 2);
            let v = radical_inverse(k, 3);
            C::from_polar(0.5 + 2.5 * u, std::f64::consts::TAU * v + 0.1)
        })
        .collect()
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

fn max_degree<F: Scalar>(m: &Matrix<RatFunc<F>>) -> usize {
    m.entries()
        .map(|(_, _, x)| x.num().degree().unwrap_or(0).max(x.den().degree().unwrap_or(0)))
        .max()
        .unwrap_or(0)
}

/// Outcome of a matrix identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixCheck<F> {
    pub matches: bool,
    /// Entrywise difference (exact) or its values are summarized by
    /// `max_residual` (float).
    pub difference: Matrix<RatFunc<F>>,
    /// 0 for an exact match; in float mode the largest relative
    /// discrepancy at the sample points.
    pub max_residual: f64,
}

/// Compare two rational matrices: structurally in exact mode, at
/// `2·(max degree) + 5` sample points in float mode.
pub fn compare_matrices<F: Scalar>(a: &Matrix<RatFunc<F>>, b: &Matrix<RatFunc<F>>, tol: f64) -> MatrixCheck<F> {
    let difference = a.sub(b);
    if F::EXACT {
        let matches = difference.is_zero();
        let max_residual = if matches { 0.0 } else { f64::INFINITY };
        return MatrixCheck {
            matches,
            difference,
            max_residual,
        };
    }
    let pts = sample_points(2 * max_degree(a).max(max_degree(b)) + 5);
    let mut worst: f64 = 0.0;
    for (i, j, x) in a.entries() {
        let y = &b[(i, j)];
        let scale = x.max_abs_at(&pts).max(y.max_abs_at(&pts)).max(1.0);
        worst = worst.max(x.max_diff_at(y, &pts) / scale);
    }
    MatrixCheck {
        matches: worst <= tol,
        difference,
        max_residual: worst,
    }
}

/// Gauge the Miura connection by `exp(−μ_i e_i)` and compare with the
/// Miura connection of the Bäcklund-transformed solution. The minus sign
/// belongs to the right action `g⁻¹ A g + g⁻¹ ∂g`.
pub fn backlund_matrix_check<F: Scalar>(sol: &QQSolution<F>, i: usize, tol: f64) -> Result<MatrixCheck<F>> {
    require_type_a(sol)?;
    let mu = crate::backlund::mu_coefficient(sol, i)?;
    let lhs = gauge(&miura_connection(sol)?, &exp_e(sol.rank() + 1, i, &mu.neg()))?;
    let stepped = crate::backlund::backlund_step(sol, i, tol)?;
    let rhs = miura_connection(&stepped.solution)?;
    Ok(compare_matrices(&lhs.a, &rhs.a, tol))
}

/// Check that `ℬ₋ · (−Z) = A`: the Miura connection is `Z`-twisted.
pub fn z_twist_check<F: Scalar>(sol: &QQSolution<F>, tol: f64) -> Result<MatrixCheck<F>> {
    let b = crate::wronskian::build_b_minus(sol, tol)?;
    let constant = Connection::new(twist_matrix(&sol.twist).neg());
    let lhs = gauge(&constant, &b.matrix)?;
    let rhs = miura_connection(sol)?;
    Ok(compare_matrices(&lhs.a, &rhs.a, tol))
}

/// `∂ log` of a polynomial as a rational function (convenience).
pub fn log_derivative<F: Scalar>(p: &Poly<F>) -> Result<RatFunc<F>> {
    RatFunc::log_derivative(p).ok_or(Error::ZeroPolynomial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanData;
    use crate::polyring::{q, Q};
    use crate::qqcore::MasterData;
    use proptest::prelude::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc<Q> {
        RatFunc::new(Poly::from_i64(n), Poly::from_i64(d)).unwrap()
    }

    pub(crate) fn sl2_seed() -> QQSolution<Q> {
        let cd = CartanData::from_label("A1").unwrap();
        let master = MasterData::new(&cd, vec![q(0, 1)], vec![vec![1]]).unwrap();
        QQSolution::from_q_plus(&cd, &CartanTwist::new(vec![q(1, 2)]), &master, vec![Poly::from_i64(&[1, 1])], 0.0)
            .unwrap()
    }

    fn a2_seed() -> QQSolution<Q> {
        let cd = CartanData::from_label("A2").unwrap();
        let master = MasterData::new(&cd, vec![q(0, 1)], vec![vec![1, 0]]).unwrap();
        let twist = CartanTwist::new(vec![q(1, 3), q(1, 2)]);
        QQSolution::from_q_plus(&cd, &twist, &master, vec![Poly::from_i64(&[6, 1]), Poly::one()], 0.0).unwrap()
    }

    #[test]
    fn sl2_miura() {
        let a = miura_connection(&sl2_seed()).unwrap();
        // 1/(z+1) − 1/2 = (1 − z)/(2(z+1))
        assert_eq!(a.a[(0, 0)], rf(&[1, -1], &[2, 2]));
        assert_eq!(a.a[(1, 1)], rf(&[-1, 1], &[2, 2]));
        assert_eq!(a.a[(1, 0)], rf(&[0, 1], &[1]));
        assert!(a.a[(0, 1)].is_zero());
        assert!(a.trace().is_zero());
        let up = miura_connection_upper(&sl2_seed()).unwrap();
        assert_eq!(up.a[(0, 1)], rf(&[0, -1], &[1]));
        assert_eq!(up.a[(0, 0)], a.a[(1, 1)]);
        assert!(up.a[(1, 0)].is_zero());
    }

    #[test]
    fn trivial_miura_is_p_minus_one() {
        let cd = CartanData::from_label("A2").unwrap();
        let master = MasterData::from_lambdas(&cd, vec![Poly::from_i64(&[2]), Poly::from_i64(&[0, 3])]).unwrap();
        let sol = QQSolution {
            master,
            cd,
            twist: CartanTwist::zero(2),
            q_plus: vec![Poly::one(), Poly::one()],
            q_minus: vec![Poly::one(), Poly::one()],
            family: vec![true, true],
        };
        let a = miura_connection(&sol).unwrap();
        let mut expect = Matrix::zeros(3, 3);
        expect[(1, 0)] = rf(&[2], &[1]);
        expect[(2, 1)] = rf(&[0, 3], &[1]);
        assert_eq!(a.a, expect);
    }

    #[test]
    fn cartan_part_matches_twist_and_logs() {
        let sol = a2_seed();
        let a = miura_connection(&sol).unwrap();
        let coords = a.cartan_coordinates();
        for i in 0..2 {
            // coefficient of α̌_i is −(ζ_i − ∂log q₊ⁱ)
            let g = RatFunc::constant(sol.twist.zeta[i].clone()).sub(&log_derivative(&sol.q_plus[i]).unwrap());
            assert_eq!(coords[i], g.neg());
        }
        assert!(a.trace().is_zero());
    }

    #[test]
    fn gauge_identity_and_sl2_example() {
        let a = miura_connection(&sl2_seed()).unwrap();
        assert_eq!(gauge(&a, &Matrix::identity(2)).unwrap(), a);
        // ℬ₋ from the worked example.
        let b = Matrix::from_rows(vec![vec![rf(&[1, 1], &[1]), RatFunc::zero()], vec![RatFunc::one(), rf(&[1], &[1, 1])]]);
        let z = Connection::new(twist_matrix(&sl2_seed().twist).neg());
        assert_eq!(gauge(&z, &b).unwrap(), a);
    }

    #[test]
    fn backlund_matrix_examples() {
        let chk = backlund_matrix_check(&sl2_seed(), 0, 0.0).unwrap();
        assert!(chk.matches, "{}", chk.difference);
        let sol = a2_seed();
        for i in 0..2 {
            assert!(backlund_matrix_check(&sol, i, 0.0).unwrap().matches);
        }
        let chk = backlund_matrix_check(&sol.to_float(), 0, 1e-9).unwrap();
        assert!(chk.matches, "float residual {}", chk.max_residual);
    }

    #[test]
    fn opposite_sign_fails() {
        // exp(+μ e_i) does not reproduce the transformed connection.
        let sol = sl2_seed();
        let mu = crate::backlund::mu_coefficient(&sol, 0).unwrap();
        let lhs = gauge(&miura_connection(&sol).unwrap(), &exp_e(2, 0, &mu)).unwrap();
        let rhs = miura_connection(&crate::backlund::backlund_step(&sol, 0, 0.0).unwrap().solution).unwrap();
        assert!(!compare_matrices(&lhs.a, &rhs.a, 0.0).matches);
    }

    #[test]
    fn z_twist_examples() {
        assert!(z_twist_check(&sl2_seed(), 0.0).unwrap().matches);
        assert!(z_twist_check(&a2_seed(), 0.0).unwrap().matches);
        let mut bad = sl2_seed();
        bad.q_minus[0] = Poly::from_i64(&[2]);
        let chk = z_twist_check(&bad, 0.0).unwrap();
        assert!(!chk.matches);
        assert!(!chk.difference.is_zero());
    }

    #[test]
    fn non_type_a_refused() {
        let cd = CartanData::from_label("B2").unwrap();
        let master = MasterData::from_lambdas(&cd, vec![Poly::one(), Poly::one()]).unwrap();
        let sol = QQSolution::from_q_plus(&cd, &CartanTwist::new(vec![q(1, 1), q(1, 3)]), &master, vec![Poly::one(), Poly::one()], 0.0).unwrap();
        assert!(matches!(miura_connection(&sol), Err(Error::NotTypeA(_))));
    }

    fn arb_lower(n: usize) -> impl Strategy<Value = GroupElement<Q>> {
        prop::collection::vec((-3i64..4, -3i64..4), n * n).prop_map(move |v| {
            Matrix::from_fn(n, n, |i, j| {
                let (a, b) = v[i * n + j];
                if i == j {
                    // Invertible diagonal: (z − b) or a nonzero constant.
                    if a == 0 { rf(&[-b, 1], &[1]) } else { rf(&[a], &[1]) }
                } else if i > j {
                    rf(&[a, b], &[1])
                } else {
                    RatFunc::zero()
                }
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn gauge_is_a_right_action(g in arb_lower(3), h in arb_lower(3)) {
            let a = miura_connection(&a2_seed()).unwrap();
            let two = gauge(&gauge(&a, &g).unwrap(), &h).unwrap();
            let one = gauge(&a, &g.mul(&h)).unwrap();
            prop_assert_eq!(two, one);
        }
    }
}
