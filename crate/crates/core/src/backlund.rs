//! Bäcklund transformations and the full qq-system over the Weyl orbit.

use rayon::prelude::*;

use crate::cartan::{CartanData, WeylElement};
use crate::error::{Error, Result};
use crate::polyring::{Field, RatFunc, Scalar};
use crate::qqcore::{qq_residual_norm, QQSolution};

/// Result of one step: the new solution and the leading coefficient of
/// the old `q₋ⁱ` that was divided out.
#[derive(Clone, Debug, PartialEq)]
pub struct BacklundStep<F> {
    pub solution: QQSolution<F>,
    pub scalar: F,
}

/// `q₊ⁱ ↦ monic(q₋ⁱ)`, `Z ↦ s_i(Z)`; every `q₋` is then recomputed for the
/// new twist.
pub fn backlund_step<F: Scalar>(sol: &QQSolution<F>, i: usize, tol: f64) -> Result<BacklundStep<F>> {
    if i >= sol.rank() {
        return Err(Error::IndexOutOfRange { index: i, rank: sol.rank() });
    }
    let qm = if F::EXACT {
        sol.q_minus[i].clone()
    } else {
        sol.q_minus[i].trim_relative(1e-13)
    };
    if qm.is_zero() {
        return Err(Error::DegenerateStep { node: i });
    }
    let scalar = qm.leading();
    let mut q_plus = sol.q_plus.clone();
    q_plus[i] = qm.monic();
    let twist = sol.cd.reflect_twist(i, &sol.twist);
    let solution = QQSolution::from_q_plus(&sol.cd, &twist, &sol.master, q_plus, tol)?;
    Ok(BacklundStep { solution, scalar })
}

/// Apply `s_{word[0]} s_{word[1]} ⋯` to the seed: the rightmost letter acts
/// first. Returns the product of discarded scalars as well.
pub fn backlund_chain<F: Scalar>(sol: &QQSolution<F>, word: &[usize], tol: f64) -> Result<BacklundStep<F>> {
    let mut cur = BacklundStep {
        solution: sol.clone(),
        scalar: F::one(),
    };
    for &i in word.iter().rev() {
        let next = backlund_step(&cur.solution, i, tol)?;
        cur = BacklundStep {
            scalar: cur.scalar.mul(&next.scalar),
            solution: next.solution,
        };
    }
    Ok(cur)
}

/// `μ_i = Λ_i⁻¹ [∂ log(q₋ⁱ/q₊ⁱ) + ⟨α_i, Z⟩]`.
pub fn mu_coefficient<F: Scalar>(sol: &QQSolution<F>, i: usize) -> Result<RatFunc<F>> {
    if i >= sol.rank() {
        return Err(Error::IndexOutOfRange { index: i, rank: sol.rank() });
    }
    let lm = RatFunc::log_derivative(&sol.q_minus[i]).ok_or(Error::ZeroPolynomial)?;
    let lp = RatFunc::log_derivative(&sol.q_plus[i]).ok_or(Error::ZeroPolynomial)?;
    let lam = sol.master.lambda(i);
    if lam.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c = RatFunc::constant(sol.twist_pairing(i));
    Ok(lm.sub(&lp).add(&c).div(&RatFunc::from_poly(lam.clone())))
}

/// One element of the full qq-system.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitEntry<F> {
    pub element: WeylElement,
    pub solution: QQSolution<F>,
    /// Node of the last step taken to reach this entry (`None` at the
    /// identity) and the scalar discarded by that step.
    pub step: Option<(usize, F)>,
    /// Product of all discarded scalars along the path from the seed.
    pub accumulated: F,
}

/// A failed step: reduced word (0-based letters) and message.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitFailure {
    pub word: Vec<usize>,
    pub message: String,
}

/// `{(Z^w, q₊^{i,w}, q₋^{i,w})}` over the Weyl group, in enumeration order.
#[derive(Clone, Debug, PartialEq)]
pub struct FullQQSystem<F> {
    pub entries: Vec<OrbitEntry<F>>,
    pub failures: Vec<OrbitFailure>,
    /// Only a length-ordered prefix of the group was generated.
    pub truncated: bool,
}

impl<F: Scalar> FullQQSystem<F> {
    pub fn get(&self, w: &WeylElement) -> Option<&OrbitEntry<F>> {
        self.entries.iter().find(|e| &e.element == w)
    }

    pub fn is_complete(&self) -> bool {
        self.failures.is_empty() && !self.truncated
    }

    /// Largest relative qq-residual over all entries and nodes.
    pub fn max_residual(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|e| (0..e.solution.rank()).map(move |i| qq_residual_norm(&e.solution, i).unwrap_or(f64::INFINITY)))
            .fold(0.0, f64::max)
    }
}

/// Generate the full qq-system. Entry `w = s_i w'` with `ℓ(w) = ℓ(w') + 1`
/// is the `i`-th step applied to entry `w'`, so its twist is `w(Z)`.
/// Entries of equal length are computed in parallel.
pub fn full_qq_generate<F: Scalar>(sol: &QQSolution<F>, cap: usize, tol: f64) -> Result<FullQQSystem<F>> {
    let elements = sol.cd.weyl_enumerate(cap)?;
    Ok(generate_over(sol, &elements, false, tol))
}

/// Like [`full_qq_generate`], but a group larger than `cap` yields the
/// entries for its first `cap` elements in length order, marked truncated.
pub fn full_qq_generate_prefix<F: Scalar>(sol: &QQSolution<F>, cap: usize, tol: f64) -> FullQQSystem<F> {
    let (elements, complete) = sol.cd.weyl_prefix(cap.max(1));
    generate_over(sol, &elements, !complete, tol)
}

fn generate_over<F: Scalar>(sol: &QQSolution<F>, elements: &[WeylElement], truncated: bool, tol: f64) -> FullQQSystem<F> {
    let cd: &CartanData = &sol.cd;
    let max_len = elements.iter().map(|w| w.length()).max().unwrap_or(0);
    let mut entries: Vec<OrbitEntry<F>> = vec![OrbitEntry {
        element: elements[0].clone(),
        solution: sol.clone(),
        step: None,
        accumulated: F::one(),
    }];
    let mut failures: Vec<OrbitFailure> = Vec::new();
    for len in 1..=max_len {
        let level: Vec<&WeylElement> = elements.iter().filter(|w| w.length() == len).collect();
        let results: Vec<std::result::Result<OrbitEntry<F>, OrbitFailure>> = level
            .par_iter()
            .map(|w| {
                let i = w.word()[0];
                let parent_el = cd.element_from_word(&w.word()[1..]).expect("valid word");
                let fail = |message: String| OrbitFailure {
                    word: w.word().to_vec(),
                    message,
                };
                let parent = entries
                    .iter()
                    .find(|e| e.element == parent_el)
                    .ok_or_else(|| fail("parent entry unavailable".into()))?;
                let step = backlund_step(&parent.solution, i, tol).map_err(|e| fail(e.to_string()))?;
                Ok(OrbitEntry {
                    element: (*w).clone(),
                    accumulated: parent.accumulated.mul(&step.scalar),
                    solution: step.solution,
                    step: Some((i, step.scalar)),
                })
            })
            .collect();
        for r in results {
            match r {
                Ok(e) => entries.push(e),
                Err(f) => failures.push(f),
            }
        }
    }
    FullQQSystem {
        entries,
        failures,
        truncated,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cartan::{CartanTwist, DEFAULT_WEYL_CAP};
    use crate::polyring::{q, Poly, Q};
    use crate::qqcore::{qq_residual, MasterData};
    use proptest::prelude::*;

    fn a1_seed() -> QQSolution<Q> {
        let cd = CartanData::from_label("A1").unwrap();
        let master = MasterData::new(&cd, vec![q(0, 1)], vec![vec![1]]).unwrap();
        QQSolution::from_q_plus(&cd, &CartanTwist::new(vec![q(1, 2)]), &master, vec![Poly::from_i64(&[1, 1])], 0.0)
            .unwrap()
    }

    pub(crate) fn a2_seed() -> QQSolution<Q> {
        // A2, one marked point with λ̌ = ω̌_1, d = (1, 0).
        let cd = CartanData::from_label("A2").unwrap();
        let master = MasterData::new(&cd, vec![q(0, 1)], vec![vec![1, 0]]).unwrap();
        let twist = CartanTwist::new(vec![q(1, 3), q(1, 2)]);
        // ⟨α_1, Z⟩ = 2/3 − 1/2 = 1/6, root w = −6.
        QQSolution::from_q_plus(&cd, &twist, &master, vec![Poly::from_i64(&[6, 1]), Poly::one()], 0.0).unwrap()
    }

    /// A2 with one point of coweight ω̌_1, d = (1, 0), twist `ζ`: the root
    /// is `w = −1/⟨α_1, Z⟩`. `None` unless every positive root pairs nonzero.
    pub(crate) fn a2_family_seed(zeta: [Q; 2]) -> Option<QQSolution<Q>> {
        let cd = CartanData::from_label("A2").unwrap();
        let p1 = zeta[0].add(&zeta[0]).sub(&zeta[1]);
        let p2 = zeta[1].add(&zeta[1]).sub(&zeta[0]);
        if p1.is_zero() || p2.is_zero() || p1.add(&p2).is_zero() {
            return None;
        }
        let master = MasterData::new(&cd, vec![q(0, 1)], vec![vec![1, 0]]).unwrap();
        let q_plus = vec![Poly::new(vec![p1.try_inv().unwrap(), Q::one()]), Poly::one()];
        QQSolution::from_q_plus(&cd, &CartanTwist::new(zeta.to_vec()), &master, q_plus, 0.0).ok()
    }

    pub(crate) fn twist_strategy() -> impl Strategy<Value = [Q; 2]> {
        ((-6i64..7, 1i64..4), (-6i64..7, 1i64..4)).prop_map(|((a, b), (c, d))| [q(a, b), q(c, d)])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn orbit_invariants(zeta in twist_strategy()) {
            let Some(seed) = a2_family_seed(zeta) else { return Ok(()) };
            let cd = seed.cd.clone();
            let full = full_qq_generate(&seed, DEFAULT_WEYL_CAP, 0.0).unwrap();
            for e in &full.entries {
                prop_assert_eq!(&e.solution.twist, &cd.weyl_act_on_twist(&e.element, &seed.twist));
                for i in 0..2 {
                    prop_assert!(qq_residual(&e.solution, i).unwrap().is_zero());
                }
            }
            for i in 0..2 {
                if let Ok(step) = backlund_step(&seed, i, 0.0) {
                    let back = backlund_step(&step.solution, i, 0.0).unwrap();
                    prop_assert_eq!(&back.solution, &seed);
                }
            }
            if let (Ok(a), Ok(b)) = (backlund_chain(&seed, &[0, 1, 0], 0.0), backlund_chain(&seed, &[1, 0, 1], 0.0)) {
                prop_assert_eq!(a.solution.q_plus, b.solution.q_plus);
                prop_assert_eq!(a.solution.twist, b.solution.twist);
            }
        }
    }

    #[test]
    fn a1_step() {
        let seed = a1_seed();
        let s = backlund_step(&seed, 0, 0.0).unwrap();
        assert_eq!(s.solution.twist.zeta, vec![q(-1, 2)]);
        assert_eq!(s.solution.q_plus[0], Poly::one());
        assert_eq!(s.solution.q_minus[0], Poly::from_i64(&[-1, -1]));
        assert_eq!(s.scalar, q(1, 1));
        assert!(qq_residual(&s.solution, 0).unwrap().is_zero());
        // Involution.
        let back = backlund_step(&s.solution, 0, 0.0).unwrap();
        assert_eq!(back.solution, seed);
        assert_eq!(back.scalar, q(-1, 1));
    }

    #[test]
    fn mu_examples() {
        let mu = mu_coefficient(&a1_seed(), 0).unwrap();
        assert_eq!(mu, RatFunc::new(Poly::one(), Poly::from_i64(&[1, 1])).unwrap());
        // q₋ = q₊ with zero twist: μ = 0.
        let cd = CartanData::from_label("A1").unwrap();
        let sol = QQSolution {
            master: MasterData::from_lambdas(&cd, vec![Poly::one()]).unwrap(),
            cd,
            twist: CartanTwist::new(vec![q(0, 1)]),
            q_plus: vec![Poly::from_i64(&[2, 1])],
            q_minus: vec![Poly::from_i64(&[2, 1])],
            family: vec![true],
        };
        assert!(mu_coefficient(&sol, 0).unwrap().is_zero());
    }

    #[test]
    fn degenerate_step_refused() {
        let mut s = a1_seed();
        s.q_minus[0] = Poly::zero();
        assert!(matches!(backlund_step(&s, 0, 0.0), Err(Error::DegenerateStep { node: 0 })));
    }

    #[test]
    fn a1_orbit() {
        let full = full_qq_generate(&a1_seed(), DEFAULT_WEYL_CAP, 0.0).unwrap();
        assert_eq!(full.entries.len(), 2);
        assert_eq!(full.entries[0].solution, a1_seed());
        assert_eq!(full.entries[1].solution.q_plus[0], Poly::one());
        assert!(full.is_complete());
    }

    #[test]
    fn a2_orbit_and_braid() {
        let seed = a2_seed();
        let cd = seed.cd.clone();
        let full = full_qq_generate(&seed, DEFAULT_WEYL_CAP, 0.0).unwrap();
        assert_eq!(full.entries.len(), 6);
        assert_eq!(full.max_residual(), 0.0);
        for e in &full.entries {
            assert_eq!(e.solution.twist, cd.weyl_act_on_twist(&e.element, &seed.twist));
            assert!(e.solution.q_plus.iter().all(|p| !p.is_zero()));
        }
        let a = backlund_chain(&seed, &[0, 1, 0], 0.0).unwrap();
        let b = backlund_chain(&seed, &[1, 0, 1], 0.0).unwrap();
        assert_eq!(a.solution.q_plus, b.solution.q_plus);
        assert_eq!(a.solution.twist, b.solution.twist);
        let w0 = cd.longest_element(DEFAULT_WEYL_CAP).unwrap();
        assert_eq!(full.get(&w0).unwrap().solution.q_plus, a.solution.q_plus);
        // Double steps.
        for i in 0..2 {
            let twice = backlund_chain(&seed, &[i, i], 0.0).unwrap();
            assert_eq!(twice.solution, seed);
        }
    }

    #[test]
    fn degree_zero_orbit() {
        let cd = CartanData::from_label("A2").unwrap();
        let master = MasterData::new(&cd, vec![q(1, 1)], vec![vec![1, 1]]).unwrap();
        let twist = CartanTwist::new(vec![q(1, 5), q(2, 3)]);
        let seed = QQSolution::from_q_plus(&cd, &twist, &master, vec![Poly::one(), Poly::one()], 0.0).unwrap();
        let full = full_qq_generate(&seed, DEFAULT_WEYL_CAP, 0.0).unwrap();
        assert_eq!(full.entries.len(), 6);
        assert_eq!(full.max_residual(), 0.0);
    }

    #[test]
    fn float_orbit_matches_exact() {
        let seed = a2_seed();
        let fl = full_qq_generate(&seed.to_float(), DEFAULT_WEYL_CAP, 1e-12).unwrap();
        let ex = full_qq_generate(&seed, DEFAULT_WEYL_CAP, 0.0).unwrap();
        assert!(fl.max_residual() < 1e-9);
        for (a, b) in ex.entries.iter().zip(&fl.entries) {
            for i in 0..2 {
                assert!(crate::polyring::relative_distance(&a.solution.q_plus[i], &b.solution.q_plus[i]) < 1e-9);
            }
        }
    }

    #[test]
    fn prefix_generation() {
        let seed = a1_seed();
        let one = full_qq_generate_prefix(&seed, 1, 0.0);
        assert_eq!(one.entries.len(), 1);
        assert_eq!(one.entries[0].solution, seed);
        assert!(one.truncated && !one.is_complete());
        let all = full_qq_generate_prefix(&seed, DEFAULT_WEYL_CAP, 0.0);
        assert_eq!(all, full_qq_generate(&seed, DEFAULT_WEYL_CAP, 0.0).unwrap());
        assert!(matches!(full_qq_generate(&seed, 1, 0.0), Err(crate::Error::WeylGroupTooLarge { cap: 1 })));
    }
}
