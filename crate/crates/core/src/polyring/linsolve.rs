//! Linear systems whose unknowns are polynomial coefficients.
//!
//! Each equation is a polynomial identity `Σ_k L_k(p_k) = rhs`, where every
//! `L_k` is a linear differential operator with polynomial coefficients.
//! Matching coefficients turns the system into a dense linear system over
//! the scalar field; exact mode solves it by row reduction, float mode by a
//! rank-revealing SVD.

use nalgebra::{DMatrix, DVector};

use super::field::{Field, Scalar, C};
use super::poly::Poly;

/// `Σ_m ops[m]·∂^m` applied to unknown number `unknown`.
#[derive(Clone, Debug)]
pub struct LinearTerm<F> {
    pub unknown: usize,
    pub ops: Vec<Poly<F>>,
}

impl<F: Scalar> LinearTerm<F> {
    /// `a(z)·p + b(z)·p'`.
    pub fn first_order(unknown: usize, a: Poly<F>, b: Poly<F>) -> Self {
        LinearTerm {
            unknown,
            ops: vec![a, b],
        }
    }

    /// `a(z)·p`.
    pub fn multiply(unknown: usize, a: Poly<F>) -> Self {
        LinearTerm {
            unknown,
            ops: vec![a],
        }
    }

    fn apply(&self, p: &Poly<F>) -> Poly<F> {
        let mut acc = Poly::zero();
        let mut d = p.clone();
        for op in &self.ops {
            acc = acc.add(&op.mul(&d));
            d = d.derivative();
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct PolyEquation<F> {
    pub terms: Vec<LinearTerm<F>>,
    pub rhs: Poly<F>,
}

/// A linear system in polynomial unknowns of bounded degree.
#[derive(Clone, Debug)]
pub struct PolySystem<F> {
    /// Degree bound per unknown; a negative bound forces the unknown to zero.
    pub degree_bounds: Vec<i64>,
    pub equations: Vec<PolyEquation<F>>,
}

/// Outcome of [`poly_linear_solve`].
#[derive(Clone, Debug, PartialEq)]
pub enum PolySolution<F> {
    Unique(Vec<Poly<F>>),
    /// `particular + span(kernel)`; each kernel vector lists one polynomial
    /// per unknown.
    Affine {
        particular: Vec<Poly<F>>,
        kernel: Vec<Vec<Poly<F>>>,
    },
    /// No solution. `witness` is the residual (LHS − RHS, per equation) of
    /// the best candidate found.
    Inconsistent { witness: Vec<Poly<F>> },
}

impl<F: Scalar> PolySolution<F> {
    /// Any solution (the unique one or the particular representative).
    pub fn solution(&self) -> Option<&[Poly<F>]> {
        match self {
            PolySolution::Unique(v) => Some(v),
            PolySolution::Affine { particular, .. } => Some(particular),
            PolySolution::Inconsistent { .. } => None,
        }
    }

    pub fn kernel_dim(&self) -> usize {
        match self {
            PolySolution::Affine { kernel, .. } => kernel.len(),
            _ => 0,
        }
    }
}

/// Dense solve result: `particular + span(kernel)`.
#[derive(Clone, Debug)]
pub struct DenseSolution<F> {
    pub particular: Vec<F>,
    pub kernel: Vec<Vec<F>>,
    pub consistent: bool,
}

/// Solve a polynomial linear system. `tol` is the relative consistency /
/// rank threshold in float mode and ignored in exact mode.
pub fn poly_linear_solve<F: Scalar>(sys: &PolySystem<F>, tol: f64) -> PolySolution<F> {
    // Column layout: unknown k occupies `offsets[k]..offsets[k]+len[k]`.
    let lens: Vec<usize> = sys
        .degree_bounds
        .iter()
        .map(|&d| if d < 0 { 0 } else { d as usize + 1 })
        .collect();
    let mut offsets = Vec::with_capacity(lens.len());
    let mut ncols = 0;
    for &l in &lens {
        offsets.push(ncols);
        ncols += l;
    }

    // Image of every basis monomial under every equation.
    let mut rhs_rows: Vec<F> = Vec::new();
    let mut rows: Vec<Vec<F>> = Vec::new();
    for eq in &sys.equations {
        let mut images: Vec<Poly<F>> = vec![Poly::zero(); ncols];
        for term in &eq.terms {
            for j in 0..lens[term.unknown] {
                let img = term.apply(&Poly::monomial(F::one(), j));
                let col = offsets[term.unknown] + j;
                images[col] = images[col].add(&img);
            }
        }
        let height = images
            .iter()
            .map(|p| p.coeffs().len())
            .chain(std::iter::once(eq.rhs.coeffs().len()))
            .max()
            .unwrap_or(0);
        for r in 0..height {
            rows.push(images.iter().map(|p| p.coeff(r)).collect());
            rhs_rows.push(eq.rhs.coeff(r));
        }
    }

    let dense = F::solve_dense(&rows, ncols, &rhs_rows, tol);
    let split = |x: &[F]| -> Vec<Poly<F>> {
        lens.iter()
            .zip(&offsets)
            .map(|(&l, &o)| Poly::new(x[o..o + l].to_vec()))
            .collect()
    };
    let particular = split(&dense.particular);
    if !dense.consistent {
        let witness = sys
            .equations
            .iter()
            .map(|eq| {
                let lhs = eq.terms.iter().fold(Poly::zero(), |acc, t| {
                    acc.add(&t.apply(&particular[t.unknown]))
                });
                lhs.sub(&eq.rhs)
            })
            .collect();
        return PolySolution::Inconsistent { witness };
    }
    if dense.kernel.is_empty() {
        PolySolution::Unique(particular)
    } else {
        PolySolution::Affine {
            particular,
            kernel: dense.kernel.iter().map(|k| split(k)).collect(),
        }
    }
}

/// Exact reduced row echelon solve. Free variables are set to zero in the
/// particular solution.
pub fn rref_solve<F: Field>(a: &[Vec<F>], ncols: usize, b: &[F]) -> DenseSolution<F> {
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let nrows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows)
            .filter(|&i| !m[i][col].is_zero())
            .max_by(|&i, &j| {
                m[i][col]
                    .pivot_weight()
                    .partial_cmp(&m[j][col].pivot_weight())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
        else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].try_inv().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = v.mul(&inv);
        }
        for i in 0..nrows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=ncols {
                    let t = m[r][j].mul(&f);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let consistent = m[r..].iter().all(|row| row[ncols].is_zero());
    let mut particular = vec![F::zero(); ncols];
    for (i, &pc) in pivots.iter().enumerate() {
        particular[pc] = m[i][ncols].clone();
    }
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = m[i][free].neg();
        }
        kernel.push(v);
    }
    DenseSolution {
        particular,
        kernel,
        consistent,
    }
}

/// Least-squares solve via SVD with relative rank threshold `tol`.
pub fn svd_solve(a: &[Vec<C>], ncols: usize, b: &[C], tol: f64) -> DenseSolution<C> {
    let m = a.len();
    let bnorm = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if ncols == 0 {
        return DenseSolution {
            particular: vec![],
            kernel: vec![],
            consistent: bnorm <= tol.max(1e-300),
        };
    }
    // Pad to at least square so the SVD exposes the whole kernel.
    let rows = m.max(ncols);
    let mut mat = DMatrix::<C>::zeros(rows, ncols);
    let mut rhs = DVector::<C>::zeros(rows);
    for i in 0..m {
        for j in 0..ncols {
            mat[(i, j)] = a[i][j];
        }
        rhs[i] = b[i];
    }
    let svd = mat.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = (tol * smax).max(1e-300);
    let x = svd.solve(&rhs, eps).expect("u and v were computed");
    let v_t = svd.v_t.as_ref().expect("v computed");
    let kernel: Vec<Vec<C>> = (0..ncols)
        .filter(|&k| svd.singular_values[k] <= eps)
        .map(|k| (0..ncols).map(|j| v_t[(k, j)].conj()).collect())
        .collect();
    let res = (&mat * &x - &rhs).norm();
    let xnorm = x.norm();
    let scale = bnorm.max(smax * xnorm).max(1e-300);
    DenseSolution {
        particular: x.iter().cloned().collect(),
        kernel,
        consistent: res <= tol * scale * 10.0,
    }
}
