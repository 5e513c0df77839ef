//! Univariate polynomial and rational-function arithmetic over exact
//! rationals and complex doubles.

pub mod field;
pub mod linsolve;
pub mod poly;
pub mod ratfunc;
pub mod roots;

pub use field::{c, format_rational, parse_rational, q, rationalize, Field, Scalar, C, Q};
pub use linsolve::{poly_linear_solve, LinearTerm, PolyEquation, PolySolution, PolySystem};
pub use poly::{relative_distance, wronskian2, Poly};
pub use ratfunc::RatFunc;
pub use roots::{rational_roots, roots, roots_coincide, sort_complex, ExactRoots, RootList};
