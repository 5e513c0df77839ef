use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("invalid Cartan data: {0}")]
    InvalidCartan(String),
    #[error("Weyl group has more than {cap} elements")]
    WeylGroupTooLarge { cap: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("only type A is realized as matrices (got {0})")]
    NotTypeA(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("no polynomial q- on node {node}: qq-equation is inconsistent")]
    InconsistentQMinus { node: usize },
    #[error("Backlund step on node {node} is undefined: q- vanishes")]
    DegenerateStep { node: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("Gaussian decomposition refused: principal minor {index} vanishes")]
    NotGaussDecomposable { index: usize },
    #[error("length condition l(u s_i) = l(u) + 1 fails for {which}")]
    LengthCondition { which: &'static str },
    #[error("no rational solution for lower-triangular entry ({row}, {col})")]
    TailUnsolvable { row: usize, col: usize },
    #[error("{0}")]
    Format(String),
}
