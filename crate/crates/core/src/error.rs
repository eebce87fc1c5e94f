use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("closure violated: face {face:?} of {simplex:?} is not listed")]
    ClosureViolated { simplex: Vec<usize>, face: Vec<usize> },
    #[error("duplicate simplex {0:?}")]
    DuplicateSimplex(Vec<usize>),
    #[error("fundamental cycle is not a cycle")]
    NotACycleFundamental,
    #[error("degree {degree} out of range {min}..={max}")]
    DegreeOutOfRange { degree: i64, min: i64, max: i64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("complex has no fundamental cycle (unoriented or not closed)")]
    Unoriented,
    #[error("mismatched complexes")]
    MismatchedComplexes,
    #[error("class is not torsion")]
    NotTorsion,
    #[error("unknown space {0:?}")]
    UnknownSpace(String),
    #[error("simplex budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("solver did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("residual {residual:e} exceeds tolerance {tol:e}")]
    Residual { residual: f64, tol: f64 },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("non-integral critical period {value} on critical cell {cell:?}")]
    NonIntegralPeriod { cell: Vec<usize>, value: String },
    #[error("degenerate section: half-turn phase difference on edge {0:?}")]
    DegenerateSection(Vec<usize>),
    #[error("complex is disconnected")]
    Disconnected,
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("gerbe curvature disagrees on overlap {0:?}")]
    CurvatureMismatch(Vec<usize>),
    #[error("Cech cocycle R is not integral")]
    NonIntegralCech,
    #[error("gerbe is not flat")]
    NotFlat,
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
