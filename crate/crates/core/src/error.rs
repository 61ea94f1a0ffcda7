use thiserror::Error;

use crate::matrix::CMat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("evaluation at z = 0 is undefined on the punctured plane")]
    ZeroArgument,

    #[error("underdetermined fit: {samples} samples per circle, need at least {needed}")]
    Underdetermined { samples: usize, needed: usize },

    #[error("fit residual {residual:e} exceeds tolerance {tolerance:e} (content outside the window)")]
    FitResidual { residual: f64, tolerance: f64 },

    #[error("truncation error {residual:e} exceeds tolerance {tolerance:e}")]
    Truncation { residual: f64, tolerance: f64 },

    #[error("element is not in the backend algebra: {0}")]
    NotInAlgebra(String),

    #[error("twist or reality invariant violated by {deviation:e}")]
    InvariantViolated { deviation: f64 },

    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    #[error("convention mismatch: {left:?} vs {right:?}")]
    ConventionMismatch {
        left: crate::laurent::Convention,
        right: crate::laurent::Convention,
    },

    #[error("unsupported automorphism of order {order} on sl({n})")]
    UnsupportedAutomorphism { order: u32, n: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("principal logarithm undefined: {0}")]
    Branch(String),

    #[error("matrix is not semisimple (eigenvector condition number {condition:e})")]
    NonSemisimple { condition: f64 },

    #[error("determinant deviates from 1 by {deviation:e}")]
    DetNotOne { deviation: f64 },

    #[error("element is not det-certified")]
    NotCertified,

    #[error("input is not a diagonal anti-Hermitian traceless matrix: {0}")]
    NotInTorus(String),

    #[error("loop is not compact-valued (reality defect {deviation:e})")]
    NotCompact { deviation: f64 },

    #[error("form is not integrable, monodromy deviates from identity by {defect:e}")]
    MonodromyObstruction { transport: CMat, defect: f64 },

    #[error("transport did not converge within {steps} steps (last change {change:e})")]
    NonConvergence {
        steps: usize,
        last: CMat,
        previous: CMat,
        change: f64,
    },

    #[error("alcove search radius {radius} too small")]
    SearchRadius { radius: i64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}
