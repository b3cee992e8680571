//! Symmetric linear algebra for the discretized eigenproblems.
//!
//! Everything here works on [`SymmetricSparseMatrix`] and
//! [`DiagonalWeightMatrix`]. The generalized problem `A x = λ B x` with a
//! diagonal, positive `B` is reduced to a standard symmetric problem with
//! [`symmetric_reduce`] and solved by block inverse iteration
//! ([`smallest_eigenpairs`]).

mod cg;
mod cholesky;
pub mod dense;
mod eigen;
mod sparse;

pub use cg::{solve_spd, solve_spd_with, CgOptions};
pub use cholesky::EnvelopeCholesky;
pub use eigen::{
    generalized_smallest_eigenpairs, smallest_eigenpairs, smallest_eigenpairs_with, EigenOptions,
    EigenPair, InnerSolver, DEFAULT_EIGEN_TOL,
};
pub use sparse::{symmetric_reduce, DiagonalWeightMatrix, SymmetricSparseMatrix};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix must have positive dimension")]
    EmptyMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry ({row}, {col}) outside a {dim}x{dim} matrix")]
    IndexOutOfBounds { row: usize, col: usize, dim: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },
    #[error("weight entry {index} is not strictly positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("matrix is not positive definite: pivot {pivot} = {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("conjugate gradient breakdown at iteration {iteration}: curvature {curvature:e}")]
    CgBreakdown { iteration: usize, curvature: f64 },
    #[error("no convergence after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence {
        iterations: usize,
        best_residual: f64,
    },
    #[error("requested {count} eigenpairs from a matrix of dimension {dim}")]
    CountTooLarge { count: usize, dim: usize },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}
