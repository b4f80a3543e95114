//! Exact linear algebra over the rationals: numbers, sparse matrices,
//! bigraded chain complexes and their simplification.

mod complex;
pub mod dense;
mod dims;
mod matrix;
mod rational;
mod reduce;
mod vector;

pub use complex::ChainComplex;
pub use dims::{BigradedDims, Bigrading, DimEntry};
pub use matrix::SparseMatrix;
pub use rational::Rational;
pub use reduce::{reduce, reduce_where, simplify, PivotRule, Reduction};
pub use vector::SparseVec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactAlgError {
    #[error("d∘d is nonzero starting from bigrading ({i},{j})")]
    NotAComplex { i: i64, j: i64 },
    #[error("differential does not preserve the quantum grading")]
    Inhomogeneous,
    #[error("malformed complex: {0}")]
    Shape(String),
}

/// Exact rank of a sparse matrix.
pub fn rank(m: &SparseMatrix) -> usize {
    m.rank()
}

/// Homology dimensions of a complex whose differential preserves `j`.
pub fn homology_dims(c: &ChainComplex) -> Result<BigradedDims, ExactAlgError> {
    c.homology_dims()
}
