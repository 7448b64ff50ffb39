//! Scalar-generic dense linear algebra: rank, kernels, particular solutions
//! and subspace arithmetic over exact rationals or approximate complex numbers.

mod matrix;
mod scalar;

pub use matrix::{char_poly, subspace_intersect, subspace_sum, Matrix, MatrixRepr, Solution};
pub use scalar::{Complex, Rational, Scalar, DEFAULT_TOL};
