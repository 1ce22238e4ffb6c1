//! Exact scalar tower and dense linear algebra.

pub mod matrix;
pub mod poly;
pub mod scalar;

pub use matrix::{
    add_vectors, basis_vector, in_span, scale_vector, span_basis, sub_vectors, vector_is_zero,
    zero_vector, Endomorphism, Matrix, Vector,
};
pub use poly::{
    characteristic_polynomial, is_semisimple, minimal_polynomial, rational_eigenvalues, Poly,
};
pub use scalar::{ParseScalarError, Scalar, ScalarMode};
