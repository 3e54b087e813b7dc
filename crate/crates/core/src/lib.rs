//! Exact construction and inversion of Hankel matrices built from reciprocals of
//! generalized Catalan numbers `g_n = p^{2n} binom(n + q/p, n)`.
//!
//! The inverse of `G(n)` (entries `1/g_{i+j+a}`) is computed through the
//! orthogonal-polynomial factorization `G(n)^{-1} = L^T M K` and cross-checked
//! against fraction-free elimination. Every identity behind the factorization,
//! the integrality results and the determinant products can be re-verified
//! numerically with exact arithmetic.
//!
//! Linear algebra is generic over [`Scalar`]; the crate works almost entirely in
//! [`Rational`], with [`FloatMatrix`] available for approximate comparisons.

pub mod bench;
pub mod catbert;
pub mod error;
pub mod exact;
pub mod factorization;
pub mod grid;
pub mod matrices;
pub mod numbertheory;
pub mod report;
pub mod scalar;
pub mod sequences;
pub mod suites;

pub use error::{Error, Result};
pub use grid::acceptance_grid;
pub use matrices::Matrix;
pub use report::Report;
pub use scalar::Scalar;
pub use sequences::GCParams;

/// Arbitrary-precision signed integer.
pub type Integer = num_bigint::BigInt;

/// Exact reduced fraction of arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

/// Dense matrix of exact rationals.
pub type ExactMatrix = Matrix<Rational>;

/// Dense matrix of `f64`, for approximate comparisons only.
pub type FloatMatrix = Matrix<f64>;
