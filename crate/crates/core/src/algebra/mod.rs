//! Exact arithmetic over the Gaussian rationals: scalars, dense matrices and
//! homogeneous bivariate polynomials.

pub mod hpoly;
pub mod matrix;
mod roots;
pub mod scalar;
pub(crate) mod upoly;

pub use hpoly::{
    hpoly_gcd, hpoly_linear_factorization, HomoPoly2, LinearFactorization, ProjectivePoint,
};
pub use matrix::{vectors_rank, Matrix, SpanBuilder, Vector};
pub use scalar::Scalar;
