//! Exact scalar, matrix and polynomial arithmetic over ℚ and ℚ(i).

mod gaussian;
mod matrix;
pub mod modp;
mod poly;
mod rational;

pub use gaussian::{GaussianRational, GR};
pub use matrix::{mat_nullspace, Matrix};
pub use poly::{poly_affine_compose, poly_eval, poly_gradient, Monomial, MultiPoly};
pub use rational::Rational;
