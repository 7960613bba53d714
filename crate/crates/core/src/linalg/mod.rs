//! Exact dense linear algebra over the rationals.

pub mod matrix;
pub mod rational;
pub mod subspace;

pub use matrix::{ExactMatrix, RowEchelon};
pub use rational::Rational;
pub use subspace::{induced_map, QuotientPresentation, Subspace};
