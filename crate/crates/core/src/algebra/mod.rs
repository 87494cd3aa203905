//! Exact scalars, sparse Laurent polynomials and the small amount of exact
//! linear algebra the rest of the crate is built on.

pub mod linalg;
pub mod poly;
pub mod rational;
pub mod span;

pub use linalg::Matrix;
pub use poly::{LaurentPoly, Monomial, Vars};
pub use rational::Rational;
pub use span::PolySpan;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable lists differ: [{left}] vs [{right}]")]
    VariableMismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative power of `{var}` requires a unit image, got `{image}`")]
    NonUnitInverse { var: String, image: String },
    #[error("zero assigned to `{0}`, which appears with a negative exponent")]
    ZeroAtInvertible(String),
    #[error("no value assigned to `{0}`")]
    MissingValue(String),
    #[error("division by non-unit `{0}`")]
    NonUnitDivision(String),
}
