//! Exact exterior calculus, divergence and Lie-bracket checks for vector
//! fields on affine varieties given by triangular presentations.

pub mod algebra;
pub mod avdp;
pub mod calculus;
pub mod document;
pub mod dsl;
pub mod groups;
pub mod runner;
pub mod scenarios;
pub mod variety;

pub use algebra::{AlgebraError, LaurentPoly, Matrix, Monomial, PolySpan, Rational, Vars};
pub use avdp::AvdpError;
pub use calculus::{lnd_flow, CalculusError, DiffForm, Flow, VectorField, VolumeForm};
pub use document::{Check, CheckDirective, Document, Outcome};
pub use dsl::DslError;
pub use groups::GroupError;
pub use runner::{run, Report, RunConfig, Status};
pub use scenarios::{Scenario, ScenarioError};
pub use variety::{Chart, ChartError, Invariance, Point, Relation, SubstitutionAction};

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Avdp(#[from] AvdpError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}
