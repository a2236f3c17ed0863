//! Finite-dimensional Lie algebras over [`Scalar`] with an invariant form,
//! sl₂-triple gradings and the derived bilinear structures.

mod algebra;
mod classical;
mod grading;
mod structures;
mod vector;

pub use algebra::LieAlgebra;
pub use classical::{build_sl, build_sl_scaled, build_sp};
pub use grading::{grade_by_nilpotent, GradedSetup, GradingOptions, NilpotentKind};
pub use structures::{Embedding, Pairing, Projection, SubspaceMap};
pub use vector::Vector;

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("no sl2-triple through f: {0}")]
    NotNilpotent(String),
    #[error("grading does not match the requested nilpotent kind: {0}")]
    WrongKind(String),
    #[error("pairing is degenerate on the given subspaces")]
    SingularPairing,
    #[error("vector is not in the required graded piece: {0}")]
    GradeMismatch(String),
    #[error("Lie algebra axiom violated: {0}")]
    AxiomViolation(String),
}
