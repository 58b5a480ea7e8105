//! Cohomology of nilpotent codifferentials on free graded coalgebras.

pub mod basis;
pub mod cli;
pub mod closed_form;
pub mod cochain;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod report;
pub mod verify;

pub use basis::{GeneratorId, GradedBasis, Kind, MultiIndex};
pub use closed_form::{Family, TheoremVariant};
pub use cochain::{BasisCochain, Cochain, Codifferential, Rational, SignConvention};
pub use engine::{BlockDims, Dims, Engine, RankTable};
pub use error::{Error, Result};
pub use linalg::{SparseMatrix, SparseVec};
