//! Local-unitary equivalence of bipartite quantum states.
//!
//! Exact canonical forms for Schmidt-correlated states, numerical and
//! optimisation-based equivalence tests for general mixed states, and
//! correlation measures paired with brute-force oracles.

pub mod canonical;
pub mod correlations;
pub mod entropy;
pub mod equivalence;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod optim;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{BipartiteDims, ComplexMatrix, Subsystem};
pub use states::{DensityMatrix, LocalUnitary2, PureState, SCCoefficients};
