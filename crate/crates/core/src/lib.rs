//! Finite-dimensional models of tracial algebras with group actions, the Duflo–Moore
//! operator of an ergodic action, and numerical checks of the associated
//! orthogonality relations and norm inequalities.

pub mod algebra;
pub mod error;
pub mod groups;

pub use algebra::{AlgebraElement, AlgebraShape, WeightKernel, C64};
pub use error::{Error, Result};
pub use groups::{FiniteGroup, HaarModel, Normalization, QuadratureGroup};
pub mod linalg;
pub mod random;
pub mod report;
pub mod reps;
pub mod actions;
pub mod induced;
pub mod twisted;
pub mod bracket;
pub mod duflo;
pub mod wavelet;
pub mod scenarios;
pub mod suite;
pub mod cli;
