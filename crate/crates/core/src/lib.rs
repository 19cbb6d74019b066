//! Matrix means of accretive matrices, numerical-radius bounds and Tsallis
//! relative operator entropy, together with a randomized harness that
//! checks matrix inequalities through signed Loewner margins.

pub mod cli;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod means;
pub mod quadrature;
pub mod radius;
pub mod sectorial;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, C64};
pub use means::{MeanKind, PathFamily, RepresentingMeasure, WeightParam};
