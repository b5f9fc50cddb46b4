//! Two-mode bosonic model with a combined su(1,1) and su(2) tilt: operators
//! on a truncated Fock basis, coherent-state displacements, closed-form
//! similarity transforms, the spectrum and photon statistics.

pub mod coherent;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod lie;
pub mod similarity;
pub mod special;
pub mod statistics;

pub use error::{Error, Result};
pub use fock::{Mode, OperatorMatrix, StateVector, TwoModeBasis, C64};
pub use lie::QuantumNumbers;
