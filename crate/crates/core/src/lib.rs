//! Atomic (SU(2)) coherent states in the two-mode Schwinger boson
//! realization, and the Raman coupled-oscillator Hamiltonian whose
//! eigenstates they are.
//!
//! * [`fock`]: truncated two-mode Fock space, ladder and Schwinger operators.
//! * [`su2`]: Dicke and coherent states, overlap kernel, eigenvector relations.
//! * [`raman`]: block Hamiltonian, `τ±`, energies, spectrum and its oracle.
//! * [`quadrature`]: resolution of the identity by sphere quadrature.
//! * [`thermo`]: partition functions and internal energy.
//! * [`cli`]: the `acs` command-line driver.

pub mod cli;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod quadrature;
pub mod raman;
pub mod su2;
pub mod thermo;

pub use error::{Error, ErrorClass, Result};
pub use fock::{BlockMatrix, BlockVector, Ladder, ModeOccupation, Schwinger, TwoModeState};
pub use raman::{Branch, NormalModes, RamanParams};
pub use su2::{AcsAngles, AcsLabel, DickeLabel};
pub use thermo::{ThermoParams, ThermoResult};
