//! Exact diagonalization at finite `N = 2j` in a truncated Fock ⊗ Dicke basis.
//!
//! The Hamiltonian commutes with the parity `Π = exp(iπ(a†a + J_z + j))`,
//! so every solve can be restricted to one parity block.

mod basis;
mod berry;
mod cutoff;
mod eigen;
mod hamiltonian;
mod observables;
mod sparse;

pub use basis::{parity_operator, BasisSpec};
pub use berry::{berry_loop_numeric, berry_loop_numeric_with, BerryLoopResult};
pub use cutoff::{converge_cutoff, initial_cutoff, CutoffOptions};
pub use eigen::{ground_state, Sector, SolverOptions, SpectrumResult};
pub use hamiltonian::{build_hamiltonian, QuantumSystem};
pub use observables::quantum_observables;
pub use sparse::CsrMatrix;
