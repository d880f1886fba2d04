//! Extended Dicke model with degenerate parametric amplification.
//!
//! The crate covers three complementary views of the same Hamiltonian
//!
//! ```text
//! H = ω_f a†a + ω₀ J_z + γ/√N (a† + a)(J₊ + J₋)
//!     + K₁/2 (a†² + a²) + i K₂/2 (a†² − a²)
//! ```
//!
//! * [`model`]: parameter validation, critical coupling `γ_c` and phase
//!   classification.
//! * [`semiclassics`]: the coherent-state energy surface, its Hamiltonian
//!   flow, fixed points with Hessian stability and trajectory integration.
//! * [`observables`]: closed-form order parameters, fluctuations and the
//!   ground-state Berry phase in the thermodynamic limit.
//! * [`quantum`]: finite-`N` exact diagonalization in a truncated
//!   Fock ⊗ Dicke basis, used to cross-check the thermodynamic-limit results.
//!
//! The crate is `no_std` and only needs an allocator.
#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms)]
// `num_traits::Float` is shadowed by std's inherent float methods whenever a
// dependency links std (dev-dependency feature unification)
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod model;
pub mod observables;
pub mod quantum;
pub mod semiclassics;

pub use error::{Error, Result};
pub use model::{ModelParams, PhaseLabel, DEFAULT_TOL};
pub use observables::{BerryResult, BerryScaling, Fluctuations, OrderParameters};
pub use semiclassics::{ClassicalState, FixedPoint, FixedPointKind, Stability, Trajectory};
