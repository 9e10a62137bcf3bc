//! Exact steady states, phase-locking measures and correlation diagnostics
//! for chains of dissipative spin-1 limit-cycle oscillators.

pub mod analytics;
pub mod correlations;
pub mod error;
pub mod liouvillian;
pub mod matrix;
pub mod measures;
pub mod perturbation;
pub mod spin;
pub mod state;
pub mod system;

pub use error::{Error, Result};
pub use liouvillian::{build_hamiltonian, build_liouvillian, steady_state, symmetry_transform_z, Liouvillian};
pub use matrix::ComplexMatrix;
pub use spin::{combined_spin_basis, embed, make_spin1_ops, rho_infinity, CombinedBasis, SpinOps};
pub use state::DensityMatrix;
pub use system::SystemConfig;
