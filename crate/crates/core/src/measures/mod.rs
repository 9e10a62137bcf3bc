//! Synchronization measures: phase distributions, their Fourier moments,
//! and a quadrature reference for both.

pub mod distribution;
pub mod husimi;
pub mod moments;
pub mod quadrature;
pub mod wigner;

pub use distribution::{
    relative_marginal, s1, s2_joint, s2_relative, s3_ab_bc, s3_ab_ca, uniform_angles, DistributionKind,
    FourierTable, PhaseDistribution,
};
pub use husimi::{coherent_state, husimi_q, QuadratureOracle};
pub use moments::{moment_operator, moment_prefactor, moments, site_label, MomentRecord, MomentTarget};
pub use wigner::{c_operator, wigner_d_little, COperator, Spin};
