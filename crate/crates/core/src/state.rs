use faer::MatRef;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, re, ComplexMatrix};
use crate::spin::{hilbert_dim, index_of};

/// Hermitian, unit-trace, positive semidefinite state of `n_spins` spin-1 sites.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    n_spins: usize,
}

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const NEGATIVITY_TOL: f64 = 1e-10;

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: ComplexMatrix, n_spins: usize) -> Result<Self> {
        let dim = hilbert_dim(n_spins);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        let herm = matrix::hermiticity_defect(matrix.as_ref());
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = matrix::trace(matrix.as_ref());
        if (tr - re(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let min = matrix::hermitian_eigenvalues(matrix.as_ref())
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -NEGATIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix, n_spins })
    }

    /// Wraps a matrix the caller already knows to be a valid state.
    pub fn from_parts(matrix: ComplexMatrix, n_spins: usize) -> Self {
        debug_assert_eq!(matrix.nrows(), hilbert_dim(n_spins));
        Self { matrix, n_spins }
    }

    /// Product state `|m₁, …, m_N⟩⟨m₁, …, m_N|`.
    pub fn product_basis_state(ms: &[i32]) -> Self {
        let n = ms.len();
        let dim = hilbert_dim(n);
        let idx = ms.iter().fold(0usize, |acc, &m| acc * 3 + index_of(m));
        let mut m = matrix::zeros(dim);
        m[(idx, idx)] = re(1.0);
        Self::from_parts(m, n)
    }

    /// Limit-cycle state `|0,…,0⟩⟨0,…,0|` of the undriven, uncoupled chain.
    pub fn limit_cycle(n_spins: usize) -> Self {
        Self::product_basis_state(&vec![0; n_spins])
    }

    /// `G G† / tr(G G†)` for an arbitrary nonzero square factor `G`.
    pub fn from_factor(factor: MatRef<'_, Complex64>, n_spins: usize) -> Result<Self> {
        let dim = hilbert_dim(n_spins);
        if factor.nrows() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: factor.nrows() });
        }
        let gg = factor * factor.adjoint();
        let tr = matrix::trace(gg.as_ref()).re;
        if tr.is_nan() || tr <= 0.0 {
            return Err(Error::InvalidState("factor is zero".into()));
        }
        let m = matrix::hermitian_part(matrix::scale(gg.as_ref(), re(1.0 / tr)).as_ref());
        Ok(Self::from_parts(m, n_spins))
    }

    pub fn maximally_mixed(n_spins: usize) -> Self {
        let dim = hilbert_dim(n_spins);
        Self::from_parts(matrix::scale(matrix::identity(dim).as_ref(), re(1.0 / dim as f64)), n_spins)
    }

    pub fn matrix(&self) -> MatRef<'_, Complex64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn expect(&self, op: MatRef<'_, Complex64>) -> Complex64 {
        matrix::expectation(op, self.matrix.as_ref())
    }

    pub fn population(&self, index: usize) -> f64 {
        self.matrix[(index, index)].re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        matrix::hermitian_eigenvalues(self.matrix.as_ref())
    }
}
