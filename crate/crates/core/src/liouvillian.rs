//! Lindblad generator of a spin-1 chain and its steady state.
//!
//! Each spin carries gain `(γ^g/2) D[S⁺S^z]` and damping `(γ^d/2) D[S⁻S^z]`,
//! both pumping population into `|0⟩`. The Hamiltonian is written in the
//! rotating frame of a resonant drive.

use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, kron, re, ComplexMatrix, I, ONE, ZERO};
use crate::spin::{embed, hilbert_dim, make_spin1_ops, SpinOps};
use crate::state::DensityMatrix;
use crate::system::SystemConfig;

/// Ratio to the largest singular value below which a singular value counts as zero.
pub const DEGENERACY_RATIO: f64 = 1e-9;
/// Steady-state residual bound, relative to `‖L̂‖_F`.
pub const RESIDUAL_RATIO: f64 = 1e-10;

/// Vectorized generator (column stacking) together with the config it encodes.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    matrix: ComplexMatrix,
    config: SystemConfig,
}

/// `H = Σ_j (Ω_j/2) S⁺_j + Σ_j (g_j/2) S⁺_j S⁻_{j+1} + H.c.`
pub fn build_hamiltonian(config: &SystemConfig) -> Result<ComplexMatrix> {
    config.validate()?;
    let ops = make_spin1_ops();
    let n = config.n_spins;
    let mut half = matrix::zeros(hilbert_dim(n));
    for (j, &omega) in config.omega.iter().enumerate() {
        if omega != 0.0 {
            let sp = embed(ops.s_plus.as_ref(), j, n)?;
            half += matrix::scale(sp.as_ref(), re(omega / 2.0));
        }
    }
    for (j, &g) in config.g.iter().enumerate() {
        if g != 0.0 {
            let sp = embed(ops.s_plus.as_ref(), j, n)?;
            let sm = embed(ops.s_minus.as_ref(), j + 1, n)?;
            half += matrix::scale((&sp * &sm).as_ref(), re(g / 2.0));
        }
    }
    Ok(&half + half.adjoint())
}

/// Gain and damping jump operators `(S⁺S^z, S⁻S^z)` of one site.
fn jump_operators(ops: &SpinOps) -> (ComplexMatrix, ComplexMatrix) {
    (&ops.s_plus * &ops.s_z, &ops.s_minus * &ops.s_z)
}

/// `D̂[L] = L̄ ⊗ L − ½(𝟙 ⊗ L†L + (L†L)ᵀ ⊗ 𝟙)`.
pub fn dissipator_superoperator(jump: MatRef<'_, Complex64>) -> ComplexMatrix {
    let d = jump.nrows();
    let id = matrix::identity(d);
    let ldl = jump.adjoint() * jump;
    let mut out = kron(jump.conjugate().to_owned().as_ref(), jump);
    let anti = kron(id.as_ref(), ldl.as_ref()) + kron(ldl.transpose(), id.as_ref());
    out -= matrix::scale(anti.as_ref(), re(0.5));
    out
}

/// `−i(𝟙 ⊗ H − Hᵀ ⊗ 𝟙)`.
pub fn hamiltonian_superoperator(h: MatRef<'_, Complex64>) -> ComplexMatrix {
    let id = matrix::identity(h.nrows());
    let comm = kron(id.as_ref(), h) - kron(h.transpose(), id.as_ref());
    matrix::scale(comm.as_ref(), -I)
}

/// Sum of the single-site dissipators `Σ_j 𝓛_j` (no Hamiltonian part).
pub fn build_dissipator(config: &SystemConfig) -> Result<ComplexMatrix> {
    config.validate()?;
    let ops = make_spin1_ops();
    let (gain, damp) = jump_operators(&ops);
    let n = config.n_spins;
    let dim = hilbert_dim(n);
    let mut total: ComplexMatrix = Mat::zeros(dim * dim, dim * dim);
    for j in 0..n {
        for (rate, jump) in [(config.gamma_g[j], &gain), (config.gamma_d[j], &damp)] {
            if rate == 0.0 {
                continue;
            }
            let l = embed(jump.as_ref(), j, n)?;
            total += matrix::scale(dissipator_superoperator(l.as_ref()).as_ref(), re(rate / 2.0));
        }
    }
    Ok(total)
}

pub fn build_liouvillian(config: &SystemConfig) -> Result<Liouvillian> {
    let h = build_hamiltonian(config)?;
    let mut l = build_dissipator(config)?;
    l += hamiltonian_superoperator(h.as_ref());
    Ok(Liouvillian {
        matrix: l,
        config: config.clone(),
    })
}

impl Liouvillian {
    /// Wraps a generator matrix assembled elsewhere, e.g. the dissipator alone.
    pub fn from_matrix(matrix: ComplexMatrix, config: SystemConfig) -> Self {
        Self { matrix, config }
    }

    pub fn matrix(&self) -> MatRef<'_, Complex64> {
        self.matrix.as_ref()
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    /// Hilbert-space dimension `d` (the superoperator is `d² × d²`).
    pub fn hilbert_dim(&self) -> usize {
        hilbert_dim(self.config.n_spins)
    }

    /// `𝓛(ρ)` for an operator `ρ`.
    pub fn apply(&self, rho: MatRef<'_, Complex64>) -> ComplexMatrix {
        let d = self.hilbert_dim();
        let out = matrix::mat_vec(self.matrix.as_ref(), &matrix::vectorize(rho));
        matrix::unvectorize(&out, d)
    }

    /// `‖L̂ vec(ρ)‖₂`.
    pub fn residual(&self, rho: MatRef<'_, Complex64>) -> f64 {
        matrix::vec_norm(&matrix::mat_vec(self.matrix.as_ref(), &matrix::vectorize(rho)))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm_l2()
    }

    /// Largest entry of `vec(𝟙)ᵀ L̂`; zero for a trace-preserving generator.
    pub fn trace_preservation_defect(&self) -> f64 {
        let d = self.hilbert_dim();
        let dd = d * d;
        let mut worst = 0.0f64;
        for col in 0..dd {
            let s: Complex64 = (0..d).map(|i| self.matrix[(i + i * d, col)]).sum();
            worst = worst.max(s.norm());
        }
        worst
    }

    /// Eigenvalues of the full generator.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        self.matrix
            .eigenvalues()
            .map_err(|e| Error::Decomposition(format!("{e:?}")))
    }

    /// Singular values, nonincreasing.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        self.matrix
            .singular_values()
            .map_err(|e| Error::Decomposition(format!("{e:?}")))
    }
}

/// Normalizes a null vector into a density matrix: reshape, divide by the trace, symmetrize.
fn state_from_null_vector(v: &[Complex64], n_spins: usize) -> DensityMatrix {
    let d = hilbert_dim(n_spins);
    let raw = matrix::unvectorize(v, d);
    let tr = matrix::trace(raw.as_ref());
    let scaled = matrix::scale(raw.as_ref(), ONE / tr);
    DensityMatrix::from_parts(matrix::hermitian_part(scaled.as_ref()), n_spins)
}

/// Steady state from the right-singular vector of the smallest singular value.
///
/// Fails with [`Error::DegenerateSteadyState`] when more than one singular
/// value lies below `DEGENERACY_RATIO · σ_max`.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    let svd = l
        .matrix
        .svd()
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
    let s = svd.S().column_vector();
    let n = s.nrows();
    let sigma_max = s[0].re;
    let threshold = DEGENERACY_RATIO * sigma_max;
    let count = if sigma_max == 0.0 {
        n
    } else {
        (0..n).filter(|&k| s[k].re < threshold).count()
    };
    if count > 1 {
        return Err(Error::DegenerateSteadyState { count, threshold });
    }
    let v: Vec<Complex64> = svd.V().col(n - 1).iter().copied().collect();
    let rho = state_from_null_vector(&v, l.config.n_spins);
    check_residual(l, &rho)?;
    Ok(rho)
}

/// Steady state from a linear solve with one row of `L̂` replaced by the trace constraint.
pub fn steady_state_linear(l: &Liouvillian) -> Result<DensityMatrix> {
    let d = l.hilbert_dim();
    let dd = d * d;
    let mut a = l.matrix.clone();
    for col in 0..dd {
        a[(0, col)] = ZERO;
    }
    for i in 0..d {
        a[(0, i + i * d)] = ONE;
    }
    let mut rhs: ComplexMatrix = Mat::zeros(dd, 1);
    rhs[(0, 0)] = ONE;
    let x = a.partial_piv_lu().solve(&rhs);
    let v: Vec<Complex64> = (0..dd).map(|i| x[(i, 0)]).collect();
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Decomposition("singular trace-constrained system".into()));
    }
    let rho = state_from_null_vector(&v, l.config.n_spins);
    check_residual(l, &rho)?;
    Ok(rho)
}

fn check_residual(l: &Liouvillian, rho: &DensityMatrix) -> Result<()> {
    let res = l.residual(rho.matrix());
    let bound = RESIDUAL_RATIO * l.frobenius_norm();
    if res > bound {
        return Err(Error::Inconsistent(format!(
            "steady-state residual {res:e} exceeds {bound:e}"
        )));
    }
    Ok(())
}

/// Convenience: build the generator and solve for its steady state.
pub fn solve_steady_state(config: &SystemConfig) -> Result<DensityMatrix> {
    steady_state(&build_liouvillian(config)?)
}

/// `Z = exp(iπ Σ_j S^x_j)`, exchanging `|m⟩ ↔ |−m⟩` on every site.
pub fn symmetry_transform_z(n_spins: usize) -> ComplexMatrix {
    let ops = make_spin1_ops();
    let local = matrix::unitary_exp(ops.s_x.as_ref(), std::f64::consts::PI);
    matrix::kron_all((0..n_spins).map(|_| local.as_ref()))
}

/// `‖Z ρ Z† − ρ‖_max`.
pub fn z_symmetry_defect(rho: &DensityMatrix) -> f64 {
    let z = symmetry_transform_z(rho.n_spins());
    let conj = &z * rho.matrix() * z.adjoint();
    matrix::max_abs_diff(conj.as_ref(), rho.matrix())
}
