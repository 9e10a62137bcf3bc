//! Steady state as a power series in the Hamiltonian.
//!
//! With `𝓛 = 𝓛_D + 𝓗`, the orders obey `𝓛_D ρ⁽ⁿ⁺¹⁾ = i[H, ρ⁽ⁿ⁾]`, starting from
//! the dark state of the dissipator. Each order is obtained with the
//! pseudo-inverse of `𝓛_D` and made traceless by removing its `ρ⁽⁰⁾` component.

use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liouvillian::{build_dissipator, build_hamiltonian, steady_state, Liouvillian};
use crate::matrix::{self, ComplexMatrix, I, ZERO};
use crate::measures::moments::{moment_operator, moment_prefactor, MomentTarget};
use crate::spin::hilbert_dim;
use crate::state::DensityMatrix;
use crate::system::SystemConfig;

pub const MAX_ORDER: usize = 8;
/// Singular values below this fraction of the largest are treated as zero.
pub const PINV_RATIO: f64 = 1e-12;
/// Out-of-range residual allowed per order, relative to `max(1, ‖rhs‖)`.
pub const RANGE_TOL: f64 = 1e-9;
pub const MAX_CONDITION: f64 = 1e10;

/// Pseudo-inverse of a dissipator together with its dark state.
#[derive(Debug, Clone)]
pub struct DissipatorInverse {
    n_spins: usize,
    dissipator: ComplexMatrix,
    pinv: ComplexMatrix,
    rho0: ComplexMatrix,
}

impl DissipatorInverse {
    /// Uses only the rates of `config`; drives and couplings are ignored.
    pub fn new(config: &SystemConfig) -> Result<Self> {
        let dissipative = config.dissipative_part();
        let dissipator = build_dissipator(&dissipative)?;
        let rho0 = steady_state(&Liouvillian::from_matrix(dissipator.clone(), dissipative))?.into_matrix();
        let svd = dissipator
            .svd()
            .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
        let s = svd.S().column_vector();
        let cutoff = PINV_RATIO * s[0].re;
        let n = s.nrows();
        let inv: Vec<Complex64> = (0..n)
            .map(|k| {
                let v = s[k].re;
                if v > cutoff {
                    Complex64::new(1.0 / v, 0.0)
                } else {
                    ZERO
                }
            })
            .collect();
        let v_scaled = Mat::from_fn(n, n, |i, j| svd.V()[(i, j)] * inv[j]);
        let pinv = v_scaled * svd.U().adjoint();
        Ok(Self {
            n_spins: config.n_spins,
            dissipator,
            pinv,
            rho0,
        })
    }

    pub fn rho0(&self) -> &ComplexMatrix {
        &self.rho0
    }

    /// Solves `𝓛_D x = i[H, ρ]` for traceless `x`; returns `(x, residual)`.
    fn next_order(&self, h: &ComplexMatrix, rho: &ComplexMatrix, order: usize) -> Result<(ComplexMatrix, f64)> {
        let d = hilbert_dim(self.n_spins);
        let comm = matrix::commutator(h.as_ref(), rho.as_ref());
        let b: Vec<Complex64> = matrix::vectorize(comm.as_ref()).into_iter().map(|z| z * I).collect();
        let x_vec = matrix::mat_vec(self.pinv.as_ref(), &b);
        let mut x = matrix::unvectorize(&x_vec, d);
        let tr = matrix::trace(x.as_ref());
        x -= matrix::scale(self.rho0.as_ref(), tr);
        let x = matrix::hermitian_part(x.as_ref());
        let lx = matrix::mat_vec(self.dissipator.as_ref(), &matrix::vectorize(x.as_ref()));
        let residual = matrix::vec_norm(&lx.iter().zip(&b).map(|(p, q)| p - q).collect::<Vec<_>>());
        if residual > RANGE_TOL * matrix::vec_norm(&b).max(1.0) {
            return Err(Error::RhsNotInRange { order, residual });
        }
        Ok((x, residual))
    }

    /// Expands the steady state of `config` up to `max_order`.
    pub fn expand(&self, config: &SystemConfig, max_order: usize) -> Result<PerturbationSeries> {
        if max_order > MAX_ORDER {
            return Err(Error::InvalidConfig {
                field: "max_order".into(),
                reason: format!("must be at most {MAX_ORDER}, got {max_order}"),
            });
        }
        if config.n_spins != self.n_spins {
            return Err(Error::DimensionMismatch { expected: self.n_spins, found: config.n_spins });
        }
        let h = build_hamiltonian(config)?;
        let mut orders = vec![self.rho0.clone()];
        let mut residuals = vec![0.0];
        for n in 1..=max_order {
            let (x, r) = self.next_order(&h, &orders[n - 1], n)?;
            orders.push(x);
            residuals.push(r);
        }
        Ok(PerturbationSeries {
            orders,
            residuals,
            config: config.clone(),
            max_order,
        })
    }
}

/// `ρ⁽⁰⁾, ρ⁽¹⁾, …, ρ⁽ᴷ⁾` for one configuration.
#[derive(Debug, Clone)]
pub struct PerturbationSeries {
    pub orders: Vec<ComplexMatrix>,
    /// `‖𝓛_D ρ⁽ⁿ⁾ − i[H, ρ⁽ⁿ⁻¹⁾]‖` per order (zero for `n = 0`).
    pub residuals: Vec<f64>,
    pub config: SystemConfig,
    pub max_order: usize,
}

pub fn perturb_expand(config: &SystemConfig, max_order: usize) -> Result<PerturbationSeries> {
    DissipatorInverse::new(config)?.expand(config, max_order)
}

impl PerturbationSeries {
    pub fn order(&self, n: usize) -> &ComplexMatrix {
        &self.orders[n]
    }

    /// `Σ_{n ≤ k} ρ⁽ⁿ⁾`.
    pub fn partial_sum(&self, k: usize) -> ComplexMatrix {
        let mut acc = self.orders[0].clone();
        for m in &self.orders[1..=k.min(self.max_order)] {
            acc += m;
        }
        acc
    }

    pub fn partial_state(&self, k: usize) -> DensityMatrix {
        DensityMatrix::from_parts(self.partial_sum(k), self.config.n_spins)
    }

    /// Contribution of order `n` to a moment.
    pub fn moment_at_order(&self, target: MomentTarget, moment_order: u8, n: usize) -> Result<Complex64> {
        let op = moment_operator(target, moment_order, self.config.n_spins)?;
        Ok(matrix::expectation(op.as_ref(), self.orders[n].as_ref()) * moment_prefactor(target, moment_order))
    }

    /// Moment evaluated on the partial sum up to order `k`.
    pub fn moment_partial(&self, target: MomentTarget, moment_order: u8, k: usize) -> Result<Complex64> {
        let op = moment_operator(target, moment_order, self.config.n_spins)?;
        let rho = self.partial_sum(k);
        Ok(matrix::expectation(op.as_ref(), rho.as_ref()) * moment_prefactor(target, moment_order))
    }

    /// Largest imaginary part of an even order or real part of an odd order.
    pub fn parity_defect(&self, n: usize) -> f64 {
        let m = &self.orders[n];
        let mut worst = 0.0f64;
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                worst = worst.max(if n % 2 == 0 { z.im.abs() } else { z.re.abs() });
            }
        }
        worst
    }
}

/// Rates plus the spatial pattern of the two expansion parameters:
/// `Ω` multiplies `drive`, `g` multiplies `coupling`.
#[derive(Debug, Clone)]
pub struct ExpansionTemplate {
    pub rates: SystemConfig,
    pub drive: Vec<f64>,
    pub coupling: Vec<f64>,
}

impl ExpansionTemplate {
    /// Drive on site A only, every coupling switched on with unit weight.
    pub fn drive_first_site(rates: SystemConfig) -> Self {
        let n = rates.n_spins;
        let mut drive = vec![0.0; n];
        drive[0] = 1.0;
        Self {
            rates,
            drive,
            coupling: vec![1.0; n.saturating_sub(1)],
        }
    }

    pub fn at(&self, omega: f64, g: f64) -> SystemConfig {
        SystemConfig {
            omega: self.drive.iter().map(|w| w * omega).collect(),
            g: self.coupling.iter().map(|w| w * g).collect(),
            ..self.rates.clone()
        }
    }
}

/// Monomial `Ω^a g^b` as `(a, b)`.
pub type Monomial = (u32, u32);

#[derive(Debug, Clone)]
pub struct CoefficientFit {
    pub coefficients: BTreeMap<Monomial, Complex64>,
    /// Condition number of each homogeneous design matrix, keyed by degree.
    pub conditions: BTreeMap<u32, f64>,
}

impl CoefficientFit {
    pub fn get(&self, a: u32, b: u32) -> Option<Complex64> {
        self.coefficients.get(&(a, b)).copied()
    }

    pub fn worst_condition(&self) -> f64 {
        self.conditions.values().copied().fold(0.0, f64::max)
    }
}

/// Base scale of the evaluation points.
const POINT_SCALE: f64 = 1e-3;

/// Polynomial coefficients of a moment in `(Ω, g)`.
///
/// Order `n` of the series is homogeneous of degree `n`, so every requested
/// degree is fitted separately from its own order with all `n + 1`
/// monomials of that degree; no other order can leak into the fit.
pub fn extract_coefficients(
    template: &ExpansionTemplate,
    target: MomentTarget,
    moment_order: u8,
    monomials: &[Monomial],
) -> Result<CoefficientFit> {
    let inverse = DissipatorInverse::new(&template.rates)?;
    let mut degrees: Vec<u32> = monomials.iter().map(|(a, b)| a + b).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut coefficients = BTreeMap::new();
    let mut conditions = BTreeMap::new();
    for &n in &degrees {
        if n as usize > MAX_ORDER {
            return Err(Error::InvalidConfig {
                field: "monomials".into(),
                reason: format!("total degree {n} exceeds the maximum order {MAX_ORDER}"),
            });
        }
        let points: Vec<(f64, f64)> = (1..=n + 1)
            .map(|k| (k as f64 * POINT_SCALE, (n + 2 - k) as f64 * POINT_SCALE))
            .collect();
        let m = points.len();
        let design = Mat::<f64>::from_fn(m, m, |row, a| {
            let (om, g) = points[row];
            om.powi(a as i32) * g.powi((n as usize - a) as i32)
        });
        let sv = design
            .singular_values()
            .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
        let condition = sv[0] / sv[m - 1];
        conditions.insert(n, condition);
        if condition.is_nan() || condition > MAX_CONDITION {
            return Err(Error::IllConditioned { condition });
        }
        let mut rhs = Mat::<Complex64>::zeros(m, 1);
        for (row, &(om, g)) in points.iter().enumerate() {
            let series = inverse.expand(&template.at(om, g), n as usize)?;
            rhs[(row, 0)] = series.moment_at_order(target, moment_order, n as usize)?;
        }
        let design_c = Mat::<Complex64>::from_fn(m, m, |i, j| Complex64::new(design[(i, j)], 0.0));
        let sol = {
            use faer::linalg::solvers::Solve;
            design_c.partial_piv_lu().solve(&rhs)
        };
        for a in 0..m {
            coefficients.insert((a as u32, n - a as u32), sol[(a, 0)]);
        }
    }
    coefficients.retain(|k, _| monomials.contains(k));
    Ok(CoefficientFit { coefficients, conditions })
}
