//! Husimi Q function and a direct-quadrature evaluation of the phase
//! distributions, kept independent of the Gamma-function operator form.
//!
//! Distribution angles follow the `c^S(φ)` convention, in which `e^{iφ}`
//! multiplies `S⁺`. The coherent state `exp(−iφS^z)exp(−iθS^y)|1⟩` attaches
//! `e^{iφ}` to `S⁻` instead, so the oracle evaluates `Q` at the mirrored angle `−φ`.

use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, re, ComplexMatrix};
use crate::measures::quadrature::gauss_legendre_on;
use crate::spin::make_spin1_ops;
use crate::state::DensityMatrix;

pub const THETA_NODES: usize = 64;
pub const PHI_NODES: usize = 256;

/// Spin-1 coherent state `exp(−iφS^z) exp(−iθS^y) |1⟩`.
pub fn coherent_state(theta: f64, phi: f64) -> Vec<Complex64> {
    let ops = make_spin1_ops();
    let rot = matrix::unitary_exp(ops.s_z.as_ref(), -phi) * matrix::unitary_exp(ops.s_y.as_ref(), -theta);
    (0..3).map(|i| rot[(i, 0)]).collect()
}

fn tensor(states: &[Vec<Complex64>]) -> Vec<Complex64> {
    states.iter().fold(vec![re(1.0)], |acc, s| {
        acc.iter().flat_map(|a| s.iter().map(move |b| a * b)).collect()
    })
}

/// `Q(θ⃗, φ⃗, ρ) = (3/4π)^N ⟨θ⃗, φ⃗| ρ |θ⃗, φ⃗⟩`.
pub fn husimi_q(rho: &DensityMatrix, thetas: &[f64], phis: &[f64]) -> Result<f64> {
    let n = rho.n_spins();
    for len in [thetas.len(), phis.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    let states: Vec<_> = thetas.iter().zip(phis).map(|(&t, &p)| coherent_state(t, p)).collect();
    let psi = tensor(&states);
    let rho_psi = matrix::mat_vec(rho.matrix(), &psi);
    let overlap: Complex64 = psi.iter().zip(&rho_psi).map(|(a, b)| a.conj() * b).sum();
    Ok((3.0 / (4.0 * PI)).powi(n as i32) * overlap.re)
}

/// Direct numerical evaluation of `S_N` and its marginals.
#[derive(Debug, Clone)]
pub struct QuadratureOracle {
    theta_nodes: Vec<f64>,
    theta_weights: Vec<f64>,
    /// `exp(−iθS^y)|1⟩` at each θ node.
    theta_states: Vec<Vec<Complex64>>,
    phi_nodes: Vec<f64>,
}

impl Default for QuadratureOracle {
    fn default() -> Self {
        Self::new(THETA_NODES, PHI_NODES)
    }
}

impl QuadratureOracle {
    pub fn new(theta_nodes: usize, phi_nodes: usize) -> Self {
        let (t, w) = gauss_legendre_on(theta_nodes, 0.0, PI);
        let theta_states = t.iter().map(|&theta| coherent_state(theta, 0.0)).collect();
        Self {
            theta_states,
            theta_nodes: t,
            theta_weights: w,
            phi_nodes: (0..phi_nodes).map(|k| 2.0 * PI * k as f64 / phi_nodes as f64).collect(),
        }
    }

    /// `∫ sinθ Q dθ` of one site as an operator, at distribution angle `phi`.
    pub fn site_operator(&self, phi: f64) -> ComplexMatrix {
        let ops = make_spin1_ops();
        // exp(−iφ'S^z) with the mirrored angle φ' = −φ
        let phases: Vec<Complex64> = (0..3).map(|k| Complex64::from_polar(1.0, ops.s_z[(k, k)].re * phi)).collect();
        let mut acc = matrix::zeros(3);
        for ((&t, &w), state) in self.theta_nodes.iter().zip(&self.theta_weights).zip(&self.theta_states) {
            let v: Vec<Complex64> = state.iter().zip(&phases).map(|(a, p)| a * p).collect();
            let f = w * t.sin() * 3.0 / (4.0 * PI);
            acc += Mat::from_fn(3, 3, |i, j| v[i] * v[j].conj() * f);
        }
        acc
    }

    /// The site operator integrated over its phase by the trapezoid rule.
    pub fn integrated_site_operator(&self) -> ComplexMatrix {
        let dphi = 2.0 * PI / self.phi_nodes.len() as f64;
        let mut acc = matrix::zeros(3);
        for &p in &self.phi_nodes {
            acc += matrix::scale(self.site_operator(p).as_ref(), re(dphi));
        }
        acc
    }

    /// `S_N(φ⃗)`; `None` entries are integrated over a full turn.
    pub fn joint(&self, rho: &DensityMatrix, phis: &[Option<f64>]) -> Result<f64> {
        let n = rho.n_spins();
        if phis.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: phis.len() });
        }
        let free = self.integrated_site_operator();
        let factors: Vec<ComplexMatrix> = phis
            .iter()
            .map(|p| match p {
                Some(phi) => self.site_operator(*phi),
                None => free.clone(),
            })
            .collect();
        let n_free = phis.iter().filter(|p| p.is_none()).count() as i32;
        let op = matrix::kron_all(factors.iter().map(|f| f.as_ref()));
        Ok(rho.expect(op.as_ref()).re - (2.0 * PI).powi(n_free - n as i32))
    }

    /// Relative-phase marginal with `φ_j = o_j + ψ`, `ψ` integrated by the trapezoid rule.
    pub fn relative(&self, rho: &DensityMatrix, offsets: &[Option<f64>]) -> Result<f64> {
        let n = rho.n_spins();
        if offsets.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: offsets.len() });
        }
        let free = self.integrated_site_operator();
        let dpsi = 2.0 * PI / self.phi_nodes.len() as f64;
        let n_free = offsets.iter().filter(|p| p.is_none()).count() as i32;
        let mut acc = 0.0;
        for &psi in &self.phi_nodes {
            let factors: Vec<ComplexMatrix> = offsets
                .iter()
                .map(|o| match o {
                    Some(off) => self.site_operator(off + psi),
                    None => free.clone(),
                })
                .collect();
            let op = matrix::kron_all(factors.iter().map(|f| f.as_ref()));
            acc += (rho.expect(op.as_ref()).re - (2.0 * PI).powi(n_free - n as i32)) * dpsi;
        }
        Ok(acc)
    }

    /// `S_1` of one site with all other sites integrated out.
    pub fn s1(&self, rho: &DensityMatrix, site: usize, phi: f64) -> Result<f64> {
        if site >= rho.n_spins() {
            return Err(Error::SiteOutOfRange { site, n_spins: rho.n_spins() });
        }
        let mut phis = vec![None; rho.n_spins()];
        phis[site] = Some(phi);
        self.joint(rho, &phis)
    }

    /// Two-spin `S_2(φ_A, φ_B)` summed directly over products of `Q` at quadrature nodes.
    pub fn joint_two_spin_bruteforce(&self, rho: &DensityMatrix, phi_a: f64, phi_b: f64) -> Result<f64> {
        if rho.n_spins() != 2 {
            return Err(Error::UnsupportedSpinCount(rho.n_spins()));
        }
        let mut acc = 0.0;
        for (&ta, &wa) in self.theta_nodes.iter().zip(&self.theta_weights) {
            for (&tb, &wb) in self.theta_nodes.iter().zip(&self.theta_weights) {
                let q = husimi_q(rho, &[ta, tb], &[-phi_a, -phi_b])?;
                acc += wa * wb * ta.sin() * tb.sin() * q;
            }
        }
        Ok(acc - 1.0 / (4.0 * PI * PI))
    }
}
