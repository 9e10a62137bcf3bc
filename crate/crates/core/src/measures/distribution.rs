//! Phase distributions `S_N` and their relative-phase marginals.
//!
//! Every distribution is a finite Fourier series: with
//! `c(φ) = Σ_{k=-2..2} e^{ikφ} C_k`, the expectation of `⊗_j c(φ_j)` only
//! needs the table `F(k⃗) = ⟨⊗_j C_{k_j}⟩`. Integrating a site's phase out
//! keeps `k_j = 0`; integrating a common shift of all phases keeps `Σ k_j = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix};
use crate::measures::moments::{moments, MomentTarget};
use crate::measures::wigner::{COperator, Spin};
use crate::state::DensityMatrix;

const MAX_WINDING: i32 = 2;
const N_WINDINGS: usize = (2 * MAX_WINDING + 1) as usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    S1,
    S2Joint,
    S2Relative,
    S3Relative,
}

/// Samples of a phase distribution on a product grid (row-major, last axis fastest).
#[derive(Debug, Clone)]
pub struct PhaseDistribution {
    pub kind: DistributionKind,
    pub axes: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

/// `n` equally spaced angles on `[−π, π)`.
pub fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| -PI + 2.0 * PI * k as f64 / n as f64).collect()
}

impl PhaseDistribution {
    /// Rectangle-rule integral, exact for trigonometric polynomials on a uniform periodic grid.
    pub fn integral(&self) -> f64 {
        let cell: f64 = self.axes.iter().map(|a| 2.0 * PI / a.len() as f64).product();
        self.values.iter().sum::<f64>() * cell
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Indices of strict local maxima of a 1-D periodic distribution.
    pub fn local_maxima(&self) -> Vec<usize> {
        assert_eq!(self.axes.len(), 1, "local_maxima is defined for 1-D distributions");
        periodic_maxima(&self.values)
    }

    /// Angles of the local maxima of a 1-D distribution.
    pub fn maxima_angles(&self) -> Vec<f64> {
        self.local_maxima().into_iter().map(|k| self.axes[0][k]).collect()
    }

    /// Grid points of strict local maxima of a 2-D periodic distribution.
    pub fn local_maxima_2d(&self) -> Vec<(f64, f64)> {
        assert_eq!(self.axes.len(), 2);
        let (nx, ny) = (self.axes[0].len(), self.axes[1].len());
        let at = |i: usize, j: usize| self.values[i * ny + j];
        let mut out = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                let v = at(i, j);
                let mut is_max = true;
                for di in [nx - 1, 0, 1] {
                    for dj in [ny - 1, 0, 1] {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        if at((i + di) % nx, (j + dj) % ny) >= v {
                            is_max = false;
                        }
                    }
                }
                if is_max {
                    out.push((self.axes[0][i], self.axes[1][j]));
                }
            }
        }
        out
    }
}

pub(crate) fn periodic_maxima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    (0..n)
        .filter(|&k| {
            let v = values[k];
            v > values[(k + n - 1) % n] && v > values[(k + 1) % n]
        })
        .collect()
}

/// Table of `⟨⊗_j C_{k_j}⟩` for all winding tuples `k⃗ ∈ {−2,…,2}^N`.
#[derive(Debug, Clone)]
pub struct FourierTable {
    n_spins: usize,
    coeffs: Vec<Complex64>,
}

fn harmonics() -> Vec<ComplexMatrix> {
    (-MAX_WINDING..=MAX_WINDING)
        .map(|k| COperator::harmonic(Spin::ONE, k).expect("spin 1 is supported"))
        .collect()
}

impl FourierTable {
    pub fn new(rho: &DensityMatrix) -> Self {
        let n = rho.n_spins();
        let h = harmonics();
        let total = N_WINDINGS.pow(n as u32);
        let coeffs = (0..total)
            .map(|flat| {
                let ks = Self::unflatten(flat, n);
                let op = matrix::kron_all(ks.iter().map(|&k| h[(k + MAX_WINDING) as usize].as_ref()));
                rho.expect(op.as_ref())
            })
            .collect();
        Self { n_spins: n, coeffs }
    }

    fn unflatten(mut flat: usize, n: usize) -> Vec<i32> {
        let mut ks = vec![0; n];
        for j in (0..n).rev() {
            ks[j] = (flat % N_WINDINGS) as i32 - MAX_WINDING;
            flat /= N_WINDINGS;
        }
        ks
    }

    pub fn get(&self, ks: &[i32]) -> Complex64 {
        let flat = ks
            .iter()
            .fold(0usize, |acc, &k| acc * N_WINDINGS + (k + MAX_WINDING) as usize);
        self.coeffs[flat]
    }

    fn tuples(&self) -> impl Iterator<Item = (Vec<i32>, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(flat, &c)| (Self::unflatten(flat, self.n_spins), c))
    }

    /// `S_N` at the given phases; `None` integrates that site's phase over `[0, 2π)`.
    pub fn joint(&self, phis: &[Option<f64>]) -> f64 {
        assert_eq!(phis.len(), self.n_spins);
        let n_free = phis.iter().filter(|p| p.is_none()).count() as i32;
        let mut acc = Complex64::new(0.0, 0.0);
        for (ks, c) in self.tuples() {
            let mut arg = 0.0;
            let mut keep = true;
            for (k, p) in ks.iter().zip(phis) {
                match p {
                    Some(phi) => arg += *k as f64 * phi,
                    None if *k != 0 => keep = false,
                    None => {}
                }
            }
            if keep {
                acc += c * Complex64::from_polar(1.0, arg);
            }
        }
        let two_pi = 2.0 * PI;
        acc.re * two_pi.powi(n_free) - two_pi.powi(n_free - self.n_spins as i32)
    }

    /// Marginal over a common shift `ψ` of all kept phases, `φ_j = o_j + ψ`.
    /// `None` offsets integrate that site out entirely.
    pub fn relative(&self, offsets: &[Option<f64>]) -> f64 {
        assert_eq!(offsets.len(), self.n_spins);
        let n_free = offsets.iter().filter(|p| p.is_none()).count() as i32;
        let mut acc = Complex64::new(0.0, 0.0);
        for (ks, c) in self.tuples() {
            if ks.iter().sum::<i32>() != 0 || ks.iter().all(|&k| k == 0) {
                continue;
            }
            let mut arg = 0.0;
            let mut keep = true;
            for (k, o) in ks.iter().zip(offsets) {
                match o {
                    Some(off) => arg += *k as f64 * off,
                    None if *k != 0 => keep = false,
                    None => {}
                }
            }
            if keep {
                acc += c * Complex64::from_polar(1.0, arg);
            }
        }
        // the all-zero tuple cancels the subtracted uniform density exactly
        acc.re * (2.0 * PI).powi(n_free + 1)
    }
}

/// `S_1(φ)` of one site: `2 Re[m⁽¹⁾ e^{iφ}] + 2 Re[m⁽²⁾ e^{2iφ}]`.
pub fn s1(rho: &DensityMatrix, site: usize, phis: &[f64]) -> Result<PhaseDistribution> {
    let m1 = moments(rho, MomentTarget::Site(site), 1)?.value;
    let m2 = moments(rho, MomentTarget::Site(site), 2)?.value;
    Ok(PhaseDistribution {
        kind: DistributionKind::S1,
        axes: vec![phis.to_vec()],
        values: phis.iter().map(|&p| harmonic_sum(m1, m2, p)).collect(),
    })
}

pub(crate) fn harmonic_sum(m1: Complex64, m2: Complex64, phi: f64) -> f64 {
    2.0 * (m1 * Complex64::from_polar(1.0, phi)).re + 2.0 * (m2 * Complex64::from_polar(1.0, 2.0 * phi)).re
}

/// Joint distribution `S_2(φ_i, φ_j)` of two sites, all other phases integrated out.
pub fn s2_joint(rho: &DensityMatrix, i: usize, j: usize, phis_i: &[f64], phis_j: &[f64]) -> Result<PhaseDistribution> {
    check_pair(rho.n_spins(), i, j)?;
    let table = FourierTable::new(rho);
    let mut values = Vec::with_capacity(phis_i.len() * phis_j.len());
    for &a in phis_i {
        for &b in phis_j {
            let mut phis = vec![None; rho.n_spins()];
            phis[i] = Some(a);
            phis[j] = Some(b);
            values.push(table.joint(&phis));
        }
    }
    Ok(PhaseDistribution {
        kind: DistributionKind::S2Joint,
        axes: vec![phis_i.to_vec(), phis_j.to_vec()],
        values,
    })
}

fn check_pair(n_spins: usize, i: usize, j: usize) -> Result<()> {
    for s in [i, j] {
        if s >= n_spins {
            return Err(Error::SiteOutOfRange { site: s, n_spins });
        }
    }
    if i == j {
        return Err(Error::InvalidConfig {
            field: "pair".into(),
            reason: "pair sites must differ".into(),
        });
    }
    Ok(())
}

/// Relative-phase marginal by Fourier selection, one value per offset vector.
///
/// Each offset vector has one entry per site: `Some(o_j)` keeps the site at
/// phase `o_j + ψ`, `None` integrates it out; `ψ` is integrated over a full turn.
pub fn relative_marginal(rho: &DensityMatrix, offsets: &[Vec<Option<f64>>]) -> Result<Vec<f64>> {
    let n = rho.n_spins();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedSpinCount(n));
    }
    let table = FourierTable::new(rho);
    offsets
        .iter()
        .map(|o| {
            if o.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: o.len() });
            }
            Ok(table.relative(o))
        })
        .collect()
}

/// `S_2(φ_ij)` with `φ_ij = φ_i − φ_j`.
pub fn s2_relative(rho: &DensityMatrix, i: usize, j: usize, phis: &[f64]) -> Result<PhaseDistribution> {
    check_pair(rho.n_spins(), i, j)?;
    let offsets: Vec<Vec<Option<f64>>> = phis
        .iter()
        .map(|&p| {
            let mut o = vec![None; rho.n_spins()];
            o[i] = Some(p);
            o[j] = Some(0.0);
            o
        })
        .collect();
    Ok(PhaseDistribution {
        kind: DistributionKind::S2Relative,
        axes: vec![phis.to_vec()],
        values: relative_marginal(rho, &offsets)?,
    })
}

fn s3_grid(
    rho: &DensityMatrix,
    first: &[f64],
    second: &[f64],
    offsets: impl Fn(f64, f64) -> Vec<Option<f64>>,
) -> Result<PhaseDistribution> {
    if rho.n_spins() != 3 {
        return Err(Error::UnsupportedSpinCount(rho.n_spins()));
    }
    let grid: Vec<Vec<Option<f64>>> = first
        .iter()
        .flat_map(|&a| second.iter().map(move |&b| (a, b)))
        .map(|(a, b)| offsets(a, b))
        .collect();
    Ok(PhaseDistribution {
        kind: DistributionKind::S3Relative,
        axes: vec![first.to_vec(), second.to_vec()],
        values: relative_marginal(rho, &grid)?,
    })
}

/// `S_3(φ_AB, φ_BC)`: `φ_A = φ_AB + φ_B`, `φ_C = φ_B − φ_BC`, integrated over `φ_B`.
pub fn s3_ab_bc(rho: &DensityMatrix, phis_ab: &[f64], phis_bc: &[f64]) -> Result<PhaseDistribution> {
    s3_grid(rho, phis_ab, phis_bc, |ab, bc| vec![Some(ab), Some(0.0), Some(-bc)])
}

/// `S_3(φ_AB, φ_CA)`: `φ_B = φ_A − φ_AB`, `φ_C = φ_CA + φ_A`, integrated over `φ_A`.
pub fn s3_ab_ca(rho: &DensityMatrix, phis_ab: &[f64], phis_ca: &[f64]) -> Result<PhaseDistribution> {
    s3_grid(rho, phis_ab, phis_ca, |ab, ca| vec![Some(0.0), Some(-ab), Some(ca)])
}
