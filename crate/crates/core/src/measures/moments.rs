//! Locking moments: scaled expectations of ladder-operator powers.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix};
use crate::spin::{embed, make_spin1_ops};
use crate::state::DensityMatrix;

/// Site label used in column names and reports.
pub fn site_label(site: usize) -> char {
    (b'A' + site as u8) as char
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentTarget {
    Site(usize),
    /// Ordered pair `(i, j)`: phase of `i` relative to `j`.
    Pair(usize, usize),
}

impl fmt::Display for MomentTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MomentTarget::Site(j) => write!(f, "{}", site_label(j)),
            MomentTarget::Pair(i, j) => write!(f, "{}{}", site_label(i), site_label(j)),
        }
    }
}

impl MomentTarget {
    fn check(&self, n_spins: usize) -> Result<()> {
        let sites: &[usize] = match self {
            MomentTarget::Site(j) => &[*j][..],
            MomentTarget::Pair(i, j) => &[*i, *j][..],
        };
        for &s in sites {
            if s >= n_spins {
                return Err(Error::SiteOutOfRange { site: s, n_spins });
            }
        }
        if let MomentTarget::Pair(i, j) = self {
            if i == j {
                return Err(Error::InvalidConfig {
                    field: "pair".into(),
                    reason: "pair sites must differ".into(),
                });
            }
        }
        Ok(())
    }
}

/// Prefactor turning a ladder expectation into the Fourier coefficient of the distribution.
pub fn moment_prefactor(target: MomentTarget, order: u8) -> f64 {
    match (target, order) {
        (MomentTarget::Site(_), 1) => 3.0 / 32.0,
        (MomentTarget::Site(_), 2) => 1.0 / (8.0 * PI),
        (MomentTarget::Pair(..), 1) => 9.0 * PI / 512.0,
        (MomentTarget::Pair(..), 2) => 1.0 / (32.0 * PI),
        _ => panic!("moment order must be 1 or 2"),
    }
}

/// `(S⁺_j)^n` or `(S⁺_i S⁻_j)^n` on the full chain, without prefactor.
pub fn moment_operator(target: MomentTarget, order: u8, n_spins: usize) -> Result<ComplexMatrix> {
    target.check(n_spins)?;
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidConfig {
            field: "order".into(),
            reason: format!("moment order must be 1 or 2, got {order}"),
        });
    }
    let ops = make_spin1_ops();
    let base = match target {
        MomentTarget::Site(j) => embed(ops.s_plus.as_ref(), j, n_spins)?,
        MomentTarget::Pair(i, j) => {
            embed(ops.s_plus.as_ref(), i, n_spins)? * embed(ops.s_minus.as_ref(), j, n_spins)?
        }
    };
    Ok(matrix::powi(base.as_ref(), order as u32))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRecord {
    pub target: MomentTarget,
    pub order: u8,
    pub value: Complex64,
}

impl MomentRecord {
    pub fn magnitude(&self) -> f64 {
        self.value.norm()
    }

    /// Angle at which this harmonic of the distribution peaks, `−arg(m)` in `(−π, π]`.
    pub fn locking_phase(&self) -> f64 {
        if self.value.norm() == 0.0 {
            return 0.0;
        }
        let p = -self.value.arg();
        if p <= -PI {
            p + 2.0 * PI
        } else {
            // `+ 0.0` turns −0 into 0
            p + 0.0
        }
    }

    pub fn name(&self) -> String {
        format!("m{}_{}", self.order, self.target)
    }
}

pub fn moments(rho: &DensityMatrix, target: MomentTarget, order: u8) -> Result<MomentRecord> {
    let op = moment_operator(target, order, rho.n_spins())?;
    let value = rho.expect(op.as_ref()) * moment_prefactor(target, order);
    Ok(MomentRecord { target, order, value })
}
