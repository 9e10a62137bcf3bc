//! Closed-form moments of two coupled spins and blockade loci.
//!
//! Rates follow the inverted convention `γ^g_A = γ^d_B = γ_g`,
//! `γ^d_A = γ^g_B = γ_d`. Formulas are transcribed as asymptotic expansions
//! and are evaluated wherever they are asked to; [`RateConfigTwoSpin::validity_warnings`]
//! lists the expansions that are being stretched.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liouvillian::solve_steady_state;
use crate::measures::moments::{moments, MomentTarget};
use crate::spin::rho_infinity;
use crate::state::DensityMatrix;
use crate::system::SystemConfig;
use crate::{matrix, spin};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateConfigTwoSpin {
    pub gamma_g: f64,
    pub gamma_d: f64,
    pub g: f64,
    pub omega_a: f64,
}

impl RateConfigTwoSpin {
    pub fn new(gamma_g: f64, gamma_d: f64, g: f64, omega_a: f64) -> Result<Self> {
        for (field, v, strict) in [
            ("gamma_g", gamma_g, true),
            ("gamma_d", gamma_d, true),
            ("g", g, false),
            ("omega_a", omega_a, false),
        ] {
            if !v.is_finite() || v < 0.0 || (strict && v == 0.0) {
                return Err(Error::InvalidConfig {
                    field: field.into(),
                    reason: format!("must be {} and finite, got {v}", if strict { "> 0" } else { ">= 0" }),
                });
            }
        }
        Ok(Self { gamma_g, gamma_d, g, omega_a })
    }

    pub fn swapped(&self) -> Self {
        Self { gamma_g: self.gamma_d, gamma_d: self.gamma_g, ..*self }
    }

    pub fn to_system(&self) -> SystemConfig {
        SystemConfig::two_spin_inverted(self.gamma_g, self.gamma_d, self.omega_a, self.g)
    }

    /// Expansions used outside their small-parameter regime.
    pub fn validity_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let gmin = self.gamma_g.min(self.gamma_d);
        if self.omega_a > 0.1 * gmin {
            out.push(format!("omega_a = {} is not small against the rates", self.omega_a));
        }
        if self.g > 0.3 * self.gamma_d {
            out.push(format!("g = {} is not small against gamma_d; g^2 brackets are truncated", self.g));
        }
        out
    }
}

/// Leading order in `Ω_A` of `m⁽¹⁾_A`, with its `g²` correction.
pub fn m1a_asym(c: &RateConfigTwoSpin) -> Complex64 {
    let (gg, gd, g) = (c.gamma_g, c.gamma_d, c.g);
    let bracket = 1.0 - 4.0 * g * g * (gg * gg + 4.0 * gg * gd + gd * gd) / (gg * gg * gd * gd);
    Complex64::new(0.0, 3.0 * c.omega_a / 16.0 * (gg - gd) / (gg * gd) * bracket)
}

/// Leading order in `Ω_A` of `m⁽¹⁾_B`, with its `g²` correction.
pub fn m1b_asym(c: &RateConfigTwoSpin) -> f64 {
    let (gg, gd, g) = (c.gamma_g, c.gamma_d, c.g);
    let num = 320.0 * gg.powi(3) * gd.powi(3) + 23.0 * (gg.powi(4) * gd * gd + gg * gg * gd.powi(4))
        - 32.0 * (gg.powi(6) + gd.powi(6))
        - 106.0 * (gg.powi(5) * gd + gg * gd.powi(5));
    let den = 3.0 * gg.powi(3) * gd.powi(3) * (2.0 * gg + gd) * (gg + 2.0 * gd);
    3.0 * c.omega_a * g / (8.0 * gg * gd) * ((gd - gg).powi(2) / (gg * gd) + g * g * num / den)
}

/// `m⁽¹⁾_AB` at vanishing drive.
pub fn m1ab_asym(c: &RateConfigTwoSpin) -> Complex64 {
    let (gg, gd, g) = (c.gamma_g, c.gamma_d, c.g);
    let g2 = g * g;
    let num = (gd - gg) * (4.0 * g2 * g2 + g2 * gg * gd - gg * gg * gd * gd);
    let den = 32.0 * g2.powi(3)
        + gg.powi(3) * gd.powi(3)
        + 4.0 * g2 * g2 * (2.0 * gg * gg + 7.0 * gg * gd + 2.0 * gd * gd)
        + g2 * gg * gd * (4.0 * gg * gg + 5.0 * gg * gd + 4.0 * gd * gd);
    Complex64::new(0.0, 9.0 * PI * g / 256.0 * num / den)
}

/// Equal-rate moments at leading order in the drive (`m2A`: in the coupling).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualRateForms {
    pub m1b: f64,
    pub m2b: f64,
    pub m2ab: f64,
    pub m2a: f64,
}

fn common_denominator(g: f64, gamma: f64) -> f64 {
    let (g2, y2) = (g * g, gamma * gamma);
    (8.0 * g2 + y2) * (4.0 * g2 + 9.0 * y2) * (16.0 * g2 * g2 + 72.0 * g2 * y2 + 9.0 * y2 * y2)
}

pub fn equal_rate_forms(g: f64, omega_a: f64, gamma: f64) -> EqualRateForms {
    let (g2, o2, y2) = (g * g, omega_a * omega_a, gamma * gamma);
    let den = common_denominator(g, gamma);
    let m1b = 0.75 * g2 * g * omega_a * (64.0 * g2 * g2 + 348.0 * g2 * y2 + 135.0 * y2 * y2) / den;
    let m2b = 3.0 / (2.0 * PI) * g2 * o2 / ((g2 + y2) * (4.0 * g2 + y2))
        * (96.0 * g2.powi(4) + 656.0 * g2.powi(3) * y2 + 518.0 * g2 * g2 * y2 * y2 + 108.0 * g2 * y2.powi(3) + 81.0 * y2.powi(4))
        / den;
    let m2ab = g2 / (8.0 * PI * (8.0 * g2 + y2))
        * (1.0 - o2 * (848.0 * g2.powi(3) + 4600.0 * g2 * g2 * y2 + 1905.0 * g2 * y2 * y2 + 702.0 * y2.powi(3)) / den);
    let m2a = o2 / (2.0 * PI * (8.0 * o2 + y2))
        * (1.0
            - g2 * (448.0 * o2 * o2 + 456.0 * o2 * y2 + 189.0 * y2 * y2)
                / ((8.0 * o2 + y2) * (16.0 * o2 * o2 + 30.0 * o2 * y2 + 9.0 * y2 * y2)));
    EqualRateForms { m1b, m2b, m2ab, m2a }
}

/// Limits of the equal-rate forms.
pub mod limits {
    use std::f64::consts::PI;

    pub fn m1b_strong_coupling(g: f64, omega_a: f64) -> f64 {
        3.0 * omega_a / (32.0 * g)
    }

    pub fn m1b_weak_coupling(g: f64, omega_a: f64, gamma: f64) -> f64 {
        5.0 * g.powi(3) * omega_a / (4.0 * gamma.powi(4))
    }

    pub fn m2b_strong_coupling(g: f64, omega_a: f64) -> f64 {
        9.0 * omega_a * omega_a / (128.0 * PI * g * g)
    }

    pub fn m2b_weak_coupling(g: f64, omega_a: f64, gamma: f64) -> f64 {
        3.0 * g * g * omega_a * omega_a / (2.0 * PI * gamma.powi(4))
    }

    pub fn m2ab_strong_coupling(g: f64, omega_a: f64, gamma: f64) -> f64 {
        1.0 / (64.0 * PI) - (53.0 * omega_a * omega_a + 4.0 * gamma * gamma) / (2048.0 * PI * g * g)
    }

    pub fn m2ab_weak_coupling(g: f64, omega_a: f64, gamma: f64) -> f64 {
        g * g / (8.0 * PI * gamma * gamma) * (1.0 - (26.0 * omega_a * omega_a + 24.0 * g * g) / (3.0 * gamma.powi(4)))
    }

    pub fn m2a_strong_drive(g: f64, omega_a: f64, gamma: f64) -> f64 {
        1.0 / (16.0 * PI) - (28.0 * g * g + gamma * gamma) / (128.0 * PI * omega_a * omega_a)
    }

    pub fn m2a_weak_drive(g: f64, omega_a: f64, gamma: f64) -> f64 {
        omega_a * omega_a / (2.0 * PI * gamma * gamma) * (1.0 - (21.0 * g * g + 8.0 * omega_a * omega_a) / gamma.powi(4))
    }
}

/// Exact equal-rate steady state at zero drive, mixing `ρ⁽⁰⁾`, `ρ⁽∞⁾` and a coherence.
pub fn equal_rate_steady_state(g: f64, gamma: f64) -> Result<DensityMatrix> {
    let rho0 = DensityMatrix::limit_cycle(2);
    let rinf = rho_infinity()?;
    let p = 8.0 * g * g / (8.0 * g * g + gamma * gamma);
    let ops = spin::make_spin1_ops();
    let hop = spin::embed(ops.s_plus.as_ref(), 0, 2)? * spin::embed(ops.s_minus.as_ref(), 1, 2)?;
    let x = &hop + hop.adjoint();
    let comm = matrix::commutator(x.as_ref(), rho0.matrix());
    let coh = Complex64::new(0.0, -g * gamma / (16.0 * g * g + 2.0 * gamma * gamma));
    let m = matrix::scale(rho0.matrix(), matrix::re(1.0 - p))
        + matrix::scale(rinf.matrix(), matrix::re(p))
        + matrix::scale(comm.as_ref(), coh);
    Ok(DensityMatrix::from_parts(m, 2))
}

/// `γ_g/γ_d = 1 ± 20g³/(3γ_d³)`.
pub fn blockade_width(g: f64, gamma_d: f64) -> (f64, f64) {
    let off = 20.0 * g.powi(3) / (3.0 * gamma_d.powi(3));
    (1.0 - off, 1.0 + off)
}

/// `γ_g/γ_d = (1 + √17)/2 · g²/γ_d²`, the small-coupling zero of `m⁽¹⁾_AB`.
pub fn m1ab_blockade_ratio(g: f64, gamma_d: f64) -> f64 {
    0.5 * (1.0 + 17f64.sqrt()) * g * g / (gamma_d * gamma_d)
}

/// Regime (a) of the `m⁽¹⁾_A` zero: `(g/γ_d, γ_g/γ_d)`.
pub fn m1a_blockade_regime_a() -> (f64, f64) {
    let s = (1.0 + 10f64.sqrt()).sqrt();
    let g = 0.5 * s;
    (g, 2.0 / s * g)
}

/// Regime (b) of the `m⁽¹⁾_A` zero: `(g/γ_d, γ_g/γ_d)`.
pub fn m1a_blockade_regime_b() -> (f64, f64) {
    (1.323, 0.7561 * 1.323)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocusTarget {
    M1A,
    M1AB,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSolver {
    /// Moments of the exact steady state.
    Exact,
    /// The closed forms above.
    Asymptotic,
}

/// How `g` and `Ω_A` are measured while the rate ratio varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateUnits {
    /// `γ_d = 1`.
    GammaD,
    /// `γ_g + γ_d = 1`.
    Sum,
}

impl RateUnits {
    /// `(γ_g, γ_d)` for a given ratio.
    pub fn rates(self, ratio: f64) -> (f64, f64) {
        match self {
            RateUnits::GammaD => (ratio, 1.0),
            RateUnits::Sum => (ratio / (1.0 + ratio), 1.0 / (1.0 + ratio)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LocusOptions {
    pub omega_a: f64,
    pub units: RateUnits,
    /// Explicit bracket in `γ_g/γ_d`; otherwise a log scan over `scan`.
    pub bracket: Option<(f64, f64)>,
    pub scan: (f64, f64, usize),
    pub tolerance: f64,
}

impl Default for LocusOptions {
    fn default() -> Self {
        Self {
            omega_a: 1e-3,
            units: RateUnits::Sum,
            bracket: None,
            scan: (1e-4, 1e2, 120),
            tolerance: 1e-10,
        }
    }
}

/// Signed quantity whose zero defines the locus: the imaginary part of the chosen moment.
pub fn locus_function(target: LocusTarget, g: f64, ratio: f64, solver: MomentSolver, opts: &LocusOptions) -> Result<f64> {
    let (gg, gd) = opts.units.rates(ratio);
    let cfg = RateConfigTwoSpin::new(gg, gd, g, opts.omega_a)?;
    Ok(match solver {
        MomentSolver::Asymptotic => match target {
            LocusTarget::M1A => m1a_asym(&cfg).im,
            LocusTarget::M1AB => m1ab_asym(&cfg).im,
        },
        MomentSolver::Exact => {
            let rho = solve_steady_state(&cfg.to_system())?;
            let t = match target {
                LocusTarget::M1A => MomentTarget::Site(0),
                LocusTarget::M1AB => MomentTarget::Pair(0, 1),
            };
            moments(&rho, t, 1)?.value.im
        }
    })
}

/// Bisection on `f` over `[lo, hi]` to an absolute tolerance in the argument.
pub fn bisect(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lower: lo, upper: hi });
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Roots of the locus function in `γ_g/γ_d`, excluding the interference blockade at 1.
pub fn locate_all(target: LocusTarget, g: f64, solver: MomentSolver, opts: &LocusOptions) -> Result<Vec<f64>> {
    let f = |r: f64| locus_function(target, g, r, solver, opts);
    let brackets = match opts.bracket {
        Some(b) => vec![b],
        None => {
            let (lo, hi, n) = opts.scan;
            let grid: Vec<f64> = (0..=n)
                .map(|k| lo * (hi / lo).powf(k as f64 / n as f64))
                .collect();
            let values = grid.iter().map(|&r| f(r)).collect::<Result<Vec<_>>>()?;
            (0..n)
                .filter(|&k| values[k].signum() != values[k + 1].signum())
                .map(|k| (grid[k], grid[k + 1]))
                .collect()
        }
    };
    let mut roots = Vec::new();
    for (lo, hi) in brackets {
        match bisect(f, lo, hi, opts.tolerance) {
            Ok(r) if (r - 1.0).abs() > 1e-8 => roots.push(r),
            Ok(_) => {}
            Err(Error::NoSignChange { .. }) if opts.bracket.is_none() => {}
            Err(e) => return Err(e),
        }
    }
    Ok(roots)
}

/// The smallest coupling-induced blockade root of `target` at coupling `g`.
pub fn locate_blockade_locus(target: LocusTarget, g: f64, solver: MomentSolver, opts: &LocusOptions) -> Result<f64> {
    let roots = locate_all(target, g, solver, opts)?;
    roots.into_iter().next().ok_or(match opts.bracket {
        Some((lower, upper)) => Error::NoSignChange { lower, upper },
        None => Error::NoSignChange { lower: opts.scan.0, upper: opts.scan.1 },
    })
}

/// Coupling `g` at which the locus function vanishes for a fixed rate ratio.
pub fn locate_coupling_root(
    target: LocusTarget,
    ratio: f64,
    g_bracket: (f64, f64),
    solver: MomentSolver,
    opts: &LocusOptions,
) -> Result<f64> {
    bisect(
        |g| locus_function(target, g, ratio, solver, opts),
        g_bracket.0,
        g_bracket.1,
        opts.tolerance,
    )
}

/// Endpoints of `|m⁽¹⁾_A / m⁽¹⁾_B| = 1` around the blockade, by bisection in `γ_g/γ_d`.
pub fn blockade_width_numeric(g: f64, solver: MomentSolver, omega_a: f64) -> Result<(f64, f64)> {
    let f = |r: f64| -> Result<f64> {
        let cfg = RateConfigTwoSpin::new(r, 1.0, g, omega_a)?;
        match solver {
            MomentSolver::Asymptotic => Ok(m1a_asym(&cfg).norm() / m1b_asym(&cfg).abs() - 1.0),
            MomentSolver::Exact => {
                let rho = solve_steady_state(&cfg.to_system())?;
                let a = moments(&rho, MomentTarget::Site(0), 1)?.value.norm();
                let b = moments(&rho, MomentTarget::Site(1), 1)?.value.norm();
                Ok(a / b - 1.0)
            }
        }
    };
    let predicted = 20.0 * g.powi(3) / 3.0;
    let span = (4.0 * predicted).min(0.5);
    let lower = bisect(f, 1.0 - span, 1.0 - 1e-12, 1e-12)?;
    let upper = bisect(f, 1.0 + 1e-12, 1.0 + span, 1e-12)?;
    Ok((lower, upper))
}
