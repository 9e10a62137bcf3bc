//! Wigner small-d elements and the θ-integrated coherent-state operator `c^S(φ)`.
//!
//! Magnetic quantum numbers are passed doubled (`twice_n = 2n`) so half-integer
//! spins stay exact.

use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ZERO};

/// Spin quantum number stored as `2S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub const HALF: Spin = Spin { twice: 1 };
    pub const ONE: Spin = Spin { twice: 2 };
    pub const THREE_HALVES: Spin = Spin { twice: 3 };

    pub const fn from_twice(twice: u32) -> Self {
        Spin { twice }
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    /// Doubled magnetic number of basis index `k` (`|S⟩` first).
    pub fn twice_m(self, k: usize) -> i32 {
        self.twice as i32 - 2 * k as i32
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `Γ(x)` for positive integer or half-integer `x = twice_x / 2`, exact up to rounding.
pub fn gamma_half_integer(twice_x: u32) -> f64 {
    assert!(twice_x > 0, "Gamma has a pole at 0");
    if twice_x % 2 == 0 {
        factorial(twice_x / 2 - 1)
    } else {
        // Γ(k + 1/2) = (2k)! √π / (4^k k!)
        let k = (twice_x - 1) / 2;
        factorial(2 * k) * PI.sqrt() / (4f64.powi(k as i32) * factorial(k))
    }
}

/// `d^S_{n,S}(θ) = √((2S)!/((S+n)!(S−n)!)) cos(θ/2)^{S+n} sin(θ/2)^{S−n}`.
pub fn wigner_d_little(spin: Spin, twice_n: i32, theta: f64) -> f64 {
    let ts = spin.twice as i32;
    assert!(twice_n.abs() <= ts && (ts - twice_n) % 2 == 0, "invalid magnetic number");
    let up = ((ts + twice_n) / 2) as u32;
    let down = ((ts - twice_n) / 2) as u32;
    let norm = (factorial(spin.twice) / (factorial(up) * factorial(down))).sqrt();
    norm * (theta / 2.0).cos().powi(up as i32) * (theta / 2.0).sin().powi(down as i32)
}

/// `c^S(φ)`: the Husimi function integrated over the polar angle, as an operator.
#[derive(Debug, Clone)]
pub struct COperator {
    pub spin: Spin,
    pub phi: f64,
    pub matrix: ComplexMatrix,
}

/// Closed-form `c^S(φ)` from products of Gamma functions.
pub fn c_operator(spin: Spin, phi: f64) -> Result<COperator> {
    if !(1..=3).contains(&spin.twice) {
        return Err(Error::UnsupportedSpin { twice_spin: spin.twice });
    }
    let dim = spin.dim();
    let ts = spin.twice as i32;
    let matrix = Mat::from_fn(dim, dim, |a, b| {
        let (tn, tm) = (spin.twice_m(a), spin.twice_m(b));
        // doubled arguments of Γ(1 + S ± (n+m)/2)
        let sum = (tn + tm) / 2;
        let g_plus = gamma_half_integer((2 + ts + sum) as u32);
        let g_minus = gamma_half_integer((2 + ts - sum) as u32);
        let f = |t: i32| factorial(((ts + t) / 2) as u32) * factorial(((ts - t) / 2) as u32);
        let amp = g_plus * g_minus / (f(tn) * f(tm)).sqrt() / (2.0 * PI);
        let winding = ((tn - tm) / 2) as f64;
        Complex64::from_polar(amp, winding * phi)
    });
    Ok(COperator { spin, phi, matrix })
}

impl COperator {
    /// Fourier component `C_k` with `c(φ) = Σ_k e^{ikφ} C_k`: the entries of
    /// `c(0)` on the `k`-th superdiagonal (`n − m = k`).
    pub fn harmonic(spin: Spin, k: i32) -> Result<ComplexMatrix> {
        let c0 = c_operator(spin, 0.0)?;
        let dim = spin.dim();
        Ok(Mat::from_fn(dim, dim, |a, b| {
            if b as i32 - a as i32 == k {
                c0.matrix[(a, b)]
            } else {
                ZERO
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{self, max_abs_diff, re};
    use crate::spin::{make_spin1_ops, spin_raising};

    #[test]
    fn gamma_values() {
        assert!((gamma_half_integer(1) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half_integer(3) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((gamma_half_integer(5) - 0.75 * PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half_integer(2), 1.0);
        assert_eq!(gamma_half_integer(8), 6.0);
    }

    #[test]
    fn d_little_examples() {
        assert_eq!(wigner_d_little(Spin::ONE, 2, 0.0), 1.0);
        let v = wigner_d_little(Spin::ONE, 0, PI / 2.0);
        assert!((v - 2f64.sqrt() / 2.0).abs() < 1e-15);
        for theta in [0.0, 0.3, 1.2, 2.9] {
            let v = wigner_d_little(Spin::HALF, 1, theta);
            assert!((v - (theta / 2.0).cos()).abs() < 1e-15);
        }
        // standard spin-1 table
        let t = 0.77f64;
        assert!((wigner_d_little(Spin::ONE, 2, t) - (1.0 + t.cos()) / 2.0).abs() < 1e-15);
        assert!((wigner_d_little(Spin::ONE, -2, t) - (1.0 - t.cos()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn spin1_entries() {
        let c = c_operator(Spin::ONE, 0.0).unwrap().matrix;
        assert!((c[(0, 1)] - re(3.0 * 2f64.sqrt() / 32.0)).norm() < 1e-15);
        assert!((c[(0, 2)] - re(1.0 / (4.0 * PI))).norm() < 1e-15);
        for k in 0..3 {
            assert!((c[(k, k)] - re(1.0 / (2.0 * PI))).norm() < 1e-15);
        }
    }

    #[test]
    fn spin_half_matches_explicit_form() {
        let sp = spin_raising(1);
        let sm = matrix::adjoint(sp.as_ref());
        for phi in [0.0, 0.4, 2.5, -1.1] {
            let c = c_operator(Spin::HALF, phi).unwrap().matrix;
            let e = Complex64::from_polar(1.0, phi);
            let explicit = matrix::scale(matrix::identity(2).as_ref(), re(1.0 / (2.0 * PI)))
                + matrix::scale(sp.as_ref(), e / 8.0)
                + matrix::scale(sm.as_ref(), e.conj() / 8.0);
            assert!(max_abs_diff(c.as_ref(), explicit.as_ref()) < 1e-14);
        }
    }

    #[test]
    fn spin_one_matches_explicit_form() {
        let ops = make_spin1_ops();
        let sp2 = &ops.s_plus * &ops.s_plus;
        for phi in [0.0, 0.4, 2.5, -1.1] {
            let c = c_operator(Spin::ONE, phi).unwrap().matrix;
            let e = Complex64::from_polar(1.0, phi);
            let half = matrix::scale(ops.s_plus.as_ref(), e * 3.0 / 32.0)
                + matrix::scale(sp2.as_ref(), e * e / (8.0 * PI));
            let explicit = matrix::scale(matrix::identity(3).as_ref(), re(1.0 / (2.0 * PI)))
                + &half
                + half.adjoint();
            assert!(max_abs_diff(c.as_ref(), explicit.as_ref()) < 1e-14);
        }
    }

    #[test]
    fn c_operator_matches_theta_quadrature() {
        // direct θ-integration of d_n d_m sinθ, independent of the Gamma form
        let (nodes, weights) = crate::measures::quadrature::gauss_legendre_on(64, 0.0, PI);
        for spin in [Spin::HALF, Spin::ONE, Spin::THREE_HALVES] {
            let c = c_operator(spin, 0.0).unwrap().matrix;
            let pref = (spin.dim() as f64) / (4.0 * PI);
            for a in 0..spin.dim() {
                for b in 0..spin.dim() {
                    let integral: f64 = nodes
                        .iter()
                        .zip(&weights)
                        .map(|(&t, &w)| {
                            w * t.sin()
                                * wigner_d_little(spin, spin.twice_m(a), t)
                                * wigner_d_little(spin, spin.twice_m(b), t)
                        })
                        .sum();
                    assert!((c[(a, b)].re - pref * integral).abs() < 1e-14, "{spin:?} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn hermitian_and_integrates_to_identity() {
        for spin in [Spin::HALF, Spin::ONE, Spin::THREE_HALVES] {
            let n = 32;
            let mut acc = matrix::zeros(spin.dim());
            for l in 0..n {
                let phi = 2.0 * PI * l as f64 / n as f64;
                let c = c_operator(spin, phi).unwrap().matrix;
                assert!(matrix::hermiticity_defect(c.as_ref()) < 1e-15);
                acc += matrix::scale(c.as_ref(), re(2.0 * PI / n as f64));
            }
            assert!(max_abs_diff(acc.as_ref(), matrix::identity(spin.dim()).as_ref()) < 1e-13);
        }
    }

    #[test]
    fn three_halves_has_higher_ladder_content() {
        // c^{3/2} is not a polynomial of degree one in S⁺ along the first superdiagonal
        let c1 = COperator::harmonic(Spin::THREE_HALVES, 1).unwrap();
        let sp = spin_raising(3);
        let ratios: Vec<f64> = (0..3).map(|k| c1[(k, k + 1)].re / sp[(k, k + 1)].re).collect();
        assert!((ratios[0] - ratios[1]).abs() > 1e-6);
    }

    #[test]
    fn unsupported_spin_rejected() {
        assert_eq!(
            c_operator(Spin::from_twice(4), 0.0).unwrap_err(),
            Error::UnsupportedSpin { twice_spin: 4 }
        );
    }

    #[test]
    fn harmonics_reassemble_c() {
        let phi = 0.83;
        let c = c_operator(Spin::ONE, phi).unwrap().matrix;
        let mut acc = matrix::zeros(3);
        for k in -2..=2 {
            let h = COperator::harmonic(Spin::ONE, k).unwrap();
            acc += matrix::scale(h.as_ref(), Complex64::from_polar(1.0, k as f64 * phi));
        }
        assert!(max_abs_diff(acc.as_ref(), c.as_ref()) < 1e-15);
    }
}
