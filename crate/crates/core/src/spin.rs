//! Spin-1 operators, tensor embedding and the two-spin coupled basis.
//!
//! Local basis order is `|1⟩, |0⟩, |-1⟩` (descending m). In product spaces
//! site 0 is the leftmost, slowest-varying factor.

use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, kron_all, re, ComplexMatrix, ZERO};
use crate::state::DensityMatrix;

/// Local Hilbert-space dimension of a spin 1.
pub const LOCAL_DIM: usize = 3;

/// Basis index of magnetic quantum number `m ∈ {1, 0, -1}`.
#[inline]
pub fn index_of(m: i32) -> usize {
    debug_assert!((-1..=1).contains(&m));
    (1 - m) as usize
}

/// Hilbert-space dimension of `n_spins` spin-1 sites.
pub fn hilbert_dim(n_spins: usize) -> usize {
    LOCAL_DIM.pow(n_spins as u32)
}

#[derive(Debug, Clone)]
pub struct SpinOps {
    pub s_z: ComplexMatrix,
    pub s_plus: ComplexMatrix,
    pub s_minus: ComplexMatrix,
    pub s_x: ComplexMatrix,
    pub s_y: ComplexMatrix,
}

/// `S^z = |1⟩⟨1| − |−1⟩⟨−1|`, `S^± = √2(|±1⟩⟨0| + |0⟩⟨∓1|)`.
pub fn make_spin1_ops() -> SpinOps {
    let r2 = re(std::f64::consts::SQRT_2);
    let mut s_plus = matrix::zeros(3);
    s_plus[(0, 1)] = r2;
    s_plus[(1, 2)] = r2;
    let s_minus = matrix::adjoint(s_plus.as_ref());
    let mut s_z = matrix::zeros(3);
    s_z[(0, 0)] = re(1.0);
    s_z[(2, 2)] = re(-1.0);
    let s_x = Mat::from_fn(3, 3, |i, j| (s_plus[(i, j)] + s_minus[(i, j)]) * 0.5);
    let s_y = Mat::from_fn(3, 3, |i, j| {
        (s_plus[(i, j)] - s_minus[(i, j)]) * Complex64::new(0.0, -0.5)
    });
    SpinOps {
        s_z,
        s_plus,
        s_minus,
        s_x,
        s_y,
    }
}

/// Raising operator for general spin `S = twice_spin / 2`, basis `|S⟩ … |−S⟩`.
pub fn spin_raising(twice_spin: u32) -> ComplexMatrix {
    let dim = twice_spin as usize + 1;
    let s = twice_spin as f64 / 2.0;
    let mut op = matrix::zeros(dim);
    // ⟨m+1|S⁺|m⟩ = √(S(S+1) − m(m+1)), m = S − col
    for col in 1..dim {
        let m = s - col as f64;
        op[(col - 1, col)] = re((s * (s + 1.0) - m * (m + 1.0)).sqrt());
    }
    op
}

/// `identity ⊗ … ⊗ op ⊗ … ⊗ identity` with `op` acting on `site`.
pub fn embed(op: MatRef<'_, Complex64>, site: usize, n_spins: usize) -> Result<ComplexMatrix> {
    if site >= n_spins {
        return Err(Error::SiteOutOfRange { site, n_spins });
    }
    if op.nrows() != LOCAL_DIM || op.ncols() != LOCAL_DIM {
        return Err(Error::DimensionMismatch {
            expected: LOCAL_DIM,
            found: op.nrows(),
        });
    }
    let id = matrix::identity(LOCAL_DIM);
    Ok(kron_all(
        (0..n_spins).map(|j| if j == site { op } else { id.as_ref() }),
    ))
}

/// One state `|J, M⟩_c` of the coupled two-spin basis.
#[derive(Debug, Clone)]
pub struct CoupledState {
    pub j: u32,
    pub m: i32,
    /// Coefficients in the product basis `|m_A, m_B⟩` (length 9).
    pub vector: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct CombinedBasis {
    pub states: Vec<CoupledState>,
}

impl CombinedBasis {
    pub fn get(&self, j: u32, m: i32) -> Option<&CoupledState> {
        self.states.iter().find(|s| s.j == j && s.m == m)
    }

    /// `|J,M⟩⟨J,M|` as a 9×9 matrix.
    pub fn projector(&self, j: u32, m: i32) -> Option<ComplexMatrix> {
        let v = &self.get(j, m)?.vector;
        Some(Mat::from_fn(9, 9, |a, b| v[a] * v[b].conj()))
    }
}

/// Clebsch–Gordan decomposition of 1 ⊗ 1 (Condon–Shortley phases).
pub fn combined_spin_basis() -> CombinedBasis {
    // (J, M, [(m_A, m_B, weight)], norm²)
    #[allow(clippy::type_complexity)]
    let table: [(u32, i32, &[(i32, i32, f64)], f64); 9] = [
        (2, 2, &[(1, 1, 1.0)], 1.0),
        (2, 1, &[(1, 0, 1.0), (0, 1, 1.0)], 2.0),
        (2, 0, &[(1, -1, 1.0), (0, 0, 2.0), (-1, 1, 1.0)], 6.0),
        (2, -1, &[(0, -1, 1.0), (-1, 0, 1.0)], 2.0),
        (2, -2, &[(-1, -1, 1.0)], 1.0),
        (1, 1, &[(1, 0, 1.0), (0, 1, -1.0)], 2.0),
        (1, 0, &[(1, -1, 1.0), (-1, 1, -1.0)], 2.0),
        (1, -1, &[(0, -1, 1.0), (-1, 0, -1.0)], 2.0),
        (0, 0, &[(1, -1, 1.0), (0, 0, -1.0), (-1, 1, 1.0)], 3.0),
    ];
    let states = table
        .iter()
        .map(|&(j, m, terms, norm_sq)| {
            let mut vector = vec![ZERO; 9];
            let n = norm_sq.sqrt();
            for &(ma, mb, w) in terms {
                vector[LOCAL_DIM * index_of(ma) + index_of(mb)] = re(w / n);
            }
            CoupledState { j, m, vector }
        })
        .collect();
    CombinedBasis { states }
}

/// Strong-coupling limit state of two equal-rate spins,
/// `(1/32)(S⁺_A S⁻_B + S⁻_A S⁺_B)²`.
///
/// The result is cross-checked against its projector form in the coupled
/// basis and rejected if the two disagree anywhere by more than 1e-12.
pub fn rho_infinity() -> Result<DensityMatrix> {
    // ⟨m+1|S⁺|m⟩² = 2 − m(m+1); multiplying radicands before the root keeps every entry exactly 2
    let radicand = |m: i32| f64::from(2 - m * (m + 1));
    let m_of = |k: usize| 1 - k as i32;
    let hop = Mat::from_fn(9, 9, |a, b| {
        let (ma, mb) = (m_of(a / LOCAL_DIM), m_of(a % LOCAL_DIM));
        let (na, nb) = (m_of(b / LOCAL_DIM), m_of(b % LOCAL_DIM));
        if ma == na + 1 && nb == mb + 1 {
            re((radicand(na) * radicand(mb)).sqrt())
        } else {
            ZERO
        }
    });
    let x = &hop + hop.adjoint();
    let rho = matrix::scale((&x * &x).as_ref(), re(1.0 / 32.0));

    let basis = combined_spin_basis();
    let mut projected = matrix::zeros(9);
    let weights = [
        (1, 1, 0.125),
        (1, -1, 0.125),
        (2, 1, 0.125),
        (2, -1, 0.125),
        (0, 0, 0.25),
        (2, 0, 0.25),
    ];
    for (j, m, w) in weights {
        let p = basis.projector(j, m).expect("coupled state exists");
        projected += matrix::scale(p.as_ref(), re(w));
    }
    let defect = matrix::max_abs_diff(rho.as_ref(), projected.as_ref());
    if defect > 1e-12 {
        return Err(Error::Inconsistent(format!(
            "operator and projector forms of the strong-coupling state differ by {defect:e}"
        )));
    }
    Ok(DensityMatrix::from_parts(rho, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{commutator, identity, max_abs_diff, powi};

    fn ket(m: i32) -> Vec<Complex64> {
        let mut v = vec![ZERO; 3];
        v[index_of(m)] = re(1.0);
        v
    }

    #[test]
    fn raising_maps_zero_to_sqrt2_up() {
        let ops = make_spin1_ops();
        let out = matrix::mat_vec(ops.s_plus.as_ref(), &ket(0));
        assert!((out[0] - re(2f64.sqrt())).norm() < 1e-15);
        assert_eq!(out[1], ZERO);
        assert_eq!(out[2], ZERO);
    }

    #[test]
    fn s_z_on_down_is_negative() {
        let ops = make_spin1_ops();
        let out = matrix::mat_vec(ops.s_z.as_ref(), &ket(-1));
        assert_eq!(out, vec![ZERO, ZERO, re(-1.0)]);
    }

    #[test]
    fn s_plus_s_minus_is_diag_2_2_0() {
        let ops = make_spin1_ops();
        let p = &ops.s_plus * &ops.s_minus;
        let mut expected = matrix::zeros(3);
        expected[(0, 0)] = re(2.0);
        expected[(1, 1)] = re(2.0);
        assert!(max_abs_diff(p.as_ref(), expected.as_ref()) < 1e-15);
    }

    #[test]
    fn ladder_algebra() {
        let ops = make_spin1_ops();
        let c = commutator(ops.s_z.as_ref(), ops.s_plus.as_ref());
        assert!(max_abs_diff(c.as_ref(), ops.s_plus.as_ref()) < 1e-15);
        let c = commutator(ops.s_z.as_ref(), ops.s_minus.as_ref());
        let neg = matrix::scale(ops.s_minus.as_ref(), re(-1.0));
        assert!(max_abs_diff(c.as_ref(), neg.as_ref()) < 1e-15);
        assert_eq!(matrix::max_abs(powi(ops.s_plus.as_ref(), 3).as_ref()), 0.0);
        assert_eq!(matrix::max_abs(powi(ops.s_minus.as_ref(), 3).as_ref()), 0.0);
        assert_eq!(matrix::hermiticity_defect(ops.s_x.as_ref()), 0.0);
        assert_eq!(matrix::hermiticity_defect(ops.s_y.as_ref()), 0.0);
        assert_eq!(matrix::hermiticity_defect(ops.s_z.as_ref()), 0.0);
        // [S^x, S^y] = i S^z
        let c = commutator(ops.s_x.as_ref(), ops.s_y.as_ref());
        let isz = matrix::scale(ops.s_z.as_ref(), matrix::I);
        assert!(max_abs_diff(c.as_ref(), isz.as_ref()) < 1e-15);
    }

    #[test]
    fn general_raising_matches_spin1() {
        let ops = make_spin1_ops();
        let s1 = spin_raising(2);
        assert!(max_abs_diff(s1.as_ref(), ops.s_plus.as_ref()) < 1e-15);
        let half = spin_raising(1);
        assert_eq!(half[(0, 1)], re(1.0));
    }

    #[test]
    fn embed_identity_and_site_action() {
        let id = embed(identity(3).as_ref(), 1, 2).unwrap();
        assert_eq!(max_abs_diff(id.as_ref(), identity(9).as_ref()), 0.0);

        let ops = make_spin1_ops();
        let sz0 = embed(ops.s_z.as_ref(), 0, 2).unwrap();
        // |1,0⟩ has product index 3·0 + 1
        let mut v = vec![ZERO; 9];
        v[index_of(1) * 3 + index_of(0)] = re(1.0);
        assert_eq!(matrix::mat_vec(sz0.as_ref(), &v), v);

        let pm = &ops.s_plus * &ops.s_minus;
        let e = embed(pm.as_ref(), 1, 2).unwrap();
        assert!((matrix::trace(e.as_ref()) - re(12.0)).norm() < 1e-14);
    }

    #[test]
    fn embed_rejects_bad_site() {
        let ops = make_spin1_ops();
        assert_eq!(
            embed(ops.s_z.as_ref(), 2, 2).unwrap_err(),
            Error::SiteOutOfRange { site: 2, n_spins: 2 }
        );
    }

    #[test]
    fn coupled_basis_is_orthonormal() {
        let b = combined_spin_basis();
        assert_eq!(b.states.len(), 9);
        for (p, s) in b.states.iter().enumerate() {
            for (q, t) in b.states.iter().enumerate() {
                let ov: Complex64 = s.vector.iter().zip(&t.vector).map(|(x, y)| x.conj() * y).sum();
                let expected = if p == q { 1.0 } else { 0.0 };
                assert!((ov - re(expected)).norm() < 1e-15, "({p},{q})");
            }
        }
    }

    #[test]
    fn coupled_basis_known_states() {
        let b = combined_spin_basis();
        let top = &b.get(2, 2).unwrap().vector;
        assert_eq!(top[0], re(1.0));
        let singlet = &b.get(0, 0).unwrap().vector;
        let s3 = 1.0 / 3f64.sqrt();
        assert!((singlet[index_of(1) * 3 + index_of(-1)] - re(s3)).norm() < 1e-15);
        assert!((singlet[index_of(0) * 3 + index_of(0)] - re(-s3)).norm() < 1e-15);
        assert!((singlet[index_of(-1) * 3 + index_of(1)] - re(s3)).norm() < 1e-15);
    }

    #[test]
    fn coupled_states_are_eigenstates_of_total_spin() {
        let ops = make_spin1_ops();
        let b = combined_spin_basis();
        let total = |op: &ComplexMatrix| {
            embed(op.as_ref(), 0, 2).unwrap() + embed(op.as_ref(), 1, 2).unwrap()
        };
        let (jx, jy, jz) = (total(&ops.s_x), total(&ops.s_y), total(&ops.s_z));
        let j2 = &jx * &jx + &jy * &jy + &jz * &jz;
        for s in &b.states {
            let jj = (s.j * (s.j + 1)) as f64;
            let w = matrix::mat_vec(j2.as_ref(), &s.vector);
            let z = matrix::mat_vec(jz.as_ref(), &s.vector);
            for k in 0..9 {
                assert!((w[k] - s.vector[k] * jj).norm() < 1e-13);
                assert!((z[k] - s.vector[k] * s.m as f64).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn rho_infinity_properties() {
        let rho = rho_infinity().unwrap();
        let m = rho.matrix();
        assert!((matrix::trace(m) - re(1.0)).norm() < 1e-14);
        assert_eq!(matrix::hermiticity_defect(m), 0.0);
        let b = combined_spin_basis();
        let singlet = &b.get(0, 0).unwrap().vector;
        let w = matrix::mat_vec(m, singlet);
        let val: Complex64 = singlet.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
        assert!((val - re(0.25)).norm() < 1e-14);
        for mm in [2, -2] {
            let v = &b.get(2, mm).unwrap().vector;
            let w = matrix::mat_vec(m, v);
            let val: Complex64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            assert!(val.norm() < 1e-15);
        }
        let mut eig = matrix::hermitian_eigenvalues(m);
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected = [0.0, 0.0, 0.0, 0.125, 0.125, 0.125, 0.125, 0.25, 0.25];
        for (a, b) in eig.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
