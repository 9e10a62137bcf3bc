//! Dense complex matrix helpers shared by every module.
//!
//! Operators, states and superoperators are all plain [`ComplexMatrix`]
//! values. Vectorization is column-stacking throughout:
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use faer::{Mat, MatRef, Side};
use num_complex::Complex64;

/// Dense square complex matrix used for operators, states and superoperators.
pub type ComplexMatrix = Mat<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub(crate) fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    Mat::from_fn(dim, dim, |i, j| if i == j { ONE } else { ZERO })
}

pub fn zeros(dim: usize) -> ComplexMatrix {
    Mat::zeros(dim, dim)
}

/// Kronecker product `a ⊗ b`; `a` indexes the slow-varying factor.
pub fn kron(a: MatRef<'_, Complex64>, b: MatRef<'_, Complex64>) -> ComplexMatrix {
    let mut out = Mat::zeros(a.nrows() * b.nrows(), a.ncols() * b.ncols());
    faer::linalg::kron::kron(out.as_mut(), a, b);
    out
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = MatRef<'a, Complex64>>) -> ComplexMatrix {
    let mut acc = identity(1);
    for f in factors {
        acc = kron(acc.as_ref(), f);
    }
    acc
}

pub fn adjoint(a: MatRef<'_, Complex64>) -> ComplexMatrix {
    a.adjoint().to_owned()
}

pub fn transpose(a: MatRef<'_, Complex64>) -> ComplexMatrix {
    a.transpose().to_owned()
}

pub fn commutator(a: MatRef<'_, Complex64>, b: MatRef<'_, Complex64>) -> ComplexMatrix {
    a * b - b * a
}

pub fn trace(a: MatRef<'_, Complex64>) -> Complex64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

/// `tr(op · rho)` without forming the product.
pub fn expectation(op: MatRef<'_, Complex64>, rho: MatRef<'_, Complex64>) -> Complex64 {
    let n = op.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += op[(i, k)] * rho[(k, i)];
        }
    }
    acc
}

pub fn scale(a: MatRef<'_, Complex64>, s: Complex64) -> ComplexMatrix {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

pub fn max_abs_diff(a: MatRef<'_, Complex64>, b: MatRef<'_, Complex64>) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

pub fn max_abs(a: MatRef<'_, Complex64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(a: MatRef<'_, Complex64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..=j.min(a.nrows() - 1) {
            m = m.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    m
}

pub fn hermitian_part(a: MatRef<'_, Complex64>) -> ComplexMatrix {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

pub fn frobenius_norm(a: MatRef<'_, Complex64>) -> f64 {
    a.norm_l2()
}

/// Column-stacking vectorization.
pub fn vectorize(a: MatRef<'_, Complex64>) -> Vec<Complex64> {
    let (r, c) = (a.nrows(), a.ncols());
    let mut v = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            v.push(a[(i, j)]);
        }
    }
    v
}

/// Inverse of [`vectorize`] for a square `dim × dim` matrix.
pub fn unvectorize(v: &[Complex64], dim: usize) -> ComplexMatrix {
    assert_eq!(v.len(), dim * dim);
    Mat::from_fn(dim, dim, |i, j| v[i + j * dim])
}

pub fn mat_vec(a: MatRef<'_, Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(a.ncols(), v.len());
    let mut out = vec![ZERO; a.nrows()];
    for (j, &x) in v.iter().enumerate() {
        if x == ZERO {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o += a[(i, j)] * x;
        }
    }
    out
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues of a Hermitian matrix in nondecreasing order.
///
/// Only the lower triangle is read; callers symmetrize first if the input
/// carries rounding noise.
pub fn hermitian_eigenvalues(a: MatRef<'_, Complex64>) -> Vec<f64> {
    let h = hermitian_part(a);
    h.self_adjoint_eigenvalues(Side::Lower)
        .expect("self-adjoint eigensolver failed to converge")
}

/// Eigenpairs of a Hermitian matrix: (ascending eigenvalues, eigenvector columns).
pub fn hermitian_eigen(a: MatRef<'_, Complex64>) -> (Vec<f64>, ComplexMatrix) {
    let h = hermitian_part(a);
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .expect("self-adjoint eigensolver failed to converge");
    let vals = (0..h.nrows()).map(|i| evd.S()[i].re).collect();
    (vals, evd.U().to_owned())
}

/// `exp(i t A)` for Hermitian `A`, through its eigendecomposition.
pub fn unitary_exp(a: MatRef<'_, Complex64>, t: f64) -> ComplexMatrix {
    let (vals, vecs) = hermitian_eigen(a);
    let n = vals.len();
    let phases = Mat::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, t * vals[i])
        } else {
            ZERO
        }
    });
    &vecs * &phases * vecs.adjoint()
}

/// Integer matrix power by repeated multiplication.
pub fn powi(a: MatRef<'_, Complex64>, n: u32) -> ComplexMatrix {
    let mut acc = identity(a.nrows());
    for _ in 0..n {
        acc = &acc * a;
    }
    acc
}
