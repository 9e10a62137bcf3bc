#![allow(dead_code)]

use faer::Mat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinsync::matrix;
use spinsync::spin::hilbert_dim;
use spinsync::{ComplexMatrix, DensityMatrix, SystemConfig};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    Mat::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let a = random_matrix(rng, dim);
    matrix::hermitian_part(a.as_ref())
}

/// Full-rank mixed state `G G† / tr`.
pub fn random_density(rng: &mut impl Rng, n_spins: usize) -> DensityMatrix {
    let g = random_matrix(rng, hilbert_dim(n_spins));
    DensityMatrix::from_factor(g.as_ref(), n_spins).unwrap()
}

/// Rank-one state from a random vector.
pub fn random_pure(rng: &mut impl Rng, n_spins: usize) -> DensityMatrix {
    let d = hilbert_dim(n_spins);
    let v: Vec<Complex64> = (0..d).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let g = Mat::from_fn(d, d, |i, j| if j == 0 { v[i] } else { Complex64::new(0.0, 0.0) });
    DensityMatrix::from_factor(g.as_ref(), n_spins).unwrap()
}

pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, dim);
    matrix::unitary_exp(h.as_ref(), 1.0)
}

/// Chain with independent random rates, drives and couplings.
pub fn random_config(rng: &mut impl Rng, n_spins: usize) -> SystemConfig {
    let mut v = |lo: f64, hi: f64, n: usize| -> Vec<f64> { (0..n).map(|_| rng.gen_range(lo..hi)).collect() };
    SystemConfig {
        n_spins,
        gamma_g: v(0.2, 2.0, n_spins),
        gamma_d: v(0.2, 2.0, n_spins),
        omega: v(0.0, 1.0, n_spins),
        g: v(0.0, 1.0, n_spins - 1),
    }
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    matrix::max_abs_diff(a.as_ref(), b.as_ref())
}
