mod common;

use faer::Mat;
use num_complex::Complex64;
use proptest::prelude::*;
use spinsync::correlations::{
    correlation, mutual_information, negativity, p_max, pair_negativity, partial_trace, reduce, von_neumann_entropy,
    SubsystemSelector,
};
use spinsync::liouvillian::solve_steady_state;
use spinsync::matrix;
use spinsync::{rho_infinity, ComplexMatrix, DensityMatrix, SystemConfig};

/// Spin-1 ladder matrices written out by hand, basis |1⟩, |0⟩, |−1⟩.
fn ladder() -> (ComplexMatrix, ComplexMatrix) {
    let r2 = Complex64::new(2f64.sqrt(), 0.0);
    let plus = Mat::from_fn(3, 3, |i, j| if j == i + 1 { r2 } else { Complex64::new(0.0, 0.0) });
    let minus = matrix::adjoint(plus.as_ref());
    (plus, minus)
}

/// `ρ_A` of a two-spin state by explicit contraction over B.
fn trace_out_b(rho: &DensityMatrix) -> ComplexMatrix {
    let m = rho.matrix();
    Mat::from_fn(3, 3, |a, b| (0..3).map(|t| m[(a * 3 + t, b * 3 + t)]).sum())
}

fn trace_out_a(rho: &DensityMatrix) -> ComplexMatrix {
    let m = rho.matrix();
    Mat::from_fn(3, 3, |a, b| (0..3).map(|t| m[(t * 3 + a, t * 3 + b)]).sum())
}

/// Entropy from the spectrum of `ρ + 𝟙`, shifted back.
fn shifted_entropy(m: &ComplexMatrix) -> f64 {
    let shifted = m + matrix::identity(m.nrows());
    matrix::hermitian_eigenvalues(shifted.as_ref())
        .into_iter()
        .map(|l| l - 1.0)
        .filter(|&l| l > 1e-14)
        .map(|l| -l * l.ln())
        .sum()
}

fn mutual_information_oracle(rho: &DensityMatrix) -> f64 {
    shifted_entropy(&trace_out_b(rho)) + shifted_entropy(&trace_out_a(rho)) - shifted_entropy(&rho.matrix().to_owned())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn negativity_is_symmetric(seed in any::<u64>(), pure in any::<bool>()) {
        let mut r = common::rng(seed);
        let rho = if pure { common::random_pure(&mut r, 2) } else { common::random_density(&mut r, 2) };
        let (a, b) = (negativity(&rho, 0).unwrap(), negativity(&rho, 1).unwrap());
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!(a >= -1e-14);
    }

    #[test]
    fn mutual_information_nonnegative(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = common::rng(seed);
        let rho = common::random_density(&mut r, n);
        for (i, j) in [(0, 1), (n - 1, 0)] {
            prop_assert!(mutual_information(&rho, i, j).unwrap() >= -1e-10);
        }
    }

    #[test]
    fn entropy_unitary_invariance(seed in any::<u64>(), n in 1usize..=2) {
        let mut r = common::rng(seed);
        let rho = common::random_density(&mut r, n);
        let u = common::random_unitary(&mut r, rho.dim());
        let rotated = &u * rho.matrix() * u.adjoint();
        let rotated = DensityMatrix::new(matrix::hermitian_part(rotated.as_ref()), n).unwrap();
        prop_assert!((von_neumann_entropy(&rho) - von_neumann_entropy(&rotated)).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_composes(seed in any::<u64>()) {
        let rho = common::random_density(&mut common::rng(seed), 3);
        let ab = reduce(&rho, &[0, 1]).unwrap();
        let a_via_ab = reduce(&ab, &[0]).unwrap();
        let a = reduce(&rho, &[0]).unwrap();
        prop_assert!(matrix::max_abs_diff(a.matrix(), a_via_ab.matrix()) < 1e-14);
        prop_assert!((matrix::trace(ab.matrix()).re - 1.0).abs() < 1e-13);
        prop_assert!(matrix::hermiticity_defect(ab.matrix()) < 1e-15);
        let ca = reduce(&rho, &[2, 0]).unwrap();
        let c_via_ca = reduce(&ca, &[0]).unwrap();
        prop_assert!(matrix::max_abs_diff(c_via_ca.matrix(), reduce(&rho, &[2]).unwrap().matrix()) < 1e-14);
    }

    #[test]
    fn partial_trace_matches_contraction(seed in any::<u64>()) {
        let rho = common::random_density(&mut common::rng(seed), 2);
        prop_assert!(common::max_abs_diff(&trace_out_b(&rho), &reduce(&rho, &[0]).unwrap().matrix().to_owned()) < 1e-15);
        prop_assert!(common::max_abs_diff(&trace_out_a(&rho), &reduce(&rho, &[1]).unwrap().matrix().to_owned()) < 1e-15);
    }
}

#[test]
fn product_states_carry_no_correlations() {
    let mut r = common::rng(11);
    let a = common::random_density(&mut r, 1);
    let b = common::random_density(&mut r, 1);
    let ab = DensityMatrix::new(matrix::kron(a.matrix(), b.matrix()), 2).unwrap();
    assert!(mutual_information(&ab, 0, 1).unwrap().abs() < 1e-12);
    assert!(negativity(&ab, 0).unwrap() < 1e-14);
    let c = correlation(&ab, 0, 1, 1).unwrap();
    assert!(c.norm() < 1e-14);
}

#[test]
fn fig2_mutual_information_matches_oracle() {
    let rho = solve_steady_state(&SystemConfig::two_spin_equal(1.0, 0.1, 0.15)).unwrap();
    let mi = mutual_information(&rho, 0, 1).unwrap();
    assert!((mi - mutual_information_oracle(&rho)).abs() < 1e-12);
    assert!(mi > 0.0);
}

#[test]
fn limit_state_mutual_information() {
    let r = rho_infinity().unwrap();
    let joint = -(4.0 * 0.125 * 0.125f64.ln() + 2.0 * 0.25 * 0.25f64.ln());
    let expected = shifted_entropy(&trace_out_b(&r)) + shifted_entropy(&trace_out_a(&r)) - joint;
    assert!((mutual_information(&r, 0, 1).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn second_order_correlation_matches_expectations() {
    let rho = solve_steady_state(&SystemConfig::two_spin_equal(1.0, 0.1, 0.1)).unwrap();
    let (plus, minus) = ladder();
    let id = matrix::identity(3);
    let sm_a = matrix::kron(minus.as_ref(), id.as_ref());
    let sp_a = matrix::kron(plus.as_ref(), id.as_ref());
    let sm_b = matrix::kron(id.as_ref(), minus.as_ref());
    let sp_b = matrix::kron(id.as_ref(), plus.as_ref());
    let ev = |op: &ComplexMatrix| -> Complex64 {
        let m = rho.matrix();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..9 {
            for k in 0..9 {
                acc += op[(i, k)] * m[(k, i)];
            }
        }
        acc
    };
    let sq = |a: &ComplexMatrix| a * a;
    let cov = |x: &ComplexMatrix, y: &ComplexMatrix| ev(&sq(&(x * y))) - ev(&sq(x)) * ev(&sq(y));
    let expected = cov(&sm_a, &sp_b) / (cov(&sm_a, &sp_a).re * cov(&sm_b, &sp_b).re).sqrt();
    let c = correlation(&rho, 0, 1, 2).unwrap();
    assert!((c - expected).norm() < 1e-12);
    assert!(c.norm().is_finite() && c.norm() > 0.0);
    for site in 0..2 {
        assert!((correlation(&rho, site, site, 2).unwrap() - 1.0).norm() < 1e-12);
    }
}

#[test]
fn three_spin_pair_negativity_uses_reduced_state() {
    let rho = solve_steady_state(&SystemConfig::three_spin_chain(1.0, 0.5, 0.5)).unwrap();
    let pair = reduce(&rho, &[0, 1]).unwrap();
    assert_eq!(pair_negativity(&rho, 0, 1).unwrap(), negativity(&pair, 0).unwrap());
    assert!((pair_negativity(&rho, 0, 1).unwrap() - pair_negativity(&rho, 1, 0).unwrap()).abs() < 1e-12);
}

#[test]
fn population_change_examples() {
    let r0 = DensityMatrix::limit_cycle(2);
    assert_eq!(p_max(&r0, &rho_infinity().unwrap()).unwrap(), 0.75);
    let rho = solve_steady_state(&SystemConfig::two_spin_equal(1.0, 0.1, 0.1)).unwrap();
    assert!(p_max(&rho, &r0).unwrap() <= 0.1);
    assert!(p_max(&rho, &DensityMatrix::limit_cycle(3)).is_err());
}

#[test]
fn identity_selection_is_a_copy() {
    let rho = common::random_density(&mut common::rng(12), 2);
    let sel = SubsystemSelector::new(vec![0, 1], 2).unwrap();
    assert_eq!(partial_trace(&rho, &sel).unwrap().matrix(), rho.matrix());
}
