mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use spinsync::liouvillian::solve_steady_state;
use spinsync::matrix;
use spinsync::measures::MomentTarget;
use spinsync::perturbation::{extract_coefficients, perturb_expand, ExpansionTemplate, MAX_ORDER};
use spinsync::SystemConfig;

fn equal_rate_config(n: usize, gamma: f64, omega: f64, g: f64) -> SystemConfig {
    let mut c = SystemConfig::equal_rates(n, gamma);
    c.omega[0] = omega;
    c.g = vec![g; n - 1];
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn orders_satisfy_structure(gamma in 0.3f64..2.0, omega in 0.0f64..0.5, g in 0.0f64..0.5) {
        let s = perturb_expand(&equal_rate_config(2, gamma, omega, g), 5).unwrap();
        prop_assert!((matrix::trace(s.order(0).as_ref()).re - 1.0).abs() < 1e-12);
        for n in 1..=5 {
            let m = s.order(n);
            prop_assert!(matrix::trace(m.as_ref()).norm() < 1e-12);
            prop_assert!(matrix::hermiticity_defect(m.as_ref()) < 1e-12);
            prop_assert!(s.parity_defect(n) < 1e-12);
            prop_assert!(s.residuals[n] < 1e-10);
        }
    }

    #[test]
    fn blockaded_moments_vanish_at_every_order(omega in 0.0f64..0.3, g in 0.0f64..0.3) {
        let s = perturb_expand(&equal_rate_config(2, 1.0, omega, g), MAX_ORDER).unwrap();
        for k in 0..=MAX_ORDER {
            prop_assert!(s.moment_partial(MomentTarget::Site(0), 1, k).unwrap().norm() < 1e-12);
            prop_assert!(s.moment_partial(MomentTarget::Pair(0, 1), 1, k).unwrap().norm() < 1e-12);
        }
    }
}

#[test]
fn zero_hamiltonian() {
    for n in 1..=3 {
        let s = perturb_expand(&SystemConfig::equal_rates(n, 0.7), 3).unwrap();
        for k in 1..=3 {
            assert!(matrix::max_abs(s.order(k).as_ref()) < 1e-15);
        }
    }
}

#[test]
fn undriven_first_moment_at_small_parameters() {
    let s = perturb_expand(&SystemConfig::two_spin_equal(1.0, 0.01, 0.01), 4).unwrap();
    let m = s.moment_partial(MomentTarget::Site(1), 1, 4).unwrap();
    let expected = 1.25e-8;
    assert!((m.re / expected - 1.0).abs() < 0.01, "{m}");
}

#[test]
fn higher_partial_sums_are_closer() {
    let cfg = SystemConfig::two_spin_equal(1.0, 0.05, 0.05);
    let exact = solve_steady_state(&cfg).unwrap();
    let s = perturb_expand(&cfg, 4).unwrap();
    let err = |k| matrix::max_abs_diff(s.partial_sum(k).as_ref(), exact.matrix());
    assert!(err(4) < err(2));
}

#[test]
fn fourth_order_accuracy_in_synchronization_regime() {
    let mut worst = 0.0f64;
    for omega in [0.01, 0.03, 0.05] {
        for g in [0.01, 0.03, 0.05] {
            let cfg = SystemConfig::two_spin_equal(1.0, omega, g);
            let exact = solve_steady_state(&cfg).unwrap();
            let s = perturb_expand(&cfg, 4).unwrap();
            worst = worst.max(matrix::max_abs_diff(s.partial_sum(4).as_ref(), exact.matrix()));
        }
    }
    assert!(worst <= 1e-4, "worst deviation {worst:e}");
}

#[test]
fn series_matches_exact_solution_at_high_order() {
    let cfg = SystemConfig::two_spin_equal(1.0, 0.004, 0.006);
    let exact = solve_steady_state(&cfg).unwrap();
    let s = perturb_expand(&cfg, MAX_ORDER).unwrap();
    assert!(matrix::max_abs_diff(s.partial_sum(MAX_ORDER).as_ref(), exact.matrix()) < 1e-12);
}

#[test]
fn three_spin_series_is_consistent() {
    let cfg = SystemConfig::three_spin_chain(1.0, 0.02, 0.02);
    let exact = solve_steady_state(&cfg).unwrap();
    let s = perturb_expand(&cfg, 4).unwrap();
    for n in 1..=4 {
        assert!(s.parity_defect(n) < 1e-12);
    }
    assert!(matrix::max_abs_diff(s.partial_sum(4).as_ref(), exact.matrix()) < 1e-6);
}

#[test]
fn single_spin_drive_coefficients() {
    let t = ExpansionTemplate::drive_first_site(SystemConfig::equal_rates(2, 1.0));
    let fit = extract_coefficients(&t, MomentTarget::Site(0), 2, &[(2, 0), (0, 2), (4, 0), (2, 2)]).unwrap();
    assert!((fit.get(2, 0).unwrap().re - 1.0 / (2.0 * PI)).abs() < 1e-9);
    assert!(fit.get(0, 2).unwrap().norm() < 1e-12);
    assert!((fit.get(4, 0).unwrap().re + 4.0 / PI).abs() < 1e-6);
    assert!((fit.get(2, 2).unwrap().re + 21.0 / (2.0 * PI)).abs() < 1e-6);
}

#[test]
fn coefficients_reproduce_the_series() {
    let t = ExpansionTemplate::drive_first_site(SystemConfig::equal_rates(2, 1.0));
    let monomials = [(1, 3), (3, 1)];
    let fit = extract_coefficients(&t, MomentTarget::Site(1), 1, &monomials).unwrap();
    let (omega, g) = (0.004, 0.007);
    let s = perturb_expand(&t.at(omega, g), 4).unwrap();
    let direct = s.moment_at_order(MomentTarget::Site(1), 1, 4).unwrap();
    let poly: num_complex::Complex64 = monomials
        .iter()
        .map(|&(a, b)| fit.get(a, b).unwrap() * omega.powi(a as i32) * g.powi(b as i32))
        .sum();
    assert!((direct - poly).norm() < 1e-12 * direct.norm().max(1e-20) + 1e-22);
    assert!((fit.get(1, 3).unwrap().re - 5.0 / 4.0).abs() < 1e-6);
}
