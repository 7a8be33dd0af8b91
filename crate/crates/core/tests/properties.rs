mod common;

use approx::assert_relative_eq;
use proptest::prelude::*;
use qes_core::analysis::hellmann_feynman_with;
use qes_core::frobenius::{self, coefficients};
use qes_core::model::DimensionlessModel;
use qes_core::oracle::{fd_spectrum_extrapolated, FdGrid};
use qes_core::variational::{spectrum, RitzSolver, DEFAULT_TOL};

use common::*;

#[test]
fn truncation_roots_are_real_and_symmetric() {
    for gamma in PROPERTY_GAMMAS {
        for n in 0..=10 {
            roots_real_and_symmetric(n, gamma).unwrap();
        }
    }
}

#[test]
fn solution_i_has_i_minus_one_nodes() {
    for gamma in NODE_GAMMAS {
        for n in 0..=8 {
            node_law(n, gamma).unwrap();
        }
    }
}

#[test]
fn recurrence_terminates_at_truncation_points() {
    for gamma in PROPERTY_GAMMAS {
        for n in 0..=6 {
            for sol in frobenius::all_solutions(n as i64, gamma).unwrap() {
                let seq = coefficients(gamma, sol.delta_root, sol.w, n + 2).unwrap();
                let scale = seq.a[..=n].iter().fold(0.0f64, |m, a| m.max(a.abs()));
                for tail in &seq.a[n + 1..=n + 2] {
                    assert!(
                        tail.abs() < 1e-10 * scale,
                        "n={n} i={} gamma={gamma}: tail {tail}",
                        sol.i
                    );
                }
            }
        }
    }
}

#[test]
fn variational_is_exact_on_truncation_points() {
    for gamma in [0.0, 1.0] {
        let solver = RitzSolver::new(gamma, 80).unwrap();
        for n in 0..=4 {
            for sol in frobenius::all_solutions(n, gamma).unwrap() {
                let r = solver.spectrum(sol.delta_root, sol.i, DEFAULT_TOL).unwrap();
                let w = r.levels[sol.i - 1].w;
                assert!(
                    (w - sol.w).abs() < 1e-8,
                    "n={n} i={} gamma={gamma}: {w} vs {}",
                    sol.i,
                    sol.w
                );
            }
        }
    }
}

#[test]
fn figure_rows_increase_with_delta() {
    for gamma in [0.0, 1.0] {
        delta_monotone(&figure_sweep(gamma)).unwrap();
    }
}

#[test]
fn ritz_values_decrease_with_basis_size() {
    for gamma in [0.0, 0.5, 1.0, 2.0] {
        for delta in [-3.0, -1.0, 0.0, 1.5, 3.0] {
            basis_monotone(gamma, delta, 5).unwrap();
        }
    }
}

#[test]
fn hellmann_feynman_grid() {
    for gamma in [0.0, 0.5, 1.0, 3.0] {
        let solver = RitzSolver::new(gamma, 80).unwrap();
        for delta in [-3.0, -1.5, 0.0, 0.5, 2.5] {
            for j in 0..5 {
                let r = hellmann_feynman_with(&solver, delta, j, 1e-3).unwrap();
                assert!(r.abs_diff < 1e-4, "{r:?}");
                assert!(r.lhs > 0.0 && r.rhs > 0.0, "{r:?}");
            }
        }
    }
}

#[test]
fn finite_differences_agree_with_ritz() {
    let grid = FdGrid::new(10.0, 4000).unwrap();
    for gamma in [0.0, 1.0] {
        for delta in [-3.0, -0.5, 1.5] {
            let model = DimensionlessModel::new(gamma, delta).unwrap();
            let fd = fd_spectrum_extrapolated(&model, &grid, 4).unwrap();
            let ritz = spectrum(&model, 4, DEFAULT_TOL).unwrap().values();
            for (j, (a, b)) in fd.iter().zip(&ritz).enumerate() {
                assert!(
                    (a - b).abs() < 1e-5,
                    "gamma={gamma} delta={delta} j={j}: {a} vs {b}"
                );
            }
        }
    }
}

#[test]
fn larger_gamma_raises_every_level() {
    for delta in [-2.0, 0.0, 2.0] {
        let low = spectrum(
            &DimensionlessModel::new(0.5, delta).unwrap(),
            4,
            DEFAULT_TOL,
        )
        .unwrap()
        .values();
        let high = spectrum(
            &DimensionlessModel::new(1.5, delta).unwrap(),
            4,
            DEFAULT_TOL,
        )
        .unwrap()
        .values();
        assert!(low.iter().zip(&high).all(|(a, b)| a < b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_w_matches_theta_condition(n in 0usize..6, gamma in 0.0f64..4.0) {
        for sol in frobenius::all_solutions(n as i64, gamma).unwrap() {
            let theta = frobenius::theta_of(gamma, sol.delta_root, sol.w);
            prop_assert!((theta - 2.0 * n as f64).abs() < 1e-10 * (1.0 + sol.w.abs()));
        }
    }

    #[test]
    fn ladder_at_zero_delta(gamma in 0.0f64..4.0) {
        let values = spectrum(&DimensionlessModel::new(gamma, 0.0).unwrap(), 4, DEFAULT_TOL).unwrap().values();
        for (j, w) in values.iter().enumerate() {
            assert_relative_eq!(*w, 4.0 * j as f64 + 2.0 * gamma + 2.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn levels_are_ordered_and_increasing_in_delta(gamma in 0.0f64..3.0, delta in -4.0f64..4.0) {
        let solver = RitzSolver::new(gamma, 80).unwrap();
        let a = solver.spectrum(delta, 4, DEFAULT_TOL).unwrap().values();
        let b = solver.spectrum(delta + 0.05, 4, DEFAULT_TOL).unwrap().values();
        prop_assert!(a.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(a.iter().zip(&b).all(|(x, y)| x < y));
    }
}
