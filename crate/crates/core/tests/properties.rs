use approx::assert_relative_eq;
use proptest::prelude::*;

use markov_l2::diffops::{b_matrix, c_matrix, diff_coeffs};
use markov_l2::linalg::{dense_sym_eigen_extreme, dense_sym_eigenvalues, Extreme};
use markov_l2::markov::{dorfler_bounds, restricted_threshold};
use markov_l2::verify::{check_am_inequality, closure_ratio, PolySample};
use markov_l2::{markov_constant, Route, Weight};

fn weight() -> impl Strategy<Value = Weight> {
    prop_oneof![
        Just(Weight::Hermite),
        (-0.95f64..6.0).prop_map(|s| Weight::Laguerre { s }),
        ((-0.95f64..4.0), (-0.95f64..4.0)).prop_map(|(alpha, beta)| Weight::Jacobi { alpha, beta }),
        (-0.95f64..4.0).prop_map(|a| Weight::Jacobi { alpha: a, beta: a }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn b_and_c_spectra_are_reciprocal(w in weight(), n in 1usize..30, k in 1usize..4) {
        prop_assume!(k <= n);
        let set = diff_coeffs(w, n, k).unwrap();
        let bmax = dense_sym_eigen_extreme(&b_matrix(&set), Extreme::Max).unwrap().value;
        let c = dense_sym_eigenvalues(&c_matrix(&set).unwrap()).unwrap();
        prop_assert!(c[0] > 0.0);
        // lambda_min read off the stored entries of C is only good to
        // eps * ||C||; the solver's factored value is good to eps.
        let cmin = markov_constant(w, n, k, Route::C).unwrap().eigenvalue;
        prop_assert!((bmax * cmin - 1.0).abs() < 1e-9, "{}", bmax * cmin);
        prop_assert!((c[0] / cmin - 1.0).abs() < 1e-15 * c[c.len() - 1] / cmin + 1e-12);
    }

    #[test]
    fn every_route_agrees_and_closes(w in weight(), n in 1usize..22, k in 1usize..4) {
        prop_assume!(k <= n);
        let a = markov_constant(w, n, k, Route::Auto).unwrap();
        let b = markov_constant(w, n, k, Route::B).unwrap();
        let c = markov_constant(w, n, k, Route::C).unwrap();
        prop_assert!((a.constant / b.constant - 1.0).abs() < 1e-9);
        prop_assert!((a.constant / c.constant - 1.0).abs() < 1e-9);
        prop_assert!((closure_ratio(&a).unwrap() - 1.0).abs() < 1e-9);
        let last = a.extremal_coeffs.iter().rev().find(|x| x.abs() > 1e-12).unwrap();
        prop_assert!(*last > 0.0);
    }

    #[test]
    fn constants_grow_with_degree(w in weight(), n in 1usize..25, k in 1usize..3) {
        prop_assume!(k <= n);
        let m0 = markov_constant(w, n, k, Route::Auto).unwrap().constant;
        let m1 = markov_constant(w, n + 1, k, Route::Auto).unwrap().constant;
        prop_assert!(m1 >= m0 * (1.0 - 1e-12));
    }

    #[test]
    fn am_inequality_holds(w in weight(), coeffs in prop::collection::vec(-1.0f64..1.0, 2..13)) {
        let n = coeffs.len() - 1;
        let r = check_am_inequality(&PolySample::new(w, coeffs).unwrap(), n).unwrap();
        prop_assert!(r.holds(1e-9), "{r:?}");
    }

    #[test]
    fn dorfler_brackets(n in 1usize..60, s in -0.9f64..5.0) {
        let r = dorfler_bounds(n, s).unwrap();
        let m = markov_constant(Weight::Laguerre { s }, n, 1, Route::Auto).unwrap().constant;
        prop_assert!(r.brackets(m, 1e-13), "{r:?} vs {m}");
    }
}

#[test]
fn thresholds_decrease_to_limit() {
    let limit = (17f64.sqrt() - 3.0) / 2.0;
    let far = restricted_threshold(1_000_000).unwrap();
    assert!(far > limit);
    assert_relative_eq!(far, limit, max_relative = 1e-5);
}

#[test]
fn large_degree_jacobi_stays_consistent() {
    let w = Weight::Jacobi { alpha: 2.5, beta: -0.3 };
    let r = markov_constant(w, 120, 2, Route::Auto).unwrap();
    assert_relative_eq!(closure_ratio(&r).unwrap(), 1.0, max_relative = 1e-9);
}
