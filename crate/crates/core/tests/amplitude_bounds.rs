mod common;

use common::*;
use proptest::prelude::*;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use wavebound::amplitude_bounds::*;
use wavebound::stream_flows::depth_pair;
use wavebound::{Error, FluidParams};

/// Nonzero root of `Q(sqrt 2 - delta) - eps sqrt 2` by plain bisection.
fn delta_oracle(eps: f64) -> f64 {
    let f = |d: f64| q_tilde(SQRT_2 - d, eps) - eps * SQRT_2;
    let mut lo = 2.0 * eps;
    while f(lo) > 0.0 {
        lo *= 0.5;
    }
    bisection(f, lo, 2.0 * eps)
}

#[test]
fn theorem_bound_examples() {
    let b = theorem_bound(&FluidParams::new(9.81, 3.0, 1.0).unwrap());
    assert!((b - 2.18).abs() < 1e-14);
    assert_eq!(
        theorem_bound(&FluidParams::new(1.0, 1.0, 1.0).unwrap()),
        2.0
    );
    for w in [0.3, 1.0, 7.0] {
        let a = theorem_bound(&FluidParams::new(2.5, w, 1.0).unwrap());
        let b = theorem_bound(&FluidParams::new(2.5, 2.0 * w, 1.0).unwrap());
        assert_eq!(b / a, 0.25);
    }
}

#[test]
fn delta_root_examples() {
    let d = delta_root(0.1_f64).unwrap();
    assert!((d - 0.1747).abs() < 1e-3);
    assert!((d - delta_oracle(0.1)).abs() < 1e-12);
    assert!((SQRT_2 - d - 1.2397).abs() < 1e-3);
    assert!(matches!(
        delta_root(FRAC_1_SQRT_2),
        Err(Error::LargeEpsilon { .. })
    ));
    assert!(matches!(delta_root(1.0), Err(Error::LargeEpsilon { .. })));
}

#[test]
fn refined_bound_examples() {
    let b = refined_bound(&FluidParams::new(1.0, 1.0, 1.0).unwrap()).unwrap();
    assert_eq!(b.branch, BoundBranch::LargeEpsilon);
    let d1 = bisection(|d| q_tilde(d, 1.0) - SQRT_2, 0.1, 1.0);
    assert!((b.d_tilde_1 - d1).abs() < 1e-12);
    assert!((b.d_tilde_1 - 0.639132).abs() < 1e-6);
    assert!((b.refined_bound - 0.775081).abs() < 1e-6);
    assert!(b.refined_bound < b.theorem_bound);

    let b = refined_bound(&FluidParams::new(0.1, 1.0, 1.0).unwrap()).unwrap();
    assert_eq!(b.branch, BoundBranch::SmallEpsilon);
    assert!((b.refined_bound - 0.1747).abs() < 1e-3);
    assert!((b.theorem_bound - 0.2).abs() < 1e-15);
}

#[test]
fn proof_identity_examples() {
    let r = proof_inequality_check(0.3, 1000).unwrap();
    assert_eq!(r.samples, 1000);
    assert!(r.max_identity_residual < 1e-12);
    assert!(r.min_remainder > 0.0 && r.max_violation < 0.0);

    let delta = SQRT_2 / 2.0;
    let lhs = q_tilde(SQRT_2 - delta, 0.1) - 0.1 * SQRT_2;
    assert!((lhs - (-0.1 * delta + 0.5 * delta * delta) - 0.3125).abs() < 1e-14);

    let tiny = 1e-8;
    let lhs = q_tilde(SQRT_2 - tiny, 0.3) - 0.3 * SQRT_2;
    assert!(lhs.abs() < 1e-8 && (-0.3 * tiny + 0.5 * tiny * tiny).abs() < 1e-8);
}

#[test]
fn refined_bound_decays_like_inverse_square() {
    let mut scaled = Vec::new();
    for i in 0..50 {
        let w = 0.5 * 200f64.powf(i as f64 / 49.0);
        let b = refined_bound(&FluidParams::new(1.0, w, 1.0).unwrap()).unwrap();
        assert!(b.refined_bound < b.theorem_bound);
        assert_eq!(b.branch, BoundBranch::for_epsilon(b.epsilon));
        scaled.push(b.refined_bound * w * w);
    }
    assert!(scaled.iter().all(|v| *v > 0.0 && *v < 2.0));
    // approaches the theorem constant 2g from below as epsilon -> 0
    assert!(scaled.last().unwrap() > &1.9);
}

#[test]
fn delta_root_increases_with_epsilon() {
    let mut last = 0.0;
    for i in 1..100 {
        let eps = FRAC_1_SQRT_2 * i as f64 / 100.0;
        let d = delta_root(eps).unwrap();
        assert!(d > last);
        last = d;
    }
}

#[test]
fn single_precision_bound() {
    let b = refined_bound(&wavebound::FluidParams32::new(0.1, 1.0, 1.0).unwrap()).unwrap();
    assert!((b.refined_bound - 0.1747).abs() < 1e-3);
    assert!(b.refined_bound < b.theorem_bound);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn delta_root_contract(eps in 0.01f64..(FRAC_1_SQRT_2 - 0.01)) {
        let d = delta_root(eps).unwrap();
        prop_assert!(d > 0.0 && d < 2.0 * eps);
        prop_assert!((d - delta_oracle(eps)).abs() < 1e-11);
        // at the root the lower estimate is negative, so the inequality holds strictly
        prop_assert!(-eps * d + 0.5 * d * d < 0.0);
        let unit = FluidParams::new(eps, 1.0, 1.0).unwrap();
        let pair = depth_pair(eps * SQRT_2, &unit).unwrap();
        prop_assert!((SQRT_2 - d - pair.d_minus).abs() < 1e-10);
    }

    #[test]
    fn refined_is_sharper(g in 0.01f64..50.0, w in 0.05f64..50.0, m in 0.01f64..50.0) {
        let b = refined_bound(&FluidParams::new(g, w, m).unwrap()).unwrap();
        prop_assert!(b.refined_bound > 0.0 && b.refined_bound < b.theorem_bound);
        prop_assert!(b.d_tilde_1 > 0.0 && b.d_tilde_1 < SQRT_2);
        prop_assert_eq!(b.branch == BoundBranch::SmallEpsilon, b.epsilon < FRAC_1_SQRT_2);
    }

    #[test]
    fn expansion_identity(eps in 0.001f64..10.0) {
        let r = proof_inequality_check(eps, 200).unwrap();
        prop_assert!(r.max_identity_residual < 1e-12);
        prop_assert!(r.min_remainder > 0.0);
    }
}
