mod common;

use common::*;
use proptest::prelude::*;
use std::f64::consts::SQRT_2;
use wavebound::scaling::*;
use wavebound::stream_flows::{bernoulli_of_s, depth_of_s};
use wavebound::wave::{solve_periodic, stream_height, ResidualNorms};
use wavebound::{FluidParams, SolverConfig, WaveField};

#[test]
fn nondimensionalize_examples() {
    let nd = nondimensionalize(&FluidParams::new(1.0, 1.0, 1.0).unwrap(), None);
    assert_eq!((nd.epsilon, nd.lambda, nd.q_tilde), (1.0, 1.0, None));
    let nd = nondimensionalize(&FluidParams::new(9.81, 2.0, 4.0).unwrap(), None);
    assert!((nd.epsilon - 1.7342).abs() < 1e-4);
    assert!((nd.lambda - 0.5f64.sqrt()).abs() < 1e-15);
    let nd = nondimensionalize(&FluidParams::new(1.0, 4.0, 1.0).unwrap(), Some(2.0));
    assert_eq!(nd.q_tilde, Some(0.5));
}

#[test]
fn nondimensional_depth_examples() {
    assert!((d_tilde_of_s(SQRT_2).unwrap() - SQRT_2).abs() < 1e-15);
    assert!((d_tilde_of_s(1.5_f64).unwrap() - 1.0).abs() < 1e-15);
    assert!((d_tilde_of_s(3.0).unwrap() - (3.0 - 7f64.sqrt())).abs() < 1e-15);
    assert!(d_tilde_of_s(1.4).is_err());
    let unit = FluidParams::new(1.0, 1.0, 1.0).unwrap();
    assert!(rel(d_tilde_of_s(1.5).unwrap(), depth_by_quadrature(1.5, &unit)) < 1e-12);

    assert!((s_of_d_tilde(1.0_f64).unwrap() - 1.5).abs() < 1e-15);
    assert!((s_of_d_tilde(SQRT_2 * (1.0 - 1e-12)).unwrap() - SQRT_2).abs() < 1e-11);
    for d in [0.0, -1.0, SQRT_2, 2.0] {
        assert!(s_of_d_tilde(d).is_err());
    }
}

#[test]
fn bernoulli_examples() {
    assert!((q_tilde_of_d(SQRT_2, 0.1).unwrap() - 0.1 * SQRT_2).abs() < 1e-15);
    assert!((q_tilde_of_d(1.0_f64, 1.0).unwrap() - 1.125).abs() < 1e-15);
    assert!((q_tilde_of_d(1.24_f64, 0.1).unwrap() - 0.141382).abs() < 1e-6);
    assert!(q_tilde_of_d(0.0, 0.1).is_err() && q_tilde_of_d(1.5, 0.1).is_err());
}

#[test]
fn endpoint_identity() {
    for eps in [1e-3, 0.1, 0.5, 1.0, 7.0, 100.0] {
        assert!((q_tilde_of_d(SQRT_2, eps).unwrap() - eps * SQRT_2).abs() < 1e-14 * eps.max(1.0));
    }
}

#[test]
fn inverse_maps_on_samples() {
    for i in 0..200 {
        let d = 0.01 + (SQRT_2 - 0.02) * (i as f64 + 0.5) / 200.0;
        let back = d_tilde_of_s(s_of_d_tilde(d).unwrap()).unwrap();
        assert!((back - d).abs() < 1e-12, "{d}: {back}");
        let s = SQRT_2 + 0.01 + 5.0 * i as f64 / 200.0;
        let back = s_of_d_tilde(d_tilde_of_s(s).unwrap()).unwrap();
        assert!(rel(back, s) < 1e-12);
    }
}

#[test]
fn unit_parameters_match_dimensional_module() {
    let p = FluidParams::new(1.0, 1.0, 1.0).unwrap();
    for i in 0..100 {
        let s = SQRT_2 + 1e-3 + 4.0 * i as f64 / 100.0;
        let d = d_tilde_of_s(s).unwrap();
        assert!((q_tilde_of_d(d, 1.0).unwrap() - bernoulli_of_s(s, &p).unwrap()).abs() < 1e-12);
    }
}

fn wave_for(p: &FluidParams) -> WaveField {
    let (_, l) = wavebound::wave::mid_window_wavelength(p).unwrap();
    solve_periodic(p, l, 0.003 * p.d0(), None, &SolverConfig::with_grid(32, 41)).unwrap()
}

#[test]
fn wave_rescaling() {
    let p = FluidParams::new(2.0, 3.0, 0.7).unwrap();
    let lam = nondimensionalize(&p, None).lambda;

    // the d0 stream has a stagnant surface, so its residual is not evaluated
    let field = stream_height(&p, p.s0(), 1.0, 8, 5).unwrap();
    let flat = WaveField {
        eta: field.surface().to_vec(),
        field,
        residual: ResidualNorms {
            interior: 0.0,
            surface: 0.0,
        },
    };
    let nd = map_wave_to_nondim(&flat, &p).unwrap();
    assert!(nd.eta.iter().all(|e| (e - SQRT_2).abs() < 1e-14));

    let w = wave_for(&p);
    let nd = map_wave_to_nondim(&w, &p).unwrap();
    assert_eq!(nd.field.params, nondim_fluid(&p));
    assert!(rel(nd.nodal_amplitude(), lam * w.nodal_amplitude()) < 1e-13);
    let back = map_wave_from_nondim(&nd, &p).unwrap();
    for (a, b) in back.field.values.iter().zip(&w.field.values) {
        assert!((a - b).abs() <= 1e-13 * b.abs());
    }
    assert!(rel(back.bernoulli(), w.bernoulli()) < 1e-13);
    assert!(rel(back.wavelength(), w.wavelength()) < 1e-13);

    // the rescaled field solves the rescaled problem
    let r = wavebound::wave::height_residual(&nd.field).unwrap();
    assert!(
        r.norms.interior < 1e-9 && r.norms.surface < 1e-9,
        "{:?}",
        r.norms
    );

    assert!(map_wave_to_nondim(&w, &FluidParams::new(1.0, 1.0, 1.0).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scaling_covariance(g in 0.05f64..20.0, w in 0.05f64..20.0, m in 0.05f64..20.0, t in 1e-4f64..4.0) {
        let p = FluidParams::new(g, w, m).unwrap();
        let nd = nondimensionalize(&p, None);
        let s = p.s0() * (1.0 + t);
        let d = depth_of_s(s, &p).unwrap();
        let dt = d_tilde_of_s(s / (m * w).sqrt()).unwrap();
        prop_assert!(rel(nd.lambda * d, dt) < 1e-10);
        let q = bernoulli_of_s(s, &p).unwrap();
        let qt = q_tilde_of_d(dt, nd.epsilon).unwrap();
        prop_assert!((q / (m * w) - qt).abs() < 1e-10 * qt.abs().max(1.0));
        prop_assert_eq!(nondimensionalize(&p, Some(q)).q_tilde, Some(q / (m * w)));
    }
}
