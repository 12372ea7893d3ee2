use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xwave_core::medium::MediumParams;
use xwave_core::propagate::propagate_direct;
use xwave_core::xwave::*;
use xwave_core::C64;

fn medium() -> MediumParams {
    MediumParams::new(2.0, 1.3, 2.0, 0.5, 0.3).unwrap()
}

fn spectrum(p: usize, delta: f64) -> XWaveSpectrum {
    XWaveSpectrum::new(p, medium(), delta).unwrap()
}

#[test]
fn fundamental_matches_laplace_hankel_closed_form() {
    let params = medium();
    let delta = 0.8;
    let beta = params.transverse_scale();
    let n = (params.k / (PI * PI * params.omega1)).sqrt();
    let rule = oscillatory_alpha_rule(delta, 0, 3.0 * delta, 3.0 * delta).unwrap();
    for &v in &[0.0, -0.05, 0.1] {
        for &(r, zeta) in &[(0.0, 0.0), (0.3, -1.2), (2.0 * delta / beta, 2.0 * delta), (1.1, 0.4)] {
            let s = C64::new(delta, -zeta);
            let exact = n * delta * s / (s * s + beta * beta * r * r).sqrt().powi(3)
                * C64::from_polar(1.0, -v * zeta / params.omega2);
            let value = eval_field(&spectrum(0, delta), v, r, zeta, &rule).unwrap();
            assert!((value - exact).norm() <= 1e-10 * exact.norm(), "{value} vs {exact}");
        }
    }
}

#[test]
fn fields_decay_far_from_the_axis() {
    let params = MediumParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    let delta = 1.0;
    let radius = |multiple: f64| multiple * delta / params.transverse_scale();
    let rule = oscillatory_alpha_rule(delta, 4, params.transverse_scale() * radius(400.0), 0.0).unwrap();
    for p in 0..=4 {
        let field = BasisField::new(&XWaveSpectrum::new(p, params, delta).unwrap(), 0.02, &rule);
        let far = field.eval(radius(200.0), 0.0).norm();
        assert!(far <= 1e-6, "p = {p}: {far}");
        // Transverse tails fall off as r^-3.
        let ratio = field.eval(radius(400.0), 0.0).norm() / far;
        assert!((ratio - 0.125).abs() < 0.01, "p = {p}: {ratio}");
    }
}

#[test]
fn static_modes_are_hermitian_in_zeta() {
    let delta = 1.3;
    let rule = oscillatory_alpha_rule(delta, 3, 4.0, 4.0).unwrap();
    for p in 0..=3 {
        let field = BasisField::new(&spectrum(p, delta), 0.0, &rule);
        for &(r, z) in &[(0.5, 0.7), (1.5, 3.0), (0.0, 2.2)] {
            let a = field.eval(r, z);
            let b = field.eval(r, -z);
            assert!((a - b.conj()).norm() <= 1e-14 * a.norm().max(1e-300));
        }
        // On the axis at ζ′ = 0 the field is real.
        assert!(field.eval(0.0, 0.0).im.abs() < 1e-15);
    }
}

#[test]
fn grid_evaluation_agrees_with_pointwise() {
    let spec = spectrum(2, 1.0);
    let grid = FieldGrid::uniform(3.0, 5, -3.0, 3.0, 7).unwrap();
    let env = eval_field_grid(&spec, 0.04, &grid).unwrap();
    let rule = oscillatory_alpha_rule(1.0, 2, medium().transverse_scale() * 3.0, 3.0).unwrap();
    for (i, &r) in grid.r.nodes().iter().enumerate() {
        for (j, &z) in grid.zeta.nodes().iter().enumerate() {
            let point = eval_field(&spec, 0.04, r, z, &rule).unwrap();
            assert!((env.values[[i, j]] - point).norm() < 1e-12);
        }
    }
}

fn basis(delta: f64, p_max: usize) -> BasisConfig {
    BasisConfig::new(delta, p_max, VelocityGrid::new(0.2, 21).unwrap()).unwrap()
}

#[test]
fn projection_is_idempotent() {
    let params = medium();
    let cfg = basis(1.0, 10);
    // Deliberately outside the span, so the first projection truncates.
    let x = |a: f64, v: f64| C64::new(a * (-(a - 1.5).powi(2)).exp(), v * a / (1.0 + a * a));
    let first = project_coefficients(x, &cfg, &params).unwrap();
    let rec = reconstruct(&first.coefficients, &params, cfg.delta);
    let second = project_coefficients(&rec, &cfg, &params).unwrap();
    assert!(first.relative_residual > 1e-6);
    assert!(second.relative_residual < 1e-10);
    for (a, b) in first.coefficients.coeffs.iter().zip(second.coefficients.coeffs.iter()) {
        assert!((a - b).norm() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn smooth_spectra_round_trip() {
    let params = medium();
    let delta = 2.0;
    let cfg = basis(delta, 24);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let eps: f64 = rng.random_range(-0.2..0.2);
        let phase: f64 = rng.random_range(0.0..PI);
        let x = move |a: f64, v: f64| C64::from_polar(a * delta * (-a * delta * (1.0 + eps)).exp(), phase * v);
        let proj = project_coefficients(x, &cfg, &params).unwrap();
        assert!(proj.relative_residual <= 1e-6, "{}", proj.relative_residual);
        assert!(proj.within(1e-6).is_ok());
    }
}

#[test]
fn transform_is_a_change_of_variables() {
    let params = medium();
    let g = GaussianSpectrum {
        amplitude: C64::new(0.7, -0.2),
        kperp_width: 0.3,
        kz_center: 0.1,
        kz_width: 0.4,
    };
    let x = xwave_transform(&g, &params);
    let beta = params.transverse_scale();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let alpha: f64 = rng.random_range(0.0..1.0);
        let v: f64 = rng.random_range(-0.2..0.2);
        let expected = g.amplitude(beta * alpha, alpha - v / params.omega2) * (params.k * alpha / params.omega1);
        assert!((x.eval(alpha, v) - expected).norm() <= 1e-14 * expected.norm().max(1e-300));
        let (kp, kz) = wavenumbers(&params, alpha, v);
        let (a2, v2) = transform_coordinates(&params, kp, kz);
        assert!((a2 - alpha).abs() < 1e-13 && (v2 - v).abs() < 1e-13);
    }
}

#[test]
fn energy_is_quadratic() {
    let params = MediumParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    let g = GaussianSpectrum {
        amplitude: C64::new(1.0, 0.0),
        kperp_width: 0.05,
        kz_center: 0.0,
        kz_width: 0.1,
    };
    let grid = FieldGrid::gauss(200.0, 32, -100.0, 100.0, 80).unwrap();
    let field = propagate_direct(&g, 0.0, &params, &grid).unwrap();
    let e = energy(&field);
    assert!(e > 0.0);
    assert!((energy(&field.scaled(C64::new(2.0, 0.0))) - 4.0 * e).abs() <= 1e-14 * e);
    assert_eq!(energy(&FieldEnvelope::zeros(grid)), 0.0);
}

#[test]
fn centroid_sets_the_reference_length() {
    let params = MediumParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    let g = GaussianSpectrum {
        amplitude: C64::new(1.0, 0.0),
        kperp_width: 0.01,
        kz_center: 0.0,
        kz_width: 0.02,
    };
    // ⟨k⊥⟩ under k⊥ e^{−k⊥²/σ²} is σ·sqrt(π)/2.
    let delta = delta_from_centroid(&g, &params).unwrap();
    let expected = 2.0 / (0.01 * PI.sqrt());
    assert!((delta - expected).abs() < 1e-8 * expected, "{delta} vs {expected}");
}

proptest! {
    #[test]
    fn spectra_vanish_at_the_origin_and_decay(p in 0usize..30, delta in 0.1f64..10.0) {
        let spec = spectrum(p, delta);
        prop_assert_eq!(spec.eval(0.0).unwrap(), 0.0);
        let far = spec.eval((4.0 * (p as f64 + 1.0) + 40.0) / delta).unwrap();
        prop_assert!(far.abs() < 1e-10);
    }

    #[test]
    fn gram_is_diagonal(p in 0usize..12, q in 0usize..12, delta in 0.2f64..5.0) {
        let params = medium();
        let cfg = basis(delta, 12);
        let value = orthonormality_integral(p, q, &cfg, &params).unwrap();
        let norm = spectral_norm(&params);
        let expected = if p == q { norm } else { 0.0 };
        prop_assert!((value - expected).abs() <= 1e-8 * norm);
    }
}
