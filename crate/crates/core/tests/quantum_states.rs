use proptest::prelude::*;
use xwave_core::fixtures::unit_medium;
use xwave_core::medium::{effective_mass, vacuum_params, Constants, MediumParams};
use xwave_core::quantum::*;
use xwave_core::xwave::FieldGrid;
use xwave_core::C64;

fn spatial_integral(density: &ndarray::Array2<f64>, grid: &FieldGrid) -> f64 {
    let mut total = 0.0;
    for (i, (&r, &wr)) in grid.r.nodes().iter().zip(grid.r.weights()).enumerate() {
        for (j, &wz) in grid.zeta.weights().iter().enumerate() {
            total += 2.0 * std::f64::consts::PI * r * wr * wz * density[[i, j]];
        }
    }
    total
}

#[test]
fn fock_density_is_scaled_classical_intensity() {
    let params = MediumParams::new(2.0, 1.3, 2.0, 0.5, 0.3).unwrap();
    let constants = Constants::natural();
    let grid = FieldGrid::gauss(5.0, 12, -5.0, 5.0, 14).unwrap();
    let mode = ModeIndex { p: 2, v: -0.08 };
    let intensity = classical_intensity(&mode, 1.0, &params, &grid).unwrap();
    let quantum = constants.hbar * mode_frequency(&mode, &params);
    for n in 0..3 {
        let density = fock_energy_density(&GaussianModeState::fock(2, -0.08, n), 1.0, &params, &constants, &grid).unwrap();
        for (d, i) in density.iter().zip(intensity.iter()) {
            assert!((d - n as f64 * quantum * i).abs() <= 1e-15 * d.abs().max(1e-300));
        }
    }
    let slow = fock_energy_density(&GaussianModeState::fock(0, 0.0, 1), 1.0, &params, &constants, &grid).unwrap();
    assert!(slow.iter().all(|&d| d == 0.0));
}

#[test]
fn fock_energy_grows_with_the_window() {
    // |p, 1, v⟩ is not normalizable: its integrated energy keeps growing.
    let params = unit_medium();
    let constants = Constants::natural();
    let state = GaussianModeState::fock(0, 0.1, 1);
    let totals: Vec<f64> = [10.0, 40.0, 160.0]
        .iter()
        .map(|&size| {
            let grid = FieldGrid::gauss(size, 48, -size, size, 48).unwrap();
            let density = fock_energy_density(&state, 1.0, &params, &constants, &grid).unwrap();
            spatial_integral(&density, &grid)
        })
        .collect();
    assert!(totals.windows(2).all(|w| w[1] > 1.5 * w[0]), "{totals:?}");
}

#[test]
fn coherent_states_have_finite_energy_and_moving_mean() {
    let params = unit_medium();
    let constants = Constants::natural();
    let grid = FieldGrid::gauss(4.0, 6, -4.0, 4.0, 8).unwrap();
    let vacuum = coherent_expectations(&GaussianModeState::coherent(1, 0.1, C64::new(0.0, 0.0)), 1.0, &params, &constants, &grid, 5.0).unwrap();
    assert_eq!(vacuum.energy, 0.0);
    assert!(vacuum.mean_field.values.iter().all(|a| a.norm() == 0.0));

    let state = GaussianModeState::coherent(1, 0.1, C64::new(1.5, -2.0));
    let out = coherent_expectations(&state, 1.0, &params, &constants, &grid, 5.0).unwrap();
    assert!((out.energy - 0.005 * 6.25).abs() < 1e-15);
    assert!(out.mean_field.values.iter().all(|a| a.re.is_finite() && a.im.is_finite()));

    let fock = mean_field(&GaussianModeState::fock(1, 0.1, 3), 1.0, &params, &constants, &grid, 5.0).unwrap();
    assert!(fock.values.iter().all(|a| a.norm() == 0.0));
}

#[test]
fn si_energies_carry_hbar() {
    let constants = Constants::si();
    let params = vacuum_params(2.4e15, &constants).unwrap();
    let state = GaussianModeState::coherent(0, 1e5, C64::new(2.0, 0.0));
    let e = coherent_energy(&state, &params, &constants).unwrap();
    let m = effective_mass(&params, &constants);
    assert!((e - 4.0 * 0.5 * m * 1e10).abs() <= 1e-14 * e);
}

proptest! {
    #[test]
    fn mode_frequency_is_even_and_index_free(v in -0.5f64..0.5, p in 0usize..50, q in 0usize..50) {
        let params = MediumParams::new(1.0, 1.0, 1.0, 1.0, 0.7).unwrap();
        let a = mode_frequency(&ModeIndex { p, v }, &params);
        prop_assert_eq!(a, mode_frequency(&ModeIndex { p: q, v: -v }, &params));
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn coherent_energy_is_quadratic_in_amplitude(v in -0.3f64..0.3, re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let params = unit_medium();
        let constants = Constants::natural();
        let a = C64::new(re, im);
        let e1 = coherent_energy(&GaussianModeState::coherent(0, v, a), &params, &constants).unwrap();
        let e2 = coherent_energy(&GaussianModeState::coherent(0, v, a * 2.0), &params, &constants).unwrap();
        prop_assert!(e1.is_finite());
        prop_assert!((e2 - 4.0 * e1).abs() <= 1e-14 * e2.max(1e-300));
    }
}
