//! Observables of the quantized X-wave oscillators.
//!
//! Each basis X-wave `ψ_p^v` is a free oscillator of frequency
//! `ω_p(v) = v²/2ω″`, i.e. a quasi-particle of kinetic energy `mv²/2` with
//! `m = ħ/ω″`. Only closed-form expectation values are computed here; there
//! is no operator algebra. Zero-point energy is omitted.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::medium::{Constants, MediumParams};
use crate::xwave::{oscillatory_alpha_rule, BasisField, FieldEnvelope, FieldGrid, XWaveSpectrum};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIndex {
    pub p: usize,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateKind {
    Fock { n: u32 },
    Coherent { alpha: C64 },
}

/// A single occupied mode `(p, v)`; every other mode is in its vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianModeState {
    pub kind: StateKind,
    pub mode: ModeIndex,
}

impl GaussianModeState {
    pub fn fock(p: usize, v: f64, n: u32) -> Self {
        Self {
            kind: StateKind::Fock { n },
            mode: ModeIndex { p, v },
        }
    }

    pub fn coherent(p: usize, v: f64, alpha: C64) -> Self {
        Self {
            kind: StateKind::Coherent { alpha },
            mode: ModeIndex { p, v },
        }
    }
}

/// `ω_p(v) = v²/2ω″`, the same for every `p`.
pub fn mode_frequency(mode: &ModeIndex, params: &MediumParams) -> f64 {
    mode.v * mode.v / (2.0 * params.omega2)
}

/// Basis X-wave of a mode, tabulated on an α-rule that resolves `grid`.
fn basis_field(mode: &ModeIndex, delta: f64, params: &MediumParams, grid: &FieldGrid, t: f64) -> Result<BasisField> {
    if !mode.v.is_finite() {
        return Err(Error::domain("mode velocity must be finite"));
    }
    let spec = XWaveSpectrum::new(mode.p, *params, delta)?;
    let rule = oscillatory_alpha_rule(
        delta,
        mode.p,
        params.transverse_scale() * grid.r_max(),
        grid.zeta_abs_max() + (mode.v * t).abs(),
    )?;
    Ok(BasisField::new(&spec, mode.v, &rule))
}

/// Classical intensity `|ψ_p^v(r, ζ)|²` at `t = 0` on `grid`.
pub fn classical_intensity(mode: &ModeIndex, delta: f64, params: &MediumParams, grid: &FieldGrid) -> Result<Array2<f64>> {
    let field = basis_field(mode, delta, params, grid, 0.0)?;
    let env = FieldEnvelope::from_fn(grid.clone(), |r, z| field.eval(r, z));
    Ok(env.values.mapv(|z| z.norm_sqr()))
}

/// `⟨A†A⟩ = n·ħω_p(v)·|ψ_p^v(r, ζ)|²` for a Fock state at `t = 0`.
///
/// Its integral over space grows without bound with the grid, since
/// `|p, n, v⟩` is not normalizable.
pub fn fock_energy_density(
    state: &GaussianModeState,
    delta: f64,
    params: &MediumParams,
    constants: &Constants,
    grid: &FieldGrid,
) -> Result<Array2<f64>> {
    let StateKind::Fock { n } = state.kind else {
        return Err(Error::domain("fock_energy_density needs a Fock state"));
    };
    let quantum = n as f64 * constants.hbar * mode_frequency(&state.mode, params);
    Ok(classical_intensity(&state.mode, delta, params, grid)?.mapv(|i| quantum * i))
}

/// Mean field and energy of a coherent state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentExpectations {
    /// `⟨A⟩(r, Z, t) = sqrt(ħω)·α·e^{−iωt}·ψ_p^v(r, Z − vt)`.
    pub mean_field: FieldEnvelope,
    /// `ħω|α|²`.
    pub energy: f64,
}

/// `ħω_p(v)|α|²`, finite for every finite `α`.
pub fn coherent_energy(state: &GaussianModeState, params: &MediumParams, constants: &Constants) -> Result<f64> {
    let StateKind::Coherent { alpha } = state.kind else {
        return Err(Error::domain("coherent_energy needs a coherent state"));
    };
    Ok(constants.hbar * mode_frequency(&state.mode, params) * alpha.norm_sqr())
}

/// `⟨A⟩` on `grid` at time `t` (co-moving `Z`). Fock states have zero mean.
pub fn mean_field(
    state: &GaussianModeState,
    delta: f64,
    params: &MediumParams,
    constants: &Constants,
    grid: &FieldGrid,
    t: f64,
) -> Result<FieldEnvelope> {
    match state.kind {
        StateKind::Fock { .. } => Ok(FieldEnvelope::zeros(grid.clone())),
        StateKind::Coherent { alpha } => {
            let omega = mode_frequency(&state.mode, params);
            let amplitude = alpha * (constants.hbar * omega).sqrt() * C64::from_polar(1.0, -omega * t);
            let field = basis_field(&state.mode, delta, params, grid, t)?;
            let v = state.mode.v;
            Ok(FieldEnvelope::from_fn(grid.clone(), |r, z| amplitude * field.eval(r, z - v * t)))
        }
    }
}

pub fn coherent_expectations(
    state: &GaussianModeState,
    delta: f64,
    params: &MediumParams,
    constants: &Constants,
    grid: &FieldGrid,
    t: f64,
) -> Result<CoherentExpectations> {
    let energy = coherent_energy(state, params, constants)?;
    let mean_field = mean_field(state, delta, params, constants, grid, t)?;
    Ok(CoherentExpectations { mean_field, energy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::unit_medium;

    #[test]
    fn frequencies() {
        let p = unit_medium();
        assert_eq!(mode_frequency(&ModeIndex { p: 0, v: 0.0 }, &p), 0.0);
        assert_eq!(mode_frequency(&ModeIndex { p: 3, v: 1.0 }, &p), 0.5);
        for v in [-0.3, 0.1, 0.25] {
            let a = mode_frequency(&ModeIndex { p: 0, v }, &p);
            assert_eq!(a, mode_frequency(&ModeIndex { p: 7, v: -v }, &p));
        }
        // ħω = mv²/2 with m = ħ/ω″.
        let q = MediumParams::new(1.0, 1.0, 1.0, 1.0, 0.4).unwrap();
        let c = Constants::natural();
        let v = 0.3;
        let m = crate::medium::effective_mass(&q, &c);
        let lhs = c.hbar * mode_frequency(&ModeIndex { p: 0, v }, &q);
        assert!((lhs - m * v * v / 2.0).abs() < 1e-16);
    }

    #[test]
    fn vacuum_and_slow_modes_carry_nothing() {
        let p = unit_medium();
        let c = Constants::natural();
        let grid = FieldGrid::gauss(5.0, 4, -5.0, 5.0, 5).unwrap();
        let vac = fock_energy_density(&GaussianModeState::fock(1, 0.1, 0), 1.0, &p, &c, &grid).unwrap();
        assert!(vac.iter().all(|&x| x == 0.0));
        let slow = fock_energy_density(&GaussianModeState::fock(1, 0.0, 1), 1.0, &p, &c, &grid).unwrap();
        assert!(slow.iter().all(|&x| x == 0.0));
        let mean = mean_field(&GaussianModeState::fock(0, 0.1, 3), 1.0, &p, &c, &grid, 0.0).unwrap();
        assert!(mean.values.iter().all(|z| *z == C64::new(0.0, 0.0)));
    }

    #[test]
    fn coherent_energy_law() {
        let p = unit_medium();
        let c = Constants::natural();
        let e = coherent_energy(&GaussianModeState::coherent(0, 1.0, C64::new(0.0, 1.0)), &p, &c).unwrap();
        assert_eq!(e, 0.5);
        let zero = coherent_energy(&GaussianModeState::coherent(0, 1.0, C64::new(0.0, 0.0)), &p, &c).unwrap();
        assert_eq!(zero, 0.0);
        let a = C64::new(0.3, -0.7);
        let e1 = coherent_energy(&GaussianModeState::coherent(2, 0.2, a), &p, &c).unwrap();
        let e2 = coherent_energy(&GaussianModeState::coherent(2, 0.2, a * 2.0), &p, &c).unwrap();
        assert!((e2 - 4.0 * e1).abs() <= 1e-15 * e2);
        assert!(coherent_energy(&GaussianModeState::fock(0, 0.2, 1), &p, &c).is_err());
    }

    #[test]
    fn coherent_mean_field_moves_rigidly() {
        let p = unit_medium();
        let c = Constants::natural();
        let v = 0.1;
        let t = 20.0;
        let state = GaussianModeState::coherent(1, v, C64::new(1.0, 0.5));
        let grid0 = FieldGrid::gauss(3.0, 5, -4.0, 4.0, 7).unwrap();
        let shifted = FieldGrid::new(grid0.r.clone(), {
            let nodes: Vec<f64> = grid0.zeta.nodes().iter().map(|z| z + v * t).collect();
            crate::specfun::QuadratureRule::gauss_legendre(nodes.len(), -4.0 + v * t, 4.0 + v * t).unwrap()
        })
        .unwrap();
        let a0 = mean_field(&state, 1.0, &p, &c, &grid0, 0.0).unwrap();
        let at = mean_field(&state, 1.0, &p, &c, &shifted, t).unwrap();
        for (x, y) in a0.values.iter().zip(at.values.iter()) {
            assert!((x.norm() - y.norm()).abs() < 1e-10 * x.norm().max(1e-12));
        }
    }
}
