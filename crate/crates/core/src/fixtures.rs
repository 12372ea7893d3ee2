//! Reference signals and configurations shared by tests, examples and the CLI.
//!
//! Everything here is in natural units (`ħ = c = 1`).

use crate::medium::MediumParams;
use crate::xwave::{BasisConfig, FieldGrid, GaussianSpectrum, VelocityGrid};
use crate::C64;

/// Carrier with `k = ω′ = ω″ = 1`, so `α` and `k⊥` coincide.
pub fn unit_medium() -> MediumParams {
    MediumParams::new(1.0, 1.0, 1.0, 1.0, 1.0).expect("valid")
}

/// Band-limited Gaussian pulsed beam used for the propagation and Parseval checks.
///
/// The transverse width is `s = 0.005`, the longitudinal width `3s` and the
/// longitudinal centre `1.25s`; all wavenumbers satisfy `|k_z| ≪ k`.
pub struct GaussianFixture {
    pub params: MediumParams,
    pub spectrum: GaussianSpectrum,
    pub basis: BasisConfig,
    pub grid: FieldGrid,
    /// Longest propagation time checked.
    pub t_max: f64,
}

impl GaussianFixture {
    pub const WIDTH: f64 = 0.005;
    pub const P_MAX: usize = 24;

    pub fn new() -> Self {
        let s = Self::WIDTH;
        let params = unit_medium();
        let spectrum = GaussianSpectrum {
            amplitude: C64::new(1.0, 0.0),
            kperp_width: s,
            kz_center: 1.25 * s,
            kz_width: 3.0 * s,
        };
        let v_grid = VelocityGrid::default_for(&params);
        let basis = BasisConfig::new(3.5 / s, Self::P_MAX, v_grid).expect("valid");
        let grid = FieldGrid::gauss(1800.0, 64, -900.0, 900.0, 96).expect("valid");
        Self {
            params,
            spectrum,
            basis,
            grid,
            t_max: 4000.0,
        }
    }

    /// `{0, T/4, T}`.
    pub fn times(&self) -> [f64; 3] {
        [0.0, 0.25 * self.t_max, self.t_max]
    }
}

impl Default for GaussianFixture {
    fn default() -> Self {
        Self::new()
    }
}

/// Two-frequency OPA reference: `ω″ = 1`, `k₁ = 1.1`, `k₂ = 1`, `ω₁′ = 1`,
/// `ω₂′ = 0.95`, so `ρ = √1.045` and `ω₁′ − ω₂′ = 0.05`.
pub fn opa_fields() -> (MediumParams, MediumParams) {
    let field1 = MediumParams::new(1.1, 1.0, 1.1, 1.0, 1.0).expect("valid");
    let field2 = MediumParams::new(1.0, 1.0, 1.0, 0.95, 1.0).expect("valid");
    (field1, field2)
}

/// Velocity window `±0.1·|ω₁′ − ω₂′|` on 129 points.
pub fn opa_uv_grid() -> VelocityGrid {
    VelocityGrid::new(0.005, 129).expect("valid")
}

/// Reference Δ for the OPA grid studies.
pub const OPA_DELTA: f64 = 400.0;
