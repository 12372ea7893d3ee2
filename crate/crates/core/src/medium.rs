//! Per-frequency carrier parameters and the derived quantum constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    Si,
    Natural,
}

/// Reduced Planck constant and light speed in the chosen unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub c: f64,
    pub unit_system: UnitSystem,
}

impl Constants {
    pub const HBAR_SI: f64 = 1.054571817e-34;
    pub const C_SI: f64 = 2.99792458e8;

    /// `ħ = c = 1`.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            unit_system: UnitSystem::Natural,
        }
    }

    pub fn si() -> Self {
        Self {
            hbar: Self::HBAR_SI,
            c: Self::C_SI,
            unit_system: UnitSystem::Si,
        }
    }

    pub fn for_system(system: UnitSystem) -> Self {
        match system {
            UnitSystem::Si => Self::si(),
            UnitSystem::Natural => Self::natural(),
        }
    }
}

/// Carrier frequency, index, wavenumber and the first two derivatives of the
/// dispersion relation `ω(k)` at the carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumParams {
    /// Carrier angular frequency ω.
    pub omega: f64,
    /// Refractive index.
    pub n: f64,
    /// Carrier wavenumber.
    pub k: f64,
    /// Group velocity ω′.
    pub omega1: f64,
    /// Group velocity dispersion ω″ (normal dispersion: positive).
    pub omega2: f64,
}

impl MediumParams {
    pub fn new(omega: f64, n: f64, k: f64, omega1: f64, omega2: f64) -> Result<Self> {
        let params = Self {
            omega,
            n,
            k,
            omega1,
            omega2,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega", self.omega),
            ("n", self.n),
            ("k", self.k),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::domain(format!("{name} must be finite and positive, got {value}")));
            }
        }
        Ok(())
    }

    /// `sqrt(ω″k/ω′)`: the factor mapping `α` onto the transverse wavenumber.
    pub fn transverse_scale(&self) -> f64 {
        (self.omega2 * self.k / self.omega1).sqrt()
    }
}

/// Vacuum carrier: `k = ω/c`, `ω′ = c`, `ω″ = c²/ω`.
pub fn vacuum_params(omega: f64, constants: &Constants) -> Result<MediumParams> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("carrier frequency must be positive, got {omega}")));
    }
    let c = constants.c;
    MediumParams::new(omega, 1.0, omega / c, c, c * c / omega)
}

/// Effective mass `m = ħ/ω″` of the free quasi-particles.
pub fn effective_mass(params: &MediumParams, constants: &Constants) -> f64 {
    constants.hbar / params.omega2
}

/// `ρ = sqrt(k₁ω₂′ / (k₂ω₁′))`.
pub fn velocity_ratio_rho(p1: &MediumParams, p2: &MediumParams) -> f64 {
    ((p1.k * p2.omega1) / (p2.k * p1.omega1)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn natural_vacuum() {
        let p = vacuum_params(1.0, &Constants::natural()).unwrap();
        assert_eq!((p.k, p.omega1, p.omega2), (1.0, 1.0, 1.0));
        let p = vacuum_params(2.0, &Constants::natural()).unwrap();
        assert_eq!(p.omega2, 0.5);
    }

    #[test]
    fn si_vacuum_wavenumber() {
        let p = vacuum_params(2.4e15, &Constants::si()).unwrap();
        let expected = 2.4e15 / 2.99792458e8;
        assert!((p.k - expected).abs() / expected < 1e-15);
        assert!((p.k - 8.005e6).abs() < 1e3);
    }

    #[test]
    fn rejects_non_positive_frequency() {
        assert!(matches!(vacuum_params(0.0, &Constants::natural()), Err(Error::Domain(_))));
        assert!(matches!(vacuum_params(-1.0, &Constants::si()), Err(Error::Domain(_))));
        assert!(MediumParams::new(1.0, 1.0, 1.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn mass_values() {
        let p = MediumParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(effective_mass(&p, &Constants::natural()), 1.0);
        let p = MediumParams::new(1.0, 1.0, 1.0, 1.0, 2e-26).unwrap();
        let m = effective_mass(&p, &Constants::si());
        assert!((m - 1.054571817e-34 / 2e-26).abs() / m < 1e-15);
        assert!((m - 5.273e-9).abs() < 1e-12);
    }

    #[test]
    fn rho_examples() {
        let base = MediumParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(velocity_ratio_rho(&base, &base), 1.0);
        let heavy = MediumParams { k: 4.0, ..base };
        assert_eq!(velocity_ratio_rho(&heavy, &base), 2.0);
        let p1 = MediumParams { k: 1.1, ..base };
        let p2 = MediumParams { omega1: 0.95, ..base };
        let rho = velocity_ratio_rho(&p1, &p2);
        assert!((rho - 1.045f64.sqrt()).abs() < 1e-15);
        assert!((rho - 1.02225).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn einstein_relation(omega in 1e-3f64..1e17) {
            for constants in [Constants::natural(), Constants::si()] {
                let p = vacuum_params(omega, &constants).unwrap();
                let mc2 = effective_mass(&p, &constants) * constants.c * constants.c;
                let hw = constants.hbar * omega;
                prop_assert!((mc2 - hw).abs() <= 1e-14 * hw);
            }
        }

        #[test]
        fn rho_reciprocal(k1 in 0.1f64..10.0, k2 in 0.1f64..10.0, v1 in 0.1f64..3.0, v2 in 0.1f64..3.0) {
            let a = MediumParams::new(1.0, 1.0, k1, v1, 1.0).unwrap();
            let b = MediumParams::new(1.0, 1.0, k2, v2, 1.0).unwrap();
            let product = velocity_ratio_rho(&a, &b) * velocity_ratio_rho(&b, &a);
            prop_assert!((product - 1.0).abs() < 1e-14);
        }
    }
}
