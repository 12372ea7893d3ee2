//! X-wave expansion of paraxial pulsed beams, its oscillator quantization,
//! and the two-particle state produced by optical parametric amplification.
//!
//! Module map:
//!
//! * [`specfun`]: `J0`, generalized Laguerre polynomials, quadrature rules.
//! * [`medium`]: carrier and dispersion parameters, effective mass.
//! * [`xwave`]: Laguerre spectra `f_p`, basis X-waves, projection onto `C_p(v)`.
//! * [`propagate`]: direct Fourier–Bessel evolution and X-wave expansion evolution.
//! * [`quantum`]: mode frequencies, Fock and coherent state observables.
//! * [`opa`]: coupling kernel, joint amplitude, velocity locking, Schmidt analysis.
//! * [`fixtures`]: reference signals and configurations shared by tests and the CLI.

pub use num_complex::Complex64 as C64;

mod error;
pub mod fixtures;
pub mod medium;
pub mod opa;
pub mod propagate;
pub mod quantum;
pub mod specfun;
pub mod xwave;

pub use error::{Error, Result};
