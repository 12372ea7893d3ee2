//! Time evolution of radially symmetric envelopes in the co-moving frame
//! `Z = z − ω′t`, by two independent routes.
//!
//! * Direct: quadrature of the Fourier–Bessel integral
//!   `A(r, Z, t) = ∫∫ k⊥ J0(k⊥r) S(k⊥, k_z) e^{i k_z Z − iΩt} dk⊥ dk_z`
//!   with `Ω = −ω″k_z²/2 + ω′k⊥²/2k`.
//! * X-wave expansion: `A = Σ_p ∫ C_p(v) e^{−iv²t/2ω″} ψ_p^v(r, Z − vt) dv`,
//!   each basis X-wave moving rigidly at velocity `v`.

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::medium::MediumParams;
use crate::specfun::{j0, QuadratureRule};
use crate::xwave::{
    oscillatory_alpha_rule, relative_l2, spectra_at, BasisConfig, FieldEnvelope, FieldGrid, SpectralAmplitude,
    SpectralSupport, VelocityCoefficients,
};
use crate::C64;

/// Relative amplitude above which spectral content counts as present.
pub const ALIASING_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    XWaveExpansion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationResult {
    pub field_at_t: FieldEnvelope,
    pub method: Method,
    pub t: f64,
}

/// `Ω(k⊥, k_z)`, the envelope frequency in the co-moving frame.
pub fn dispersion_phase(params: &MediumParams, kperp: f64, kz: f64) -> f64 {
    -0.5 * params.omega2 * kz * kz + 0.5 * params.omega1 * kperp * kperp / params.k
}

/// `S(k⊥, k_z)·e^{−iΩt}`: the spectrum of the envelope after time `t`.
pub struct EvolvedSpectrum<S> {
    pub inner: S,
    pub params: MediumParams,
    pub t: f64,
}

impl<S: SpectralAmplitude> SpectralAmplitude for EvolvedSpectrum<S> {
    fn amplitude(&self, kperp: f64, kz: f64) -> C64 {
        let phase = -dispersion_phase(&self.params, kperp, kz) * self.t;
        self.inner.amplitude(kperp, kz) * C64::from_polar(1.0, phase)
    }

    fn support(&self) -> SpectralSupport {
        self.inner.support()
    }

    fn breakpoints(&self) -> Option<(&[f64], &[f64])> {
        self.inner.breakpoints()
    }
}

/// Wavenumber quadrature for the direct route.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectQuadrature {
    pub kperp: QuadratureRule,
    pub kz: QuadratureRule,
}

impl DirectQuadrature {
    /// Rules sized to resolve the oscillation of `J0(k⊥r)e^{ik_zZ − iΩt}` over
    /// the output grid for all times up to `t_max`. Gridded spectra get panels
    /// aligned with their sampling cells.
    pub fn for_spectrum<S: SpectralAmplitude + ?Sized>(
        spectrum: &S,
        grid: &FieldGrid,
        t_max: f64,
        params: &MediumParams,
    ) -> Result<Self> {
        let support = spectrum.support();
        let kz_abs = support.kz_min.abs().max(support.kz_max.abs());
        // Largest local phase rate in each variable.
        let rate_kperp = grid.r_max() + params.omega1 * support.kperp_max * t_max / params.k;
        let rate_kz = grid.zeta_abs_max() + params.omega2 * kz_abs * t_max;
        let (kperp, kz) = match spectrum.breakpoints() {
            Some((bp_kperp, bp_kz)) => (
                cell_aligned_rule(bp_kperp, rate_kperp)?,
                cell_aligned_rule(bp_kz, rate_kz)?,
            ),
            None => (
                oscillatory_rule(0.0, support.kperp_max, rate_kperp)?,
                oscillatory_rule(support.kz_min, support.kz_max, rate_kz)?,
            ),
        };
        Ok(Self { kperp, kz })
    }
}

fn oscillatory_rule(a: f64, b: f64, rate: f64) -> Result<QuadratureRule> {
    const PER_PANEL: usize = 16;
    let nodes = 0.75 * rate * (b - a) + 64.0;
    let panels = (nodes / PER_PANEL as f64).ceil() as usize;
    QuadratureRule::composite_gauss_legendre(PER_PANEL, panels, a, b)
}

fn cell_aligned_rule(breakpoints: &[f64], rate: f64) -> Result<QuadratureRule> {
    let widest = breakpoints.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let per_panel = ((0.75 * rate * widest).ceil() as usize + 4).max(6);
    QuadratureRule::piecewise_gauss_legendre(per_panel, breakpoints)
}

/// Rejects spectra with content the output grid cannot represent.
///
/// The Nyquist limit of each axis is `π / (largest node spacing)`; any sample
/// of `|S|` above `1e-8·max|S|` beyond it is a resolution error.
pub fn check_aliasing<S: SpectralAmplitude + ?Sized>(
    spectrum: &S,
    quadrature: &DirectQuadrature,
    grid: &FieldGrid,
) -> Result<()> {
    let nyquist_r = std::f64::consts::PI / grid.r.max_spacing();
    let nyquist_z = std::f64::consts::PI / grid.zeta.max_spacing();
    let mut peak: f64 = 0.0;
    let mut worst_r: Option<f64> = None;
    let mut worst_z: Option<f64> = None;
    let mut samples = Vec::with_capacity(quadrature.kperp.len() * quadrature.kz.len());
    for &kp in quadrature.kperp.nodes() {
        for &kz in quadrature.kz.nodes() {
            let a = spectrum.amplitude(kp, kz).norm();
            peak = peak.max(a);
            samples.push((kp, kz, a));
        }
    }
    let threshold = ALIASING_THRESHOLD * peak;
    for (kp, kz, a) in samples {
        if a > threshold {
            if kp > nyquist_r {
                worst_r = Some(worst_r.map_or(kp, |w| w.max(kp)));
            }
            if kz.abs() > nyquist_z {
                worst_z = Some(worst_z.map_or(kz.abs(), |w| w.max(kz.abs())));
            }
        }
    }
    if let Some(k) = worst_r {
        return Err(Error::Resolution {
            axis: "r",
            wavenumber: k,
            nyquist: nyquist_r,
        });
    }
    if let Some(k) = worst_z {
        return Err(Error::Resolution {
            axis: "zeta",
            wavenumber: k,
            nyquist: nyquist_z,
        });
    }
    Ok(())
}

/// Direct Fourier–Bessel evolution onto `grid` at time `t`.
pub fn propagate_direct<S: SpectralAmplitude + ?Sized>(
    spectrum: &S,
    t: f64,
    params: &MediumParams,
    grid: &FieldGrid,
) -> Result<FieldEnvelope> {
    let quadrature = DirectQuadrature::for_spectrum(spectrum, grid, t.abs(), params)?;
    propagate_direct_with(spectrum, t, params, grid, &quadrature)
}

/// Direct evolution with explicit wavenumber rules.
///
/// The `k_z` integral is done first for every `(k⊥, Z)`, then the Hankel
/// integral over `k⊥` for every `(r, Z)`.
pub fn propagate_direct_with<S: SpectralAmplitude + ?Sized>(
    spectrum: &S,
    t: f64,
    params: &MediumParams,
    grid: &FieldGrid,
    quadrature: &DirectQuadrature,
) -> Result<FieldEnvelope> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("propagation time must be non-negative, got {t}")));
    }
    check_aliasing(spectrum, quadrature, grid)?;
    let kperp = &quadrature.kperp;
    let kz = &quadrature.kz;
    let zetas = grid.zeta.nodes();

    // e^{i k_z Z} with the longitudinal part of e^{−iΩt} folded into the weights.
    let kz_phase = Array2::from_shape_fn((kz.len(), zetas.len()), |(j, l)| {
        C64::from_polar(1.0, kz.nodes()[j] * zetas[l])
    });
    let kz_weight: Vec<C64> = kz
        .nodes()
        .iter()
        .zip(kz.weights())
        .map(|(&q, &w)| C64::from_polar(w, 0.5 * params.omega2 * q * q * t))
        .collect();

    // B[i, l] = Σ_j w_j S(k⊥_i, k_z_j) e^{iω″k_z²t/2} e^{ik_z Z_l}
    let rows: Vec<Vec<C64>> = kperp
        .nodes()
        .par_iter()
        .map(|&kp| {
            let s: Vec<C64> = kz
                .nodes()
                .iter()
                .zip(&kz_weight)
                .map(|(&q, w)| spectrum.amplitude(kp, q) * w)
                .collect();
            (0..zetas.len())
                .map(|l| s.iter().enumerate().map(|(j, sj)| sj * kz_phase[[j, l]]).sum())
                .collect()
        })
        .collect();

    let kperp_weight: Vec<C64> = kperp
        .nodes()
        .iter()
        .zip(kperp.weights())
        .map(|(&kp, &w)| C64::from_polar(w * kp, -0.5 * params.omega1 * kp * kp * t / params.k))
        .collect();

    Ok(FieldEnvelope::from_fn_rows(grid.clone(), |r| {
        let radial: Vec<C64> = kperp
            .nodes()
            .iter()
            .zip(&kperp_weight)
            .map(|(&kp, w)| w * j0(kp * r))
            .collect();
        (0..zetas.len())
            .map(|l| radial.iter().zip(&rows).map(|(a, row)| a * row[l]).sum())
            .collect()
    }))
}

/// `C_p(v, t) = C_p(v, 0)·e^{−i(v²/2ω″)t}`.
pub fn oscillator_evolution(c0: &VelocityCoefficients, t: f64, params: &MediumParams) -> VelocityCoefficients {
    let mut out = c0.clone();
    for (j, &v) in c0.v_grid.nodes().iter().enumerate() {
        let phase = C64::from_polar(1.0, -v * v * t / (2.0 * params.omega2));
        out.coeffs.column_mut(j).mapv_inplace(|c| c * phase);
    }
    out
}

/// `α`-rule able to resolve every basis X-wave on `grid` up to time `t`.
pub fn field_alpha_rule(cfg: &BasisConfig, params: &MediumParams, grid: &FieldGrid, t: f64) -> Result<QuadratureRule> {
    oscillatory_alpha_rule(
        cfg.delta,
        cfg.p_max,
        params.transverse_scale() * grid.r_max(),
        grid.zeta_abs_max() + cfg.v_grid.v_max() * t.abs(),
    )
}

/// X-wave expansion evolution onto `grid` at time `t`.
///
/// The superposition `Σ_p ∫ C_p(v) e^{−iv²t/2ω″} ψ_p^v(r, Z − vt) dv` is summed
/// as `Σ_i w_i J0(βα_i r) e^{iα_i Z} B(α_i, Z)` with
/// `B(α, Z) = Σ_v w_v X_rec(α, v) e^{−iαvt} e^{−iv(Z − vt)/ω″} e^{−iv²t/2ω″}`.
pub fn xwave_propagate(
    c: &VelocityCoefficients,
    cfg: &BasisConfig,
    params: &MediumParams,
    t: f64,
    grid: &FieldGrid,
) -> Result<FieldEnvelope> {
    let rule = field_alpha_rule(cfg, params, grid, t)?;
    xwave_propagate_with(c, cfg, params, t, grid, &rule)
}

pub fn xwave_propagate_with(
    c: &VelocityCoefficients,
    cfg: &BasisConfig,
    params: &MediumParams,
    t: f64,
    grid: &FieldGrid,
    alpha_rule: &QuadratureRule,
) -> Result<FieldEnvelope> {
    if !t.is_finite() {
        return Err(Error::domain("propagation time must be finite"));
    }
    if c.coeffs.nrows() != cfg.n_modes() {
        return Err(Error::config(format!(
            "coefficients carry {} modes, basis has {}",
            c.coeffs.nrows(),
            cfg.n_modes()
        )));
    }
    let evolved = oscillator_evolution(c, t, params);
    let velocities = c.v_grid.nodes();
    let v_weights = c.v_grid.weights();
    let zetas = grid.zeta.nodes();
    let omega2 = params.omega2;
    let beta = params.transverse_scale();

    // e^{−iv(Z − vt)/ω″}
    let carrier = Array2::from_shape_fn((velocities.len(), zetas.len()), |(j, l)| {
        let v = velocities[j];
        C64::from_polar(1.0, -v * (zetas[l] - v * t) / omega2)
    });

    // B[i, l] for every α node, each scaled by w_α.
    let n_modes = cfg.n_modes();
    let b_rows: Vec<Vec<C64>> = alpha_rule
        .nodes()
        .par_iter()
        .zip(alpha_rule.weights())
        .map(|(&alpha, &w_alpha)| {
            let mut spectra = vec![0.0; n_modes];
            spectra_at(params, cfg.delta, alpha, &mut spectra);
            let per_v: Vec<C64> = (0..velocities.len())
                .map(|j| {
                    let x: C64 = spectra
                        .iter()
                        .enumerate()
                        .map(|(p, f)| evolved.coeffs[[p, j]] * *f)
                        .sum();
                    x * C64::from_polar(w_alpha * v_weights[j], -alpha * velocities[j] * t)
                })
                .collect();
            (0..zetas.len())
                .map(|l| {
                    let sum: C64 = per_v.iter().enumerate().map(|(j, y)| y * carrier[[j, l]]).sum();
                    sum * C64::from_polar(1.0, alpha * zetas[l])
                })
                .collect()
        })
        .collect();

    Ok(FieldEnvelope::from_fn_rows(grid.clone(), |r| {
        let radial: Vec<f64> = alpha_rule.nodes().iter().map(|&a| j0(beta * a * r)).collect();
        (0..zetas.len())
            .map(|l| radial.iter().zip(&b_rows).map(|(j, row)| row[l] * *j).sum())
            .collect()
    }))
}

/// `‖a − b‖/‖a‖` on a shared grid.
pub fn l2_discrepancy(reference: &FieldEnvelope, other: &FieldEnvelope) -> Result<f64> {
    relative_l2(reference, other)
}

pub fn propagate(
    method: Method,
    spectrum: &dyn SpectralAmplitude,
    coefficients: &VelocityCoefficients,
    cfg: &BasisConfig,
    params: &MediumParams,
    t: f64,
    grid: &FieldGrid,
) -> Result<PropagationResult> {
    let field_at_t = match method {
        Method::Direct => propagate_direct(spectrum, t, params, grid)?,
        Method::XWaveExpansion => xwave_propagate(coefficients, cfg, params, t, grid)?,
    };
    Ok(PropagationResult { field_at_t, method, t })
}
