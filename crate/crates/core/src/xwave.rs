//! Orthonormal X-wave basis and the X-wave transform.
//!
//! A radially symmetric envelope with Fourier–Bessel spectrum `S(k⊥, k_z)` is
//! rewritten with `k⊥ = α·sqrt(ω″k/ω′)`, `k_z = α − v/ω″` as a continuum of
//! rigidly moving components `X(α, v) = (kα/ω′)·S(k⊥, k_z)`. Each `X(·, v)` is
//! expanded on the Laguerre spectra
//!
//! ```text
//! f_p(α) = sqrt(k / (π² ω′ (p+1))) · (αΔ) · L_p^{(1)}(2αΔ) · e^{−αΔ}
//! ```
//!
//! which satisfy `∫ f_p f_q dα/α = k/(4π²ω′) δ_pq`. The basis X-waves
//!
//! ```text
//! ψ_p^v(r, ζ′) = ∫ f_p(α) J0(sqrt(ω″k/ω′) α r) e^{i(α − v/ω″)ζ′} dα
//! ```
//!
//! are then orthonormal over 3D space with a `δ(u − v)` velocity normalization,
//! and `C_p(v) = (4π²ω′/k) ∫ X(α, v) f_p(α) dα/α`.

use std::f64::consts::PI;

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::medium::MediumParams;
use crate::specfun::{j0, laguerre_fill, QuadratureRule, RuleKind, MAX_LAGUERRE_ORDER};
use crate::C64;

/// Default number of Gauss–Laguerre nodes for α-integrals.
pub const DEFAULT_ALPHA_NODES: usize = 128;
/// Default velocity grid size.
pub const DEFAULT_VELOCITY_POINTS: usize = 257;
/// Default velocity half-range as a fraction of ω′.
pub const DEFAULT_VELOCITY_FRACTION: f64 = 0.2;
/// Relative tolerance used when comparing an α-integral against a refined rule.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-8;
/// Default relative L² truncation residual above which projections warn.
pub const TRUNCATION_TOLERANCE: f64 = 1e-6;

/// Uniform velocity grid on `[-v_max, v_max]` with an odd point count, so
/// that `v = 0` is a node. Integrals over `v` use the trapezoid rule.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    rule: QuadratureRule,
}

impl VelocityGrid {
    pub fn new(v_max: f64, points: usize) -> Result<Self> {
        if !(v_max > 0.0) || !v_max.is_finite() {
            return Err(Error::config(format!("v_max must be positive, got {v_max}")));
        }
        if points < 3 || points % 2 == 0 {
            return Err(Error::config(format!(
                "velocity grid needs an odd number (≥ 3) of points, got {points}"
            )));
        }
        Ok(Self {
            rule: QuadratureRule::trapezoid(points, -v_max, v_max)?,
        })
    }

    /// `257` points on `±0.2·ω′`.
    pub fn default_for(params: &MediumParams) -> Self {
        Self::new(DEFAULT_VELOCITY_FRACTION * params.omega1, DEFAULT_VELOCITY_POINTS)
            .expect("default velocity grid is valid")
    }

    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    pub fn weights(&self) -> &[f64] {
        self.rule.weights()
    }

    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    pub fn v_max(&self) -> f64 {
        self.rule.nodes()[self.len() - 1]
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.v_max() / (self.len() - 1) as f64
    }

    /// Index of the node nearest to `v`.
    pub fn nearest(&self, v: f64) -> usize {
        let i = ((v + self.v_max()) / self.spacing()).round();
        (i.max(0.0) as usize).min(self.len() - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisConfig {
    /// Reference length Δ.
    pub delta: f64,
    pub p_max: usize,
    pub alpha_rule: QuadratureRule,
    pub v_grid: VelocityGrid,
}

impl BasisConfig {
    /// Basis with the default 128-node Gauss–Laguerre α-rule at rate Δ.
    pub fn new(delta: f64, p_max: usize, v_grid: VelocityGrid) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::config(format!("delta must be positive, got {delta}")));
        }
        if p_max > MAX_LAGUERRE_ORDER {
            return Err(Error::UnsupportedOrder {
                order: p_max,
                max: MAX_LAGUERRE_ORDER,
            });
        }
        Ok(Self {
            delta,
            p_max,
            alpha_rule: QuadratureRule::gauss_laguerre(DEFAULT_ALPHA_NODES, delta)?,
            v_grid,
        })
    }

    pub fn with_alpha_rule(mut self, rule: QuadratureRule) -> Self {
        self.alpha_rule = rule;
        self
    }

    pub fn n_modes(&self) -> usize {
        self.p_max + 1
    }
}

/// Composite Gauss–Legendre α-rule for oscillatory integrands.
///
/// `kperp_r_max` bounds `sqrt(ω″k/ω′)·r` and `zeta_max` bounds `|ζ′|` over the
/// points where fields will be evaluated. The rule covers `αΔ ≤ 4(p_max+1)+40`,
/// beyond which every `f_p` is below `1e-17` of its peak.
pub fn oscillatory_alpha_rule(
    delta: f64,
    p_max: usize,
    kperp_r_max: f64,
    zeta_max: f64,
) -> Result<QuadratureRule> {
    const PER_PANEL: usize = 16;
    let x_cut = 4.0 * (p_max as f64 + 1.0) + 40.0;
    let phase = x_cut * (1.0 + (kperp_r_max.abs() + zeta_max.abs()) / delta);
    let nodes = 0.75 * phase + 32.0;
    let panels = (nodes / PER_PANEL as f64).ceil().max(1.0) as usize;
    QuadratureRule::composite_gauss_legendre(PER_PANEL, panels, 0.0, x_cut / delta)
}

/// Laguerre spectrum `f_p` of one basis X-wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XWaveSpectrum {
    pub p: usize,
    pub params: MediumParams,
    pub delta: f64,
}

impl XWaveSpectrum {
    pub fn new(p: usize, params: MediumParams, delta: f64) -> Result<Self> {
        if p > MAX_LAGUERRE_ORDER {
            return Err(Error::UnsupportedOrder {
                order: p,
                max: MAX_LAGUERRE_ORDER,
            });
        }
        if !(delta > 0.0) {
            return Err(Error::config(format!("delta must be positive, got {delta}")));
        }
        Ok(Self { p, params, delta })
    }

    pub fn eval(&self, alpha: f64) -> Result<f64> {
        eval_spectrum(self, alpha)
    }
}

/// `f_p(α)`; negative `α` is outside the transform's domain.
pub fn eval_spectrum(spec: &XWaveSpectrum, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be non-negative and finite, got {alpha}")));
    }
    let mut values = vec![0.0; spec.p + 1];
    spectra_at(&spec.params, spec.delta, alpha, &mut values);
    Ok(values[spec.p])
}

/// `sqrt(k/(π²ω′))`, the `p`-independent part of the normalization.
fn spectrum_prefactor(params: &MediumParams) -> f64 {
    (params.k / (PI * PI * params.omega1)).sqrt()
}

/// Fills `out[p] = f_p(α)` for `p = 0..out.len()`.
pub(crate) fn spectra_at(params: &MediumParams, delta: f64, alpha: f64, out: &mut [f64]) {
    let x = alpha * delta;
    laguerre_fill(1, 2.0 * x, out);
    let common = spectrum_prefactor(params) * x * (-x).exp();
    for (p, value) in out.iter_mut().enumerate() {
        *value *= common / ((p + 1) as f64).sqrt();
    }
}

/// Fills `out[p] = f_p(α)/α` without dividing by `α`.
pub(crate) fn spectra_over_alpha(params: &MediumParams, delta: f64, alpha: f64, out: &mut [f64]) {
    let x = alpha * delta;
    laguerre_fill(1, 2.0 * x, out);
    let common = spectrum_prefactor(params) * delta * (-x).exp();
    for (p, value) in out.iter_mut().enumerate() {
        *value *= common / ((p + 1) as f64).sqrt();
    }
}

/// `k/(4π²ω′)`, the diagonal of the spectral Gram matrix.
pub fn spectral_norm(params: &MediumParams) -> f64 {
    params.k / (4.0 * PI * PI * params.omega1)
}

/// `f_p` and `f_p/α` tabulated on the nodes of an α-rule.
#[derive(Debug, Clone)]
pub struct BasisTable {
    alphas: Vec<f64>,
    weights: Vec<f64>,
    /// `[p][i] = f_p(α_i)`
    spectra: Array2<f64>,
    /// `[p][i] = f_p(α_i)/α_i`
    spectra_over_alpha: Array2<f64>,
}

impl BasisTable {
    pub fn new(rule: &QuadratureRule, params: &MediumParams, delta: f64, p_max: usize) -> Self {
        let n = rule.len();
        let mut spectra = Array2::zeros((p_max + 1, n));
        let mut over = Array2::zeros((p_max + 1, n));
        let mut buf = vec![0.0; p_max + 1];
        for (i, &alpha) in rule.nodes().iter().enumerate() {
            spectra_at(params, delta, alpha, &mut buf);
            spectra.column_mut(i).assign(&ndarray::ArrayView1::from(&buf));
            spectra_over_alpha(params, delta, alpha, &mut buf);
            over.column_mut(i).assign(&ndarray::ArrayView1::from(&buf));
        }
        Self {
            alphas: rule.nodes().to_vec(),
            weights: rule.weights().to_vec(),
            spectra,
            spectra_over_alpha: over,
        }
    }

    pub fn for_config(cfg: &BasisConfig, params: &MediumParams) -> Self {
        Self::new(&cfg.alpha_rule, params, cfg.delta, cfg.p_max)
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spectrum(&self, p: usize, i: usize) -> f64 {
        self.spectra[[p, i]]
    }

    pub fn n_modes(&self) -> usize {
        self.spectra.nrows()
    }

    fn gram(&self, p: usize, q: usize) -> f64 {
        self.weights
            .iter()
            .zip(self.spectra.row(p))
            .zip(self.spectra_over_alpha.row(q))
            .map(|((w, fp), gq)| w * fp * gq)
            .sum()
    }
}

/// `∫₀^∞ f_p(α) f_q(α) dα/α`, expected `k/(4π²ω′)·δ_pq`.
///
/// The integral is repeated on a refined rule; a relative change above
/// `1e-10` (relative to `k/(4π²ω′)`) is reported as non-convergence.
pub fn orthonormality_integral(p: usize, q: usize, cfg: &BasisConfig, params: &MediumParams) -> Result<f64> {
    if p > cfg.p_max || q > cfg.p_max {
        return Err(Error::domain(format!("indices ({p}, {q}) exceed p_max = {}", cfg.p_max)));
    }
    let m = p.max(q);
    let coarse = BasisTable::new(&cfg.alpha_rule, params, cfg.delta, m).gram(p, q);
    let fine = BasisTable::new(&cfg.alpha_rule.refined()?, params, cfg.delta, m).gram(p, q);
    check_convergence(coarse, fine, spectral_norm(params), 1e-10)?;
    Ok(coarse)
}

/// Full Gram matrix `∫ f_p f_q dα/α` for `p, q ≤ p_max`.
pub fn orthonormality_matrix(cfg: &BasisConfig, params: &MediumParams) -> Result<Array2<f64>> {
    let coarse = BasisTable::for_config(cfg, params);
    let fine = BasisTable::new(&cfg.alpha_rule.refined()?, params, cfg.delta, cfg.p_max);
    let n = cfg.n_modes();
    let mut out = Array2::zeros((n, n));
    for p in 0..n {
        for q in 0..n {
            let value = coarse.gram(p, q);
            check_convergence(value, fine.gram(p, q), spectral_norm(params), 1e-10)?;
            out[[p, q]] = value;
        }
    }
    Ok(out)
}

fn check_convergence(coarse: f64, fine: f64, scale: f64, tolerance: f64) -> Result<()> {
    let change = (coarse - fine).abs() / scale;
    if change > tolerance {
        return Err(Error::Accuracy { change, tolerance });
    }
    Ok(())
}

/// Basis X-wave `ψ_p^v` tabulated on an α-rule, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct BasisField {
    velocity: f64,
    transverse: f64,
    omega2: f64,
    alphas: Vec<f64>,
    /// `w_i f_p(α_i)`
    weighted: Vec<f64>,
}

impl BasisField {
    pub fn new(spec: &XWaveSpectrum, v: f64, rule: &QuadratureRule) -> Self {
        let mut buf = vec![0.0; spec.p + 1];
        let weighted = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&alpha, &w)| {
                spectra_at(&spec.params, spec.delta, alpha, &mut buf);
                w * buf[spec.p]
            })
            .collect();
        Self {
            velocity: v,
            transverse: spec.params.transverse_scale(),
            omega2: spec.params.omega2,
            alphas: rule.nodes().to_vec(),
            weighted,
        }
    }

    /// `ψ_p^v(r, ζ′)` with `ζ′ = Z − vt`.
    pub fn eval(&self, r: f64, zeta_shifted: f64) -> C64 {
        let mut sum = C64::new(0.0, 0.0);
        for (&alpha, &wf) in self.alphas.iter().zip(&self.weighted) {
            let radial = wf * j0(self.transverse * alpha * r);
            sum += C64::from_polar(radial, alpha * zeta_shifted);
        }
        sum * C64::from_polar(1.0, -self.velocity * zeta_shifted / self.omega2)
    }

    /// `Σ |w_i f_p(α_i)|`, an upper bound on `|ψ|`.
    pub fn l1_bound(&self) -> f64 {
        self.weighted.iter().map(|w| w.abs()).sum()
    }
}

/// `ψ_p^v(r, ζ′)` with a convergence check against a refined α-rule.
pub fn eval_field(spec: &XWaveSpectrum, v: f64, r: f64, zeta_shifted: f64, rule: &QuadratureRule) -> Result<C64> {
    if !(r >= 0.0) || !r.is_finite() || !zeta_shifted.is_finite() || !v.is_finite() {
        return Err(Error::domain(format!("invalid field point r = {r}, ζ′ = {zeta_shifted}, v = {v}")));
    }
    let coarse = BasisField::new(spec, v, rule);
    let fine = BasisField::new(spec, v, &rule.refined()?);
    let a = coarse.eval(r, zeta_shifted);
    let b = fine.eval(r, zeta_shifted);
    let scale = coarse.l1_bound().max(f64::MIN_POSITIVE);
    let change = (a - b).norm() / scale;
    if change > CONVERGENCE_TOLERANCE {
        return Err(Error::Accuracy {
            change,
            tolerance: CONVERGENCE_TOLERANCE,
        });
    }
    Ok(a)
}

/// `ψ_p^v(r, ζ′)` on every point of `grid`.
///
/// The α-rule is sized for the grid and the whole result is compared against
/// a refined rule, relative to the largest `|ψ|` bound.
pub fn eval_field_grid(spec: &XWaveSpectrum, v: f64, grid: &FieldGrid) -> Result<FieldEnvelope> {
    let rule = oscillatory_alpha_rule(
        spec.delta,
        spec.p,
        spec.params.transverse_scale() * grid.r_max(),
        grid.zeta_abs_max(),
    )?;
    let coarse = BasisField::new(spec, v, &rule);
    let fine = BasisField::new(spec, v, &rule.refined()?);
    let a = FieldEnvelope::from_fn(grid.clone(), |r, z| coarse.eval(r, z));
    let b = FieldEnvelope::from_fn(grid.clone(), |r, z| fine.eval(r, z));
    let scale = coarse.l1_bound().max(f64::MIN_POSITIVE);
    let change = a
        .values
        .iter()
        .zip(b.values.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale;
    if change > CONVERGENCE_TOLERANCE {
        return Err(Error::Accuracy {
            change,
            tolerance: CONVERGENCE_TOLERANCE,
        });
    }
    Ok(a)
}

/// Spatial sampling of a field: radial and co-moving longitudinal rules.
/// The rules' weights are used for energies and L² norms.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub r: QuadratureRule,
    pub zeta: QuadratureRule,
}

impl FieldGrid {
    pub fn new(r: QuadratureRule, zeta: QuadratureRule) -> Result<Self> {
        if r.nodes().first().is_some_and(|&r0| r0 < 0.0) {
            return Err(Error::config("radial grid must be non-negative"));
        }
        Ok(Self { r, zeta })
    }

    /// Gauss–Legendre nodes on `[0, r_max] × [zeta_min, zeta_max]`.
    pub fn gauss(r_max: f64, n_r: usize, zeta_min: f64, zeta_max: f64, n_zeta: usize) -> Result<Self> {
        Self::new(
            QuadratureRule::gauss_legendre(n_r, 0.0, r_max)?,
            QuadratureRule::gauss_legendre(n_zeta, zeta_min, zeta_max)?,
        )
    }

    /// Uniform trapezoid sampling on `[0, r_max] × [zeta_min, zeta_max]`.
    pub fn uniform(r_max: f64, n_r: usize, zeta_min: f64, zeta_max: f64, n_zeta: usize) -> Result<Self> {
        Self::new(
            QuadratureRule::trapezoid(n_r, 0.0, r_max)?,
            QuadratureRule::trapezoid(n_zeta, zeta_min, zeta_max)?,
        )
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.r.len(), self.zeta.len())
    }

    pub fn r_max(&self) -> f64 {
        self.r.nodes().iter().fold(0.0, |a, &b| a.max(b))
    }

    pub fn zeta_abs_max(&self) -> f64 {
        self.zeta.nodes().iter().fold(0.0, |a, &b| a.max(b.abs()))
    }
}

/// Complex envelope `A(r, ζ)` on a [`FieldGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldEnvelope {
    pub grid: FieldGrid,
    /// `[i_r][i_zeta]`
    pub values: Array2<C64>,
}

impl FieldEnvelope {
    pub fn new(grid: FieldGrid, values: Array2<C64>) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(Error::config(format!(
                "field values have shape {:?}, grid is {:?}",
                values.dim(),
                grid.shape()
            )));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::domain("field values must be finite"));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: FieldGrid) -> Self {
        let values = Array2::zeros(grid.shape());
        Self { grid, values }
    }

    /// Evaluates `f(r, ζ)` at every grid point, in parallel over radii.
    pub fn from_fn<F>(grid: FieldGrid, f: F) -> Self
    where
        F: Fn(f64, f64) -> C64 + Sync,
    {
        let (n_r, n_z) = grid.shape();
        let rows: Vec<Vec<C64>> = grid
            .r
            .nodes()
            .par_iter()
            .map(|&r| grid.zeta.nodes().iter().map(|&z| f(r, z)).collect())
            .collect();
        let flat: Vec<C64> = rows.into_iter().flatten().collect();
        let values = Array2::from_shape_vec((n_r, n_z), flat).expect("shape matches grid");
        Self { grid, values }
    }

    /// Builds the field one radial row at a time; `row(r)` returns the values
    /// for every ζ node. Rows are evaluated in parallel.
    pub fn from_fn_rows<F>(grid: FieldGrid, row: F) -> Self
    where
        F: Fn(f64) -> Vec<C64> + Sync,
    {
        let (n_r, n_z) = grid.shape();
        let rows: Vec<Vec<C64>> = grid.r.nodes().par_iter().map(|&r| row(r)).collect();
        let flat: Vec<C64> = rows.into_iter().flatten().collect();
        let values = Array2::from_shape_vec((n_r, n_z), flat).expect("row length matches grid");
        Self { grid, values }
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.mapv(|z| z * factor),
        }
    }

    /// `2π ∫∫ r |a − b|² dr dζ` between two fields on the same grid.
    pub fn distance_squared(&self, other: &FieldEnvelope) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::config("fields live on different grids"));
        }
        Ok(weighted_norm_sq(&self.grid, |i, j| self.values[[i, j]] - other.values[[i, j]]))
    }
}

fn weighted_norm_sq<F: Fn(usize, usize) -> C64>(grid: &FieldGrid, value: F) -> f64 {
    let mut total = 0.0;
    for (i, (&r, &wr)) in grid.r.nodes().iter().zip(grid.r.weights()).enumerate() {
        let mut row = 0.0;
        for (j, &wz) in grid.zeta.weights().iter().enumerate() {
            row += wz * value(i, j).norm_sqr();
        }
        total += wr * r * row;
    }
    2.0 * PI * total
}

/// `2π ∫∫ r |A|² dr dζ` under radial symmetry.
pub fn energy(field: &FieldEnvelope) -> f64 {
    weighted_norm_sq(&field.grid, |i, j| field.values[[i, j]])
}

/// Relative L² distance `‖a − b‖/‖a‖`.
pub fn relative_l2(reference: &FieldEnvelope, other: &FieldEnvelope) -> Result<f64> {
    let diff = reference.distance_squared(other)?;
    let norm = energy(reference);
    if norm == 0.0 {
        return Ok(if diff == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok((diff / norm).sqrt())
}

/// Oscillator amplitudes `C_p(v)` on a velocity grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityCoefficients {
    pub v_grid: VelocityGrid,
    /// `[p][i_v]`
    pub coeffs: Array2<C64>,
}

impl VelocityCoefficients {
    pub fn new(v_grid: VelocityGrid, coeffs: Array2<C64>) -> Result<Self> {
        if coeffs.ncols() != v_grid.len() || coeffs.nrows() == 0 {
            return Err(Error::config(format!(
                "coefficient table {:?} does not match {} velocities",
                coeffs.dim(),
                v_grid.len()
            )));
        }
        Ok(Self { v_grid, coeffs })
    }

    /// A single excitation `C_p(v_i) = amplitude / w_i`, so that the
    /// v-quadrature returns `amplitude·ψ_p^{v_i}`.
    pub fn single(v_grid: VelocityGrid, p_max: usize, p: usize, v_index: usize, amplitude: C64) -> Result<Self> {
        if p > p_max || v_index >= v_grid.len() {
            return Err(Error::domain("excitation outside the basis"));
        }
        let mut coeffs = Array2::zeros((p_max + 1, v_grid.len()));
        coeffs[[p, v_index]] = amplitude / v_grid.weights()[v_index];
        Ok(Self { v_grid, coeffs })
    }

    pub fn p_max(&self) -> usize {
        self.coeffs.nrows() - 1
    }
}

/// `Σ_p ∫ |C_p(v)|² dv`.
pub fn energy_of_coefficients(c: &VelocityCoefficients) -> f64 {
    c.coeffs
        .rows()
        .into_iter()
        .map(|row| {
            row.iter()
                .zip(c.v_grid.weights())
                .map(|(z, w)| w * z.norm_sqr())
                .sum::<f64>()
        })
        .sum()
}

/// Result of projecting `X(α, v)` onto the truncated basis.
#[derive(Debug, Clone)]
pub struct Projection {
    pub coefficients: VelocityCoefficients,
    /// `‖X − Σ_p C_p f_p‖ / ‖X‖` in the `dα/α ⊗ dv` norm.
    pub relative_residual: f64,
}

impl Projection {
    /// Fails with [`Error::Truncation`] when the residual exceeds `tolerance`.
    pub fn within(&self, tolerance: f64) -> Result<&VelocityCoefficients> {
        if self.relative_residual > tolerance {
            return Err(Error::Truncation {
                residual: self.relative_residual,
                tolerance,
            });
        }
        Ok(&self.coefficients)
    }
}

/// `C_p(v) = (4π²ω′/k) ∫ X(α, v) f_p(α) dα/α` for every `v` on the grid.
pub fn project_coefficients<F>(field_spectrum: F, cfg: &BasisConfig, params: &MediumParams) -> Result<Projection>
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    let table = BasisTable::for_config(cfg, params);
    let scale = 1.0 / spectral_norm(params);
    let n_modes = cfg.n_modes();

    let per_velocity: Vec<(Vec<C64>, f64, f64)> = cfg
        .v_grid
        .nodes()
        .par_iter()
        .map(|&v| {
            let samples: Vec<C64> = table.alphas().iter().map(|&a| field_spectrum(a, v)).collect();
            let coeffs: Vec<C64> = (0..n_modes)
                .map(|p| {
                    let mut acc = C64::new(0.0, 0.0);
                    for (i, x) in samples.iter().enumerate() {
                        acc += x * (table.weights[i] * table.spectra_over_alpha[[p, i]]);
                    }
                    acc * scale
                })
                .collect();
            let mut residual = 0.0;
            let mut norm = 0.0;
            for (i, x) in samples.iter().enumerate() {
                let approx: C64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(p, c)| c * table.spectra[[p, i]])
                    .sum();
                let w = table.weights[i] / table.alphas[i];
                residual += w * (x - approx).norm_sqr();
                norm += w * x.norm_sqr();
            }
            (coeffs, residual, norm)
        })
        .collect();

    let mut coeffs = Array2::zeros((n_modes, cfg.v_grid.len()));
    let mut residual = 0.0;
    let mut norm = 0.0;
    for (j, ((row, res, nrm), &w)) in per_velocity.iter().zip(cfg.v_grid.weights()).enumerate() {
        for (p, c) in row.iter().enumerate() {
            coeffs[[p, j]] = *c;
        }
        residual += w * res;
        norm += w * nrm;
    }
    let relative_residual = if norm > 0.0 { (residual / norm).sqrt() } else { 0.0 };
    if relative_residual > TRUNCATION_TOLERANCE {
        log::warn!("X-wave projection truncation residual {relative_residual:.3e} with p_max = {}", cfg.p_max);
    }
    Ok(Projection {
        coefficients: VelocityCoefficients::new(cfg.v_grid.clone(), coeffs)?,
        relative_residual,
    })
}

/// `X_rec(α, v) = Σ_p C_p(v) f_p(α)`, with `v` snapped to the nearest grid node.
pub fn reconstruct<'a>(
    c: &'a VelocityCoefficients,
    params: &'a MediumParams,
    delta: f64,
) -> impl Fn(f64, f64) -> C64 + Sync + 'a {
    let n_modes = c.p_max() + 1;
    move |alpha, v| {
        let mut buf = vec![0.0; n_modes];
        spectra_at(params, delta, alpha, &mut buf);
        let j = c.v_grid.nearest(v);
        buf.iter().enumerate().map(|(p, f)| c.coeffs[[p, j]] * *f).sum()
    }
}

/// Extent of a spectrum's support in the `(k⊥, k_z)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSupport {
    pub kperp_max: f64,
    pub kz_min: f64,
    pub kz_max: f64,
}

impl SpectralSupport {
    pub fn contains(&self, kperp: f64, kz: f64) -> bool {
        (0.0..=self.kperp_max).contains(&kperp) && (self.kz_min..=self.kz_max).contains(&kz)
    }
}

/// Anything that can supply `S(k⊥, k_z)` at arbitrary wavenumbers.
pub trait SpectralAmplitude: Sync {
    fn amplitude(&self, kperp: f64, kz: f64) -> C64;

    /// Region outside of which the amplitude is zero (or negligible).
    fn support(&self) -> SpectralSupport;

    /// Sampling nodes for spectra that are piecewise smooth between them.
    fn breakpoints(&self) -> Option<(&[f64], &[f64])> {
        None
    }
}

impl<T: SpectralAmplitude + ?Sized> SpectralAmplitude for &T {
    fn amplitude(&self, kperp: f64, kz: f64) -> C64 {
        (**self).amplitude(kperp, kz)
    }

    fn support(&self) -> SpectralSupport {
        (**self).support()
    }

    fn breakpoints(&self) -> Option<(&[f64], &[f64])> {
        (**self).breakpoints()
    }
}

/// Separable Gaussian `A·exp(−k⊥²/2σ⊥² − (k_z − k₀)²/2σ_z²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpectrum {
    pub amplitude: C64,
    pub kperp_width: f64,
    pub kz_center: f64,
    pub kz_width: f64,
}

impl GaussianSpectrum {
    /// Widths at which the support is truncated.
    pub const SUPPORT_WIDTHS: f64 = 9.0;

    /// Exact `4π² ∫∫ k⊥ |S|² dk⊥ dk_z`, the energy of the envelope it generates.
    pub fn energy(&self) -> f64 {
        let kperp_part = 0.5 * self.kperp_width * self.kperp_width;
        let kz_part = self.kz_width * PI.sqrt();
        4.0 * PI * PI * self.amplitude.norm_sqr() * kperp_part * kz_part
    }
}

impl SpectralAmplitude for GaussianSpectrum {
    fn amplitude(&self, kperp: f64, kz: f64) -> C64 {
        let a = kperp / self.kperp_width;
        let b = (kz - self.kz_center) / self.kz_width;
        self.amplitude * (-0.5 * (a * a + b * b)).exp()
    }

    fn support(&self) -> SpectralSupport {
        SpectralSupport {
            kperp_max: Self::SUPPORT_WIDTHS * self.kperp_width,
            kz_min: self.kz_center - Self::SUPPORT_WIDTHS * self.kz_width,
            kz_max: self.kz_center + Self::SUPPORT_WIDTHS * self.kz_width,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    #[default]
    Bilinear,
    /// Tensor-product natural cubic spline.
    CubicSpline,
}

/// `S(k⊥, k_z)` sampled on a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    kperp_grid: Vec<f64>,
    kz_grid: Vec<f64>,
    /// `[i_kperp][i_kz]`
    values: Array2<C64>,
    interpolation: Interpolation,
    // ∂/∂k⊥, ∂/∂k_z, ∂²/∂k⊥∂k_z at the nodes (cubic spline only).
    derivatives: Option<[Array2<C64>; 3]>,
}

impl Spectrum {
    pub fn new(kperp_grid: Vec<f64>, kz_grid: Vec<f64>, values: Array2<C64>) -> Result<Self> {
        if kperp_grid.len() < 2 || kz_grid.len() < 2 {
            return Err(Error::config("spectrum grids need at least two points per axis"));
        }
        for (name, grid) in [("kperp", &kperp_grid), ("kz", &kz_grid)] {
            if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|x| !x.is_finite()) {
                return Err(Error::config(format!("{name} grid must be finite and strictly increasing")));
            }
        }
        if kperp_grid[0] < 0.0 {
            return Err(Error::config("kperp grid must be non-negative"));
        }
        if values.dim() != (kperp_grid.len(), kz_grid.len()) {
            return Err(Error::config(format!(
                "spectrum values {:?} do not match grids ({}, {})",
                values.dim(),
                kperp_grid.len(),
                kz_grid.len()
            )));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::domain("spectrum values must be finite"));
        }
        Ok(Self {
            kperp_grid,
            kz_grid,
            values,
            interpolation: Interpolation::Bilinear,
            derivatives: None,
        })
    }

    /// Samples `source` on the given grids.
    pub fn sample<S: SpectralAmplitude + ?Sized>(source: &S, kperp_grid: Vec<f64>, kz_grid: Vec<f64>) -> Result<Self> {
        let values = Array2::from_shape_fn((kperp_grid.len(), kz_grid.len()), |(i, j)| {
            source.amplitude(kperp_grid[i], kz_grid[j])
        });
        Self::new(kperp_grid, kz_grid, values)
    }

    pub fn with_interpolation(mut self, interpolation: Interpolation) -> Self {
        self.interpolation = interpolation;
        self.derivatives = match interpolation {
            Interpolation::Bilinear => None,
            Interpolation::CubicSpline => Some(spline_derivatives(&self.kperp_grid, &self.kz_grid, &self.values)),
        };
        self
    }

    pub fn kperp_grid(&self) -> &[f64] {
        &self.kperp_grid
    }

    pub fn kz_grid(&self) -> &[f64] {
        &self.kz_grid
    }

    pub fn values(&self) -> &Array2<C64> {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    fn interpolate(&self, kperp: f64, kz: f64) -> C64 {
        let (Some(i), Some(j)) = (locate(&self.kperp_grid, kperp), locate(&self.kz_grid, kz)) else {
            return C64::new(0.0, 0.0);
        };
        let hx = self.kperp_grid[i + 1] - self.kperp_grid[i];
        let hy = self.kz_grid[j + 1] - self.kz_grid[j];
        let tx = (kperp - self.kperp_grid[i]) / hx;
        let ty = (kz - self.kz_grid[j]) / hy;
        let f = &self.values;
        match &self.derivatives {
            None => {
                f[[i, j]] * ((1.0 - tx) * (1.0 - ty))
                    + f[[i + 1, j]] * (tx * (1.0 - ty))
                    + f[[i, j + 1]] * ((1.0 - tx) * ty)
                    + f[[i + 1, j + 1]] * (tx * ty)
            }
            Some([fx, fy, fxy]) => {
                let (h0x, h1x, g0x, g1x) = hermite(tx);
                let (h0y, h1y, g0y, g1y) = hermite(ty);
                let ax = [h0x, h1x];
                let bx = [g0x * hx, g1x * hx];
                let ay = [h0y, h1y];
                let by = [g0y * hy, g1y * hy];
                let mut sum = C64::new(0.0, 0.0);
                for a in 0..2 {
                    for b in 0..2 {
                        let idx = [i + a, j + b];
                        sum += f[idx] * (ax[a] * ay[b])
                            + fx[idx] * (bx[a] * ay[b])
                            + fy[idx] * (ax[a] * by[b])
                            + fxy[idx] * (bx[a] * by[b]);
                    }
                }
                sum
            }
        }
    }
}

impl SpectralAmplitude for Spectrum {
    fn amplitude(&self, kperp: f64, kz: f64) -> C64 {
        self.interpolate(kperp, kz)
    }

    fn support(&self) -> SpectralSupport {
        SpectralSupport {
            kperp_max: self.kperp_grid[self.kperp_grid.len() - 1],
            kz_min: self.kz_grid[0],
            kz_max: self.kz_grid[self.kz_grid.len() - 1],
        }
    }

    fn breakpoints(&self) -> Option<(&[f64], &[f64])> {
        Some((&self.kperp_grid, &self.kz_grid))
    }
}

// Cell index i with grid[i] ≤ x ≤ grid[i+1], or None outside the grid.
fn locate(grid: &[f64], x: f64) -> Option<usize> {
    let last = grid.len() - 1;
    if !(x >= grid[0] && x <= grid[last]) {
        return None;
    }
    let i = grid.partition_point(|&g| g <= x);
    Some(i.saturating_sub(1).min(last - 1))
}

// Cubic Hermite basis: values at 0 and 1, then unit-slope functions.
fn hermite(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (
        2.0 * t3 - 3.0 * t2 + 1.0,
        -2.0 * t3 + 3.0 * t2,
        t3 - 2.0 * t2 + t,
        t3 - t2,
    )
}

// Node derivatives of the tensor-product cubic spline. The spline is natural
// at every edge except k⊥ = 0, where a radial spectrum has zero slope.
fn spline_derivatives(x: &[f64], y: &[f64], f: &Array2<C64>) -> [Array2<C64>; 3] {
    let (nx, ny) = f.dim();
    let clamp_x = x[0] == 0.0;
    let mut fx = Array2::zeros((nx, ny));
    let mut fy = Array2::zeros((nx, ny));
    let mut fxy = Array2::zeros((nx, ny));
    for j in 0..ny {
        let column: Vec<C64> = (0..nx).map(|i| f[[i, j]]).collect();
        for (i, d) in spline_slopes(x, &column, clamp_x).into_iter().enumerate() {
            fx[[i, j]] = d;
        }
    }
    for i in 0..nx {
        let row: Vec<C64> = (0..ny).map(|j| f[[i, j]]).collect();
        for (j, d) in spline_slopes(y, &row, false).into_iter().enumerate() {
            fy[[i, j]] = d;
        }
    }
    for j in 0..ny {
        let column: Vec<C64> = (0..nx).map(|i| fy[[i, j]]).collect();
        for (i, d) in spline_slopes(x, &column, clamp_x).into_iter().enumerate() {
            fxy[[i, j]] = d;
        }
    }
    [fx, fy, fxy]
}

// First derivatives at the nodes of the cubic spline through (x, f): natural
// at both ends, or with zero slope at the start when `clamp_start` is set.
fn spline_slopes(x: &[f64], f: &[C64], clamp_start: bool) -> Vec<C64> {
    let n = x.len();
    let zero = C64::new(0.0, 0.0);
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let secant: Vec<C64> = (0..n - 1).map(|i| (f[i + 1] - f[i]) / h[i]).collect();

    // Tridiagonal system for the second derivatives m.
    let mut lower = vec![0.0; n];
    let mut diag = vec![1.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = vec![zero; n];
    if clamp_start {
        diag[0] = 2.0 * h[0];
        upper[0] = h[0];
        rhs[0] = secant[0] * 6.0;
    }
    for i in 1..n - 1 {
        lower[i] = h[i - 1];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        upper[i] = h[i];
        rhs[i] = (secant[i] - secant[i - 1]) * 6.0;
    }
    for i in 1..n {
        let ratio = lower[i] / diag[i - 1];
        diag[i] -= ratio * upper[i - 1];
        let carry = rhs[i - 1] * ratio;
        rhs[i] -= carry;
    }
    let mut m = vec![zero; n];
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - m[i + 1] * upper[i]) / diag[i];
    }
    (0..n)
        .map(|i| {
            if i < n - 1 {
                secant[i] - (m[i] * 2.0 + m[i + 1]) * (h[i] / 6.0)
            } else {
                secant[i - 1] + (m[i - 1] + m[i] * 2.0) * (h[i - 1] / 6.0)
            }
        })
        .collect()
}

/// One sample of the X-wave transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSample {
    pub value: C64,
    /// `false` when `(α, v)` maps outside the spectrum's support (value is 0).
    pub in_support: bool,
}

/// `X(α, v) = (kα/ω′)·S(α·sqrt(ω″k/ω′), α − v/ω″)`.
#[derive(Debug, Clone, Copy)]
pub struct XWaveTransform<'a, S: SpectralAmplitude + ?Sized> {
    spectrum: &'a S,
    params: MediumParams,
}

pub fn xwave_transform<'a, S: SpectralAmplitude + ?Sized>(spectrum: &'a S, params: &MediumParams) -> XWaveTransform<'a, S> {
    XWaveTransform {
        spectrum,
        params: *params,
    }
}

impl<S: SpectralAmplitude + ?Sized> XWaveTransform<'_, S> {
    pub fn sample(&self, alpha: f64, v: f64) -> TransformSample {
        let (kperp, kz) = wavenumbers(&self.params, alpha, v);
        if !self.spectrum.support().contains(kperp, kz) {
            return TransformSample {
                value: C64::new(0.0, 0.0),
                in_support: false,
            };
        }
        TransformSample {
            value: self.spectrum.amplitude(kperp, kz) * (self.params.k * alpha / self.params.omega1),
            in_support: true,
        }
    }

    pub fn eval(&self, alpha: f64, v: f64) -> C64 {
        self.sample(alpha, v).value
    }
}

/// `(k⊥, k_z)` for given `(α, v)`.
pub fn wavenumbers(params: &MediumParams, alpha: f64, v: f64) -> (f64, f64) {
    (alpha * params.transverse_scale(), alpha - v / params.omega2)
}

/// `(α, v)` for given `(k⊥, k_z)`.
pub fn transform_coordinates(params: &MediumParams, kperp: f64, kz: f64) -> (f64, f64) {
    let alpha = kperp / params.transverse_scale();
    (alpha, params.omega2 * (alpha - kz))
}

/// `Δ = 1/⟨α⟩`, with `⟨α⟩` the centroid of `α` under `|X|² dα dv/α`.
pub fn delta_from_centroid<S: SpectralAmplitude + ?Sized>(spectrum: &S, params: &MediumParams) -> Result<f64> {
    let support = spectrum.support();
    let kperp_rule = QuadratureRule::composite_gauss_legendre(16, 16, 0.0, support.kperp_max)?;
    let kz_rule = QuadratureRule::composite_gauss_legendre(16, 16, support.kz_min, support.kz_max)?;
    let mut moment = 0.0;
    let mut mass = 0.0;
    for (&kp, &wp) in kperp_rule.nodes().iter().zip(kperp_rule.weights()) {
        for (&kz, &wz) in kz_rule.nodes().iter().zip(kz_rule.weights()) {
            let density = wp * wz * kp * spectrum.amplitude(kp, kz).norm_sqr();
            mass += density;
            moment += density * kp;
        }
    }
    if !(mass > 0.0) {
        return Err(Error::Degenerate("spectrum has no energy".into()));
    }
    let centroid = moment / mass / params.transverse_scale();
    Ok(1.0 / centroid)
}

impl RuleKind {
    pub fn is_semi_infinite(&self) -> bool {
        matches!(self, RuleKind::GaussLaguerre { .. })
    }
}
