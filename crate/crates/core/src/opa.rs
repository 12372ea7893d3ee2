//! Two-particle state generated by optical parametric amplification.
//!
//! Two quantized fields share `ω″` and differ in `ω′` and `k`. With a constant
//! classical pump, first-order perturbation theory from the vacuum gives
//!
//! ```text
//! Φ_pq(u, v; t) = e^{iK(u,v)t} χ_pq(u+v) G(u, v, t) sqrt(ω_p(v) ω_q(u))
//! ```
//!
//! for the pair `a_p†(u) b_q†(v)|0⟩`. At large `t`, `|Φ|²` concentrates on
//! `g(u, v) = 0`, which for small velocities is the locking line `v = ρu`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::medium::{velocity_ratio_rho, MediumParams};
use crate::specfun::QuadratureRule;
use crate::xwave::{spectra_at, spectra_over_alpha, BasisConfig, VelocityGrid};
use crate::C64;

/// Default half-width of the small-momenta band as a fraction of `|ω₁′ − ω₂′|`.
pub const SMALL_MOMENTA_FRACTION: f64 = 0.1;
/// Ratio of the interquartile range to the standard deviation of a normal law.
const IQR_PER_SIGMA: f64 = 1.3489795003921634;

#[derive(Debug, Clone, PartialEq)]
pub struct OpaConfig {
    pub field1: MediumParams,
    pub field2: MediumParams,
    /// Coupling strength, carrying the pump amplitude.
    pub chi: f64,
    pub basis1: BasisConfig,
    pub basis2: BasisConfig,
    /// Interaction time.
    pub t: f64,
    pub uv_grid: VelocityGrid,
    /// Small-momenta band `|u|, |v| ≤ fraction·|ω₁′ − ω₂′|`.
    pub small_momenta_fraction: f64,
}

impl OpaConfig {
    /// Both fields use the same `Δ` and `p_max`; the basis velocity grids are
    /// the `(u, v)` grid.
    pub fn new(
        field1: MediumParams,
        field2: MediumParams,
        chi: f64,
        delta: f64,
        p_max: usize,
        t: f64,
        uv_grid: VelocityGrid,
    ) -> Result<Self> {
        let basis = BasisConfig::new(delta, p_max, uv_grid.clone())?;
        let cfg = Self {
            field1,
            field2,
            chi,
            basis1: basis.clone(),
            basis2: basis,
            t,
            uv_grid,
            small_momenta_fraction: SMALL_MOMENTA_FRACTION,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_time(&self, t: f64) -> Self {
        Self { t, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        self.field1.validate()?;
        self.field2.validate()?;
        if self.field1.omega2 != self.field2.omega2 {
            return Err(Error::config(format!(
                "both fields must share ω″ (got {} and {})",
                self.field1.omega2, self.field2.omega2
            )));
        }
        let (a, b) = (self.field1.omega1, self.field2.omega1);
        if (a - b).abs() <= 1e-12 * a.abs().max(b.abs()) {
            return Err(Error::config("group velocities ω₁′ and ω₂′ must differ"));
        }
        if !self.chi.is_finite() {
            return Err(Error::config("chi must be finite"));
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(Error::config(format!("interaction time must be non-negative, got {}", self.t)));
        }
        if !(self.small_momenta_fraction > 0.0) {
            return Err(Error::config("small_momenta_fraction must be positive"));
        }
        Ok(())
    }

    pub fn rho(&self) -> f64 {
        velocity_ratio_rho(&self.field1, &self.field2)
    }

    /// `ω₁′ − ω₂′`.
    pub fn velocity_mismatch(&self) -> f64 {
        self.field1.omega1 - self.field2.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.field1.omega2
    }

    fn small_momenta_limit(&self) -> f64 {
        self.small_momenta_fraction * self.velocity_mismatch().abs()
    }
}

/// `ω_p(v) = v²/2ω″`.
fn oscillator_frequency(v: f64, omega2: f64) -> f64 {
    v * v / (2.0 * omega2)
}

/// `χ_pq(ν)`, zero for `ν ≤ 0`.
///
/// The `1/ν` factor is absorbed into `f_{p,1}(α)/α`, which is finite at
/// `α = 0`, so the kernel is evaluated without cancellation near `ν = 0`.
pub fn coupling_kernel(p: usize, q: usize, nu: f64, cfg: &OpaConfig) -> f64 {
    if !(nu > 0.0) {
        return 0.0;
    }
    let rho = cfg.rho();
    let scale = (1.0 + rho) * cfg.omega2();
    let alpha1 = nu / scale;
    let alpha2 = rho * nu / scale;
    let mut f1 = vec![0.0; p + 1];
    let mut f2 = vec![0.0; q + 1];
    spectra_over_alpha(&cfg.field1, cfg.basis1.delta, alpha1, &mut f1);
    spectra_at(&cfg.field2, cfg.basis2.delta, alpha2, &mut f2);
    let (a, b) = (&cfg.field1, &cfg.field2);
    let prefactor = 4.0 * PI * PI * cfg.chi * ((a.omega1 * b.omega1) / (a.k * b.k)).sqrt();
    prefactor * f1[p] * f2[q] / scale
}

/// `(K, g)` at `(u, v)`:
///
/// ```text
/// K = (u − v + ω₁′ − ω₂′)(v − ρu) / (2(1+ρ)ω″)
/// g = (u² + v²)/ω″ + (u − v + ω₁′ − ω₂′)(v − ρu) / ((1+ρ)ω″)
/// ```
pub fn phase_functions(u: f64, v: f64, cfg: &OpaConfig) -> (f64, f64) {
    let rho = cfg.rho();
    let w2 = cfg.omega2();
    let cross = (u - v + cfg.velocity_mismatch()) * (v - rho * u) / ((1.0 + rho) * w2);
    (0.5 * cross, (u * u + v * v) / w2 + cross)
}

/// Phase rate `F(u, v)` of the interaction Hamiltonian,
/// `(u² + v²)/2ω″ + (u − v + ω₁′ − ω₂′)(v − ρu)/((1+ρ)ω″)`.
///
/// It satisfies `g = F + (u² + v²)/2ω″` and `K = g/2 − (u² + v²)/2ω″`.
pub fn interaction_phase(u: f64, v: f64, cfg: &OpaConfig) -> f64 {
    let rho = cfg.rho();
    let w2 = cfg.omega2();
    (u * u + v * v) / (2.0 * w2) + (u - v + cfg.velocity_mismatch()) * (v - rho * u) / ((1.0 + rho) * w2)
}

/// `G = 2 sin(gt/2)/g`, equal to `t` at `g = 0`.
pub fn sinc_factor(g: f64, t: f64) -> f64 {
    let x = 0.5 * g * t;
    if x.abs() < 1e-4 {
        t * (1.0 - x * x / 6.0)
    } else {
        2.0 * x.sin() / g
    }
}

/// `P_pq(t, u, v) = ω_p(v)ω_q(u)|χ_pq(u+v)|² sin²(gt/2)/(gt/2)² t²`.
pub fn transition_probability(p: usize, q: usize, u: f64, v: f64, t: f64, cfg: &OpaConfig) -> f64 {
    let w2 = cfg.omega2();
    let chi = coupling_kernel(p, q, u + v, cfg);
    if chi == 0.0 {
        return 0.0;
    }
    let (_, g) = phase_functions(u, v, cfg);
    let gf = sinc_factor(g, t);
    oscillator_frequency(v, w2) * oscillator_frequency(u, w2) * chi * chi * gf * gf
}

/// `Φ_pq(u, v; t)` on the `(u, v)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAmplitude {
    pub p: usize,
    pub q: usize,
    pub uv_grid: VelocityGrid,
    /// `[i_u][i_v]`
    pub values: Array2<C64>,
    pub normalized: bool,
}

impl JointAmplitude {
    /// `a(u)·b(v)`, a product state used to check entanglement measures.
    pub fn separable<A, B>(uv_grid: VelocityGrid, a: A, b: B) -> Self
    where
        A: Fn(f64) -> C64,
        B: Fn(f64) -> C64,
    {
        let nodes = uv_grid.nodes();
        let values = Array2::from_shape_fn((nodes.len(), nodes.len()), |(i, j)| a(nodes[i]) * b(nodes[j]));
        Self {
            p: 0,
            q: 0,
            uv_grid,
            values,
            normalized: false,
        }
    }

    /// `Σ w_u w_v |Φ|²`.
    pub fn norm_sqr(&self) -> f64 {
        let w = self.uv_grid.weights();
        self.values
            .indexed_iter()
            .map(|((i, j), z)| w[i] * w[j] * z.norm_sqr())
            .sum()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Degenerate(format!("joint amplitude has norm {n}")));
        }
        let scale = 1.0 / n.sqrt();
        Ok(Self {
            values: self.values.mapv(|z| z * scale),
            normalized: true,
            ..self.clone()
        })
    }

    /// `|Φ|²` on the grid.
    pub fn probability(&self) -> Array2<f64> {
        self.values.mapv(|z| z.norm_sqr())
    }
}

/// `Φ_pq(u, v; t)` at the configured interaction time, unnormalized.
pub fn joint_amplitude(p: usize, q: usize, cfg: &OpaConfig) -> JointAmplitude {
    let nodes = cfg.uv_grid.nodes();
    let w2 = cfg.omega2();
    let t = cfg.t;
    let rows: Vec<Vec<C64>> = nodes
        .par_iter()
        .map(|&u| {
            nodes
                .iter()
                .map(|&v| {
                    let chi = coupling_kernel(p, q, u + v, cfg);
                    if chi == 0.0 {
                        return C64::new(0.0, 0.0);
                    }
                    let (k, g) = phase_functions(u, v, cfg);
                    // sqrt(ω_p(v) ω_q(u)), paired as in the perturbative state.
                    let omegas = (oscillator_frequency(v, w2) * oscillator_frequency(u, w2)).sqrt();
                    C64::from_polar(chi * sinc_factor(g, t) * omegas, k * t)
                })
                .collect()
        })
        .collect();
    let n = nodes.len();
    let values = Array2::from_shape_vec((n, n), rows.into_iter().flatten().collect()).expect("square grid");
    JointAmplitude {
        p,
        q,
        uv_grid: cfg.uv_grid.clone(),
        values,
        normalized: false,
    }
}

/// Coefficient of `t·δ(v − ρu)` in the large-`t` small-momenta limit of `P_pq`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LockingDensity {
    /// `ω_p(ρu)ω_q(u)|χ_pq(u+ρu)|²·2π(1+ρ)ω″/|ω₁′ − ω₂′|`.
    pub value: f64,
    /// Whether `|u|` and `|ρu|` lie inside the small-momenta band.
    pub in_regime: bool,
}

pub fn asymptotic_locking_density(p: usize, q: usize, u: f64, cfg: &OpaConfig) -> LockingDensity {
    let rho = cfg.rho();
    let w2 = cfg.omega2();
    let v = rho * u;
    let chi = coupling_kernel(p, q, u + v, cfg);
    let value = oscillator_frequency(v, w2) * oscillator_frequency(u, w2) * chi * chi * 2.0 * PI * (1.0 + rho) * w2
        / cfg.velocity_mismatch().abs();
    let limit = cfg.small_momenta_limit();
    let in_regime = u.abs() <= limit && v.abs() <= limit;
    if !in_regime {
        log::warn!("u = {u:e} lies outside the small-momenta band |u|, |ρu| ≤ {limit:e}");
    }
    LockingDensity { value, in_regime }
}

/// Velocity `v` nearest to `ρu` where `g(u, v) = 0`.
pub fn resonant_velocity(u: f64, cfg: &OpaConfig) -> f64 {
    let rho = cfg.rho();
    let d = cfg.velocity_mismatch();
    // (1+ρ)ω″g = ρv² + (u(1+ρ) + d)v + (1+ρ)u² − ρu(u + d)
    let a = rho;
    let b = u * (1.0 + rho) + d;
    let c = (1.0 + rho) * u * u - rho * u * (u + d);
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return rho * u;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let roots = [q / a, if q != 0.0 { c / q } else { f64::INFINITY }];
    let target = rho * u;
    if (roots[0] - target).abs() <= (roots[1] - target).abs() {
        roots[0]
    } else {
        roots[1]
    }
}

/// `|∂g/∂v|` at `(u, v)`.
fn g_slope(u: f64, v: f64, cfg: &OpaConfig) -> f64 {
    let rho = cfg.rho();
    let w2 = cfg.omega2();
    let cross = (u - v + cfg.velocity_mismatch()) - (v - rho * u);
    (2.0 * v / w2 + cross / ((1.0 + rho) * w2)).abs()
}

/// Profile of `P_pq(t, u, ·)` over the continuous `v` window of the grid.
///
/// The window is `[max(−v_max, −u), v_max]` (nothing lives at `u + v ≤ 0`).
/// Panels are no wider than half a period of `sin²(gt/2)` and are refined to
/// a sixteenth of the main-lobe half-width within four half-widths of the
/// resonance, so the integral and its quantiles are resolved at any `t`.
struct LineProfile {
    breakpoints: Vec<f64>,
    /// Integral of `P` up to each breakpoint.
    cumulative: Vec<f64>,
}

const PANEL_NODES: usize = 6;
const MAX_PANELS: usize = 400_000;

impl LineProfile {
    fn new(p: usize, q: usize, u: f64, t: f64, cfg: &OpaConfig) -> Result<Self> {
        let v_max = cfg.uv_grid.v_max();
        let lo = (-v_max).max(-u);
        let hi = v_max;
        if !(hi > lo) {
            return Err(Error::Degenerate(format!("no admissible v for u = {u}")));
        }
        let v0 = resonant_velocity(u, cfg);
        let slope = g_slope(u, v0, cfg);
        // Main-lobe half-width of sin²(gt/2)/(gt/2)²; infinite at t = 0.
        let lobe = if t > 0.0 && slope > 0.0 { 2.0 * PI / (slope * t) } else { f64::INFINITY };
        let coarse = (0.5 * lobe).min((hi - lo) / 256.0);
        let fine = (lobe / 16.0).min(coarse);
        let (f_lo, f_hi) = (v0 - 4.0 * lobe, v0 + 4.0 * lobe);

        let mut breakpoints = vec![lo];
        let mut x = lo;
        while x < hi {
            let step = if x + coarse > f_lo && x < f_hi { fine } else { coarse };
            // Land exactly on the fine-region edges.
            let mut next = x + step;
            if x < f_lo && next > f_lo {
                next = f_lo;
            }
            if x < f_hi && next > f_hi && step == fine {
                next = f_hi;
            }
            x = next.min(hi);
            breakpoints.push(x);
            if breakpoints.len() > MAX_PANELS {
                return Err(Error::domain(format!(
                    "resolving P at t = {t:e} needs more than {MAX_PANELS} panels"
                )));
            }
        }
        let rule = QuadratureRule::piecewise_gauss_legendre(PANEL_NODES, &breakpoints)?;
        let values: Vec<f64> = rule
            .nodes()
            .iter()
            .map(|&v| transition_probability(p, q, u, v, t, cfg))
            .collect();
        let mut cumulative = Vec::with_capacity(breakpoints.len());
        cumulative.push(0.0);
        let mut acc = 0.0;
        for panel in 0..breakpoints.len() - 1 {
            let range = panel * PANEL_NODES..(panel + 1) * PANEL_NODES;
            acc += rule.weights()[range.clone()]
                .iter()
                .zip(&values[range])
                .map(|(w, f)| w * f)
                .sum::<f64>();
            cumulative.push(acc);
        }
        Ok(Self {
            breakpoints,
            cumulative,
        })
    }

    fn total(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    /// `v` at which the running integral reaches `level`.
    fn quantile(&self, level: f64, p: usize, q: usize, u: f64, t: f64, cfg: &OpaConfig) -> f64 {
        let target = level * self.total();
        let panel = self.cumulative.partition_point(|&c| c < target).clamp(1, self.breakpoints.len() - 1) - 1;
        let (a, b) = (self.breakpoints[panel], self.breakpoints[panel + 1]);
        let base = self.cumulative[panel];
        let partial = |x: f64| -> f64 {
            if x <= a {
                return 0.0;
            }
            let half = 0.5 * (x - a);
            let mid = 0.5 * (x + a);
            reference_rule()
                .nodes()
                .iter()
                .zip(reference_rule().weights())
                .map(|(s, w)| half * w * transition_probability(p, q, u, mid + half * s, t, cfg))
                .sum()
        };
        let (mut lo, mut hi) = (a, b);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if base + partial(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn reference_rule() -> &'static QuadratureRule {
    use std::sync::OnceLock;
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| QuadratureRule::gauss_legendre(PANEL_NODES, -1.0, 1.0).expect("valid"))
}

/// `∫ P_pq(t, u, v) dv` over the grid's `v` window, resolved continuously.
pub fn integrated_probability(p: usize, q: usize, u: f64, t: f64, cfg: &OpaConfig) -> Result<f64> {
    Ok(LineProfile::new(p, q, u, t, cfg)?.total())
}

/// Lower quartile, median and upper quartile of `v` under `P_pq(t, u, ·)`.
pub fn conditional_quartiles(p: usize, q: usize, u: f64, t: f64, cfg: &OpaConfig) -> Result<[f64; 3]> {
    let profile = LineProfile::new(p, q, u, t, cfg)?;
    if !(profile.total() > 0.0) {
        return Err(Error::Degenerate(format!("P vanishes for u = {u}")));
    }
    Ok([0.25, 0.5, 0.75].map(|level| profile.quantile(level, p, q, u, t, cfg)))
}

/// Width of the spread of `v − ρu` around the locking line at time `t`.
///
/// For each grid `u > 0` whose resonance lies inside the window, the
/// conditional interquartile range of `v` (divided by 1.349, so a normal law
/// would give its standard deviation) is averaged with weights
/// `w_u ∫P dv`. The interquartile range is used because the second moment
/// of `sin²x/x²` diverges.
pub fn velocity_locking_width(p: usize, q: usize, t: f64, cfg: &OpaConfig) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("locking width needs t > 0, got {t}")));
    }
    let v_max = cfg.uv_grid.v_max();
    let rows: Vec<(f64, f64)> = cfg
        .uv_grid
        .nodes()
        .iter()
        .zip(cfg.uv_grid.weights())
        .filter(|(&u, _)| u > 0.0 && resonant_velocity(u, cfg).abs() < v_max)
        .map(|(&u, &w)| (u, w))
        .collect();
    let stats: Vec<Result<(f64, f64)>> = rows
        .par_iter()
        .map(|&(u, w)| {
            let profile = LineProfile::new(p, q, u, t, cfg)?;
            let mass = w * profile.total();
            if !(mass > 0.0) {
                return Ok((0.0, 0.0));
            }
            let lower = profile.quantile(0.25, p, q, u, t, cfg);
            let upper = profile.quantile(0.75, p, q, u, t, cfg);
            Ok((mass, (upper - lower) / IQR_PER_SIGMA))
        })
        .collect();
    let mut mass = 0.0;
    let mut weighted = 0.0;
    for s in stats {
        let (m, width) = s?;
        mass += m;
        weighted += m * width;
    }
    if !(mass > 0.0) {
        return Err(Error::Degenerate("joint probability vanishes on the grid".into()));
    }
    Ok(weighted / mass)
}

/// Grid velocity maximizing `P_pq(t, u, ·)`.
pub fn locking_argmax(p: usize, q: usize, u: f64, t: f64, cfg: &OpaConfig) -> f64 {
    let mut best = (f64::NEG_INFINITY, 0.0);
    for &v in cfg.uv_grid.nodes() {
        let prob = transition_probability(p, q, u, v, t, cfg);
        if prob > best.0 {
            best = (prob, v);
        }
    }
    best.1
}

/// Least-squares fit of `log y = log c + e·log x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub exponent_stderr: f64,
    pub prefactor: f64,
}

pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::domain("power-law fit needs at least two paired samples"));
    }
    if x.iter().chain(y).any(|&a| !(a > 0.0) || !a.is_finite()) {
        return Err(Error::domain("power-law fit needs positive finite samples"));
    }
    let lx: Vec<f64> = x.iter().map(|a| a.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|a| a.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if !(sxx > 0.0) {
        return Err(Error::domain("power-law fit needs distinct abscissae"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let exponent_stderr = if lx.len() > 2 {
        let ssr: f64 = lx
            .iter()
            .zip(&ly)
            .map(|(a, b)| {
                let r = b - intercept - exponent * a;
                r * r
            })
            .sum();
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(PowerLawFit {
        exponent,
        exponent_stderr,
        prefactor: intercept.exp(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtResult {
    /// Non-increasing, with `Σ λ² = 1`.
    pub singular_values: Vec<f64>,
    /// `−Σ λ² ln λ²` in nats.
    pub entropy: f64,
    /// `1/Σ λ⁴`.
    pub schmidt_number: f64,
}

impl SchmidtResult {
    fn from_singular_values(mut s: Vec<f64>) -> Result<Self> {
        s.sort_by(|a, b| b.total_cmp(a));
        let total: f64 = s.iter().map(|x| x * x).sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Degenerate("kernel has numerical rank 0".into()));
        }
        let scale = 1.0 / total.sqrt();
        let singular_values: Vec<f64> = s.into_iter().map(|x| x * scale).collect();
        let mut entropy = 0.0;
        let mut purity = 0.0;
        for &l in &singular_values {
            let p = l * l;
            if p > 0.0 {
                entropy -= p * p.ln();
            }
            purity += p * p;
        }
        Ok(Self {
            singular_values,
            entropy: entropy.max(0.0),
            schmidt_number: 1.0 / purity,
        })
    }
}

fn singular_values(m: DMatrix<C64>) -> Vec<f64> {
    m.singular_values().iter().copied().collect()
}

/// Schmidt decomposition of `Φ(u, v)` using the matrix
/// `sqrt(w_u) Φ(u, v) sqrt(w_v)`, whose singular values converge under grid
/// refinement. Amplitudes that are not yet normalized are scaled to unit norm.
pub fn schmidt_decompose(phi: &JointAmplitude) -> Result<SchmidtResult> {
    let w: Vec<f64> = phi.uv_grid.weights().iter().map(|w| w.sqrt()).collect();
    let (n, m) = phi.values.dim();
    let matrix = DMatrix::from_fn(n, m, |i, j| phi.values[[i, j]] * (w[i] * w[j]));
    SchmidtResult::from_singular_values(singular_values(matrix))
}

/// Schmidt decomposition over `(p, u) ⊗ (q, v)` for every `p, q ≤ p_max`.
pub fn schmidt_decompose_combined(cfg: &OpaConfig, p_max: usize) -> Result<SchmidtResult> {
    let n = cfg.uv_grid.len();
    let modes = p_max + 1;
    let w: Vec<f64> = cfg.uv_grid.weights().iter().map(|w| w.sqrt()).collect();
    let mut matrix = DMatrix::zeros(modes * n, modes * n);
    for p in 0..modes {
        for q in 0..modes {
            let phi = joint_amplitude(p, q, cfg);
            for i in 0..n {
                for j in 0..n {
                    matrix[(p * n + i, q * n + j)] = phi.values[[i, j]] * (w[i] * w[j]);
                }
            }
        }
    }
    SchmidtResult::from_singular_values(singular_values(matrix))
}
