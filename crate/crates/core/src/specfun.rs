//! Special functions and quadrature rules.
//!
//! Everything here is a pure function of its arguments. The Bessel function
//! `J0` is evaluated in three regimes (power series, periodic trapezoid on the
//! integral representation, Hankel asymptotics) so that the absolute error
//! stays below `1e-12` up to `|x| = 1e4`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::C64;

/// Highest Laguerre order accepted by [`laguerre_gen`].
pub const MAX_LAGUERRE_ORDER: usize = 200;

/// Largest Gauss–Laguerre rule. The outermost node of a 160-point rule sits
/// near `x = 620`, which keeps `exp(x)` folded into the weights finite.
pub const MAX_GAUSS_LAGUERRE_NODES: usize = 160;

const SERIES_LIMIT: f64 = 8.0;
const TRAPEZOID_LIMIT: f64 = 25.0;
const TRAPEZOID_POINTS: usize = 64;

/// Bessel function of the first kind of order zero.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("bessel_j0 argument {x} is not finite")));
    }
    Ok(j0(x))
}

/// Unchecked `J0` for inner loops; callers guarantee a finite argument.
pub(crate) fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        j0_series(ax)
    } else if ax < TRAPEZOID_LIMIT {
        j0_trapezoid(ax)
    } else {
        j0_asymptotic(ax)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

// J0(x) = (1/2π)∫cos(x sin θ)dθ over one period; the trapezoid rule on a
// periodic analytic integrand has error 2·J_N(x), negligible for N = 64, x < 25.
fn j0_trapezoid(x: f64) -> f64 {
    let n = TRAPEZOID_POINTS;
    let step = 2.0 * PI / n as f64;
    let mut sum = 0.0;
    // cos(x sin θ) is symmetric under θ → π − θ and θ → −θ; sum a quarter.
    for j in 1..n / 4 {
        sum += 4.0 * (x * (j as f64 * step).sin()).cos();
    }
    sum += 1.0 + 1.0; // θ = 0, π
    sum += 2.0 * x.cos(); // θ = π/2, 3π/2
    sum / n as f64
}

fn j0_asymptotic(x: f64) -> f64 {
    // Hankel expansion: J0 = sqrt(2/πx)(P cos χ − Q sin χ), χ = x − π/4.
    let inv8x = 1.0 / (8.0 * x);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= odd * odd * inv8x / k as f64;
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        // P = 1 − t2 + t4 − …, Q = −t1 + t3 − …
        match k % 4 {
            1 => q -= term,
            2 => p -= term,
            3 => q += term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    let cos_chi = (c + s) * FRAC_1_SQRT_2;
    let sin_chi = (s - c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Generalized Laguerre polynomial `L_p^{(a)}(x)` by upward recurrence in `p`.
pub fn laguerre_gen(p: usize, a: u32, x: f64) -> Result<f64> {
    if p > MAX_LAGUERRE_ORDER {
        return Err(Error::UnsupportedOrder {
            order: p,
            max: MAX_LAGUERRE_ORDER,
        });
    }
    let mut out = vec![0.0; p + 1];
    laguerre_fill(a, x, &mut out);
    Ok(out[p])
}

/// Fills `out[k] = L_k^{(a)}(x)` for `k = 0..out.len()`.
pub(crate) fn laguerre_fill(a: u32, x: f64, out: &mut [f64]) {
    let a = a as f64;
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = 1.0 + a - x;
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0 + a - x) * out[k] - (kf + a) * out[k - 1]) / (kf + 1.0);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleKind {
    /// Gauss–Legendre on `[a, b]`.
    GaussLegendre { a: f64, b: f64 },
    /// Gauss–Legendre on each panel between consecutive breakpoints.
    CompositeGaussLegendre {
        a: f64,
        b: f64,
        panels: usize,
        per_panel: usize,
    },
    /// Gauss–Laguerre for `∫₀^∞ f(x) dx`, nodes scaled as `x/rate`;
    /// the `exp(-rate·x)` weight is folded into the weights.
    GaussLaguerre { rate: f64 },
    /// Uniform trapezoid on `[a, b]`.
    Trapezoid { a: f64, b: f64 },
}

/// Nodes and positive weights approximating `∫ f(x) dx` as `Σ w_i f(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: RuleKind,
}

impl QuadratureRule {
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        check_interval(a, b)?;
        if n == 0 {
            return Err(Error::config("Gauss–Legendre rule needs at least one node"));
        }
        let (x, w) = legendre_reference(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Ok(Self {
            nodes: x.iter().map(|t| mid + half * t).collect(),
            weights: w.iter().map(|wi| half * wi).collect(),
            kind: RuleKind::GaussLegendre { a, b },
        })
    }

    /// Composite Gauss–Legendre with `per_panel` nodes on each of `panels`
    /// equal sub-intervals of `[a, b]`.
    pub fn composite_gauss_legendre(per_panel: usize, panels: usize, a: f64, b: f64) -> Result<Self> {
        check_interval(a, b)?;
        if panels == 0 {
            return Err(Error::config("composite rule needs at least one panel"));
        }
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| a + (b - a) * i as f64 / panels as f64)
            .collect();
        Self::piecewise_gauss_legendre(per_panel, &breaks)
    }

    /// Gauss–Legendre on every interval between consecutive `breakpoints`.
    pub fn piecewise_gauss_legendre(per_panel: usize, breakpoints: &[f64]) -> Result<Self> {
        if per_panel == 0 || breakpoints.len() < 2 {
            return Err(Error::config("piecewise rule needs nodes and at least two breakpoints"));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::config("breakpoints must be strictly increasing"));
        }
        let (x, w) = legendre_reference(per_panel);
        let mut nodes = Vec::with_capacity(per_panel * (breakpoints.len() - 1));
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breakpoints.windows(2) {
            let half = 0.5 * (pair[1] - pair[0]);
            let mid = 0.5 * (pair[0] + pair[1]);
            nodes.extend(x.iter().map(|t| mid + half * t));
            weights.extend(w.iter().map(|wi| half * wi));
        }
        Ok(Self {
            nodes,
            weights,
            kind: RuleKind::CompositeGaussLegendre {
                a: breakpoints[0],
                b: breakpoints[breakpoints.len() - 1],
                panels: breakpoints.len() - 1,
                per_panel,
            },
        })
    }

    /// Gauss–Laguerre rule for `∫₀^∞ f(x) dx` tuned to integrands decaying
    /// like `exp(-rate·x)`.
    pub fn gauss_laguerre(n: usize, rate: f64) -> Result<Self> {
        if n == 0 || n > MAX_GAUSS_LAGUERRE_NODES {
            return Err(Error::UnsupportedOrder {
                order: n,
                max: MAX_GAUSS_LAGUERRE_NODES,
            });
        }
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::config(format!("Gauss–Laguerre rate must be positive, got {rate}")));
        }
        let (x, log_w) = laguerre_reference(n);
        Ok(Self {
            nodes: x.iter().map(|xi| xi / rate).collect(),
            // w_i·exp(x_i)/rate, assembled in log space.
            weights: x
                .iter()
                .zip(&log_w)
                .map(|(xi, lw)| (lw + xi).exp() / rate)
                .collect(),
            kind: RuleKind::GaussLaguerre { rate },
        })
    }

    pub fn trapezoid(n: usize, a: f64, b: f64) -> Result<Self> {
        check_interval(a, b)?;
        if n < 2 {
            return Err(Error::config("trapezoid rule needs at least two points"));
        }
        let h = (b - a) / (n - 1) as f64;
        let nodes = (0..n).map(|i| a + h * i as f64).collect();
        let weights = (0..n)
            .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
            .collect();
        Ok(Self {
            nodes,
            weights,
            kind: RuleKind::Trapezoid { a, b },
        })
    }

    /// A rule of the same family with roughly 25% more nodes, used to
    /// estimate quadrature convergence.
    pub fn refined(&self) -> Result<Self> {
        let grow = |n: usize| n + n / 4 + 1;
        match self.kind {
            RuleKind::GaussLegendre { a, b } => Self::gauss_legendre(grow(self.len()), a, b),
            RuleKind::CompositeGaussLegendre {
                a,
                b,
                panels,
                per_panel,
            } => Self::composite_gauss_legendre(per_panel, grow(panels), a, b),
            RuleKind::GaussLaguerre { rate } => {
                let n = self.len();
                let m = if n >= MAX_GAUSS_LAGUERRE_NODES {
                    n * 4 / 5
                } else {
                    grow(n).min(MAX_GAUSS_LAGUERRE_NODES)
                };
                Self::gauss_laguerre(m, rate)
            }
            RuleKind::Trapezoid { a, b } => Self::trapezoid(2 * self.len() - 1, a, b),
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest gap between neighbouring nodes.
    pub fn max_spacing(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    pub fn integrate<F>(&self, f: F) -> Result<C64>
    where
        F: FnMut(f64) -> C64,
    {
        integrate(f, self)
    }
}

/// `Σ w_i f(x_i)` over the rule; a non-finite integrand value is reported
/// with the offending node.
pub fn integrate<F>(mut f: F, rule: &QuadratureRule) -> Result<C64>
where
    F: FnMut(f64) -> C64,
{
    let mut sum = C64::new(0.0, 0.0);
    for (index, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let value = f(x);
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::NonFinite { index, x });
        }
        sum += value * w;
    }
    Ok(sum)
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::config(format!("invalid interval [{a}, {b}]")));
    }
    Ok(())
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
fn legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (z * p1 - p0) / (z * z - 1.0))
}

/// Gauss–Laguerre nodes (ascending) and log-weights for the weight `e^{-x}`.
///
/// Initial nodes come from the symmetric Jacobi matrix, then each node is
/// polished by Newton steps on `L_n`. Weights use the Christoffel sum
/// `1/Σ_k L_k(x)²`, accumulated with rescaling to survive large nodes.
fn laguerre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            (2 * i + 1) as f64
        } else if i + 1 == j || j + 1 == i {
            i.max(j) as f64
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    for x in nodes.iter_mut() {
        for _ in 0..20 {
            let (ln, lnm1) = laguerre_pair_scaled(n, *x);
            let derivative = n as f64 * (ln - lnm1) / *x;
            let dx = ln / derivative;
            *x -= dx;
            if dx.abs() <= 1e-15 * x.abs() {
                break;
            }
        }
    }

    let log_weights = nodes.iter().map(|&x| -christoffel_log_sum(n, x)).collect();
    (nodes, log_weights)
}

// (L_n, L_{n-1}) up to a common positive scale factor.
fn laguerre_pair_scaled(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > 1e100 {
            prev *= 1e-100;
            cur *= 1e-100;
        }
    }
    (cur, prev)
}

// ln Σ_{k<n} L_k(x)².
fn christoffel_log_sum(n: usize, x: f64) -> f64 {
    const SCALE: f64 = 1e100;
    let ln_scale = SCALE.ln();
    let mut log_scale = 0.0;
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sum = 1.0;
    for k in 0..n - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        sum += cur * cur;
        if cur.abs() > SCALE {
            prev /= SCALE;
            cur /= SCALE;
            sum /= SCALE * SCALE;
            log_scale += ln_scale;
        }
    }
    sum.ln() + 2.0 * log_scale
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent J0 oracle: Miller backward recurrence normalised by
    /// `1 = J0 + 2 Σ J_{2k}`.
    fn j0_miller(x: f64) -> f64 {
        if x == 0.0 {
            return 1.0;
        }
        let start = 2 * ((x.abs() as usize + 40 + (x.abs().sqrt() * 10.0) as usize) / 2);
        let mut jp1 = 0.0;
        let mut j = 1e-300;
        let mut norm = 0.0;
        let mut j0 = 0.0;
        for k in (0..=start).rev() {
            let jm1 = 2.0 * (k as f64 + 1.0) / x * j - jp1;
            jp1 = j;
            j = jm1;
            // j now holds J_k (unnormalised).
            if k == 0 {
                j0 = j;
                norm += j;
            } else if k % 2 == 0 {
                norm += 2.0 * j;
            }
            if j.abs() > 1e250 {
                j *= 1e-250;
                jp1 *= 1e-250;
                norm *= 1e-250;
            }
        }
        j0 / norm
    }

    #[test]
    fn j0_reference_values() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
        assert!((bessel_j0(1.0).unwrap() - 0.7651976865579666).abs() < 1e-15);
        assert!(bessel_j0(2.404825557695773).unwrap().abs() < 1e-10);
    }

    #[test]
    fn j0_first_zero_by_bisection() {
        // Locate the first zero on the power-series oracle, then compare.
        let series = |x: f64| {
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..80 {
                term *= -0.25 * x * x / (k * k) as f64;
                sum += term;
            }
            sum
        };
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if series(lo) * series(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((0.5 * (lo + hi) - 2.404825557695773).abs() < 1e-14);
        assert!(j0(0.5 * (lo + hi)).abs() < 1e-12);
    }

    #[test]
    fn j0_matches_miller_oracle_across_regimes() {
        let mut x = 0.0;
        while x < 300.0 {
            let err = (j0(x) - j0_miller(x)).abs();
            assert!(err < 1e-12, "x = {x}: {} vs {} (err {err:e})", j0(x), j0_miller(x));
            x += 0.173;
        }
        for &x in &[7.999, 8.0, 8.001, 24.999, 25.0, 25.001, 999.7, 5000.3, 9999.9] {
            let err = (j0(x) - j0_miller(x)).abs();
            assert!(err < 1e-12, "x = {x}: err {err:e}");
        }
    }

    #[test]
    fn j0_is_even_and_bounded() {
        for i in 0..2000 {
            let x = i as f64 * 0.37;
            assert_eq!(j0(x), j0(-x));
            assert!(j0(x).abs() <= 1.0);
        }
    }

    #[test]
    fn j0_rejects_non_finite() {
        assert!(matches!(bessel_j0(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_j0(f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre_gen(0, 1, 5.0).unwrap(), 1.0);
        for &x in &[0.0, 1.0, 3.0] {
            assert_eq!(laguerre_gen(1, 1, x).unwrap(), 2.0 - x);
        }
        assert!((laguerre_gen(2, 1, 2.0).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn laguerre_order_bound() {
        assert!(laguerre_gen(200, 1, 1.0).is_ok());
        assert_eq!(
            laguerre_gen(201, 1, 1.0),
            Err(Error::UnsupportedOrder { order: 201, max: 200 })
        );
    }

    #[test]
    fn laguerre_weighted_orthogonality() {
        let rule = QuadratureRule::gauss_laguerre(64, 1.0).unwrap();
        let mut table = vec![vec![0.0; 13]; rule.len()];
        for (row, &x) in table.iter_mut().zip(rule.nodes()) {
            laguerre_fill(1, x, row);
        }
        for p in 0..=12 {
            for q in 0..=12 {
                let value: f64 = rule
                    .weights()
                    .iter()
                    .zip(rule.nodes())
                    .zip(&table)
                    .map(|((w, x), row)| w * x * row[p] * row[q] * (-x).exp())
                    .sum();
                let expected = if p == q { (p + 1) as f64 } else { 0.0 };
                let scale = ((p + 1) as f64).max(1.0);
                assert!(
                    (value - expected).abs() <= 1e-9 * scale,
                    "p={p} q={q}: {value} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let rule = QuadratureRule::gauss_legendre(16, 0.0, 1.0).unwrap();
        let one = rule.integrate(|_| C64::new(1.0, 0.0)).unwrap();
        assert!((one.re - 1.0).abs() <= 1e-14);
        let rule = QuadratureRule::gauss_legendre(8, 0.0, 2.0).unwrap();
        let cubic = rule.integrate(|x| C64::new(x * x * x, 0.0)).unwrap();
        assert!((cubic.re - 4.0).abs() <= 1e-12);
        // Degree 2n-1 exactness.
        for n in 1..20 {
            let rule = QuadratureRule::gauss_legendre(n, -1.0, 2.0).unwrap();
            let d = 2 * n - 1;
            let exact = (2f64.powi(d as i32 + 1) - (-1f64).powi(d as i32 + 1)) / (d as f64 + 1.0);
            let got = rule.integrate(|x| C64::new(x.powi(d as i32), 0.0)).unwrap().re;
            assert!((got - exact).abs() <= 1e-12 * exact.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn laguerre_rule_integrates_exponential() {
        let rule = QuadratureRule::gauss_laguerre(128, 1.0).unwrap();
        let v = rule.integrate(|x| C64::new((-x).exp(), 0.0)).unwrap();
        assert!((v.re - 1.0).abs() <= 1e-12);
        let scaled = QuadratureRule::gauss_laguerre(128, 3.0).unwrap();
        let v = scaled.integrate(|x| C64::new(x * (-3.0 * x).exp(), 0.0)).unwrap();
        assert!((v.re - 1.0 / 9.0).abs() <= 1e-13);
    }

    #[test]
    fn rules_have_positive_weights_and_increasing_nodes() {
        let rules = [
            QuadratureRule::gauss_legendre(33, -2.0, 5.0).unwrap(),
            QuadratureRule::composite_gauss_legendre(7, 5, 0.0, 1.0).unwrap(),
            QuadratureRule::gauss_laguerre(160, 0.5).unwrap(),
            QuadratureRule::trapezoid(11, 0.0, 1.0).unwrap(),
        ];
        for rule in &rules {
            assert!(rule.weights().iter().all(|&w| w > 0.0 && w.is_finite()));
            assert!(rule.nodes().windows(2).all(|w| w[1] > w[0]));
        }
        assert!(QuadratureRule::gauss_laguerre(161, 1.0).is_err());
    }

    #[test]
    fn integrate_reports_offending_node() {
        let rule = QuadratureRule::trapezoid(5, 0.0, 1.0).unwrap();
        let err = rule
            .integrate(|x| C64::new(if x > 0.6 { f64::NAN } else { x }, 0.0))
            .unwrap_err();
        assert_eq!(err, Error::NonFinite { index: 3, x: 0.75 });
    }

    #[test]
    fn refined_rules_grow() {
        let rule = QuadratureRule::gauss_laguerre(128, 2.0).unwrap();
        assert_eq!(rule.refined().unwrap().len(), 160);
        let full = QuadratureRule::gauss_laguerre(160, 2.0).unwrap();
        assert_eq!(full.refined().unwrap().len(), 128);
        let comp = QuadratureRule::composite_gauss_legendre(8, 4, 0.0, 1.0).unwrap();
        assert_eq!(comp.refined().unwrap().len(), 48);
    }
}
