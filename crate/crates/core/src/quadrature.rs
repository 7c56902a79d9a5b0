//! Adaptive composite Gauss–Legendre quadrature for complex-valued integrands
//! on real intervals.
//!
//! Each panel is integrated with an `n`-point Gauss–Legendre rule and an
//! `n/2`-point companion rule; their difference is the panel's error estimate.
//! Panels with the largest estimate are bisected first, so an integrable
//! endpoint singularity ends up behind a geometrically graded mesh.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::FRAC_PI_2;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::complex::ComplexValue;
use crate::error::{Error, Result};

/// Tolerances and rule size for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Number of bisections allowed beyond the initial mesh.
    pub max_subdivisions: usize,
    /// Points of the Gauss–Legendre rule applied on each panel.
    pub panel_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 1 << 14,
            panel_order: 16,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::config("quadrature tolerances must be > 0"));
        }
        if self.panel_order < 2 {
            return Err(Error::config("panel order must be >= 2"));
        }
        if self.panel_order > 256 {
            return Err(Error::config("panel order must be <= 256"));
        }
        Ok(())
    }

    /// Same configuration with a different absolute tolerance.
    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Result of a successful integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: ComplexValue,
    pub error: f64,
    pub subdivisions: usize,
}

/// `|f(t)| ≤ scale · e^{−rate·(t − start)}` on a semi-infinite interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpEnvelope {
    pub scale: f64,
    pub rate: f64,
}

/// Integration domain for [`integrate_real`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Finite {
        a: f64,
        b: f64,
    },
    /// `[start, ∞)`, truncated where the envelope drops below `abs_tol / 10`.
    Decaying {
        start: f64,
        envelope: ExpEnvelope,
    },
}

impl Interval {
    pub fn finite(a: f64, b: f64) -> Self {
        Interval::Finite { a, b }
    }

    pub fn decaying(start: f64, scale: f64, rate: f64) -> Self {
        Interval::Decaying {
            start,
            envelope: ExpEnvelope { scale, rate },
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    /// Newton iteration on the Legendre three-term recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss rule needs at least one node");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut derivative = 0.0;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                derivative = dp;
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            if dp.is_finite() {
                derivative = dp;
            }
            let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    if n == 1 {
        p_prev = 1.0;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

struct PanelRule {
    high: GaussRule,
    low: GaussRule,
}

fn panel_rule(order: usize) -> Arc<PanelRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PanelRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(order)
        .or_insert_with(|| {
            Arc::new(PanelRule {
                high: GaussRule::new(order),
                low: GaussRule::new((order / 2).max(1)),
            })
        })
        .clone()
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: ComplexValue,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn apply_rule<F>(f: &mut F, rule: &PanelRule, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> ComplexValue,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut high = ComplexValue::new(0.0, 0.0);
    for (x, w) in rule.high.nodes.iter().zip(&rule.high.weights) {
        let t = center + half * x;
        let v = f(t);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite {
                at: ComplexValue::new(t, 0.0),
            });
        }
        high += v * *w;
    }
    let mut low = ComplexValue::new(0.0, 0.0);
    for (x, w) in rule.low.nodes.iter().zip(&rule.low.weights) {
        let t = center + half * x;
        let v = f(t);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite {
                at: ComplexValue::new(t, 0.0),
            });
        }
        low += v * *w;
    }
    let value = high * half;
    let error = ((high - low) * half).norm();
    Ok(Panel { a, b, value, error })
}

/// Integrates over the mesh given by `breakpoints`, refining adaptively.
///
/// `breakpoints` must be finite and strictly increasing with at least two
/// entries. The loop stops when the summed error estimate is within
/// `max(abs_tol, rel_tol·|value|)`.
pub fn integrate_mesh<F>(mut f: F, breakpoints: &[f64], cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> ComplexValue,
{
    cfg.validate()?;
    if breakpoints.len() < 2 {
        return Err(Error::domain(
            "integration mesh needs at least two breakpoints",
        ));
    }
    if breakpoints.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("integration mesh must be finite"));
    }
    if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(
            "integration mesh must be strictly increasing",
        ));
    }
    let rule = panel_rule(cfg.panel_order);
    let mut heap = BinaryHeap::with_capacity(breakpoints.len());
    let mut value = ComplexValue::new(0.0, 0.0);
    let mut error = 0.0;
    for w in breakpoints.windows(2) {
        let panel = apply_rule(&mut f, &rule, w[0], w[1])?;
        value += panel.value;
        error += panel.error;
        heap.push(panel);
    }

    let mut frozen_error = 0.0;
    let mut subdivisions = 0;
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * value.norm());
        if error <= target {
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::Convergence {
                estimate: value,
                error,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::Convergence {
                estimate: value,
                error,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Cannot split further in floating point.
            frozen_error += worst.error;
            if heap.is_empty() {
                return Err(Error::Convergence {
                    estimate: value,
                    error,
                });
            }
            continue;
        }
        let left = apply_rule(&mut f, &rule, worst.a, mid)?;
        let right = apply_rule(&mut f, &rule, mid, worst.b)?;
        subdivisions += 1;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if subdivisions % 256 == 0 || error <= cfg.abs_tol.max(cfg.rel_tol * value.norm()) {
            // Re-sum to shed the rounding drift of the running difference.
            error = frozen_error + heap.iter().map(|p| p.error).sum::<f64>();
        }
    }

    let value = heap
        .iter()
        .fold(ComplexValue::new(0.0, 0.0), |acc, p| acc + p.value);
    Ok(Estimate {
        value,
        error,
        subdivisions,
    })
}

/// Adaptive integral of `f` over a finite or exponentially damped semi-infinite interval.
pub fn integrate_real<F>(f: F, interval: Interval, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> ComplexValue,
{
    match interval {
        Interval::Finite { a, b } => {
            if !(a < b) {
                return Err(Error::domain(format!(
                    "integration bounds must satisfy a < b, got [{a}, {b}]"
                )));
            }
            integrate_mesh(f, &[a, b], cfg)
        }
        Interval::Decaying { start, envelope } => {
            let end = truncation_point(start, envelope, cfg)?;
            let mesh: Vec<f64> = (0..=8)
                .map(|k| start + (end - start) * k as f64 / 8.0)
                .collect();
            integrate_mesh(f, &mesh, cfg)
        }
    }
}

/// Point beyond which the declared envelope is below `abs_tol / 10`.
pub fn truncation_point(start: f64, envelope: ExpEnvelope, cfg: &QuadratureConfig) -> Result<f64> {
    if !start.is_finite() {
        return Err(Error::domain("semi-infinite interval needs a finite start"));
    }
    if !(envelope.rate > 0.0) || !(envelope.scale >= 0.0) || !envelope.scale.is_finite() {
        return Err(Error::domain(format!(
            "envelope must have rate > 0 and finite scale >= 0, got rate {} scale {}",
            envelope.rate, envelope.scale
        )));
    }
    let ratio = 10.0 * envelope.scale / cfg.abs_tol;
    let length = if ratio > 1.0 {
        ratio.ln() / envelope.rate
    } else {
        0.0
    };
    Ok(start + length.max(1.0 / envelope.rate))
}

/// `∫_{−∞}^{∞} f(s) ds` through the map `s = tan θ`.
///
/// Suited to integrands with algebraic decay; `0` is always a breakpoint.
pub fn integrate_whole_line<F>(mut f: F, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> ComplexValue,
{
    let mapped = |theta: f64| {
        let c = theta.cos();
        f(theta.tan()) / (c * c)
    };
    integrate_mesh(
        mapped,
        &[
            -FRAC_PI_2,
            -FRAC_PI_2 / 2.0,
            0.0,
            FRAC_PI_2 / 2.0,
            FRAC_PI_2,
        ],
        cfg,
    )
}

/// `∫_{start}^{∞} f(t) dt` through the map `t = start + x/(1−x)`.
pub fn integrate_half_line<F>(mut f: F, start: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> ComplexValue,
{
    if !start.is_finite() {
        return Err(Error::domain("half-line integral needs a finite start"));
    }
    let mapped = |x: f64| {
        let one_minus = 1.0 - x;
        f(start + x / one_minus) / (one_minus * one_minus)
    };
    integrate_mesh(mapped, &[0.0, 0.5, 0.75, 1.0], cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> ComplexValue {
        ComplexValue::new(re, 0.0)
    }

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        for order in [2usize, 3, 8, 16, 33] {
            let rule = GaussRule::new(order);
            let weight_sum: f64 = rule.weights().iter().sum();
            assert_relative_eq!(weight_sum, 2.0, epsilon = 1e-13);
            // ∫_{-1}^{1} x^{2k} dx = 2/(2k+1) for 2k ≤ 2·order − 1.
            for k in 0..order {
                let degree = 2 * k;
                if degree > 2 * order - 1 {
                    break;
                }
                let q: f64 = rule
                    .nodes()
                    .iter()
                    .zip(rule.weights())
                    .map(|(x, w)| w * x.powi(degree as i32))
                    .sum();
                assert_relative_eq!(q, 2.0 / (degree as f64 + 1.0), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn exponential_on_half_line() {
        let cfg = QuadratureConfig::default();
        let est =
            integrate_real(|t| c((-t).exp()), Interval::decaying(0.0, 1.0, 1.0), &cfg).unwrap();
        assert!((est.value - c(1.0)).norm() < 1e-9);
    }

    #[test]
    fn endpoint_singularity_by_grading() {
        let cfg = QuadratureConfig::default();
        let est = integrate_real(|t| c(t.powf(-0.75)), Interval::finite(0.0, 1.0), &cfg).unwrap();
        assert!((est.value - c(4.0)).norm() < 1e-7, "{:?}", est);
    }

    #[test]
    fn damped_oscillation() {
        let cfg = QuadratureConfig::default();
        let est = integrate_real(
            |t| c((-t).exp() * (10.0 * t).cos()),
            Interval::decaying(0.0, 1.0, 1.0),
            &cfg,
        )
        .unwrap();
        assert!((est.value - c(1.0 / 101.0)).norm() < 1e-9);
    }

    #[test]
    fn non_convergence_carries_best_estimate() {
        let cfg = QuadratureConfig {
            max_subdivisions: 3,
            ..QuadratureConfig::default()
        };
        match integrate_real(|t| c(t.powf(-0.99)), Interval::finite(0.0, 1.0), &cfg) {
            Err(Error::Convergence { estimate, error }) => {
                assert!(estimate.re > 0.0);
                assert!(error > 0.0);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_reported() {
        let cfg = QuadratureConfig::default();
        let r = integrate_real(|_| c(f64::NAN), Interval::finite(0.0, 1.0), &cfg);
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn invalid_inputs() {
        let cfg = QuadratureConfig::default();
        assert!(integrate_real(|_| c(1.0), Interval::finite(1.0, 1.0), &cfg).is_err());
        assert!(integrate_real(|_| c(1.0), Interval::decaying(0.0, 1.0, 0.0), &cfg).is_err());
        let bad = QuadratureConfig {
            panel_order: 1,
            ..cfg
        };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        let bad = QuadratureConfig {
            abs_tol: 0.0,
            ..cfg
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn whole_line_lorentzian() {
        let cfg = QuadratureConfig::default();
        let est = integrate_whole_line(|s| c(1.0 / (1.0 + s * s)), &cfg).unwrap();
        assert!((est.value.re - std::f64::consts::PI).abs() < 1e-9);
        let est = integrate_whole_line(|s| c(1.0 / (1.0 + s * s).powi(2)), &cfg).unwrap();
        assert!((est.value.re - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn half_line_algebraic_tail() {
        let cfg = QuadratureConfig::default();
        // ∫₁^∞ t^{-3/2} dt = 2
        let est = integrate_half_line(|t| c(t.powf(-1.5)), 1.0, &cfg).unwrap();
        assert!((est.value.re - 2.0).abs() < 1e-7, "{est:?}");
    }
}
