//! Forward Laplace transform and truncated Bromwich inversion.
//!
//! The inverse at `t` is `(1/2πi)∫_{σ−in}^{σ+in} e^{qt}F(q)dq`, evaluated at an
//! increasing sequence of heights `n`. Each height only adds the two new strips
//! `n_{k−1} < |Im q| ≤ n_k` to the running integral. A point is converged once
//! two successive heights agree to within the convergence tolerance.
//!
//! Past a few oscillations of `e^{ist}` the integral beyond the truncation
//! height is `i·g(n)/t + O(g'(n)/t²)`, where `g` is the integrand. When tail
//! correction is enabled each iterate includes that leading term, which turns
//! the `O(1/(nt))` truncation error of `F ~ 1/p` into `O(1/(nt)²)`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::complex::ComplexValue;
use crate::contour::{arc_damping_integral, arc_maximum};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_mesh, integrate_real, Interval, QuadratureConfig};
use crate::report::{CheckReport, Verdict};
use crate::signal::{GridSignal, TimeFunction};

/// Distance of the default Bromwich line from the abscissa of analyticity.
pub const DEFAULT_LINE_OFFSET: f64 = 0.1;

/// Smallest `n|t|` at which the endpoint tail correction is applied.
const TAIL_CORRECTION_MIN_PHASE: f64 = 20.0;

/// Panels per call into the adaptive integrator when sweeping a strip.
const STRIP_CHUNK: usize = 1024;

/// Truncation heights `50·2^k`, `k = 0..=14`.
pub fn default_heights() -> Vec<f64> {
    (0..=14).map(|k| 50.0 * 2f64.powi(k)).collect()
}

/// Probe times for the `t → 0⁺` extrapolation.
pub fn default_zero_probes() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionConfig {
    /// Abscissa of the Bromwich line.
    pub sigma: f64,
    /// Strictly increasing truncation heights.
    pub heights: Vec<f64>,
    pub convergence_tolerance: f64,
    pub quadrature: QuadratureConfig,
    /// Times used to extrapolate `f(0⁺)`, largest first.
    pub zero_probes: Vec<f64>,
    /// Add the leading endpoint term of the neglected tail to each iterate.
    pub tail_correction: bool,
}

impl InversionConfig {
    pub fn new(sigma: f64) -> Self {
        Self {
            sigma,
            heights: default_heights(),
            convergence_tolerance: 1e-7,
            quadrature: QuadratureConfig::default(),
            zero_probes: default_zero_probes(),
            tail_correction: true,
        }
    }

    /// Default configuration on the line `σ₀ + DEFAULT_LINE_OFFSET`.
    pub fn for_map(map: &AnalyticMap) -> Self {
        Self::new(map.abscissa() + DEFAULT_LINE_OFFSET)
    }

    pub fn with_heights(mut self, heights: Vec<f64>) -> Self {
        self.heights = heights;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.convergence_tolerance = tolerance;
        self
    }

    pub fn with_tail_correction(mut self, enabled: bool) -> Self {
        self.tail_correction = enabled;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn max_height(&self) -> f64 {
        self.heights.last().copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite() {
            return Err(Error::config("Bromwich abscissa must be finite"));
        }
        if self.heights.len() < 2 {
            return Err(Error::config(
                "at least two truncation heights are required",
            ));
        }
        if self.heights[0] <= 0.0 || self.heights.iter().any(|h| !h.is_finite()) {
            return Err(Error::config("truncation heights must be finite and > 0"));
        }
        if self.heights.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config(
                "truncation heights must be strictly increasing",
            ));
        }
        if !(self.convergence_tolerance > 0.0) {
            return Err(Error::config("convergence tolerance must be > 0"));
        }
        if self.zero_probes.len() < 2
            || self
                .zero_probes
                .iter()
                .any(|t| !(*t > 0.0) || !t.is_finite())
            || self.zero_probes.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(Error::config(
                "zero probes must be at least two positive times in decreasing order",
            ));
        }
        self.quadrature.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergenceStatus {
    Converged,
    Stalled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointConvergence {
    pub status: ConvergenceStatus,
    /// Change between the last two heights evaluated.
    pub last_delta: f64,
    /// Height of the last iterate.
    pub height: f64,
}

impl PointConvergence {
    pub fn converged(&self) -> bool {
        self.status == ConvergenceStatus::Converged
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InversionResult {
    pub times: Vec<f64>,
    pub values: Vec<ComplexValue>,
    pub convergence: Vec<PointConvergence>,
    /// Largest height used at any point.
    pub achieved_height: f64,
}

impl InversionResult {
    pub fn all_converged(&self) -> bool {
        self.convergence.iter().all(PointConvergence::converged)
    }

    /// The values as a grid signal; the times must be uniformly spaced.
    pub fn signal(&self) -> Result<GridSignal> {
        if self.times.len() < 2 {
            return Err(Error::domain("a grid signal needs at least two times"));
        }
        let dt = self.times[1] - self.times[0];
        let uniform =
            self.times.iter().enumerate().all(|(k, t)| {
                (t - (self.times[0] + k as f64 * dt)).abs() <= 1e-9 * dt.abs().max(1.0)
            });
        if !uniform {
            return Err(Error::domain("inversion times are not uniformly spaced"));
        }
        GridSignal::new(self.times[0], dt, self.values.clone())
    }
}

/// A causal signal given either in closed form or as samples.
#[derive(Debug, Clone, Copy)]
pub enum Signal<'a> {
    Function(&'a TimeFunction),
    Grid(&'a GridSignal),
}

/// `F(p) = ∫₀^∞ e^{−pt} f(t) dt` by quadrature.
pub fn forward_transform(
    signal: Signal<'_>,
    p: ComplexValue,
    cfg: &QuadratureConfig,
) -> Result<ComplexValue> {
    crate::complex::ensure_finite(p)?;
    match signal {
        Signal::Function(f) => {
            let env = f.envelope();
            if !(p.re > env.growth) {
                return Err(Error::domain(format!(
                    "Re p = {} does not exceed the growth abscissa {} of {}",
                    p.re,
                    env.growth,
                    f.label()
                )));
            }
            let interval = Interval::decaying(0.0, env.scale, p.re - env.growth);
            Ok(integrate_real(|t| (-p * t).exp() * f.eval(t), interval, cfg)?.value)
        }
        Signal::Grid(g) => {
            if !(p.re > 0.0) {
                return Err(Error::domain(format!(
                    "grid transforms need Re p > 0, got {}",
                    p.re
                )));
            }
            let mut mesh: Vec<f64> = (0..g.len())
                .map(|k| g.abscissa(k))
                .filter(|t| *t > 0.0)
                .collect();
            if g.t0() <= 0.0 {
                mesh.insert(0, 0.0);
            }
            let mut total = ComplexValue::new(0.0, 0.0);
            if mesh.len() >= 2 {
                total += integrate_mesh(|t| (-p * t).exp() * g.value_at(t), &mesh, cfg)?.value;
            }
            if let Some(rate) = g.tail_rate() {
                let t_last = g.t_last().max(0.0);
                let last = g.value_at(t_last);
                total += last * (-p * t_last).exp() / (p + rate);
            }
            Ok(total)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct LineValue {
    value: ComplexValue,
    convergence: PointConvergence,
}

/// Integrand `e^{qt} F(q)` with `q = σ + is`.
fn line_integrand(map: &AnalyticMap, sigma: f64, t: f64) -> impl Fn(f64) -> ComplexValue + '_ {
    let damping = (sigma * t).exp();
    move |s| {
        ComplexValue::from_polar(damping, s * t) * map.eval_unchecked(ComplexValue::new(sigma, s))
    }
}

/// `∫_a^b g(s) ds` over panels no wider than `width`.
fn strip_integral<G>(
    g: &G,
    a: f64,
    b: f64,
    width: f64,
    abs_scale: f64,
    cfg: &QuadratureConfig,
) -> Result<(ComplexValue, bool)>
where
    G: Fn(f64) -> ComplexValue,
{
    let span = b - a;
    let panels = ((span / width).ceil() as usize).max(1);
    let mut total = ComplexValue::new(0.0, 0.0);
    let mut exhausted = false;
    let mut start = 0;
    while start < panels {
        let end = (start + STRIP_CHUNK).min(panels);
        let mesh: Vec<f64> = (start..=end)
            .map(|k| {
                if k == panels {
                    b
                } else {
                    a + span * k as f64 / panels as f64
                }
            })
            .collect();
        let chunk_span = mesh[mesh.len() - 1] - mesh[0];
        let chunk_cfg =
            cfg.with_abs_tol((cfg.abs_tol * chunk_span / abs_scale).max(cfg.abs_tol * 1e-3));
        match integrate_mesh(g, &mesh, &chunk_cfg) {
            Ok(est) => total += est.value,
            Err(Error::Convergence { estimate, .. }) => {
                total += estimate;
                exhausted = true;
            }
            Err(e) => return Err(e),
        }
        start = end;
    }
    Ok((total, exhausted))
}

fn line_value(map: &AnalyticMap, t: f64, cfg: &InversionConfig) -> Result<LineValue> {
    line_iterates(map, t, cfg, true, |_, _| {})
}

/// Runs the height sequence at one time, reporting every iterate to `visit`.
fn line_iterates<V>(
    map: &AnalyticMap,
    t: f64,
    cfg: &InversionConfig,
    stop_early: bool,
    mut visit: V,
) -> Result<LineValue>
where
    V: FnMut(f64, ComplexValue),
{
    let integrand = line_integrand(map, cfg.sigma, t);
    let width = if t == 0.0 {
        f64::INFINITY
    } else {
        FRAC_PI_2 / t.abs()
    };
    let symmetric = map.is_conjugate_symmetric();
    let abs_scale = cfg.max_height();
    let mut accumulated = ComplexValue::new(0.0, 0.0);
    let mut lower = 0.0;
    let mut previous: Option<ComplexValue> = None;
    let mut last_delta = f64::INFINITY;
    let mut exhausted = false;
    let mut value = ComplexValue::new(0.0, 0.0);
    for &height in &cfg.heights {
        let (upper_strip, a) =
            strip_integral(&integrand, lower, height, width, abs_scale, &cfg.quadrature)?;
        accumulated += upper_strip;
        exhausted |= a;
        if !symmetric {
            let (lower_strip, b) = strip_integral(
                &integrand,
                -height,
                -lower,
                width,
                abs_scale,
                &cfg.quadrature,
            )?;
            accumulated += lower_strip;
            exhausted |= b;
        }
        lower = height;
        let correct = cfg.tail_correction && height * t.abs() >= TAIL_CORRECTION_MIN_PHASE;
        value = if symmetric {
            let tail = if correct {
                -integrand(height).im / t
            } else {
                0.0
            };
            ComplexValue::new((accumulated.re + tail) / PI, 0.0)
        } else {
            let i = ComplexValue::i();
            let tail = if correct {
                i * (integrand(height) - integrand(-height)) / t
            } else {
                ComplexValue::new(0.0, 0.0)
            };
            (accumulated + tail) / (2.0 * PI)
        };
        visit(height, value);
        if let Some(prev) = previous {
            last_delta = (value - prev).norm();
            if stop_early && last_delta < cfg.convergence_tolerance && !exhausted {
                return Ok(LineValue {
                    value,
                    convergence: PointConvergence {
                        status: ConvergenceStatus::Converged,
                        last_delta,
                        height,
                    },
                });
            }
        }
        previous = Some(value);
    }
    let status = if !stop_early && last_delta < cfg.convergence_tolerance && !exhausted {
        ConvergenceStatus::Converged
    } else {
        ConvergenceStatus::Stalled
    };
    Ok(LineValue {
        value,
        convergence: PointConvergence {
            status,
            last_delta,
            height: cfg.max_height(),
        },
    })
}

/// The Bromwich iterate at every configured height for a single time,
/// without stopping at convergence.
pub fn bromwich_iterates(
    map: &AnalyticMap,
    t: f64,
    cfg: &InversionConfig,
) -> Result<Vec<(f64, ComplexValue)>> {
    check_line(map, cfg)?;
    if !t.is_finite() {
        return Err(Error::domain(format!("inversion time {t} is not finite")));
    }
    let mut out = Vec::with_capacity(cfg.heights.len());
    line_iterates(map, t, cfg, false, |h, v| out.push((h, v)))?;
    Ok(out)
}

fn check_line(map: &AnalyticMap, cfg: &InversionConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.sigma < map.abscissa() {
        return Err(Error::domain(format!(
            "Bromwich line Re q = {} lies left of the abscissa {} of {}",
            cfg.sigma,
            map.abscissa(),
            map.label()
        )));
    }
    Ok(())
}

/// Truncated Bromwich inversion at each of `times`.
///
/// `t = 0` is replaced by the right limit from [`right_limit_at_zero`].
/// Non-convergence is reported per point through [`PointConvergence`].
pub fn bromwich_invert(
    map: &AnalyticMap,
    times: &[f64],
    cfg: &InversionConfig,
) -> Result<InversionResult> {
    check_line(map, cfg)?;
    if let Some(bad) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::domain(format!("inversion time {bad} is not finite")));
    }
    let mut values = Vec::with_capacity(times.len());
    let mut convergence = Vec::with_capacity(times.len());
    for &t in times {
        if t == 0.0 {
            let limit = right_limit_at_zero(map, cfg)?;
            values.push(limit.value);
            convergence.push(limit.convergence);
        } else {
            let lv = line_value(map, t, cfg)?;
            values.push(lv.value);
            convergence.push(lv.convergence);
        }
    }
    let achieved_height = convergence.iter().map(|c| c.height).fold(0.0, f64::max);
    Ok(InversionResult {
        times: times.to_vec(),
        values,
        convergence,
        achieved_height,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroLimitMethod {
    /// Aitken Δ² on the last three probes (exact for `f₀ + A·t^β` on a geometric grid).
    Aitken,
    /// Smallest probe value, used when the differences are not geometric.
    SmallestProbe,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RightLimit {
    pub value: ComplexValue,
    pub method: ZeroLimitMethod,
    pub probes: Vec<(f64, ComplexValue)>,
    /// Worst probe convergence; `last_delta` is scaled by the extrapolation gain.
    pub convergence: PointConvergence,
}

/// Estimates `f(0⁺)` from Bromwich values at `cfg.zero_probes`.
pub fn right_limit_at_zero(map: &AnalyticMap, cfg: &InversionConfig) -> Result<RightLimit> {
    check_line(map, cfg)?;
    let mut probes = Vec::with_capacity(cfg.zero_probes.len());
    let mut worst = PointConvergence {
        status: ConvergenceStatus::Converged,
        last_delta: 0.0,
        height: 0.0,
    };
    for &t in &cfg.zero_probes {
        let lv = line_value(map, t, cfg)?;
        probes.push((t, lv.value));
        if !lv.convergence.converged() {
            worst.status = ConvergenceStatus::Stalled;
        }
        worst.last_delta = worst.last_delta.max(lv.convergence.last_delta);
        worst.height = worst.height.max(lv.convergence.height);
    }
    let (value, method, gain) = extrapolate_to_zero(&probes);
    worst.last_delta *= gain;
    Ok(RightLimit {
        value,
        method,
        probes,
        convergence: worst,
    })
}

/// Aitken extrapolation of the last three probe values with a fallback to
/// the smallest probe. Returns the value, the method and the factor by which
/// probe errors are amplified.
pub fn extrapolate_to_zero(probes: &[(f64, ComplexValue)]) -> (ComplexValue, ZeroLimitMethod, f64) {
    let last = probes[probes.len() - 1].1;
    if probes.len() < 3 {
        return (last, ZeroLimitMethod::SmallestProbe, 1.0);
    }
    let x1 = probes[probes.len() - 3].1;
    let x2 = probes[probes.len() - 2].1;
    let x3 = last;
    let d1 = x2 - x1;
    let d2 = x3 - x2;
    if d1.norm() == 0.0 {
        return (last, ZeroLimitMethod::SmallestProbe, 1.0);
    }
    let ratio = d2 / d1;
    // Geometric convergence towards t = 0 means a real ratio in (0, 1).
    let geometric = ratio.re > 0.0 && ratio.re < 0.95 && ratio.im.abs() <= 0.05 * ratio.re;
    if !geometric {
        return (last, ZeroLimitMethod::SmallestProbe, 1.0);
    }
    let gain = 1.0 / (1.0 - ratio.re);
    (
        x3 + d2 * ratio / (1.0 - ratio),
        ZeroLimitMethod::Aitken,
        2.0 * gain,
    )
}

/// Heights at which the arc estimate is recorded by [`causality_check`].
const ARC_EVIDENCE_RADII: [f64; 4] = [10.0, 100.0, 1_000.0, 10_000.0];

/// Evaluates the inverse at negative times, where a Laplace transform must
/// give zero, and records the arc estimate that justifies closing the contour.
///
/// Passes when every point converged and `max |f(t)| < tolerance`. The
/// convergence tolerance is relaxed to `tolerance / 10` if `cfg` asks for more.
pub fn causality_check(
    map: &AnalyticMap,
    negative_times: &[f64],
    cfg: &InversionConfig,
    tolerance: f64,
) -> Result<CheckReport> {
    if negative_times.is_empty() || negative_times.iter().any(|t| !(*t < 0.0) || !t.is_finite()) {
        return Err(Error::domain(
            "causality check needs finite, strictly negative times",
        ));
    }
    if !(tolerance > 0.0) {
        return Err(Error::domain("causality tolerance must be > 0"));
    }
    let mut cfg = cfg.clone();
    cfg.convergence_tolerance = cfg.convergence_tolerance.max(tolerance / 10.0);
    let result = bromwich_invert(map, negative_times, &cfg)?;

    let mut report = CheckReport::new("causality");
    report.threshold("tolerance", tolerance);
    report.threshold("convergence_tolerance", cfg.convergence_tolerance);
    report.threshold("sigma", cfg.sigma);

    let mut max_abs = 0.0f64;
    let mut decisive_violation = false;
    let mut stalled = false;
    for ((t, v), c) in result
        .times
        .iter()
        .zip(&result.values)
        .zip(&result.convergence)
    {
        report.push(format!("|f({t})|"), v.norm());
        report.push(format!("height({t})"), c.height);
        report.push(format!("delta({t})"), c.last_delta);
        max_abs = max_abs.max(v.norm());
        if c.converged() {
            decisive_violation |= v.norm() >= tolerance;
        } else {
            stalled = true;
        }
    }
    report.push("max|f|", max_abs);

    let t_min = negative_times
        .iter()
        .map(|t| t.abs())
        .fold(f64::INFINITY, f64::min);
    for radius in ARC_EVIDENCE_RADII {
        match arc_maximum(map, radius, 64, 0.0) {
            Ok(sup) => {
                let damping = arc_damping_integral(radius, t_min, &cfg.quadrature)? * radius;
                report.push(format!("sup|F| on C_n[n={radius}]"), sup);
                report.push(format!("n*B(n,|t|)[n={radius}]"), damping);
                report.push(format!("arc bound[n={radius}]"), sup * damping);
            }
            Err(e) => report.note(format!("arc sampling at n={radius} failed: {e}")),
        }
    }

    report.verdict = if decisive_violation {
        Verdict::Fail
    } else if stalled {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    report.note(format!(
        "Bromwich values at t < 0 on Re q = {} up to height {}",
        cfg.sigma, result.achieved_height
    ));
    Ok(report)
}
