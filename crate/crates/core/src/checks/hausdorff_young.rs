use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::analytic::AnalyticMap;
use crate::complex::ComplexValue;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_whole_line, GaussRule, QuadratureConfig};
use crate::report::{CheckReport, Verdict};
use crate::transform::{bromwich_invert, InversionConfig};

use super::windowed_integral;

/// Values of `F(is)` on the imaginary axis.
#[derive(Clone)]
pub struct BoundaryTrace {
    label: String,
    hermitian: bool,
    eval: Arc<dyn Fn(f64) -> ComplexValue + Send + Sync>,
}

impl fmt::Debug for BoundaryTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryTrace")
            .field("label", &self.label)
            .field("hermitian", &self.hermitian)
            .finish_non_exhaustive()
    }
}

impl BoundaryTrace {
    /// `hermitian` declares `F(−is) = conj F(is)`.
    pub fn new<F>(label: impl Into<String>, hermitian: bool, eval: F) -> Self
    where
        F: Fn(f64) -> ComplexValue + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            hermitian,
            eval: Arc::new(eval),
        }
    }

    /// The trace of `F` on `Re p = 0`, which must not lie left of its abscissa.
    pub fn from_map(map: &AnalyticMap) -> Result<Self> {
        if map.abscissa() > 0.0 {
            return Err(Error::domain(format!(
                "{} is only analytic for Re p > {}; no trace on the imaginary axis",
                map.label(),
                map.abscissa()
            )));
        }
        let inner = map.clone();
        Ok(Self::new(
            map.label(),
            map.is_conjugate_symmetric(),
            move |s| inner.eval_unchecked(ComplexValue::new(0.0, s)),
        ))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, s: f64) -> ComplexValue {
        (self.eval)(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffYoungConfig {
    /// `f` is evaluated on `[−T, T]`.
    pub time_horizon: f64,
    pub time_panels: usize,
    pub panel_order: usize,
    /// Convergence tolerance for the time samples of `f`.
    pub convergence_tolerance: f64,
    pub initial_window: f64,
    pub quadrature: QuadratureConfig,
}

impl Default for HausdorffYoungConfig {
    fn default() -> Self {
        Self {
            time_horizon: 20.0,
            time_panels: 20,
            panel_order: 8,
            convergence_tolerance: 1e-5,
            initial_window: 10.0,
            quadrature: QuadratureConfig::default(),
        }
    }
}

/// Gauss nodes and weights on `[−T, T]`, split at 0.
fn time_nodes(cfg: &HausdorffYoungConfig) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussRule::new(cfg.panel_order);
    let width = cfg.time_horizon / cfg.time_panels as f64;
    let mut times = Vec::new();
    let mut weights = Vec::new();
    for sign in [-1.0, 1.0] {
        for k in 0..cfg.time_panels {
            let mid = (k as f64 + 0.5) * width;
            for (x, w) in rule.nodes().iter().zip(rule.weights()) {
                times.push(sign * (mid + 0.5 * width * x));
                weights.push(0.5 * width * w);
            }
        }
    }
    (times, weights)
}

/// `‖v‖_q` from quadrature weights; `q = ∞` gives the maximum.
fn weighted_norm(values: &[f64], weights: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return values.iter().copied().fold(0.0, f64::max);
    }
    values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * v.powf(q))
        .sum::<f64>()
        .powf(1.0 / q)
}

/// Tests `‖f‖_{ℓ/(ℓ−1)} ≤ (2π)^{(ℓ−1)/ℓ} ‖F‖_ℓ` for `f(t) = (1/2π)∫F(is)e^{ist}ds`.
///
/// A divergent `‖F‖_ℓ` fails the membership premise; the inequality then holds
/// only vacuously. For `ℓ > 2` the report only classifies.
pub fn check_hausdorff_young(
    trace: &BoundaryTrace,
    ell: f64,
    cfg: &HausdorffYoungConfig,
) -> Result<CheckReport> {
    if !(ell >= 1.0) || !ell.is_finite() {
        return Err(Error::domain(format!(
            "Hausdorff-Young exponent must be finite and >= 1, got {ell}"
        )));
    }
    if cfg.time_panels == 0 || !(cfg.time_horizon > 0.0) || !(cfg.convergence_tolerance > 0.0) {
        return Err(Error::config(
            "Hausdorff-Young time grid and tolerance must be positive",
        ));
    }
    let conjugate = if ell == 1.0 {
        f64::INFINITY
    } else {
        ell / (ell - 1.0)
    };
    let mut report = CheckReport::new("hausdorff-young");
    report.threshold("ell", ell);
    report.threshold("conjugate_exponent", conjugate);
    report.threshold("time_horizon", cfg.time_horizon);
    report.threshold("convergence_tolerance", cfg.convergence_tolerance);
    report.threshold("window_tail_fraction", super::WINDOW_TAIL_FRACTION);

    let membership = windowed_integral(
        |s| trace.eval(s).norm().powf(ell),
        trace.hermitian,
        cfg.initial_window,
        &cfg.quadrature,
    );
    let membership = match membership {
        Ok(m) => m,
        Err(Error::NonFinite { .. }) => {
            report.note("F is unbounded on the imaginary axis");
            report.verdict = Verdict::Fail;
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.push("window", membership.window);
    report.push("window_tail_fraction", membership.tail_fraction);
    if !membership.converged {
        report.push("norm_F", f64::INFINITY);
        report.note(format!(
            "F is not in L_{ell}: the integral of |F|^{ell} keeps growing up to |s| = {:.1e}; \
             the inequality holds only vacuously",
            membership.window
        ));
        report.verdict = Verdict::Fail;
        return Ok(report);
    }
    if ell > 2.0 {
        report.push("norm_F", membership.value.powf(1.0 / ell));
        report.note("ell > 2: f may be a tempered distribution; no inequality is tested");
        report.verdict = Verdict::Inconclusive;
        return Ok(report);
    }
    report.note("ell in [1, 2]: f is a function");

    let norm_f_line = match integrate_whole_line(
        |s| ComplexValue::new(trace.eval(s).norm().powf(ell), 0.0),
        &cfg.quadrature,
    ) {
        Ok(est) => est.value.re,
        Err(Error::Convergence { .. }) => {
            report.note("mapped integral of |F|^ell did not converge; using the windowed value");
            membership.value
        }
        Err(e) => return Err(e),
    }
    .powf(1.0 / ell);
    let bound = (2.0 * PI).powf((ell - 1.0) / ell) * norm_f_line;
    report.push("norm_F", norm_f_line);
    report.push("bound", bound);

    let inner = trace.clone();
    let adapter = AnalyticMap::new(trace.label(), 0.0, move |p: ComplexValue| inner.eval(p.im));
    let adapter = if trace.hermitian {
        adapter.with_conjugate_symmetry()
    } else {
        adapter
    };
    let mut inversion = InversionConfig::new(0.0).with_tolerance(cfg.convergence_tolerance);
    inversion.quadrature = cfg.quadrature.clone();
    let (times, weights) = time_nodes(cfg);
    let result = bromwich_invert(&adapter, &times, &inversion)?;
    let magnitudes: Vec<f64> = result.values.iter().map(|v| v.norm()).collect();
    let uncertainty = result
        .convergence
        .iter()
        .map(|c| c.last_delta)
        .fold(0.0, f64::max);
    let stalled = result.convergence.iter().filter(|c| !c.converged()).count();

    let norm = weighted_norm(&magnitudes, &weights, conjugate);
    let upper: Vec<f64> = magnitudes.iter().map(|m| m + uncertainty).collect();
    let lower: Vec<f64> = magnitudes
        .iter()
        .map(|m| (m - uncertainty).max(0.0))
        .collect();
    let norm_upper = weighted_norm(&upper, &weights, conjugate);
    let norm_lower = weighted_norm(&lower, &weights, conjugate);
    report.push("norm_f", norm);
    report.push("norm_f_upper", norm_upper);
    report.push("time_uncertainty", uncertainty);
    report.push("stalled_points", stalled as f64);
    report.note(format!(
        "time norm over [-{T}, {T}] only; the tail beyond is omitted",
        T = cfg.time_horizon
    ));

    if ell == 2.0 {
        let plancherel = norm_f_line / (2.0 * PI).sqrt();
        report.push("plancherel_time_side", norm);
        report.push("plancherel_line_side", plancherel);
        report.push(
            "plancherel_relative_gap",
            (norm - plancherel).abs() / plancherel,
        );
    }

    report.verdict = if norm_upper <= bound {
        Verdict::Pass
    } else if norm_lower > bound {
        report.note("inequality violated");
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_decay_trace() -> BoundaryTrace {
        BoundaryTrace::new("1/(1+is)", true, |s| 1.0 / ComplexValue::new(1.0, s))
    }

    #[test]
    fn time_nodes_integrate_polynomials() {
        let cfg = HausdorffYoungConfig::default();
        let (t, w) = time_nodes(&cfg);
        assert_eq!(t.len(), 2 * cfg.time_panels * cfg.panel_order);
        let second_moment: f64 = t.iter().zip(&w).map(|(t, w)| w * t * t).sum();
        assert!((second_moment - 2.0 * 20f64.powi(3) / 3.0).abs() < 1e-8);
    }

    #[test]
    fn plancherel_case_for_exponential() {
        let r = check_hausdorff_young(&exp_decay_trace(), 2.0, &HausdorffYoungConfig::default())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert!((r.value("norm_F").unwrap() - PI.sqrt()).abs() < 1e-6);
        assert!((r.value("bound").unwrap() - (2.0 * PI).sqrt() * PI.sqrt()).abs() < 1e-5);
        assert!((r.value("norm_f").unwrap() - 0.5f64.sqrt()).abs() < 1e-4);
        assert!(r.value("plancherel_relative_gap").unwrap() < 1e-4);
    }

    #[test]
    fn non_integrable_trace_fails_membership() {
        let trace = BoundaryTrace::new("(1+is)^-1/2", true, |s| {
            crate::complex::pow_or_nan(ComplexValue::new(1.0, s), -0.5)
        });
        let r = check_hausdorff_young(&trace, 1.0, &HausdorffYoungConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.value("norm_F"), None);
    }

    #[test]
    fn large_exponent_only_classifies() {
        let r = check_hausdorff_young(&exp_decay_trace(), 3.0, &HausdorffYoungConfig::default())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.notes.contains("tempered distribution"));
        assert!(
            check_hausdorff_young(&exp_decay_trace(), 0.5, &HausdorffYoungConfig::default())
                .is_err()
        );
    }

    #[test]
    fn trace_from_map_requires_axis_in_closure() {
        let right = AnalyticMap::new("1/(p-1)", 1.0, |p: ComplexValue| 1.0 / (p - 1.0));
        assert!(BoundaryTrace::from_map(&right).is_err());
        let ok = AnalyticMap::new("1/(p+1)", 0.0, |p: ComplexValue| 1.0 / (p + 1.0));
        let trace = BoundaryTrace::from_map(&ok).unwrap();
        assert!((trace.eval(2.0) - 1.0 / ComplexValue::new(1.0, 2.0)).norm() < 1e-10);
    }
}
