use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::complex::ComplexValue;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_mesh, QuadratureConfig};
use crate::report::{CheckReport, Verdict};
use crate::transform::{
    extrapolate_to_zero, right_limit_at_zero, InversionConfig, ZeroLimitMethod,
};

use super::decay::{arc_profile, decay_verdict, reference_scale};
use super::graded_mesh;

/// `|f(0⁺)|` below this confirms the vanishing prediction.
const ZERO_TOLERANCE: f64 = 1e-2;

/// Largest height of the boundary line integral in the second route.
const LINE_HEIGHT: f64 = 1e5;

/// Number of doublings reported by [`line_integral_trend`].
const TREND_STEPS: usize = 5;

/// `(1/2π) ∫_{−H}^{H} F(σ₀ + is) ds` at doubling heights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineIntegralTrend {
    pub heights: Vec<f64>,
    pub values: Vec<ComplexValue>,
    /// Aitken limit of the last three values when they converge geometrically.
    pub extrapolated: Option<ComplexValue>,
}

impl LineIntegralTrend {
    pub fn last(&self) -> ComplexValue {
        self.values[self.values.len() - 1]
    }

    /// The extrapolated limit if available, otherwise the last value.
    pub fn limit(&self) -> ComplexValue {
        self.extrapolated.unwrap_or_else(|| self.last())
    }
}

fn boundary_piece(map: &AnalyticMap, mesh: &[f64], cfg: &QuadratureConfig) -> Result<ComplexValue> {
    let sigma = map.abscissa();
    let upper = integrate_mesh(
        |s| map.eval_unchecked(ComplexValue::new(sigma, s)),
        mesh,
        cfg,
    )?
    .value;
    if map.is_conjugate_symmetric() {
        return Ok(ComplexValue::new(2.0 * upper.re, 0.0));
    }
    let lower = integrate_mesh(
        |s| map.eval_unchecked(ComplexValue::new(sigma, -s)),
        mesh,
        cfg,
    )?
    .value;
    Ok(upper + lower)
}

fn doubling_mesh(from: f64, to: f64) -> Vec<f64> {
    let mut mesh = vec![from];
    let mut x = from;
    while 2.0 * x < to {
        x *= 2.0;
        mesh.push(x);
    }
    mesh.push(to);
    mesh
}

/// `(1/2π) ∫_{−H}^{H} F(σ₀ + is) ds`, the Bromwich integral at `t = 0` on the
/// boundary line.
pub fn line_integral_at_boundary(
    map: &AnalyticMap,
    height: f64,
    cfg: &QuadratureConfig,
) -> Result<ComplexValue> {
    Ok(line_integral_trend_with(map, height, 1, cfg)?.last())
}

/// Second route to `f(0) = 0`: the boundary line integral of `F` at doubling
/// heights ending at `height`, with its extrapolated limit.
pub fn line_integral_trend(
    map: &AnalyticMap,
    height: f64,
    cfg: &QuadratureConfig,
) -> Result<LineIntegralTrend> {
    line_integral_trend_with(map, height, TREND_STEPS, cfg)
}

fn line_integral_trend_with(
    map: &AnalyticMap,
    height: f64,
    steps: usize,
    cfg: &QuadratureConfig,
) -> Result<LineIntegralTrend> {
    if !(height > 0.0) || !height.is_finite() {
        return Err(Error::domain(
            "line integral height must be finite and positive",
        ));
    }
    let first = height / 2f64.powi(steps as i32 - 1);
    let core = first.min(1.0);
    let mut total = boundary_piece(map, &graded_mesh(core), cfg)?;
    if first > core {
        total += boundary_piece(map, &doubling_mesh(core, first), cfg)?;
    }
    let mut heights = vec![first];
    let mut values = vec![total / (2.0 * PI)];
    let mut h = first;
    for _ in 1..steps {
        total += boundary_piece(map, &[h, 1.5 * h, 2.0 * h], cfg)?;
        h *= 2.0;
        heights.push(h);
        values.push(total / (2.0 * PI));
    }
    let probes: Vec<(f64, ComplexValue)> = heights
        .iter()
        .copied()
        .zip(values.iter().copied())
        .collect();
    let extrapolated = match extrapolate_to_zero(&probes) {
        (v, ZeroLimitMethod::Aitken, _) => Some(v),
        _ => None,
    };
    Ok(LineIntegralTrend {
        heights,
        values,
        extrapolated,
    })
}

/// Checks `|p|^b |F(p)| → 0` on expanding arcs and, when it holds, confirms
/// the predicted `f(0⁺) = 0` by Bromwich inversion near `t = 0`.
///
/// The boundary line integral of the second route is reported as evidence but
/// does not change the verdict.
pub fn check_lemma1_decay(
    map: &AnalyticMap,
    b: f64,
    radii: &[f64],
    inversion: &InversionConfig,
) -> Result<CheckReport> {
    if !(b > 1.0) || !b.is_finite() {
        return Err(Error::domain(format!(
            "lemma1 needs a finite exponent b > 1, got {b}"
        )));
    }
    let mut report = CheckReport::new("lemma1");
    report.threshold("b", b);
    report.threshold("zero_tolerance", ZERO_TOLERANCE);
    report.threshold("slope_limit", super::DECAY_SLOPE_LIMIT);

    let profile = arc_profile(map, radii, 64, b)?;
    let scale = reference_scale(map, b)?;
    for (r, m) in profile.radii.iter().zip(&profile.arc_maxima) {
        report.push(format!("weighted_arc_max[n={r}]"), *m);
    }
    if let Some(slope) = profile.fitted_exponent {
        report.push("fitted_exponent", slope);
    }
    let (decay, reason) = decay_verdict(&profile, scale);
    report.note(format!("|p|^b |F| on arcs: {reason}"));

    let mut cfg = inversion.clone();
    cfg.convergence_tolerance = cfg.convergence_tolerance.max(ZERO_TOLERANCE / 100.0);
    let limit = right_limit_at_zero(map, &cfg)?;
    report.push("f(0+)", limit.value.re);
    report.push("f(0+)_imag", limit.value.im);
    report.push(
        "f(0+)_converged",
        if limit.convergence.converged() {
            1.0
        } else {
            0.0
        },
    );

    match line_integral_trend(map, LINE_HEIGHT, &inversion.quadrature) {
        Ok(trend) => {
            report.push("line_integral_last", trend.last().re);
            report.push("line_integral_limit", trend.limit().re);
        }
        Err(e) => report.note(format!("line integral route failed: {e}")),
    }

    report.verdict = match decay {
        Verdict::Pass if !limit.convergence.converged() => {
            report.note("decay holds but the f(0+) cross-check did not converge");
            Verdict::Inconclusive
        }
        Verdict::Pass if limit.value.norm() >= ZERO_TOLERANCE => {
            report.note(format!(
                "decay holds but the cross-check gives |f(0+)| = {:.3e}",
                limit.value.norm()
            ));
            Verdict::Inconclusive
        }
        Verdict::Pass => {
            report.note("prediction f(0) = 0 confirmed by inversion near t = 0");
            Verdict::Pass
        }
        Verdict::Fail => {
            report.note("premise fails; no prediction about f(0) is made");
            Verdict::Fail
        }
        Verdict::Inconclusive => Verdict::Inconclusive,
    };
    Ok(report)
}
