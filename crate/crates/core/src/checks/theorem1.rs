use crate::analytic::AnalyticMap;
use crate::complex::ComplexValue;
use crate::error::{Error, Result};
use crate::report::{CheckReport, Verdict};

use super::decay::{arc_profile, decay_verdict, default_radii, reference_scale};

/// Offsets from the abscissa used to probe the boundary trace.
const TRACE_OFFSETS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Slack allowed in the Cauchy test of the boundary trace.
const TRACE_CAUCHY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Config {
    pub radii: Vec<f64>,
    pub arc_samples: usize,
    pub boundary_samples: usize,
}

impl Default for Theorem1Config {
    fn default() -> Self {
        Self {
            radii: default_radii(),
            arc_samples: 64,
            boundary_samples: 32,
        }
    }
}

/// Imaginary parts for the boundary-trace probe: log-spaced magnitudes in
/// `[0.1, 100]` with alternating sign, avoiding `s = 0`.
fn trace_points(count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| {
            let frac = if count > 1 {
                k as f64 / (count - 1) as f64
            } else {
                0.0
            };
            let magnitude = 10f64.powf(-1.0 + 3.0 * frac);
            if k % 2 == 0 {
                magnitude
            } else {
                -magnitude
            }
        })
        .collect()
}

/// Checks the hypotheses of the sufficiency theorem: `F → 0` uniformly on
/// the arcs `C_n` and the boundary limits `F(σ₀ + is)` exist.
pub fn check_theorem1(map: &AnalyticMap, cfg: &Theorem1Config) -> Result<CheckReport> {
    if cfg.radii.len() < 3 {
        return Err(Error::domain("theorem1 check needs at least three radii"));
    }
    if cfg.arc_samples < 16 || cfg.boundary_samples < 16 {
        return Err(Error::domain(
            "theorem1 check needs at least 16 arc and boundary samples",
        ));
    }
    let mut report = CheckReport::new("theorem1");
    report.threshold("relative_drop", 0.1);
    report.threshold("absolute_fraction", 1e-2);
    report.threshold("slope_limit", super::DECAY_SLOPE_LIMIT);
    report.threshold("trace_cauchy_tolerance", TRACE_CAUCHY_TOLERANCE);
    report.note(
        "decay is tested as sup over the whole arcs C_n; \
         decay along a single sequence p_n would be a weaker reading",
    );

    let arc_verdict = match arc_profile(map, &cfg.radii, cfg.arc_samples, 0.0)
        .and_then(|profile| Ok((reference_scale(map, 0.0)?, profile)))
    {
        Ok((scale, profile)) => {
            for (r, m) in profile.radii.iter().zip(&profile.arc_maxima) {
                report.push(format!("arc_max[n={r}]"), *m);
            }
            if let Some(slope) = profile.fitted_exponent {
                report.push("fitted_exponent", slope);
            }
            report.push("reference_scale", scale);
            let (verdict, reason) = decay_verdict(&profile, scale);
            report.note(format!("arc decay: {reason}"));
            verdict
        }
        Err(e) => {
            report.note(format!("arc sampling failed: {e}"));
            Verdict::Inconclusive
        }
    };

    let mut trace_failures = 0usize;
    let mut trace_errors = 0usize;
    let mut worst_ratio = 0.0f64;
    for s in trace_points(cfg.boundary_samples) {
        let values: Result<Vec<ComplexValue>> = TRACE_OFFSETS
            .iter()
            .map(|d| map.eval(ComplexValue::new(map.abscissa() + d, s)))
            .collect();
        match values {
            Ok(v) => {
                let d1 = (v[1] - v[0]).norm();
                let d2 = (v[2] - v[1]).norm();
                if d2 > 0.5 * d1 + TRACE_CAUCHY_TOLERANCE {
                    trace_failures += 1;
                }
                if d1 > 0.0 {
                    worst_ratio = worst_ratio.max(d2 / d1);
                }
            }
            Err(_) => trace_errors += 1,
        }
    }
    report.push("trace_cauchy_failures", trace_failures as f64);
    report.push("trace_evaluation_errors", trace_errors as f64);
    report.push("trace_worst_ratio", worst_ratio);
    let trace_verdict = if trace_failures > 0 {
        report.note(format!(
            "boundary limit not Cauchy at {trace_failures} sampled s values"
        ));
        Verdict::Fail
    } else if trace_errors > 0 {
        report.note(format!(
            "boundary probe could not be evaluated at {trace_errors} s values"
        ));
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };

    report.verdict = match (arc_verdict, trace_verdict) {
        (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
        (Verdict::Pass, Verdict::Pass) => Verdict::Pass,
        _ => Verdict::Inconclusive,
    };
    Ok(report)
}
