//! Numerical tests of the sufficient conditions for an analytic function to
//! be a Laplace transform.
//!
//! Every check returns a [`CheckReport`](crate::report::CheckReport). A finite
//! probe sequence cannot certify a limit, so a pass means the evidence is
//! consistent with the property under the declared decision rule.

mod decay;
mod hausdorff_young;
mod lemma1;
mod paley_wiener;
mod theorem1;
mod witness;

pub use decay::{arc_profile, decay_verdict, default_radii, DecayProfile, DECAY_SLOPE_LIMIT};
pub use hausdorff_young::{check_hausdorff_young, BoundaryTrace, HausdorffYoungConfig};
pub use lemma1::{
    check_lemma1_decay, line_integral_at_boundary, line_integral_trend, LineIntegralTrend,
};
pub use paley_wiener::{check_paley_wiener, default_sigma_grid, line_energy, parseval_identity};
pub use theorem1::{check_theorem1, Theorem1Config};
pub use witness::nontransform_witness;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::complex::ComplexValue;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_mesh, QuadratureConfig};
use crate::report::CheckReport;
use crate::transform::InversionConfig;

/// Default abscissas for [`nontransform_witness`].
pub const DEFAULT_WITNESS_SIGMAS: [f64; 3] = [0.5, 0.2, 0.1];

/// Default initial window for line integrals in the Paley-Wiener check.
pub const DEFAULT_S_WINDOW: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Theorem1,
    Lemma1,
    PaleyWiener,
    HausdorffYoung,
    Witness,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::Theorem1,
        CheckKind::Lemma1,
        CheckKind::PaleyWiener,
        CheckKind::HausdorffYoung,
        CheckKind::Witness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Theorem1 => "theorem1",
            CheckKind::Lemma1 => "lemma1",
            CheckKind::PaleyWiener => "paley-wiener",
            CheckKind::HausdorffYoung => "hausdorff-young",
            CheckKind::Witness => "witness",
        }
    }

    /// Whether the check takes an exponent (`b` for lemma1, `ℓ` otherwise).
    pub fn takes_parameter(self) -> bool {
        matches!(
            self,
            CheckKind::Lemma1 | CheckKind::HausdorffYoung | CheckKind::Witness
        )
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::parse(format!("unknown check '{s}'")))
    }
}

/// Runs `kind` on `map` with default probe settings.
///
/// `parameter` is `b` for lemma1 (required) and `ℓ` for the Hausdorff-Young
/// and witness checks (default 2).
pub fn run_check(
    kind: CheckKind,
    map: &AnalyticMap,
    parameter: Option<f64>,
    quadrature: &QuadratureConfig,
    inversion: &InversionConfig,
) -> Result<CheckReport> {
    match kind {
        CheckKind::Theorem1 => check_theorem1(map, &Theorem1Config::default()),
        CheckKind::Lemma1 => {
            let b = parameter.ok_or_else(|| Error::domain("lemma1 needs the exponent b"))?;
            check_lemma1_decay(map, b, &default_radii(), inversion)
        }
        CheckKind::PaleyWiener => {
            check_paley_wiener(map, &default_sigma_grid(map), DEFAULT_S_WINDOW, quadrature)
        }
        CheckKind::HausdorffYoung => {
            let trace = BoundaryTrace::from_map(map)?;
            let cfg = HausdorffYoungConfig {
                quadrature: quadrature.clone(),
                ..HausdorffYoungConfig::default()
            };
            check_hausdorff_young(&trace, parameter.unwrap_or(2.0), &cfg)
        }
        CheckKind::Witness => {
            nontransform_witness(map, parameter.unwrap_or(2.0), &DEFAULT_WITNESS_SIGMAS)
        }
    }
}

/// Largest window tried before a line integral is declared divergent.
pub(crate) const MAX_WINDOW: f64 = 1e7;

/// A window is accepted once doubling it adds less than this fraction.
pub(crate) const WINDOW_TAIL_FRACTION: f64 = 0.01;

/// Outcome of growing `∫_{−W}^{W} g(s) ds` by doubling `W` until the last
/// doubling adds less than 1% of the total or `W` reaches 10⁷.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowedIntegral {
    pub value: f64,
    pub window: f64,
    /// Last increment relative to the total.
    pub tail_fraction: f64,
    pub converged: bool,
}

/// Mesh of `[0, w]` graded geometrically towards 0 for integrable endpoint
/// singularities on the boundary line.
pub(crate) fn graded_mesh(w: f64) -> Vec<f64> {
    let mut mesh = vec![0.0];
    mesh.extend((0..=40).rev().map(|k| w * 0.5f64.powi(k)));
    mesh
}

/// `∫_{−W}^{W} g(s) ds` for a non-negative `g`, doubling `W` from
/// `initial_window` until the last doubling adds less than 1% of the total.
/// With `even` set, `g(−s) = g(s)` is assumed.
pub(crate) fn windowed_integral<G>(
    g: G,
    even: bool,
    initial_window: f64,
    cfg: &QuadratureConfig,
) -> Result<WindowedIntegral>
where
    G: Fn(f64) -> f64,
{
    if !(initial_window > 0.0) {
        return Err(Error::domain("integration window must be positive"));
    }
    let half = |sign: f64, mesh: &[f64]| -> Result<f64> {
        Ok(
            integrate_mesh(|s| ComplexValue::new(g(sign * s), 0.0), mesh, cfg)?
                .value
                .re,
        )
    };
    let both = |mesh: &[f64]| -> Result<f64> {
        if even {
            Ok(2.0 * half(1.0, mesh)?)
        } else {
            Ok(half(1.0, mesh)? + half(-1.0, mesh)?)
        }
    };
    let mut window = initial_window;
    let mut total = both(&graded_mesh(window))?;
    let mut tail_fraction = f64::INFINITY;
    while window < MAX_WINDOW {
        let increment = both(&[window, 1.5 * window, 2.0 * window])?;
        total += increment;
        window *= 2.0;
        tail_fraction = if total > 0.0 { increment / total } else { 0.0 };
        if tail_fraction < WINDOW_TAIL_FRACTION {
            return Ok(WindowedIntegral {
                value: total,
                window,
                tail_fraction,
                converged: true,
            });
        }
    }
    Ok(WindowedIntegral {
        value: total,
        window,
        tail_fraction,
        converged: false,
    })
}

/// Least-squares slope of `ys` against `xs`.
pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_growth_converges_for_integrable_tail() {
        let cfg = QuadratureConfig::default();
        let w = windowed_integral(|s| 1.0 / (1.0 + s * s), true, 10.0, &cfg).unwrap();
        assert!(w.converged);
        // The tail beyond W is about 2/W.
        assert!((w.value - std::f64::consts::PI).abs() < 2.0 / w.window * 1.01);
    }

    #[test]
    fn window_growth_detects_divergence() {
        let cfg = QuadratureConfig::default();
        let w = windowed_integral(|s: f64| s.abs().powf(-0.5), false, 10.0, &cfg).unwrap();
        assert!(!w.converged);
        assert!(w.window >= MAX_WINDOW);
    }

    #[test]
    fn slope_of_exact_power_law() {
        let xs: Vec<f64> = (1..6).map(|k| k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 1.25 * x).collect();
        assert!((least_squares_slope(&xs, &ys).unwrap() + 1.25).abs() < 1e-12);
        assert!(least_squares_slope(&[1.0], &[1.0]).is_none());
    }
}
