use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::complex::ComplexValue;
use crate::contour::arc_maximum;
use crate::error::{Error, Result};
use crate::report::Verdict;

use super::least_squares_slope;

/// A fitted log-log slope at or above this value counts as "not decaying".
pub const DECAY_SLOPE_LIMIT: f64 = -0.05;

/// The last arc maximum must fall below this fraction of the first one.
const RELATIVE_DROP: f64 = 0.1;

/// The last arc maximum must fall below this fraction of the reference scale.
const ABSOLUTE_FRACTION: f64 = 1e-2;

/// Radii `10, 10², …, 10⁶`.
pub fn default_radii() -> Vec<f64> {
    (1..=6).map(|k| 10f64.powi(k)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    /// Increasing radii.
    pub radii: Vec<f64>,
    /// `max |p|^b |F(p)|` on each arc.
    pub arc_maxima: Vec<f64>,
    /// Least-squares slope of `log max` against `log radius` when every maximum is positive.
    pub fitted_exponent: Option<f64>,
}

impl DecayProfile {
    pub fn new(pairs: Vec<(f64, f64)>) -> Self {
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let (radii, arc_maxima): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let fitted_exponent = if arc_maxima.iter().all(|m| *m > 0.0 && m.is_finite()) {
            let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
            let ys: Vec<f64> = arc_maxima.iter().map(|m| m.ln()).collect();
            least_squares_slope(&xs, &ys)
        } else {
            None
        };
        Self {
            radii,
            arc_maxima,
            fitted_exponent,
        }
    }
}

/// Samples `|p|^weight_exponent |F(p)|` on the arcs `σ₀ + n e^{iφ}`.
pub fn arc_profile(
    map: &AnalyticMap,
    radii: &[f64],
    samples: usize,
    weight_exponent: f64,
) -> Result<DecayProfile> {
    if radii.len() < 3 {
        return Err(Error::domain("decay profile needs at least three radii"));
    }
    let mut pairs = Vec::with_capacity(radii.len());
    for &r in radii {
        pairs.push((r, arc_maximum(map, r, samples, weight_exponent)?));
    }
    Ok(DecayProfile::new(pairs))
}

/// `|p|^weight_exponent |F(p)|` at `p = σ₀ + 1`, the scale of the absolute threshold.
pub(crate) fn reference_scale(map: &AnalyticMap, weight_exponent: f64) -> Result<f64> {
    let p = ComplexValue::new(map.abscissa() + 1.0, 0.0);
    Ok(map.eval(p)?.norm() * p.norm().powf(weight_exponent))
}

/// Decision rule for "tends to zero along the arcs".
///
/// Pass when the last maximum is below a tenth of the first, below
/// `10⁻²·scale`, and the fitted slope is below [`DECAY_SLOPE_LIMIT`]. Fail when
/// the slope is at or above the limit. Anything else is inconclusive.
pub fn decay_verdict(profile: &DecayProfile, scale: f64) -> (Verdict, String) {
    let (Some(&first), Some(&last)) = (profile.arc_maxima.first(), profile.arc_maxima.last())
    else {
        return (Verdict::Inconclusive, "empty profile".into());
    };
    if profile.arc_maxima.iter().all(|m| *m == 0.0) {
        return (Verdict::Pass, "identically zero on every arc".into());
    }
    let scale = if scale > 0.0 { scale } else { first };
    match profile.fitted_exponent {
        Some(slope) if slope >= DECAY_SLOPE_LIMIT => (
            Verdict::Fail,
            format!("fitted exponent {slope:.4} is not below {DECAY_SLOPE_LIMIT}"),
        ),
        Some(slope) if last < RELATIVE_DROP * first && last < ABSOLUTE_FRACTION * scale => (
            Verdict::Pass,
            format!("arc maxima fall from {first:.3e} to {last:.3e}, fitted exponent {slope:.4}"),
        ),
        Some(slope) => (
            Verdict::Inconclusive,
            format!("decaying with exponent {slope:.4} but last maximum {last:.3e} is above the thresholds"),
        ),
        None if profile.arc_maxima.iter().any(|m| !m.is_finite()) => {
            (Verdict::Fail, "unbounded on the sampled arcs".into())
        }
        None => (Verdict::Inconclusive, "no slope could be fitted".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(exponent: f64) -> DecayProfile {
        DecayProfile::new(
            default_radii()
                .into_iter()
                .map(|r| (r, r.powf(exponent)))
                .collect(),
        )
    }

    #[test]
    fn rule_outcomes() {
        assert_eq!(decay_verdict(&profile(-1.0), 1.0).0, Verdict::Pass);
        assert_eq!(decay_verdict(&profile(0.0), 1.0).0, Verdict::Fail);
        assert_eq!(decay_verdict(&profile(0.5), 1.0).0, Verdict::Fail);
        // Slow decay: last maximum 10^{-1.5} stays above 10⁻²·scale.
        assert_eq!(decay_verdict(&profile(-0.25), 1.0).0, Verdict::Inconclusive);
        let zero = DecayProfile::new(default_radii().into_iter().map(|r| (r, 0.0)).collect());
        assert_eq!(zero.fitted_exponent, None);
        assert_eq!(decay_verdict(&zero, 1.0).0, Verdict::Pass);
    }

    #[test]
    fn profile_is_sorted_by_radius() {
        let p = DecayProfile::new(vec![(100.0, 0.01), (10.0, 0.1), (1000.0, 0.001)]);
        assert_eq!(p.radii, vec![10.0, 100.0, 1000.0]);
        assert!((p.fitted_exponent.unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn arc_profile_of_rational_function() {
        let f = AnalyticMap::new("1/(p+1)", 0.0, |p: ComplexValue| 1.0 / (p + 1.0));
        let prof = arc_profile(&f, &default_radii(), 64, 0.0).unwrap();
        assert!((prof.fitted_exponent.unwrap() + 1.0).abs() < 0.01);
        assert!(arc_profile(&f, &[10.0, 100.0], 64, 0.0).is_err());
    }
}
