use std::f64::consts::PI;

use crate::analytic::AnalyticMap;
use crate::complex::ComplexValue;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_half_line, integrate_whole_line, QuadratureConfig};
use crate::report::{CheckReport, Verdict};
use crate::signal::TimeFunction;

use super::{windowed_integral, WindowedIntegral};

/// Offsets from the abscissa probed for a boundary norm that blows up.
const APPROACH_OFFSETS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Growth factor per decade of approach that marks a divergent boundary norm.
const APPROACH_GROWTH: f64 = 2.0;

/// `σ₀ + {0, 0.25, 0.5, 1, 2}`.
pub fn default_sigma_grid(map: &AnalyticMap) -> Vec<f64> {
    [0.0, 0.25, 0.5, 1.0, 2.0]
        .iter()
        .map(|d| map.abscissa() + d)
        .collect()
}

/// `I(σ) = ∫ |F(σ + is)|² ds`, with the window grown from `s_window`.
pub fn line_energy(
    map: &AnalyticMap,
    sigma: f64,
    s_window: f64,
    cfg: &QuadratureConfig,
) -> Result<WindowedIntegral> {
    if sigma < map.abscissa() {
        return Err(Error::domain(format!(
            "line Re p = {sigma} lies left of the abscissa {}",
            map.abscissa()
        )));
    }
    windowed_integral(
        |s| map.eval_unchecked(ComplexValue::new(sigma, s)).norm_sqr(),
        map.is_conjugate_symmetric(),
        s_window,
        cfg,
    )
}

/// Line energy with non-finite values mapped to an infinite, non-converged result.
fn energy_or_infinite(
    map: &AnalyticMap,
    sigma: f64,
    s_window: f64,
    cfg: &QuadratureConfig,
) -> Result<WindowedIntegral> {
    match line_energy(map, sigma, s_window, cfg) {
        Err(Error::NonFinite { .. }) => Ok(WindowedIntegral {
            value: f64::INFINITY,
            window: s_window,
            tail_fraction: f64::INFINITY,
            converged: false,
        }),
        other => other,
    }
}

/// Checks that `sup_σ ∫|F(σ+is)|² ds` is finite and attained at the boundary.
///
/// Fails when a line energy diverges, when it grows without bound as the line
/// approaches `σ₀`, or when the supremum over the grid is not at `σ₀`.
pub fn check_paley_wiener(
    map: &AnalyticMap,
    sigma_grid: &[f64],
    s_window: f64,
    cfg: &QuadratureConfig,
) -> Result<CheckReport> {
    let sigma0 = map.abscissa();
    let mut grid: Vec<f64> = sigma_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid.len() < 3 {
        return Err(Error::domain(
            "Paley-Wiener check needs at least three distinct abscissas",
        ));
    }
    if grid.iter().any(|s| !s.is_finite() || *s < sigma0) {
        return Err(Error::domain(
            "Paley-Wiener abscissas must be finite and not left of the abscissa",
        ));
    }
    if (grid[0] - sigma0).abs() > 1e-12 {
        return Err(Error::domain(
            "Paley-Wiener grid must include the abscissa itself",
        ));
    }

    let mut report = CheckReport::new("paley-wiener");
    report.threshold("window_tail_fraction", super::WINDOW_TAIL_FRACTION);
    report.threshold("max_window", super::MAX_WINDOW);
    report.threshold("approach_growth", APPROACH_GROWTH);
    report.threshold("initial_window", s_window);

    let mut profile = Vec::with_capacity(grid.len());
    let mut divergent = Vec::new();
    let mut failed = false;
    for &sigma in &grid {
        match energy_or_infinite(map, sigma, s_window, cfg) {
            Ok(w) => {
                report.push(format!("I(sigma={sigma})"), w.value);
                report.push(format!("window(sigma={sigma})"), w.window);
                if !w.converged || !w.value.is_finite() {
                    divergent.push(sigma);
                }
                profile.push(w.value);
            }
            Err(e) => {
                report.note(format!("I({sigma}) could not be computed: {e}"));
                failed = true;
                profile.push(f64::NAN);
            }
        }
    }

    let approach: Vec<f64> = APPROACH_OFFSETS
        .iter()
        .map(|d| {
            energy_or_infinite(map, sigma0 + d, s_window, cfg)
                .map(|w| if w.converged { w.value } else { f64::INFINITY })
                .unwrap_or(f64::NAN)
        })
        .collect();
    for (d, v) in APPROACH_OFFSETS.iter().zip(&approach) {
        report.push(format!("I(boundary+{d})"), *v);
    }
    let approach_blows_up = approach
        .windows(2)
        .all(|w| w[1] > APPROACH_GROWTH * w[0] || w[1].is_infinite());

    let non_increasing = profile.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-6));
    report.push("non_increasing", if non_increasing { 1.0 } else { 0.0 });
    let finite_max = profile
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let sup_at_boundary = profile[0].is_finite() && profile[0] >= finite_max * (1.0 - 1e-6);

    report.verdict = if !divergent.is_empty() {
        report.note(format!("divergent line energy at sigma = {divergent:?}"));
        Verdict::Fail
    } else if approach_blows_up {
        report.note("line energy grows without bound as the line approaches the boundary");
        Verdict::Fail
    } else if failed || approach.iter().any(|v| v.is_nan()) {
        Verdict::Inconclusive
    } else if sup_at_boundary {
        report.note(format!(
            "finite sup {:.6e} attained at the boundary sigma = {sigma0}",
            profile[0]
        ));
        Verdict::Pass
    } else {
        report.note("supremum over the grid is not attained at the boundary");
        Verdict::Fail
    };
    Ok(report)
}

/// Both sides of `∫|F(σ+is)|² ds = 2π ∫₀^∞ |e^{−σt} f(t)|² dt`.
pub fn parseval_identity(
    f: &TimeFunction,
    map: &AnalyticMap,
    sigma: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    if !sigma.is_finite() || sigma < map.abscissa() {
        return Err(Error::domain(format!(
            "Parseval line Re p = {sigma} must not lie left of the abscissa {}",
            map.abscissa()
        )));
    }
    let lhs = integrate_whole_line(
        |s| {
            ComplexValue::new(
                map.eval_unchecked(ComplexValue::new(sigma, s)).norm_sqr(),
                0.0,
            )
        },
        cfg,
    )?
    .value
    .re;
    let rhs = 2.0
        * PI
        * integrate_half_line(
            |t| {
                let v = (-sigma * t).exp() * f.eval(t);
                ComplexValue::new(v * v, 0.0)
            },
            0.0,
            cfg,
        )?
        .value
        .re;
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::domain("Parseval integrals diverge on this line"));
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::GrowthEnvelope;

    fn exp_decay() -> AnalyticMap {
        AnalyticMap::new("1/(p+1)", 0.0, |p: ComplexValue| 1.0 / (p + 1.0))
            .with_conjugate_symmetry()
    }

    #[test]
    fn energy_profile_of_exponential() {
        let cfg = QuadratureConfig::default();
        for sigma in [0.0, 0.5, 1.0] {
            let w = line_energy(&exp_decay(), sigma, 10.0, &cfg).unwrap();
            let exact = PI / (sigma + 1.0);
            // Window truncation leaves a tail of about 2/W.
            assert!(w.converged);
            assert!(w.value < exact && exact - w.value < 2.0 / w.window * 1.01);
        }
    }

    #[test]
    fn exponential_passes_quarter_power_fails() {
        let cfg = QuadratureConfig::default();
        let map = exp_decay();
        let r = check_paley_wiener(&map, &default_sigma_grid(&map), 10.0, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        let quarter = AnalyticMap::new("p^-1/4", 0.0, |p: ComplexValue| {
            crate::complex::pow_or_nan(p, -0.25)
        })
        .with_conjugate_symmetry();
        let r = check_paley_wiener(&quarter, &default_sigma_grid(&quarter), 10.0, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn boundary_pole_fails_by_approach() {
        let cfg = QuadratureConfig::default();
        let step =
            AnalyticMap::new("1/p", 0.0, |p: ComplexValue| 1.0 / p).with_conjugate_symmetry();
        let r = check_paley_wiener(&step, &default_sigma_grid(&step), 10.0, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Fail, "{r:?}");
        let a = r.value("I(boundary+0.001)").unwrap();
        let b = r.value("I(boundary+0.0001)").unwrap();
        assert!(b > 5.0 * a);
    }

    #[test]
    fn grid_validation() {
        let cfg = QuadratureConfig::default();
        assert!(check_paley_wiener(&exp_decay(), &[0.0, 1.0], 10.0, &cfg).is_err());
        assert!(check_paley_wiener(&exp_decay(), &[0.5, 1.0, 2.0], 10.0, &cfg).is_err());
        assert!(check_paley_wiener(&exp_decay(), &[-1.0, 0.0, 1.0], 10.0, &cfg).is_err());
    }

    #[test]
    fn parseval_examples() {
        let cfg = QuadratureConfig::default();
        let f = TimeFunction::new(
            "e^-t",
            GrowthEnvelope {
                scale: 1.0,
                growth: -1.0,
            },
            |t| (-t).exp(),
        );
        for sigma in [0.0, 0.5, 1.0] {
            let (lhs, rhs) = parseval_identity(&f, &exp_decay(), sigma, &cfg).unwrap();
            let exact = PI / (sigma + 1.0);
            assert!(
                (lhs - exact).abs() < 1e-8 && (rhs - exact).abs() < 1e-8,
                "{lhs} {rhs}"
            );
        }
        let g = TimeFunction::new(
            "te^-t",
            GrowthEnvelope {
                scale: 1.0,
                growth: -1.0,
            },
            |t| t * (-t).exp(),
        );
        let map = AnalyticMap::new("1/(p+1)^2", 0.0, |p: ComplexValue| {
            1.0 / ((p + 1.0) * (p + 1.0))
        });
        let (lhs, rhs) = parseval_identity(&g, &map, 0.0, &cfg).unwrap();
        assert!((lhs - PI / 2.0).abs() < 1e-8 && (rhs - PI / 2.0).abs() < 1e-8);
        let one = TimeFunction::new(
            "1",
            GrowthEnvelope {
                scale: 1.0,
                growth: 0.0,
            },
            |_| 1.0,
        );
        let step = AnalyticMap::new("1/p", 0.0, |p: ComplexValue| 1.0 / p);
        assert!(parseval_identity(&one, &step, 0.0, &cfg).is_err());
    }
}
