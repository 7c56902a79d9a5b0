//! Laplace-domain solution of `h(t) = g(t) + ∫ (t−s)^{−5/4} h(s) ds`.
//!
//! The kernel is not integrable at `s = t`, so the integral only makes sense
//! after regularization and is never evaluated here. Its regularized Laplace
//! transform is `−c₁ p^{1/4} L(h)` with `c₁ = |Γ(−1/4)|`, which gives
//! `L(h) = L(g) / (1 + c₁ p^{1/4})`. The forcing written `f` in some
//! statements of this formula is taken to be `g`.
//!
//! Only the Laplace-domain formula is implemented, so whether the integral
//! runs over `[0, t]` or `[0, ∞)` does not arise.

use std::sync::OnceLock;

use crate::analytic::AnalyticMap;
use crate::complex::{principal_power, ComplexValue};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::report::{CheckReport, Verdict};
use crate::signal::GridSignal;
use crate::special::gamma;
use crate::transform::{
    bromwich_invert, forward_transform, InversionConfig, InversionResult, Signal,
};

/// Default Bromwich abscissa, clear of the branch point at `p = 0`.
pub const DEFAULT_SIGMA: f64 = 0.5;

/// Relative Laplace-domain residual accepted by [`verify_in_laplace_domain`].
pub const RESIDUAL_TOLERANCE: f64 = 1e-3;

/// `|h(0⁺)|` below this is accepted as `h(0) = 0`.
pub const ZERO_TOLERANCE: f64 = 1e-2;

/// Smallest real part accepted for verification probes.
const MIN_PROBE_RE: f64 = 0.1;

/// `c₁ = |Γ(−1/4)| ≈ 4.9016668`.
pub fn c1() -> f64 {
    static C1: OnceLock<f64> = OnceLock::new();
    *C1.get_or_init(|| gamma(-0.25).expect("Γ(−1/4) is finite").abs())
}

/// `1 + c₁ p^{1/4}` on the principal branch.
pub fn symbol(p: ComplexValue) -> Result<ComplexValue> {
    Ok(1.0 + c1() * principal_power(p, 0.25)?)
}

#[derive(Debug, Clone)]
pub struct HypersingularProblem {
    forcing: AnalyticMap,
    from_grid: bool,
}

impl HypersingularProblem {
    /// Forcing given by its transform `L(g)`, analytic for `Re p > 0`.
    pub fn from_transform(forcing: AnalyticMap) -> Result<Self> {
        if forcing.abscissa() > 0.0 {
            return Err(Error::domain(format!(
                "forcing transform {} must be analytic for Re p > 0, abscissa is {}",
                forcing.label(),
                forcing.abscissa()
            )));
        }
        Ok(Self {
            forcing,
            from_grid: false,
        })
    }

    /// Forcing given as samples; `L(g)` is computed by quadrature on demand.
    pub fn from_grid(signal: GridSignal, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let label = format!("grid[{} samples]", signal.len());
        let forcing = AnalyticMap::new(label, 0.0, move |p: ComplexValue| {
            forward_transform(Signal::Grid(&signal), p, &cfg)
                .unwrap_or(ComplexValue::new(f64::NAN, f64::NAN))
        });
        Ok(Self {
            forcing,
            from_grid: true,
        })
    }

    pub fn forcing(&self) -> &AnalyticMap {
        &self.forcing
    }

    pub fn is_grid_forcing(&self) -> bool {
        self.from_grid
    }

    /// The same problem with `g` replaced by `factor·g`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            forcing: self.forcing.scaled(factor),
            from_grid: self.from_grid,
        }
    }

    /// `H(p) = L(g)(p) / (1 + c₁ p^{1/4})`, analytic for `Re p > 0`.
    pub fn solution_transform(&self) -> AnalyticMap {
        let g = self.forcing.clone();
        let c = c1();
        let label = format!("{}/(1+c1*p^(1/4))", g.label());
        let map = AnalyticMap::new(label, 0.0, move |p: ComplexValue| {
            let root = crate::complex::pow_or_nan(p, 0.25);
            g.eval_unchecked(p) / (1.0 + c * root)
        });
        if self.forcing.is_conjugate_symmetric() {
            map.with_conjugate_symmetry()
        } else {
            map
        }
    }

    /// Default inversion on `Re p = 0.5`.
    pub fn default_inversion(&self) -> InversionConfig {
        InversionConfig::new(DEFAULT_SIGMA)
    }
}

/// `h = L⁻¹[H]` at `times`; non-convergence is reported per point.
pub fn solve(
    problem: &HypersingularProblem,
    times: &[f64],
    cfg: &InversionConfig,
) -> Result<InversionResult> {
    bromwich_invert(&problem.solution_transform(), times, cfg)
}

/// Checks a computed `h` against the transform-domain equation
/// `(1 + c₁p^{1/4}) L(h)(p) = L(g)(p)` at each probe.
///
/// `L(h)` is the forward transform of `h` interpolated linearly on its
/// (uniform) grid, so the grid must cover the support that matters for the
/// probes. Also reports `sup |h|` and `h(0⁺)`, taken as the value at the
/// smallest non-negative time.
pub fn verify_in_laplace_domain(
    problem: &HypersingularProblem,
    h: &InversionResult,
    probes: &[ComplexValue],
    cfg: &QuadratureConfig,
) -> Result<CheckReport> {
    if probes.is_empty() {
        return Err(Error::domain("verification needs at least one probe point"));
    }
    if let Some(p) = probes.iter().find(|p| !(p.re > MIN_PROBE_RE)) {
        return Err(Error::domain(format!(
            "probe {p} must have Re p > {MIN_PROBE_RE}"
        )));
    }
    let signal = h.signal()?;
    let mut report = CheckReport::new("hypersingular-verification");
    report.threshold("residual_tolerance", RESIDUAL_TOLERANCE);
    report.threshold("zero_tolerance", ZERO_TOLERANCE);
    report.push("c1", c1());

    let mut worst = 0.0f64;
    let mut transform_failed = false;
    for p in probes {
        let lg = problem.forcing.eval(*p)?;
        match forward_transform(Signal::Grid(&signal), *p, cfg) {
            Ok(lh) => {
                let defect = (symbol(*p)? * lh - lg).norm();
                let residual = if lg.norm() > 0.0 {
                    defect / lg.norm()
                } else {
                    defect
                };
                report.push(format!("residual({p})"), residual);
                worst = worst.max(residual);
            }
            Err(e) => {
                report.note(format!("forward transform of h failed at {p}: {e}"));
                transform_failed = true;
            }
        }
    }
    report.push("max_residual", worst);

    let sup = signal.sup_norm();
    report.push("sup|h|", sup);
    let zero_value = h
        .times
        .iter()
        .zip(&h.values)
        .filter(|(t, _)| **t >= 0.0)
        .min_by(|a, b| a.0.total_cmp(b.0))
        .map(|(t, v)| (*t, v.norm()));
    if let Some((t, v)) = zero_value {
        report.push("h(0+)", v);
        report.push("h(0+)_time", t);
    }
    let converged = h.all_converged();
    report.push("all_converged", if converged { 1.0 } else { 0.0 });
    if problem.from_grid {
        report.note("forcing given as samples; its transform is itself a quadrature");
    }

    let zero_ok = zero_value.map_or(true, |(_, v)| v < ZERO_TOLERANCE);
    report.verdict = if transform_failed || !converged {
        if !converged {
            report.note("h did not converge at every time");
        }
        Verdict::Inconclusive
    } else if worst <= RESIDUAL_TOLERANCE && sup.is_finite() && zero_ok {
        Verdict::Pass
    } else {
        if worst > RESIDUAL_TOLERANCE {
            report.note(format!("residual {worst:.3e} exceeds {RESIDUAL_TOLERANCE}"));
        }
        if !zero_ok {
            report.note("h(0+) is not small");
        }
        Verdict::Fail
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_exp() -> HypersingularProblem {
        HypersingularProblem::from_transform(
            AnalyticMap::new("1/(p+1)^2", 0.0, |p: ComplexValue| {
                1.0 / ((p + 1.0) * (p + 1.0))
            })
            .with_conjugate_symmetry(),
        )
        .unwrap()
    }

    #[test]
    fn c1_from_gamma() {
        // Γ(3/4) = (−1/4)Γ(−1/4), so |Γ(−1/4)| = 4Γ(3/4).
        assert!((c1() - 4.0 * 1.225_416_702_465_177_6).abs() < 1e-12);
        assert!((c1() - 4.901_666_8).abs() < 1e-7);
    }

    #[test]
    fn solution_transform_at_one() {
        let h = t_exp().solution_transform();
        let v = h.eval(ComplexValue::new(1.0, 0.0)).unwrap();
        assert!((v.re - 1.0 / (4.0 * (1.0 + c1()))).abs() < 1e-15);
        assert!((v.re - 0.042_361).abs() < 1e-6);
    }

    #[test]
    fn forcing_must_be_analytic_in_right_half_plane() {
        let bad = AnalyticMap::new("1/(p-1)", 1.0, |p: ComplexValue| 1.0 / (p - 1.0));
        assert!(HypersingularProblem::from_transform(bad).is_err());
    }

    fn dense_solution(problem: &HypersingularProblem) -> InversionResult {
        let times: Vec<f64> = (0..=600).map(|k| k as f64 * 0.02).collect();
        let cfg = problem.default_inversion().with_tolerance(1e-7);
        solve(problem, &times, &cfg).unwrap()
    }

    #[test]
    fn verification_passes_and_detects_perturbation() {
        let problem = t_exp();
        let h = dense_solution(&problem);
        let probes = [
            ComplexValue::new(1.0, 0.0),
            ComplexValue::new(2.0, 0.0),
            ComplexValue::new(1.0, 1.0),
        ];
        let cfg = QuadratureConfig::default();
        let report = verify_in_laplace_domain(&problem, &h, &probes, &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{report:?}");
        let mut perturbed = h.clone();
        for v in &mut perturbed.values {
            *v += 0.01;
        }
        let report = verify_in_laplace_domain(&problem, &perturbed, &probes, &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(
            verify_in_laplace_domain(&problem, &h, &[ComplexValue::new(0.05, 1.0)], &cfg).is_err()
        );
    }

    #[test]
    fn grid_forcing_matches_closed_form_transform() {
        let dt = 0.01;
        let samples: Vec<f64> = (0..=4000)
            .map(|k| {
                let t = k as f64 * dt;
                t * (-t).exp()
            })
            .collect();
        let grid = GridSignal::from_real(0.0, dt, &samples).unwrap();
        let problem = HypersingularProblem::from_grid(grid, QuadratureConfig::default()).unwrap();
        let closed = t_exp();
        for p in [ComplexValue::new(1.0, 0.0), ComplexValue::new(2.0, 3.0)] {
            let a = problem.solution_transform().eval(p).unwrap();
            let b = closed.solution_transform().eval(p).unwrap();
            // Linear interpolation error is about dt²|p|²/12 relative.
            assert!((a - b).norm() < 1e-4 * b.norm(), "{a} vs {b}");
        }
        assert!(problem.is_grid_forcing());
    }
}
