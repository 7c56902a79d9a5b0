//! The vertical segment, right half-circle and closed contour used to close
//! Bromwich integrals, plus the arc damping integral that controls the
//! half-circle contribution.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::complex::ComplexValue;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_mesh, Estimate, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Up,
    Counterclockwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ContourSpec {
    /// `σ − in → σ + in`.
    VerticalSegment { sigma: f64, half_height: f64 },
    /// `center + n e^{iφ}` for φ from −π/2 to π/2.
    Arc { center: f64, radius: f64 },
    /// The arc followed by the segment `center + in → center − in`: the
    /// boundary of the right half-disk, traversed counterclockwise.
    Closed { center: f64, radius: f64 },
}

impl ContourSpec {
    pub fn orientation(&self) -> Orientation {
        match self {
            ContourSpec::VerticalSegment { .. } => Orientation::Up,
            ContourSpec::Arc { .. } | ContourSpec::Closed { .. } => Orientation::Counterclockwise,
        }
    }

    /// Smallest real part reached by the contour.
    pub fn leftmost(&self) -> f64 {
        match *self {
            ContourSpec::VerticalSegment { sigma, .. } => sigma,
            ContourSpec::Arc { center, .. } | ContourSpec::Closed { center, .. } => center,
        }
    }

    fn validate(&self) -> Result<()> {
        let (a, n) = match *self {
            ContourSpec::VerticalSegment { sigma, half_height } => (sigma, half_height),
            ContourSpec::Arc { center, radius } | ContourSpec::Closed { center, radius } => {
                (center, radius)
            }
        };
        if !a.is_finite() || !(n > 0.0) || !n.is_finite() {
            return Err(Error::domain(format!("degenerate contour {self:?}")));
        }
        Ok(())
    }
}

/// `∫_Γ weight(q) F(q) dq` over the contour `Γ`.
///
/// Points on `Re q = σ₀` use the boundary trace of `F`.
pub fn integrate_contour<W>(
    map: &AnalyticMap,
    contour: &ContourSpec,
    weight: W,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    W: Fn(ComplexValue) -> ComplexValue,
{
    contour.validate()?;
    if contour.leftmost() < map.abscissa() {
        return Err(Error::domain(format!(
            "contour reaches Re q = {} left of the abscissa {} of {}",
            contour.leftmost(),
            map.abscissa(),
            map.label()
        )));
    }
    let integrand = |q: ComplexValue| weight(q) * map.eval_unchecked(q);
    match *contour {
        ContourSpec::VerticalSegment { sigma, half_height } => {
            vertical(&integrand, sigma, half_height, cfg)
        }
        ContourSpec::Arc { center, radius } => arc(&integrand, center, radius, cfg),
        ContourSpec::Closed { center, radius } => {
            let around = arc(&integrand, center, radius, cfg)?;
            let up = vertical(&integrand, center, radius, cfg)?;
            Ok(Estimate {
                value: around.value - up.value,
                error: around.error + up.error,
                subdivisions: around.subdivisions + up.subdivisions,
            })
        }
    }
}

fn vertical<G>(
    integrand: &G,
    sigma: f64,
    half_height: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    G: Fn(ComplexValue) -> ComplexValue,
{
    let i = ComplexValue::i();
    integrate_mesh(
        |s| integrand(ComplexValue::new(sigma, s)) * i,
        &[-half_height, 0.0, half_height],
        cfg,
    )
}

fn arc<G>(integrand: &G, center: f64, radius: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    G: Fn(ComplexValue) -> ComplexValue,
{
    let i = ComplexValue::i();
    integrate_mesh(
        |phi| {
            let direction = ComplexValue::from_polar(1.0, phi);
            integrand(center + direction * radius) * i * direction * radius
        },
        &[-FRAC_PI_2, 0.0, FRAC_PI_2],
        cfg,
    )
}

/// `B(n, t) = ∫_{−π/2}^{π/2} e^{−n|t| cos φ} dφ`.
///
/// Jordan's inequality gives `B(n, t) ≤ π / (n|t|)`; the integral tends to
/// `2 / (n|t|)` as `n|t| → ∞`.
pub fn arc_damping_integral(radius: f64, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() || !t.is_finite() {
        return Err(Error::domain(
            "arc damping integral needs radius > 0 and finite t",
        ));
    }
    let x = radius * t.abs();
    // Symmetric in φ; the mass concentrates near φ = π/2 for large x.
    let mut mesh = vec![0.0];
    if x > 1.0 {
        let mut gap = FRAC_PI_2;
        while gap > 1.0 / x {
            gap *= 0.5;
            mesh.push(FRAC_PI_2 - gap);
        }
    }
    mesh.push(FRAC_PI_2);
    let half = integrate_mesh(
        |phi| ComplexValue::new((-x * phi.cos()).exp(), 0.0),
        &mesh,
        &cfg.with_abs_tol(cfg.abs_tol / x.max(1.0)),
    )?;
    Ok(2.0 * half.value.re)
}

/// `max |p|^weight_exponent · |F(p)|` over `samples` midpoint angles of the
/// arc `σ₀ + radius·e^{iφ}`, φ ∈ (−π/2, π/2).
pub fn arc_maximum(
    map: &AnalyticMap,
    radius: f64,
    samples: usize,
    weight_exponent: f64,
) -> Result<f64> {
    if !(radius > 0.0) || samples == 0 {
        return Err(Error::domain(
            "arc sampling needs radius > 0 and at least one sample",
        ));
    }
    let center = map.abscissa();
    let mut max = 0.0f64;
    for j in 0..samples {
        let phi = -FRAC_PI_2 + (j as f64 + 0.5) * std::f64::consts::PI / samples as f64;
        let p = center + ComplexValue::from_polar(radius, phi);
        let value = map.eval_trace(p)?.norm() * p.norm().powf(weight_exponent);
        max = max.max(value);
    }
    Ok(max)
}

/// Outcome of checking `sin φ ≥ (2/π)φ` on a uniform grid of `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanCheck {
    pub points: usize,
    /// `min (sin φ − 2φ/π)` over the grid.
    pub min_gap: f64,
    pub holds: bool,
}

/// Grid check of Jordan's inequality `sin φ ≥ (2/π) φ` on `[0, π/2]`.
pub fn check_jordan_inequality(points: usize) -> JordanCheck {
    let points = points.max(2);
    let mut min_gap = f64::INFINITY;
    for k in 0..points {
        let phi = FRAC_PI_2 * k as f64 / (points - 1) as f64;
        let gap = phi.sin() - FRAC_2_PI * phi;
        min_gap = min_gap.min(gap);
    }
    JordanCheck {
        points,
        min_gap,
        // Both sides agree at the endpoints; allow for rounding there.
        holds: min_gap >= -4.0 * f64::EPSILON,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn closed_contour_of_constant_vanishes() {
        let one = AnalyticMap::new("1", 0.0, |_| ComplexValue::new(1.0, 0.0));
        let closed = ContourSpec::Closed {
            center: 0.5,
            radius: 3.0,
        };
        let v = integrate_contour(&one, &closed, |_| ComplexValue::new(1.0, 0.0), &cfg()).unwrap();
        assert!(v.value.norm() < 1e-10);
    }

    #[test]
    fn closed_contour_without_pole_vanishes() {
        let f = AnalyticMap::new("1/(q+1)^2", 0.0, |q: ComplexValue| {
            1.0 / ((q + 1.0) * (q + 1.0))
        });
        for radius in [1.0, 10.0, 100.0] {
            let closed = ContourSpec::Closed {
                center: 0.0,
                radius,
            };
            let v =
                integrate_contour(&f, &closed, |_| ComplexValue::new(1.0, 0.0), &cfg()).unwrap();
            assert!(v.value.norm() < 1e-9, "radius {radius}: {:?}", v.value);
        }
    }

    #[test]
    fn closed_contour_around_pole_gives_two_pi_i() {
        let p = ComplexValue::new(1.0, 0.5);
        let f = AnalyticMap::new("1/(q-p)", 0.0, move |q: ComplexValue| 1.0 / (q - p));
        let closed = ContourSpec::Closed {
            center: 0.0,
            radius: 5.0,
        };
        let v = integrate_contour(&f, &closed, |_| ComplexValue::new(1.0, 0.0), &cfg()).unwrap();
        assert!(
            (v.value - ComplexValue::new(0.0, 2.0 * PI)).norm() < 1e-9,
            "{:?}",
            v.value
        );
    }

    #[test]
    fn damped_closed_contour_vanishes() {
        // e^{−q|t|} F(q) over L_{σ,n}: analytic inside, so the loop integral is zero.
        let f = AnalyticMap::new("1/(q+1)", 0.0, |q: ComplexValue| 1.0 / (q + 1.0));
        let t: f64 = 0.7;
        let closed = ContourSpec::Closed {
            center: 0.0,
            radius: 20.0,
        };
        let v = integrate_contour(&f, &closed, |q| (-q * t.abs()).exp(), &cfg()).unwrap();
        assert!(v.value.norm() < 1e-9);
    }

    #[test]
    fn vertical_segment_orientation() {
        let one = AnalyticMap::new("1", 0.0, |_| ComplexValue::new(1.0, 0.0));
        let seg = ContourSpec::VerticalSegment {
            sigma: 1.0,
            half_height: 2.0,
        };
        let v = integrate_contour(&one, &seg, |_| ComplexValue::new(1.0, 0.0), &cfg()).unwrap();
        assert!((v.value - ComplexValue::new(0.0, 4.0)).norm() < 1e-12);
        assert_eq!(seg.orientation(), Orientation::Up);
        let arc = ContourSpec::Arc {
            center: 0.0,
            radius: 2.0,
        };
        let v = integrate_contour(&one, &arc, |_| ComplexValue::new(1.0, 0.0), &cfg()).unwrap();
        // Endpoint minus start point: 2i − (−2i).
        assert!((v.value - ComplexValue::new(0.0, 4.0)).norm() < 1e-12);
    }

    #[test]
    fn contour_left_of_abscissa_rejected() {
        let f = AnalyticMap::new("1/p", 0.0, |q: ComplexValue| 1.0 / q);
        let seg = ContourSpec::VerticalSegment {
            sigma: -0.5,
            half_height: 2.0,
        };
        assert!(matches!(
            integrate_contour(&f, &seg, |_| ComplexValue::new(1.0, 0.0), &cfg()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn arc_damping_bounds() {
        // Oracle: Richardson-extrapolated midpoint rule on the symmetric half,
        // written as ∫₀^{π/2} e^{−x sin u} du.
        let midpoint = |x: f64, m: usize| {
            let h = FRAC_PI_2 / m as f64;
            2.0 * (0..m)
                .map(|k| (-x * ((k as f64 + 0.5) * h).sin()).exp())
                .sum::<f64>()
                * h
        };
        let oracle = |x: f64| (4.0 * midpoint(x, 2_000_000) - midpoint(x, 1_000_000)) / 3.0;
        for n in [10.0, 100.0, 1000.0] {
            for t in [0.5, 1.0, 2.0, -1.0] {
                let b = arc_damping_integral(n, t, &cfg()).unwrap();
                let x = n * f64::abs(t);
                assert!(
                    (b - oracle(x)).abs() < 1e-8 * oracle(x).max(1e-3),
                    "n={n} t={t}: {b} vs {}",
                    oracle(x)
                );
                assert!(x * b <= PI);
            }
        }
        let large = arc_damping_integral(1e6, 1.0, &cfg()).unwrap();
        assert!((large * 1e6 - 2.0).abs() < 1e-5);
        assert!((arc_damping_integral(1e-9, 1.0, &cfg()).unwrap() - PI).abs() < 1e-6);
    }

    #[test]
    fn jordan_inequality_on_grid() {
        let check = check_jordan_inequality(10_000);
        assert!(check.holds);
        assert_eq!(check.points, 10_000);
        assert!(check.min_gap.abs() < 1e-12);
    }
}
