//! Time-domain signals: uniformly sampled grids and closed-form functions.

use std::fmt;
use std::sync::Arc;

use crate::complex::ComplexValue;
use crate::error::{Error, Result};

/// Samples of `f` at `t₀ + kΔt`, linearly interpolated in between.
///
/// Outside the grid the signal is zero, except past the last sample when an
/// exponential tail `f_last · e^{−λ(t − t_last)}` has been declared.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSignal {
    t0: f64,
    dt: f64,
    samples: Vec<ComplexValue>,
    tail_rate: Option<f64>,
}

impl GridSignal {
    pub fn new(t0: f64, dt: f64, samples: Vec<ComplexValue>) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::domain("grid origin must be finite"));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::domain(format!("grid spacing must be > 0, got {dt}")));
        }
        if samples.len() < 2 {
            return Err(Error::domain("a grid signal needs at least two samples"));
        }
        if let Some(bad) = samples
            .iter()
            .find(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite { at: *bad });
        }
        Ok(Self {
            t0,
            dt,
            samples,
            tail_rate: None,
        })
    }

    pub fn from_real(t0: f64, dt: f64, samples: &[f64]) -> Result<Self> {
        Self::new(
            t0,
            dt,
            samples.iter().map(|&v| ComplexValue::new(v, 0.0)).collect(),
        )
    }

    /// Declares an exponential tail with decay rate `rate > 0` after the last sample.
    pub fn with_tail(mut self, rate: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::domain(format!(
                "tail decay rate must be > 0, got {rate}"
            )));
        }
        self.tail_rate = Some(rate);
        Ok(self)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[ComplexValue] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn tail_rate(&self) -> Option<f64> {
        self.tail_rate
    }

    pub fn abscissa(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn t_last(&self) -> f64 {
        self.abscissa(self.samples.len() - 1)
    }

    pub fn value_at(&self, t: f64) -> ComplexValue {
        let last = self.t_last();
        if t < self.t0 {
            return ComplexValue::new(0.0, 0.0);
        }
        if t > last {
            return match self.tail_rate {
                Some(rate) => self.samples[self.samples.len() - 1] * (-rate * (t - last)).exp(),
                None => ComplexValue::new(0.0, 0.0),
            };
        }
        let position = (t - self.t0) / self.dt;
        let k = (position.floor() as usize).min(self.samples.len() - 2);
        let frac = position - k as f64;
        self.samples[k] * (1.0 - frac) + self.samples[k + 1] * frac
    }

    /// Largest sample modulus.
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Adds `offset` to every sample.
    pub fn offset(&self, offset: ComplexValue) -> Self {
        Self {
            samples: self.samples.iter().map(|v| v + offset).collect(),
            ..self.clone()
        }
    }
}

/// `|f(t)| ≤ scale · e^{growth·t}` for `t ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthEnvelope {
    pub scale: f64,
    pub growth: f64,
}

/// A closed-form causal function together with a growth bound.
#[derive(Clone)]
pub struct TimeFunction {
    label: String,
    envelope: GrowthEnvelope,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeFunction")
            .field("label", &self.label)
            .field("envelope", &self.envelope)
            .finish_non_exhaustive()
    }
}

impl TimeFunction {
    pub fn new<F>(label: impl Into<String>, envelope: GrowthEnvelope, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            envelope,
            f: Arc::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn envelope(&self) -> GrowthEnvelope {
        self.envelope
    }

    /// `f(t)` for `t ≥ 0`, zero for `t < 0`.
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            0.0
        } else {
            (self.f)(t)
        }
    }

    /// Samples `f` on `t₀ + kΔt`, `k < count`.
    pub fn sample(&self, t0: f64, dt: f64, count: usize) -> Result<GridSignal> {
        let values: Vec<f64> = (0..count).map(|k| self.eval(t0 + k as f64 * dt)).collect();
        GridSignal::from_real(t0, dt, &values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_invariants_enforced() {
        assert!(GridSignal::from_real(0.0, 0.0, &[1.0, 2.0]).is_err());
        assert!(GridSignal::from_real(0.0, -1.0, &[1.0, 2.0]).is_err());
        assert!(GridSignal::from_real(0.0, 0.1, &[1.0]).is_err());
        assert!(GridSignal::from_real(0.0, 0.1, &[1.0, f64::NAN]).is_err());
        assert!(GridSignal::from_real(0.0, 0.1, &[1.0, 2.0])
            .unwrap()
            .with_tail(0.0)
            .is_err());
    }

    #[test]
    fn linear_interpolation_and_outside_values() {
        let g = GridSignal::from_real(1.0, 0.5, &[0.0, 1.0, 3.0]).unwrap();
        assert_eq!(g.abscissa(2), 2.0);
        assert_eq!(g.value_at(1.25).re, 0.5);
        assert_eq!(g.value_at(1.75).re, 2.0);
        assert_eq!(g.value_at(2.0).re, 3.0);
        assert_eq!(g.value_at(0.5).re, 0.0);
        assert_eq!(g.value_at(2.5).re, 0.0);
        let tailed = g.with_tail(1.0).unwrap();
        assert!((tailed.value_at(3.0).re - 3.0 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn time_function_is_causal() {
        let f = TimeFunction::new(
            "1",
            GrowthEnvelope {
                scale: 1.0,
                growth: 0.0,
            },
            |_| 1.0,
        );
        assert_eq!(f.eval(-1.0), 0.0);
        assert_eq!(f.eval(2.0), 1.0);
        let g = f.sample(-0.5, 0.5, 3).unwrap();
        assert_eq!(g.samples()[0].re, 0.0);
        assert_eq!(g.samples()[1].re, 1.0);
    }
}
