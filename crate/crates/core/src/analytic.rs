use std::fmt;
use std::sync::Arc;

use crate::complex::{ensure_finite, ComplexValue};
use crate::error::{Error, Result};

/// Offset used in place of `Re p = σ₀` when a boundary trace is requested.
pub const BOUNDARY_OFFSET: f64 = 1e-12;

type Evaluator = Arc<dyn Fn(ComplexValue) -> ComplexValue + Send + Sync>;

/// A function `F(p)` analytic on the half-plane `Re p > σ₀`.
///
/// The abscissa is declared, not verified. Evaluation left of or on the line
/// `Re p = σ₀` is refused by [`AnalyticMap::eval`]; [`AnalyticMap::eval_trace`]
/// accepts the boundary line itself and moves it `BOUNDARY_OFFSET` inside.
#[derive(Clone)]
pub struct AnalyticMap {
    label: String,
    abscissa: f64,
    conjugate_symmetric: bool,
    evaluator: Evaluator,
}

impl fmt::Debug for AnalyticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticMap")
            .field("label", &self.label)
            .field("abscissa", &self.abscissa)
            .field("conjugate_symmetric", &self.conjugate_symmetric)
            .finish_non_exhaustive()
    }
}

impl AnalyticMap {
    pub fn new<F>(label: impl Into<String>, abscissa: f64, evaluator: F) -> Self
    where
        F: Fn(ComplexValue) -> ComplexValue + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            abscissa,
            conjugate_symmetric: false,
            evaluator: Arc::new(evaluator),
        }
    }

    /// Declares `F(p̄) = conj F(p)`, i.e. the inverse transform is real.
    pub fn with_conjugate_symmetry(mut self) -> Self {
        self.conjugate_symmetric = true;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn abscissa(&self) -> f64 {
        self.abscissa
    }

    pub fn is_conjugate_symmetric(&self) -> bool {
        self.conjugate_symmetric
    }

    /// `F(p)` for `Re p > σ₀`.
    pub fn eval(&self, p: ComplexValue) -> Result<ComplexValue> {
        ensure_finite(p)?;
        if !(p.re > self.abscissa) {
            return Err(Error::domain(format!(
                "{}: evaluation at Re p = {} outside the half-plane Re p > {}",
                self.label, p.re, self.abscissa
            )));
        }
        self.checked(p)
    }

    /// `F(p)` for `Re p ≥ σ₀`; points on the boundary line are moved inside by
    /// `BOUNDARY_OFFSET`.
    pub fn eval_trace(&self, p: ComplexValue) -> Result<ComplexValue> {
        ensure_finite(p)?;
        if p.re < self.abscissa {
            return Err(Error::domain(format!(
                "{}: boundary evaluation at Re p = {} left of the abscissa {}",
                self.label, p.re, self.abscissa
            )));
        }
        self.checked(self.nudge(p))
    }

    fn checked(&self, p: ComplexValue) -> Result<ComplexValue> {
        let v = (self.evaluator)(p);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at: p })
        }
    }

    /// Raw evaluation for hot quadrature loops; the caller guarantees the
    /// half-plane and the quadrature rejects non-finite values.
    pub(crate) fn eval_unchecked(&self, p: ComplexValue) -> ComplexValue {
        (self.evaluator)(self.nudge(p))
    }

    fn nudge(&self, p: ComplexValue) -> ComplexValue {
        if p.re < self.abscissa + BOUNDARY_OFFSET {
            ComplexValue::new(self.abscissa + BOUNDARY_OFFSET, p.im)
        } else {
            p
        }
    }

    /// `c·F(p)`.
    pub fn scaled(&self, factor: f64) -> Self {
        let inner = self.evaluator.clone();
        Self {
            label: format!("{}*{}", factor, self.label),
            abscissa: self.abscissa,
            conjugate_symmetric: self.conjugate_symmetric,
            evaluator: Arc::new(move |p| inner(p) * factor),
        }
    }

    /// `F(p + a)`, analytic for `Re p > σ₀ − a`.
    pub fn shifted(&self, shift: f64) -> Self {
        let inner = self.evaluator.clone();
        Self {
            label: format!("{}(p+{})", self.label, shift),
            abscissa: self.abscissa - shift,
            conjugate_symmetric: self.conjugate_symmetric,
            evaluator: Arc::new(move |p| inner(p + shift)),
        }
    }

    /// `α·F + β·G` on the intersection of both half-planes.
    pub fn combine(alpha: f64, first: &AnalyticMap, beta: f64, second: &AnalyticMap) -> Self {
        let f = first.evaluator.clone();
        let g = second.evaluator.clone();
        Self {
            label: format!("{}*{}+{}*{}", alpha, first.label, beta, second.label),
            abscissa: first.abscissa.max(second.abscissa),
            conjugate_symmetric: first.conjugate_symmetric && second.conjugate_symmetric,
            evaluator: Arc::new(move |p| f(p) * alpha + g(p) * beta),
        }
    }
}
