//! Named functions and transform pairs shared by the checks, the tests and
//! the command line.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::checks::CheckKind;
use crate::complex::{pow_or_nan, ComplexValue};
use crate::report::Verdict;
use crate::signal::{GrowthEnvelope, TimeFunction};
use crate::special::{exp_power_convolution, gamma, lower_incomplete_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `f` and `F` are both known and form a transform pair.
    ClosedFormPair,
    /// Only `F` is known.
    TransformOnly,
    /// `F` is not the transform of any function.
    Counterexample,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCheck {
    pub check: CheckKind,
    pub parameter: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub time_function: Option<TimeFunction>,
    pub transform: AnalyticMap,
    pub provenance: Provenance,
    pub expected: Vec<ExpectedCheck>,
}

impl CatalogEntry {
    pub fn is_pair(&self) -> bool {
        self.time_function.is_some()
    }

    pub fn expected_verdict(&self, check: CheckKind, parameter: Option<f64>) -> Option<Verdict> {
        self.expected
            .iter()
            .find(|e| e.check == check && e.parameter == parameter)
            .map(|e| e.verdict)
    }
}

fn expect(check: CheckKind, parameter: Option<f64>, verdict: Verdict) -> ExpectedCheck {
    ExpectedCheck {
        check,
        parameter,
        verdict,
    }
}

fn gamma_quarter() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| gamma(0.25).expect("Γ(1/4) is finite"))
}

/// `(1/Γ(1/4)) ∫₀^t e^{−(t−s)} s^{−3/4} ds`, the inverse of `1/((1+p)p^{1/4})`.
pub fn quarter_convolution(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    exp_power_convolution(0.25, t).unwrap_or(f64::NAN) / gamma_quarter()
}

/// `e^{−t} γ(1/4, t) / Γ(1/4)`, the inverse of `1/((p+1)(p+2)^{1/4})`.
pub fn damped_incomplete_gamma(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    (-t).exp() * lower_incomplete_gamma(0.25, t).unwrap_or(f64::NAN) / gamma_quarter()
}

fn build() -> Vec<CatalogEntry> {
    use CheckKind::*;
    use Verdict::*;
    let bounded = GrowthEnvelope {
        scale: 1.0,
        growth: 0.0,
    };
    let decaying = GrowthEnvelope {
        scale: 1.0,
        growth: -1.0,
    };
    vec![
        CatalogEntry {
            name: "exp-decay",
            description: "e^{-t} <-> 1/(p+1)",
            time_function: Some(TimeFunction::new("e^{-t}", decaying, |t| (-t).exp())),
            transform: AnalyticMap::new("1/(p+1)", 0.0, |p: ComplexValue| 1.0 / (p + 1.0))
                .with_conjugate_symmetry(),
            provenance: Provenance::ClosedFormPair,
            expected: vec![
                expect(Theorem1, None, Pass),
                expect(Lemma1, Some(1.5), Fail),
                expect(PaleyWiener, None, Pass),
                expect(HausdorffYoung, Some(1.0), Fail),
                expect(HausdorffYoung, Some(2.0), Pass),
                expect(Witness, Some(2.0), Fail),
            ],
        },
        CatalogEntry {
            name: "t-exp",
            description: "t e^{-t} <-> 1/(p+1)^2",
            time_function: Some(TimeFunction::new("t e^{-t}", bounded, |t| t * (-t).exp())),
            transform: AnalyticMap::new("1/(p+1)^2", 0.0, |p: ComplexValue| {
                1.0 / ((p + 1.0) * (p + 1.0))
            })
            .with_conjugate_symmetry(),
            provenance: Provenance::ClosedFormPair,
            expected: vec![
                expect(Theorem1, None, Pass),
                expect(Lemma1, Some(1.5), Pass),
                expect(PaleyWiener, None, Pass),
            ],
        },
        CatalogEntry {
            name: "heaviside",
            description: "1 <-> 1/p",
            time_function: Some(TimeFunction::new("1", bounded, |_| 1.0)),
            transform: AnalyticMap::new("1/p", 0.0, |p: ComplexValue| 1.0 / p)
                .with_conjugate_symmetry(),
            provenance: Provenance::ClosedFormPair,
            expected: vec![
                expect(Theorem1, None, Pass),
                expect(PaleyWiener, None, Fail),
            ],
        },
        CatalogEntry {
            name: "paper-2c",
            description: "(1/Gamma(1/4)) int_0^t e^{-(t-s)} s^{-3/4} ds <-> 1/((1+p)p^{1/4})",
            time_function: Some(TimeFunction::new(
                "e^{-t} * t^{-3/4}/Gamma(1/4)",
                bounded,
                quarter_convolution,
            )),
            transform: AnalyticMap::new("1/((1+p)p^(1/4))", 0.0, |p: ComplexValue| {
                1.0 / ((1.0 + p) * pow_or_nan(p, 0.25))
            })
            .with_conjugate_symmetry(),
            provenance: Provenance::ClosedFormPair,
            expected: vec![
                expect(Theorem1, None, Pass),
                // |p|^{5/4}|F| tends to 1, not 0, so the decay premise fails at b = 5/4.
                expect(Lemma1, Some(1.25), Fail),
                expect(PaleyWiener, None, Pass),
                expect(HausdorffYoung, Some(1.0), Pass),
                expect(HausdorffYoung, Some(2.0), Pass),
            ],
        },
        CatalogEntry {
            name: "exp-incgamma",
            description: "e^{-t} gamma(1/4,t)/Gamma(1/4) <-> 1/((p+1)(p+2)^{1/4})",
            time_function: Some(TimeFunction::new(
                "e^{-t} gamma(1/4,t)/Gamma(1/4)",
                decaying,
                damped_incomplete_gamma,
            )),
            transform: AnalyticMap::new("1/((p+1)(p+2)^(1/4))", 0.0, |p: ComplexValue| {
                1.0 / ((p + 1.0) * pow_or_nan(p + 2.0, 0.25))
            })
            .with_conjugate_symmetry(),
            provenance: Provenance::ClosedFormPair,
            expected: vec![
                expect(Theorem1, None, Pass),
                expect(PaleyWiener, None, Pass),
            ],
        },
        CatalogEntry {
            name: "power-quarter",
            description: "transform only: 1/p^{1/4}",
            time_function: None,
            transform: AnalyticMap::new("p^(-1/4)", 0.0, |p: ComplexValue| pow_or_nan(p, -0.25))
                .with_conjugate_symmetry(),
            provenance: Provenance::TransformOnly,
            expected: vec![expect(PaleyWiener, None, Fail)],
        },
        CatalogEntry {
            name: "counterexample-2e",
            description: "e^{1/p^2}: analytic for Re p > 0 but not a Laplace transform",
            time_function: None,
            transform: AnalyticMap::new("exp(1/p^2)", 0.0, |p: ComplexValue| (1.0 / (p * p)).exp())
                .with_conjugate_symmetry(),
            provenance: Provenance::Counterexample,
            expected: vec![
                expect(Theorem1, None, Fail),
                expect(PaleyWiener, None, Fail),
                expect(Witness, Some(1.0), Pass),
                expect(Witness, Some(2.0), Pass),
            ],
        },
        CatalogEntry {
            name: "zero",
            description: "0 <-> 0",
            time_function: Some(TimeFunction::new("0", bounded, |_| 0.0)),
            transform: AnalyticMap::new("0", 0.0, |_| ComplexValue::new(0.0, 0.0))
                .with_conjugate_symmetry(),
            provenance: Provenance::ClosedFormPair,
            expected: vec![expect(Theorem1, None, Pass)],
        },
    ]
}

/// All catalog entries, in a fixed order.
pub fn entries() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(build)
}

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    entries().iter().find(|e| e.name == name)
}

pub fn names() -> Vec<&'static str> {
    entries().iter().map(|e| e.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureConfig;
    use crate::transform::{forward_transform, Signal};

    /// `∫₀^t e^{−(t−s)} s^{−3/4} ds` with `s = u⁴`: `4∫₀^{t^{1/4}} e^{−(t−u⁴)} du`, Simpson.
    fn convolution_oracle(t: f64) -> f64 {
        let upper = t.powf(0.25);
        let n = 20_000;
        let h = upper / n as f64;
        let g = |u: f64| 4.0 * (-(t - u.powi(4))).exp();
        let mut sum = g(0.0) + g(upper);
        for k in 1..n {
            sum += if k % 2 == 1 { 4.0 } else { 2.0 } * g(k as f64 * h);
        }
        sum * h / 3.0 / gamma(0.25).unwrap()
    }

    #[test]
    fn names_are_unique_and_resolvable() {
        let names = names();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        for name in names {
            assert_eq!(lookup(name).unwrap().name, name);
        }
        assert!(lookup("nosuch").is_none());
    }

    #[test]
    fn quarter_power_entry() {
        let e = lookup("paper-2c").unwrap();
        assert_eq!(e.transform.abscissa(), 0.0);
        assert_eq!(
            e.expected_verdict(CheckKind::Theorem1, None),
            Some(Verdict::Pass)
        );
        assert_eq!(
            lookup("counterexample-2e")
                .unwrap()
                .expected_verdict(CheckKind::Theorem1, None),
            Some(Verdict::Fail)
        );
        assert!(lookup("exp-decay").unwrap().is_pair());
        assert_eq!(
            lookup("power-quarter").unwrap().provenance,
            Provenance::TransformOnly
        );
    }

    #[test]
    fn quarter_convolution_matches_brute_force() {
        for t in [0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 12.0] {
            let exact = convolution_oracle(t);
            assert!((quarter_convolution(t) - exact).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn incomplete_gamma_form_is_a_different_function() {
        // e^{−t}γ(1/4,t)/Γ(1/4) is the convolution of e^{−t} with e^{−t}t^{−3/4}/Γ(1/4),
        // not with t^{−3/4}/Γ(1/4); the two differ well beyond quadrature error.
        let gap = (damped_incomplete_gamma(2.0) - convolution_oracle(2.0)).abs();
        assert!(gap > 1e-2, "gap {gap}");
    }

    #[test]
    fn quarter_power_forward_transform_at_one() {
        let cfg = QuadratureConfig::default();
        let e = lookup("paper-2c").unwrap();
        let f = e.time_function.as_ref().unwrap();
        let v = forward_transform(Signal::Function(f), ComplexValue::new(1.0, 0.0), &cfg).unwrap();
        assert!((v.re - 0.5).abs() < 1e-8, "{v}");
        let other = lookup("exp-incgamma").unwrap();
        let g = other.time_function.as_ref().unwrap();
        let v = forward_transform(Signal::Function(g), ComplexValue::new(1.0, 0.0), &cfg).unwrap();
        assert!((v.re - 1.0 / (2.0 * 3f64.powf(0.25))).abs() < 1e-8);
    }

    #[test]
    fn closed_form_pairs_agree_off_the_axis() {
        let cfg = QuadratureConfig::default();
        for e in entries().iter().filter(|e| e.is_pair()) {
            let f = e.time_function.as_ref().unwrap();
            for p in [ComplexValue::new(1.0, 0.0), ComplexValue::new(0.7, 2.0)] {
                let numeric = forward_transform(Signal::Function(f), p, &cfg).unwrap();
                let exact = e.transform.eval(p).unwrap();
                assert!(
                    (numeric - exact).norm() < 1e-7,
                    "{} at {p}: {numeric} vs {exact}",
                    e.name
                );
            }
        }
    }
}
