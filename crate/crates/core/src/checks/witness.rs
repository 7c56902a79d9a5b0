use crate::analytic::AnalyticMap;
use crate::complex::ComplexValue;
use crate::error::{Error, Result};
use crate::report::{CheckReport, Verdict};

/// Growth over the σ-sequence that counts as "without bound".
const EXPLOSION_FACTOR: f64 = 1e3;

/// At most this growth counts as bounded.
const BOUNDED_FACTOR: f64 = 2.0;

/// Looks for a violation of the Hölder bound `|F(σ)| ≤ c·(ℓ′σ)^{−1/ℓ′}`,
/// which every transform of an `L_ℓ` function satisfies.
///
/// Pass means a witness was found: `R(σ) = |F(σ)|·(ℓ′σ)^{1/ℓ′}` increases
/// strictly along the decreasing σ-sequence and grows by at least 10³ (or
/// overflows). Fail means `R` stays bounded. Anything else is inconclusive.
pub fn nontransform_witness(map: &AnalyticMap, ell: f64, sigmas: &[f64]) -> Result<CheckReport> {
    if !(ell >= 1.0) || !ell.is_finite() {
        return Err(Error::domain(format!(
            "witness exponent must be finite and >= 1, got {ell}"
        )));
    }
    if sigmas.len() < 2 || sigmas.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
        return Err(Error::domain(
            "witness needs at least two positive abscissas",
        ));
    }
    if sigmas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("witness abscissas must decrease toward 0"));
    }
    let mut report = CheckReport::new("witness");
    report.threshold("ell", ell);
    report.threshold("explosion_factor", EXPLOSION_FACTOR);
    report.threshold("bounded_factor", BOUNDED_FACTOR);

    // ln R avoids overflow in the weight; an overflowing F counts as +∞.
    let mut log_ratios = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        let log_weight = if ell == 1.0 {
            0.0
        } else {
            let conjugate = ell / (ell - 1.0);
            (conjugate * sigma).ln() / conjugate
        };
        let log_r = match map.eval(ComplexValue::new(sigma, 0.0)) {
            Ok(v) if v.norm() > 0.0 => v.norm().ln() + log_weight,
            Ok(_) => f64::NEG_INFINITY,
            Err(Error::NonFinite { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        report.push(format!("R(sigma={sigma})"), log_r.exp());
        report.push(format!("lnR(sigma={sigma})"), log_r);
        log_ratios.push(log_r);
    }
    let first = log_ratios[0];
    let last = log_ratios[log_ratios.len() - 1];
    let strictly_increasing = log_ratios
        .windows(2)
        .all(|w| w[1] > w[0] || (w[0].is_infinite() && w[1].is_infinite() && w[0] > 0.0));
    report.verdict =
        if strictly_increasing && (last.is_infinite() || last - first >= EXPLOSION_FACTOR.ln()) {
            report.note(format!(
                "R grows without bound: no constant c bounds F(sigma)(ell' sigma)^(1/ell'), \
             so F is not the transform of any f in L_{ell}"
            ));
            Verdict::Pass
        } else if last <= first + BOUNDED_FACTOR.ln() {
            report.note("R stays bounded along the sequence: no witness");
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        };
    Ok(report)
}
