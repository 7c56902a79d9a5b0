//! Gamma-family special functions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_COEF[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEF[0], |acc, (i, c)| {
            acc + c / (x + i as f64 + 1.0)
        })
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Euler gamma function.
///
/// Lanczos approximation for `x ≥ 1/2`; smaller arguments are shifted up with
/// `Γ(x) = Γ(x+1)/x`. Non-positive integers are poles.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("gamma of NaN"));
    }
    if is_pole(x) {
        return Err(Error::domain(format!("gamma has a pole at {x}")));
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    if x == f64::NEG_INFINITY {
        return Err(Error::domain("gamma at -inf"));
    }
    if x >= 0.5 {
        return Ok(gamma_lanczos(x));
    }
    let shift = (0.5 - x).ceil();
    let mut denominator = 1.0;
    let mut z = x;
    for _ in 0..shift as usize {
        denominator *= z;
        z += 1.0;
    }
    Ok(gamma_lanczos(z) / denominator)
}

fn gamma_lanczos(x: f64) -> f64 {
    if x > 171.7 {
        return f64::INFINITY;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // t^(z+0.5) split in two halves so that it does not overflow before the e^{-t} factor.
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(z)
}

/// Natural logarithm of `Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "ln_gamma requires a finite x > 0, got {x}"
        )));
    }
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x keeps the Lanczos sum in its accurate range.
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Lower incomplete gamma function `γ(a, x) = ∫₀ˣ s^{a−1} e^{−s} ds`.
///
/// Power series below `x = a + 1`, Lentz continued fraction for the upper
/// function above it.
pub fn lower_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!(
            "incomplete gamma requires a > 0, got {a}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(format!(
            "incomplete gamma requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return gamma(a);
    }
    let log_prefactor = a * x.ln() - x;
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut denom = a;
        for _ in 0..10_000 {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        Ok(sum * log_prefactor.exp())
    } else {
        let upper = upper_gamma_continued_fraction(a, x) * log_prefactor.exp();
        Ok(gamma(a)? - upper)
    }
}

/// Continued fraction for `Γ(a, x)·e^{x}·x^{−a}` (modified Lentz).
fn upper_gamma_continued_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// `∫₀ᵗ e^{−(t−s)} s^{a−1} ds`, the convolution of `e^{−t}` with `t^{a−1}`.
///
/// Its Laplace transform is `Γ(a) / ((p+1) p^a)`. Evaluated with the
/// all-positive series `e^{−t} t^a Σ tᵏ / ((a+k) k!)` for moderate `t` and the
/// asymptotic expansion `t^{a−1} Σ (1−a)ₖ t^{−k}` for large `t`.
pub fn exp_power_convolution(a: f64, t: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!(
            "convolution exponent must be > 0, got {a}"
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "convolution time must be finite and >= 0, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    if t <= 45.0 {
        let mut power = 1.0;
        let mut sum = 1.0 / a;
        for k in 1..1_000 {
            power *= t / k as f64;
            let term = power / (a + k as f64);
            sum += term;
            if term < sum * 1e-17 && k as f64 > t {
                break;
            }
        }
        return Ok(sum * (a * t.ln() - t).exp());
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let next = term * (k as f64 - a) / t;
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    Ok(sum * t.powf(a - 1.0))
}
