//! Complex scalars and the principal branch of fractional powers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A double-precision complex number `re + i·im`.
pub type ComplexValue = Complex64;

/// Returns `p` unchanged when both components are finite.
pub fn ensure_finite(p: ComplexValue) -> Result<ComplexValue> {
    if p.re.is_finite() && p.im.is_finite() {
        Ok(p)
    } else {
        Err(Error::NonFinite { at: p })
    }
}

/// Principal argument in `(−π, π]`.
///
/// A negative real number with a signed-zero imaginary part maps to `π`, so the
/// cut is attached to the upper half-plane.
pub fn principal_arg(p: ComplexValue) -> f64 {
    if p.im == 0.0 && p.re < 0.0 {
        PI
    } else {
        p.im.atan2(p.re)
    }
}

/// `p^alpha = exp(alpha·(ln|p| + i·Arg p))` with the cut on the non-positive real axis.
pub fn principal_power(p: ComplexValue, alpha: f64) -> Result<ComplexValue> {
    ensure_finite(p)?;
    if !alpha.is_finite() {
        return Err(Error::domain(format!("exponent {alpha} is not finite")));
    }
    if p.re == 0.0 && p.im == 0.0 {
        return Err(Error::domain("principal power is undefined at p = 0"));
    }
    let ln_modulus = p.re.hypot(p.im).ln();
    Ok(ComplexValue::from_polar(
        (alpha * ln_modulus).exp(),
        alpha * principal_arg(p),
    ))
}

/// Branch-safe power for evaluators that are only called away from the origin.
///
/// Returns NaN at `p = 0` instead of an error so it can sit inside closures;
/// the NaN is then rejected by [`ensure_finite`] at the evaluation boundary.
pub(crate) fn pow_or_nan(p: ComplexValue, alpha: f64) -> ComplexValue {
    principal_power(p, alpha).unwrap_or(ComplexValue::new(f64::NAN, f64::NAN))
}
