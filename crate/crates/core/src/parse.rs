//! Parsers for the flat-text inputs: complex literals, time ranges and
//! sampled signals.

use crate::complex::ComplexValue;
use crate::error::{Error, Result};
use crate::signal::GridSignal;

/// Upper bound on the number of points in a time range.
pub const MAX_RANGE_POINTS: usize = 1_000_000;

fn parse_real(text: &str) -> Result<f64> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed != text {
        return Err(Error::parse(format!("'{text}' is not a number")));
    }
    let lower = trimmed.trim_start_matches(['+', '-']).to_ascii_lowercase();
    if lower.starts_with("inf") || lower.starts_with("nan") {
        return Err(Error::parse(format!("'{text}' is not a finite number")));
    }
    let value: f64 = trimmed
        .parse()
        .map_err(|_| Error::parse(format!("'{text}' is not a number")))?;
    if !value.is_finite() {
        return Err(Error::parse(format!("'{text}' is not a finite number")));
    }
    Ok(value)
}

/// Coefficient of `i`: empty or a bare sign means ±1.
fn parse_imaginary(text: &str) -> Result<f64> {
    match text {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(text),
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` with decimal reals; `i` alone is the
/// imaginary unit. Exponents such as `1e-3` are accepted.
pub fn parse_complex(text: &str) -> Result<ComplexValue> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::parse("empty complex literal"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(ComplexValue::new(parse_real(s)?, 0.0));
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(ComplexValue::new(
            parse_real(&body[..k])?,
            parse_imaginary(&body[k..])?,
        )),
        None => Ok(ComplexValue::new(0.0, parse_imaginary(body)?)),
    }
}

/// Comma-separated complex literals.
pub fn parse_complex_list(text: &str) -> Result<Vec<ComplexValue>> {
    text.split(',').map(parse_complex).collect()
}

/// `t0:t1:steps`, `steps` evenly spaced points from `t0` to `t1` inclusive.
/// A single step requires `t0 = t1`.
pub fn parse_time_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.trim().split(':').collect();
    let [t0, t1, steps] = parts.as_slice() else {
        return Err(Error::parse(format!(
            "time range '{text}' is not of the form t0:t1:steps"
        )));
    };
    let t0 = parse_real(t0)?;
    let t1 = parse_real(t1)?;
    let steps: usize = steps
        .parse()
        .map_err(|_| Error::parse(format!("step count '{steps}' is not a positive integer")))?;
    if steps == 0 || steps > MAX_RANGE_POINTS {
        return Err(Error::parse(format!(
            "step count must be in 1..={MAX_RANGE_POINTS}"
        )));
    }
    if t1 < t0 {
        return Err(Error::parse("time range end precedes its start"));
    }
    if steps == 1 {
        if t0 != t1 {
            return Err(Error::parse("a single-point range needs t0 = t1"));
        }
        return Ok(vec![t0]);
    }
    let dt = (t1 - t0) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k + 1 == steps {
                t1
            } else {
                t0 + k as f64 * dt
            }
        })
        .collect())
}

/// Reads a sampled signal from CSV with header `t,f_re` or `t,f_re,f_im`.
/// Lines starting with `#` are comments. Times must be uniformly spaced.
pub fn parse_grid_signal(text: &str) -> Result<GridSignal> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(format!("signal header: {e}")))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    let with_imag = match names.as_slice() {
        ["t", "f_re"] => false,
        ["t", "f_re", "f_im"] => true,
        _ => {
            return Err(Error::parse(format!(
                "signal header must be t,f_re or t,f_re,f_im, got {}",
                names.join(",")
            )))
        }
    };
    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::parse(format!("signal row {}: {e}", line + 1)))?;
        let field = |k: usize| -> Result<f64> {
            record
                .get(k)
                .ok_or_else(|| Error::parse(format!("signal row {} is too short", line + 1)))
                .and_then(parse_real)
        };
        times.push(field(0)?);
        let im = if with_imag { field(2)? } else { 0.0 };
        samples.push(ComplexValue::new(field(1)?, im));
    }
    if times.len() < 2 {
        return Err(Error::parse("a signal needs at least two samples"));
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return Err(Error::parse("signal times must increase"));
    }
    for (k, t) in times.iter().enumerate() {
        let expected = times[0] + k as f64 * dt;
        if (t - expected).abs() > (1e-9 * dt).max(4.0 * f64::EPSILON * expected.abs()) {
            return Err(Error::parse(format!(
                "signal time {t} breaks the uniform spacing {dt}"
            )));
        }
    }
    GridSignal::new(times[0], dt, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("-2.5").unwrap(), c(-2.5, 0.0));
        assert_eq!(parse_complex("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(parse_complex("-3i").unwrap(), c(0.0, -3.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1+i").unwrap(), c(1.0, 1.0));
        assert_eq!(parse_complex("2+3i").unwrap(), c(2.0, 3.0));
        assert_eq!(parse_complex("2-3i").unwrap(), c(2.0, -3.0));
        assert_eq!(parse_complex(" 0.5+0.25i ").unwrap(), c(0.5, 0.25));
    }

    #[test]
    fn exponents_are_not_split() {
        assert_eq!(parse_complex("1e-3").unwrap(), c(1e-3, 0.0));
        assert_eq!(parse_complex("1e-3+2E+2i").unwrap(), c(1e-3, 200.0));
        assert_eq!(parse_complex("-1.5e2-4e-1i").unwrap(), c(-150.0, -0.4));
        assert_eq!(parse_complex("2e-5i").unwrap(), c(0.0, 2e-5));
    }

    #[test]
    fn complex_rejections() {
        for bad in [
            "", "abc", "1+2", "1++2i", "1+2ii", "inf", "nan+1i", "1 + 2i", "i1", "1e400",
        ] {
            assert!(parse_complex(bad).is_err(), "'{bad}' should be rejected");
        }
    }

    #[test]
    fn complex_list() {
        let v = parse_complex_list("1,2+3i,-i").unwrap();
        assert_eq!(v, vec![c(1.0, 0.0), c(2.0, 3.0), c(0.0, -1.0)]);
        assert!(parse_complex_list("1,,2").is_err());
    }

    #[test]
    fn time_ranges() {
        assert_eq!(parse_time_range("1:1:1").unwrap(), vec![1.0]);
        assert_eq!(parse_time_range("-2:-1:2").unwrap(), vec![-2.0, -1.0]);
        let r = parse_time_range("0.1:5:50").unwrap();
        assert_eq!(r.len(), 50);
        assert_eq!(r[0], 0.1);
        assert_eq!(r[49], 5.0);
        for bad in [
            "1:2",
            "1:2:0",
            "2:1:3",
            "1:2:1",
            "a:1:2",
            "0:1:-1",
            "0:1:2:3",
            "0:1:2000000",
        ] {
            assert!(parse_time_range(bad).is_err(), "'{bad}' should be rejected");
        }
    }

    #[test]
    fn grid_signals() {
        let g = parse_grid_signal("# sampled e^-t\nt,f_re\n0,1\n0.5,0.6065\n1.0,0.3679\n").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.dt(), 0.5);
        let g = parse_grid_signal("t,f_re,f_im\n1,1,2\n2,3,4\n").unwrap();
        assert_eq!(g.samples()[1], c(3.0, 4.0));
        assert_eq!(g.t0(), 1.0);
        assert!(parse_grid_signal("time,value\n0,1\n1,2\n").is_err());
        assert!(parse_grid_signal("t,f_re\n0,1\n1,2\n3,3\n").is_err());
        assert!(parse_grid_signal("t,f_re\n0,1\n").is_err());
        assert!(parse_grid_signal("t,f_re\n0,1\n1,x\n").is_err());
        assert!(parse_grid_signal("t,f_re\n1,1\n0,2\n").is_err());
    }
}
