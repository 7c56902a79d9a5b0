use laplace_kit::catalog::lookup;
use laplace_kit::checks::{check_lemma1_decay, default_radii, line_integral_trend};
use laplace_kit::transform::right_limit_at_zero;
use laplace_kit::{InversionConfig, QuadratureConfig, Verdict};

/// Whenever the decay premise holds, both routes must put f(0) at zero.
#[test]
fn both_routes_agree_when_the_premise_holds() {
    let quadrature = QuadratureConfig::default();
    let mut passes = 0;
    for (name, b) in [
        ("t-exp", 1.5),
        ("t-exp", 1.9),
        ("exp-decay", 1.5),
        ("paper-2c", 1.25),
        ("zero", 1.5),
    ] {
        let map = &lookup(name).unwrap().transform;
        let cfg = InversionConfig::for_map(map);
        let report = check_lemma1_decay(map, b, &default_radii(), &cfg).unwrap();
        if report.verdict != Verdict::Pass {
            continue;
        }
        passes += 1;
        let limit = right_limit_at_zero(map, &cfg).unwrap();
        let line = line_integral_trend(map, 1e5, &quadrature).unwrap();
        assert!(limit.value.norm() < 1e-2, "{name}: {limit:?}");
        assert!(line.limit().norm() < 1e-2, "{name}: {line:?}");
    }
    assert!(passes >= 2);
}

#[test]
fn quarter_power_example_line_integral_trends_to_zero() {
    let map = &lookup("paper-2c").unwrap().transform;
    let trend = line_integral_trend(map, 1e6, &QuadratureConfig::default()).unwrap();
    let magnitudes: Vec<f64> = trend.values.iter().map(|v| v.norm()).collect();
    assert!(magnitudes.windows(2).all(|w| w[1] < w[0]), "{magnitudes:?}");
    assert!(trend.limit().norm() < 1e-2, "{trend:?}");
}

#[test]
fn simple_pole_line_integral_is_one_half() {
    let map = &lookup("exp-decay").unwrap().transform;
    let trend = line_integral_trend(map, 1e5, &QuadratureConfig::default()).unwrap();
    assert!((trend.limit().re - 0.5).abs() < 1e-6);
}
