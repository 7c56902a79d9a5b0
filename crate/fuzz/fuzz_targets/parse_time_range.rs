#![no_main]

use laplace_kit::parse::parse_time_range;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(times) = parse_time_range(text) {
            assert!(!times.is_empty());
            assert!(times.iter().all(|t| t.is_finite()));
            assert!(times.windows(2).all(|w| w[0] <= w[1]));
        }
    }
});
