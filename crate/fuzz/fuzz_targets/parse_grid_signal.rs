#![no_main]

use laplace_kit::parse::parse_grid_signal;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(signal) = parse_grid_signal(text) {
            assert!(!signal.is_empty());
            assert!(signal.dt() > 0.0);
        }
    }
});
