#![no_main]

use laplace_kit::parse::{parse_complex, parse_complex_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = parse_complex(text) {
            assert!(p.re.is_finite() && p.im.is_finite());
        }
        let _ = parse_complex_list(text);
    }
});
