#![no_main]

use libfuzzer_sys::fuzz_target;
use polyopt::numeric::{format_rational, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_rational(text) {
        let canonical = format_rational(&r);
        assert_eq!(parse_rational(&canonical).unwrap(), r);
    }
});
