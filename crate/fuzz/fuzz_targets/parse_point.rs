#![no_main]

use libfuzzer_sys::fuzz_target;
use polyopt::numeric::{format_rational, parse_point};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_point(text) {
        let canonical: Vec<String> = v.iter().map(format_rational).collect();
        assert_eq!(parse_point(&canonical.join(",")).unwrap(), v);
    }
});
