#![no_main]

use libfuzzer_sys::fuzz_target;
use polyopt::document::{emit_problem, parse_problem};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_problem(text) {
        assert_eq!(parse_problem(&emit_problem(&p)).unwrap(), p);
    }
});
