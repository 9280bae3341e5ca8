#![no_main]

use libfuzzer_sys::fuzz_target;
use qopt::rational::{format, parse};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(value) = parse(text) {
        assert_eq!(parse(&format(&value)).expect("formatted value parses"), value);
    }
});
