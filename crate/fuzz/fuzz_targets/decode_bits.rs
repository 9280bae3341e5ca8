#![no_main]

use libfuzzer_sys::fuzz_target;
use qopt::encoding::{EncodingSpec, Scheme};
use qopt::solvers::parse_bit_string;

fuzz_target!(|data: &[u8]| {
    let Some((&m, rest)) = data.split_first() else {
        return;
    };
    let m = usize::from(m).max(1);
    let bits: Vec<bool> = rest.iter().map(|b| b & 1 == 1).collect();
    for scheme in [Scheme::Binary, Scheme::OneHot, Scheme::DomainWall] {
        let Ok(spec) = EncodingSpec::new(scheme, m, 0) else {
            continue;
        };
        // Valid codewords decode to an in-range value that re-encodes exactly.
        if let Ok((value, true)) = spec.decode(&bits) {
            assert!(value < m);
            if scheme != Scheme::Binary {
                assert_eq!(spec.encode(value).expect("decoded value encodes"), bits);
            }
        }
    }
    if let Ok(text) = std::str::from_utf8(rest) {
        let _ = parse_bit_string(text);
    }
});
