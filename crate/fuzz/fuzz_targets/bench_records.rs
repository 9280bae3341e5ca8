#![no_main]

use libfuzzer_sys::fuzz_target;
use qopt::bench::{read_records, write_records};

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = read_records(data) {
        let written = write_records(&records);
        let again = read_records(&written).expect("written records parse");
        // Writing sorts rows, so the second pass must be a fixed point.
        assert_eq!(again.len(), records.len());
        assert_eq!(write_records(&again), written);
    }
});
