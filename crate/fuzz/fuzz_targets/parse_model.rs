#![no_main]

use libfuzzer_sys::fuzz_target;
use qopt::qubo::{parse_model, write_ising, write_qubo, ModelFile};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    match parse_model(text) {
        Ok(ModelFile::Qubo(q)) => {
            let again = parse_model(&write_qubo(&q)).expect("written QUBO parses");
            assert_eq!(again, ModelFile::Qubo(q));
        }
        Ok(ModelFile::Ising(m)) => {
            let again = parse_model(&write_ising(&m)).expect("written Ising model parses");
            assert_eq!(again, ModelFile::Ising(m));
        }
        Err(_) => {}
    }
});
