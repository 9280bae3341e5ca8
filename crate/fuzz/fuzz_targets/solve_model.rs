#![no_main]

use libfuzzer_sys::fuzz_target;
use qopt::qubo::{bits_from_index, parse_model, qubo_to_ising, spins_from_bits};
use qopt::solvers::brute_force_qubo;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(model) = parse_model(text) else {
        return;
    };
    let q = model.into_qubo();
    let n = q.num_qubits();
    if n > 10 {
        return;
    }
    let m = qubo_to_ising(&q);
    let exact = brute_force_qubo(&q).expect("bounded model solves");
    for index in 0..(1u64 << n) {
        let x = bits_from_index(index, n);
        let energy = q.evaluate(&x).unwrap();
        assert_eq!(m.evaluate(&spins_from_bits(&x)).unwrap(), energy);
        assert!(energy >= exact.value);
    }
});
