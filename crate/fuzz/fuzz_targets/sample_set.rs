#![no_main]

use libfuzzer_sys::fuzz_target;
use qopt::solvers::SampleSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(samples) = SampleSet::from_json(text) {
        assert_eq!(samples.entries().iter().map(|e| e.count).sum::<u64>(), samples.shots());
        let again = SampleSet::from_json(&samples.to_json()).expect("written samples parse");
        assert_eq!(again.to_json(), samples.to_json());
    }
});
