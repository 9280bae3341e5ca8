#![no_main]

use libfuzzer_sys::fuzz_target;
use qopt::graph::{parse_graph, write_graph};

fuzz_target!(|data: &[u8]| {
    // Anything that parses must survive a write/parse round trip.
    if let Ok(g) = parse_graph(data) {
        let again = parse_graph(&write_graph(&g)).expect("written graph parses");
        assert_eq!(g, again);
    }
});
