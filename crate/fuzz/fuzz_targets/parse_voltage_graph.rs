#![no_main]

use libfuzzer_sys::fuzz_target;
use sdfgraph::format::{parse_voltage_graph, write_voltage_graph};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(vg) = parse_voltage_graph(text) {
        let again = parse_voltage_graph(&write_voltage_graph(&vg)).expect("written graph parses");
        assert_eq!(again, vg);
        // gauge reduction must not panic on arbitrary voltages
        let _ = vg.voltages_generate();
    }
});
