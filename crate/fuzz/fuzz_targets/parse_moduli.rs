#![no_main]

use libfuzzer_sys::fuzz_target;
use sdfgraph::format::parse_moduli;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(moduli) = parse_moduli(text) {
        assert!(!moduli.is_empty());
        assert!(moduli.iter().all(|&m| m > 0));
        let joined = moduli
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        assert_eq!(parse_moduli(&joined).unwrap(), moduli);
    }
});
