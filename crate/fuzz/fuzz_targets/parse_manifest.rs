#![no_main]

use defcol::verify::parse_manifest;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(m) = parse_manifest(text) {
        assert_eq!(parse_manifest(&m.to_string()).expect("printed manifest parses"), m);
    }
});
