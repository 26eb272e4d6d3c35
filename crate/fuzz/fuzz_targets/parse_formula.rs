#![no_main]

use defcol::verify::parse_formula;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(f) = parse_formula(text) {
        assert_eq!(parse_formula(&f.to_string()).expect("printed formula parses"), f);
    }
});
