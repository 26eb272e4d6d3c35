#![no_main]

use defcol::solver::ColorSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(spec) = text.parse::<ColorSpec>() {
        assert_eq!(spec.to_string().parse::<ColorSpec>().expect("printed spec parses"), spec);
    }
});
