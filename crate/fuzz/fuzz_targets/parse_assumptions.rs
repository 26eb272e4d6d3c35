#![no_main]

use defcol::solver::parse_assumptions;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(list) = parse_assumptions(text) {
        let printed: Vec<String> = list.iter().map(ToString::to_string).collect();
        assert_eq!(parse_assumptions(&printed.join(",")).expect("printed list parses"), list);
    }
});
