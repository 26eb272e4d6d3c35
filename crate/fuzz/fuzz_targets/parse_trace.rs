#![no_main]

use defcol::reductions::parse_trace;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(entries) = parse_trace(text) {
        let printed: String = entries.iter().map(|e| format!("{e}\n")).collect();
        assert_eq!(parse_trace(&printed).expect("printed trace parses"), entries);
    }
});
