#![no_main]

use defcol::verify::parse_replay;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    // steps remember source lines, so compare printed forms
    if let Ok(s) = parse_replay(text) {
        let printed = s.to_string();
        assert_eq!(parse_replay(&printed).expect("printed script parses").to_string(), printed);
    }
});
