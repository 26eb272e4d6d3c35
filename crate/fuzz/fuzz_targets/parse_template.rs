#![no_main]

use defcol::gadgets::parse_template;
use libfuzzer_sys::fuzz_target;

// First byte is the parameter N, the rest the template.
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    if let Ok(text) = std::str::from_utf8(rest) {
        let _ = parse_template(text, i64::from(n % 32));
    }
});
