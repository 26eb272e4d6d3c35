#![no_main]

use defcol::graph::{parse_graph, serialize_graph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(g) = parse_graph(data) {
        let again = parse_graph(serialize_graph(&g).as_bytes()).expect("serialized graph parses");
        assert_eq!(again, g);
    }
});
