#![no_main]

use libfuzzer_sys::fuzz_target;
use nextify::tsodl::{parse, serialize};

fuzz_target!(|src: &str| {
    let Ok(tree) = parse(src) else {
        return;
    };
    // Anything accepted must serialize to a canonical fixed point.
    let text = serialize(&tree);
    let again = parse(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
    assert_eq!(again, tree);
    assert_eq!(serialize(&again), text);
});
