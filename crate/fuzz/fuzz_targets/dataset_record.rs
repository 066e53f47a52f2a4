#![no_main]

use std::cmp::Ordering;

use libfuzzer_sys::fuzz_target;
use nextify::dataset::{parse_record, value_to_json};
use nextify::tsodl::parse;
use nextify::{compare_with, Encoder, Mode, NanPolicy};

// First line: an order. Second line: a record.
fuzz_target!(|src: &str| {
    let Some((order, record)) = src.split_once('\n') else {
        return;
    };
    let Ok(tree) = parse(order) else {
        return;
    };
    let Ok(value) = parse_record(&tree, record, 1) else {
        return;
    };
    let encoder = Encoder::new(&tree, Mode::Padded).unwrap().with_nan_policy(NanPolicy::High);
    let key = encoder.encode(&value).unwrap();
    assert_eq!(compare_with(&tree, &value, &value, NanPolicy::High).ok(), Some(Ordering::Equal));

    // Written back out, the record parses to an element with the same key.
    let json = value_to_json(&value).to_string();
    let reparsed = parse_record(&tree, &json, 1).unwrap_or_else(|e| panic!("{json}: {e}"));
    assert_eq!(encoder.encode(&reparsed).unwrap(), key);
});
