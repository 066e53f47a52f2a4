#![no_main]

use libfuzzer_sys::fuzz_target;
use nextify::compare_keys;

// Arbitrary byte strings, split at the first byte's offset.
fuzz_target!(|data: &[u8]| {
    let Some((&split, rest)) = data.split_first() else {
        return;
    };
    let (a, b) = rest.split_at(usize::from(split).min(rest.len()));
    if let Ok(ord) = compare_keys(a, b) {
        assert_eq!(ord, a.cmp(b));
    }
});
