#![no_main]

use libfuzzer_sys::fuzz_target;
use nextify::golden::{check_column, parse_golden};

fuzz_target!(|src: &str| {
    if let Ok(columns) = parse_golden(src) {
        for column in columns.iter().take(4) {
            let _ = check_column(column);
        }
    }
});
