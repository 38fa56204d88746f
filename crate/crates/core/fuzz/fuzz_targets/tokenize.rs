#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(source) = std::str::from_utf8(data) {
        if let Ok(tokens) = rosa_core::tokenize(source) {
            for pair in tokens.windows(2) {
                assert!(pair[0].position < pair[1].position);
            }
        }
    }
});
