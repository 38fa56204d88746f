#![no_main]

use libfuzzer_sys::fuzz_target;
use rosa_core::{parse_process_str, pretty_print};

fuzz_target!(|data: &[u8]| {
    let Ok(source) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_process_str(source) {
        // Anything accepted must survive a print and reparse unchanged.
        let printed = pretty_print(&p);
        let q = parse_process_str(&printed).expect("printed term reparses");
        assert_eq!(p, q, "{}", printed);
    }
});
