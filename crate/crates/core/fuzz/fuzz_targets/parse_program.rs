#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(source) = std::str::from_utf8(data) else { return };
    match rosa_core::parse_program(source) {
        Ok(env) => {
            let _ = rosa_core::check_guarded(&env);
        }
        Err(e) => {
            let pos = e.position();
            assert!(pos.line >= 1 && pos.column >= 1);
        }
    }
});
