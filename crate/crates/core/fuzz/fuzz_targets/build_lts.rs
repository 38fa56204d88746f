#![no_main]

use libfuzzer_sys::fuzz_target;
use rosa_core::{build_lts, parse_program, to_dot, to_json, to_text, BuildConfig, ExportOptions, NodeKind};

fuzz_target!(|data: &[u8]| {
    let Ok(source) = std::str::from_utf8(data) else { return };
    let Ok(env) = parse_program(source) else { return };
    let config = BuildConfig {
        max_states: 64,
        max_unfold: 32,
        ..BuildConfig::default()
    };
    let Ok(lts) = build_lts(&env, config) else { return };
    assert!(lts.nodes.len() <= 64);
    for e in &lts.edges {
        assert!(e.source < lts.nodes.len() && e.target < lts.nodes.len());
    }
    for n in &lts.nodes {
        if matches!(n.kind, NodeKind::Deadlock | NodeKind::Success) {
            assert!(lts.outgoing(n.id).next().is_none());
        }
    }
    let opts = ExportOptions::default();
    let _ = (to_text(&lts, &opts), to_dot(&lts, &opts), to_json(&lts));
});
