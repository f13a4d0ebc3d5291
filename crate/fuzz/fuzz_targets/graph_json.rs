#![no_main]

use libfuzzer_sys::fuzz_target;
use metric_embed::skeleton::parse_graph_json;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(g) = parse_graph_json(text) else { return };
    for v in 0..g.vertex_count() {
        if let Some(k) = g.declared_kappa(v) {
            assert!(k.is_finite());
        }
        assert_eq!(g.vertex(g.label(v)).unwrap(), v);
    }
    assert!(g.edges().iter().all(|e| e.length > 0.0 && e.length.is_finite()));
});
