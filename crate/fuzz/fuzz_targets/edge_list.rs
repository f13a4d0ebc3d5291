#![no_main]

use libfuzzer_sys::fuzz_target;
use metric_embed::skeleton::parse_edge_list;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(g) = parse_edge_list(text) else { return };
    let n = g.vertex_count();
    for i in 0..n {
        assert_eq!(g.distance(i, i), 0.0);
        for j in 0..n {
            assert_eq!(g.distance(i, j), g.distance(j, i));
            assert!(g.distance(i, j) >= 0.0);
        }
    }
});
