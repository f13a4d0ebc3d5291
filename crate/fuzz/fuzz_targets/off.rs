#![no_main]

use libfuzzer_sys::fuzz_target;
use metric_embed::qcbounds::{mesh_edge_dilatation_bound, parse_off};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(mesh) = parse_off(text) else { return };
    let n = mesh.vertices.len();
    assert!(mesh.faces.iter().flatten().all(|&v| v < n));
    // the audit must not panic on anything the parser accepts
    if let Ok(report) = mesh_edge_dilatation_bound(&mesh) {
        assert!(report.bound >= 1.0 || report.bound.is_nan());
    }
});
