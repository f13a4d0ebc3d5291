#![no_main]

use libfuzzer_sys::fuzz_target;
use metric_embed::MetricQuadruple;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(q) = text.parse::<MetricQuadruple>() else { return };
    let m = q.matrix();
    for i in 0..4 {
        assert_eq!(m[i][i], 0.0);
        for j in 0..4 {
            assert_eq!(m[i][j], m[j][i]);
            assert!(m[i][j].is_finite() && m[i][j] >= 0.0);
        }
    }
});
