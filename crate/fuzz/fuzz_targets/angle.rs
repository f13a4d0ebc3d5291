#![no_main]

use libfuzzer_sys::fuzz_target;
use metric_embed::qcbounds::Angle;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(angle) = text.parse::<Angle>() else { return };
    let r = angle.radians();
    assert!(r.is_finite());
});
