#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(fr) = qfactor::io::decode_fusion_ring(text) {
        let _ = qfactor::fusionring::positive_ring_homs(&fr, 1e-9, 0, 2);
    }
});
