#![no_main]
use libfuzzer_sys::fuzz_target;
use qfactor::numerics::Tolerance;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = qfactor::io::decode_dynamical_system(text, &Tolerance::default());
});
