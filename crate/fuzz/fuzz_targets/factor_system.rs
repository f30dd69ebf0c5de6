#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((fs, doc)) = qfactor::io::decode_factor_system(text) {
        let again = qfactor::io::FactorSystemJson::from_system(&fs, doc.group);
        let _ = again.to_system();
    }
});
