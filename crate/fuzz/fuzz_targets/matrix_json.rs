#![no_main]
use libfuzzer_sys::fuzz_target;
use qfactor::io::MatrixJson;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = serde_json::from_slice::<MatrixJson>(data) {
        if let Ok(x) = m.to_matrix() {
            assert_eq!(MatrixJson::from_matrix(&x), m);
        }
    }
});
