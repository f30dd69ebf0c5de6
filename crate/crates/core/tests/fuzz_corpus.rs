use std::path::PathBuf;

use qfactor::io::{self, MatrixJson};
use qfactor::numerics::Tolerance;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn factor_system_seeds_decode() {
    for (name, text) in seeds("factor_system") {
        let (fs, doc) = io::decode_factor_system(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = io::FactorSystemJson::from_system(&fs, doc.group.clone());
        assert_eq!(again.h, doc.h, "{name}");
        again.to_system().unwrap();
    }
}

#[test]
fn dynamical_system_seeds_decode() {
    for (name, text) in seeds("dynamical_system") {
        io::decode_dynamical_system(&text, &Tolerance::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn fusion_ring_seeds_decode() {
    for (name, text) in seeds("fusion_ring") {
        let fr = io::decode_fusion_ring(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        fr.validate().unwrap();
    }
}

#[test]
fn group_table_seeds_are_classified() {
    for (name, text) in seeds("group_table") {
        let decoded = io::decode_group_table(&text);
        assert_eq!(decoded.is_ok(), !name.starts_with("not_"), "{name}");
    }
}

#[test]
fn matrix_seeds_round_trip() {
    for (name, text) in seeds("matrix_json") {
        let m: MatrixJson = serde_json::from_str(&text).unwrap();
        let x = m.to_matrix().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(MatrixJson::from_matrix(&x), m, "{name}");
    }
}
