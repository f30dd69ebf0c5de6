use super::*;
use crate::fixtures::{self, FixtureKind, FIXTURES};
use crate::reconstruct::build_algebra;

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn matrix_round_trip_is_row_major() {
    let m = ComplexMatrix::from_fn(2, 3, |i, j| c(i as f64, j as f64));
    let j = MatrixJson::from_matrix(&m);
    assert_eq!(j.data[1], [0.0, 1.0]);
    assert_eq!(j.data[3], [1.0, 0.0]);
    assert_eq!(j.to_matrix().unwrap(), m);
}

#[test]
fn malformed_matrices_are_rejected() {
    let short = MatrixJson { rows: 2, cols: 2, data: vec![[0.0, 0.0]; 3] };
    assert!(matches!(short.to_matrix(), Err(Error::Shape(_))));
    let huge = MatrixJson { rows: MAX_SIDE + 1, cols: 1, data: vec![] };
    assert!(matches!(huge.to_matrix(), Err(Error::Invalid(_))));
    let inf = MatrixJson { rows: 1, cols: 1, data: vec![[f64::INFINITY, 0.0]] };
    assert!(matches!(inf.to_matrix(), Err(Error::Invalid(_))));
    assert!(serde_json::from_str::<MatrixJson>(r#"{"rows":1,"cols":1,"data":[[1.0]]}"#).is_err());
}

#[test]
fn factor_system_fixtures_round_trip() {
    for f in FIXTURES.iter().filter(|f| f.kind == FixtureKind::FactorSystem) {
        let (fs, _) = fixtures::factor_system(f.name).unwrap();
        let text = fixtures::render(f).unwrap();
        let (back, doc) = decode_factor_system(&text).unwrap();
        assert_eq!(doc.tag.as_deref(), Some(f.tag));
        assert_eq!(back.h, fs.h, "{}", f.name);
        assert_eq!(back.base, fs.base);
        for (a, b) in back.gamma.iter().zip(&fs.gamma) {
            assert_eq!(a, b);
        }
        assert_eq!(back.omega, fs.omega, "{}", f.name);
        assert_eq!(back.validate(&tol()).pass, f.tag == "valid", "{}", f.name);
    }
}

fn trivial_doc() -> serde_json::Value {
    serde_json::from_str(&fixtures::render(fixtures::find("trivial_zz2").unwrap()).unwrap()).unwrap()
}

#[test]
fn incomplete_factor_systems_are_rejected() {
    let mut doc = trivial_doc();
    doc["omega"].as_object_mut().unwrap().remove("g1,g1");
    assert!(matches!(decode_factor_system(&doc.to_string()), Err(Error::Invalid(_))));

    let mut doc = trivial_doc();
    let v = doc["H"]["g1"].clone();
    doc["H"].as_object_mut().unwrap().insert("g7".into(), v);
    assert!(matches!(decode_factor_system(&doc.to_string()), Err(Error::UnknownLabel(_))));

    let mut doc = trivial_doc();
    let v = doc["omega"]["g1,g1"].clone();
    doc["omega"].as_object_mut().unwrap().insert("g1".into(), v);
    assert!(matches!(decode_factor_system(&doc.to_string()), Err(Error::Invalid(_))));

    let mut doc = trivial_doc();
    doc["H"]["g1"] = 2.into();
    assert!(matches!(decode_factor_system(&doc.to_string()), Err(Error::Shape(_))));

    let mut doc = trivial_doc();
    doc["extra"] = 1.into();
    assert!(matches!(decode_factor_system(&doc.to_string()), Err(Error::Parse(_))));
}

#[test]
fn inline_group_tables_build() {
    let spec: GroupSpec = serde_json::from_str(r#"{"algebra":"dual","order":2,"table":[[0,1],[1,0]]}"#).unwrap();
    assert_eq!(spec.build().unwrap().len(), 2);
    let bad: GroupSpec = serde_json::from_str(r#"{"algebra":"dual","order":2,"table":[[0,1],[0,1]]}"#).unwrap();
    assert!(bad.build().is_err());
    let kind: GroupSpec = serde_json::from_str(r#"{"algebra":"twisted","order":1,"table":[[0]]}"#).unwrap();
    assert!(matches!(kind.build(), Err(Error::Invalid(_))));
}

#[test]
fn gauge_fixture_round_trips() {
    let f = fixtures::find("gauge_m2").unwrap();
    let (ds, _) = decode_dynamical_system(&fixtures::render(f).unwrap(), &tol()).unwrap();
    let orig = fixtures::gauge_system(&tol()).unwrap();
    assert_eq!(ds.basis, orig.basis);
    assert_eq!(ds.coaction, orig.coaction);
    assert!(ds.verify(&tol()).pass);
}

#[test]
fn algebra_files_load_as_dynamical_systems() {
    let (fs, g) = fixtures::factor_system("pauli").unwrap();
    let alg = build_algebra(&fs, &tol()).unwrap();
    let text = serde_json::to_string(&AlgebraJson::from_algebra(&alg, g, &tol()).unwrap()).unwrap();
    let (ds, _) = decode_dynamical_system(&text, &tol()).unwrap();
    assert_eq!(ds.dim(), 4);
    assert!(ds.verify(&tol()).pass);
}

#[test]
fn fusion_ring_inputs() {
    let by_ref = decode_fusion_ring(r#"{"group":"fun:S3"}"#).unwrap();
    let cat = GroupSpec::Ref("fun:S3".into()).build().unwrap();
    let export = serde_json::to_string(&CatalogJson::from_catalog(&cat, GroupSpec::Ref("fun:S3".into()))).unwrap();
    assert_eq!(decode_fusion_ring(&export).unwrap(), by_ref);
    assert!(decode_fusion_ring("{}").is_err());
    let mut ring = serde_json::to_value(&by_ref).unwrap();
    ring["dims"][1] = 3.into();
    let doc = serde_json::json!({ "fusion_ring": ring });
    assert!(matches!(decode_fusion_ring(&doc.to_string()), Err(Error::Integrity(_))));
}

#[test]
fn oversized_input_is_rejected() {
    let text = " ".repeat(MAX_INPUT_BYTES + 1);
    assert!(matches!(decode_factor_system(&text), Err(Error::Invalid(_))));
    assert!(matches!(decode_group_table(&text), Err(Error::Invalid(_))));
}

fn mutate(text: &str, edits: &[(usize, u8)]) -> String {
    let mut bytes = text.as_bytes().to_vec();
    for &(at, b) in edits {
        if bytes.is_empty() {
            break;
        }
        let i = at % bytes.len();
        match b % 3 {
            0 => bytes[i] = b" 0123456789-.e,[]{}\":"[(b as usize) % 21],
            1 => {
                bytes.remove(i);
            }
            _ => bytes.insert(i, b"019-]}\""[(b as usize) % 7]),
        }
    }
    String::from_utf8_lossy(&bytes).into_owned()
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

    #[test]
    fn decoders_never_panic_on_mutated_fixtures(edits in proptest::collection::vec((0usize..100_000, 0u8..=255), 1..6)) {
        for f in FIXTURES {
            let text = mutate(&fixtures::render(f).unwrap(), &edits);
            let _ = decode_factor_system(&text);
            let _ = decode_dynamical_system(&text, &tol());
        }
        let _ = decode_fusion_ring(&mutate(r#"{"group": "dual:S3"}"#, &edits));
        let _ = decode_group_table(&mutate(r#"{"order": 2, "table": [[0,1],[1,0]]}"#, &edits));
    }
}
