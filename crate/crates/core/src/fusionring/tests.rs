use proptest::prelude::*;

use super::*;
use crate::fdqg::{GroupRef, GroupTable};

fn ring(g: &str) -> FusionRing {
    FusionRing::from_catalog(&GroupRef::parse(g).unwrap().build().unwrap())
}

fn unique_hom(g: &str) -> Vec<f64> {
    let fr = ring(g);
    let search = positive_ring_homs(&fr, 1e-9, 0, DEFAULT_STARTS).unwrap();
    assert_eq!(search.homs.len(), 1, "{g}: {search:?}");
    let h = &search.homs[0];
    assert!(h.certificate.forces_dims(1e-8), "{g}: {:?}", h.certificate);
    h.values.clone()
}

#[test]
fn dual_z2_is_all_ones() {
    assert_eq!(ring("dual:Z2").dims, vec![1, 1]);
    for v in unique_hom("dual:Z2") {
        assert!((v - 1.0).abs() < 1e-9);
    }
}

#[test]
fn fun_s3_is_one_one_two() {
    let fr = ring("fun:S3");
    let mut dims = fr.dims.clone();
    dims.sort();
    assert_eq!(dims, vec![1, 1, 2]);
    let r = unique_hom("fun:S3");
    for (v, d) in r.iter().zip(&fr.dims) {
        assert!((v - *d as f64).abs() < 1e-9);
    }
}

#[test]
fn dual_s3_is_all_ones() {
    let r = unique_hom("dual:S3");
    assert_eq!(r.len(), 6);
    assert!(r.iter().all(|v| (v - 1.0).abs() < 1e-9));
}

#[test]
fn dual_group_gives_permutation_matrices() {
    let fr = ring("dual:Q8");
    let ones = vec![1.0; fr.len()];
    for pi in 0..fr.len() {
        let t = stochastic_matrix(&fr, pi, &ones).unwrap();
        for row in t.row_iter() {
            assert_eq!(row.iter().filter(|&&x| x == 1.0).count(), 1);
            assert_eq!(row.iter().filter(|&&x| x == 0.0).count(), fr.len() - 1);
        }
        for col in t.column_iter() {
            assert_eq!(col.sum(), 1.0);
        }
    }
}

/// The character of a transposition is a real ring homomorphism that is not positive.
#[test]
fn character_is_an_eigenvector() {
    let fr = ring("fun:S3");
    let sign = (1..3).find(|&i| fr.dims[i] == 1).unwrap();
    let chi: Vec<f64> = (0..3).map(|i| if i == 0 { 1.0 } else if i == sign { -1.0 } else { 0.0 }).collect();
    assert!(fr.hom_residual(&chi) < 1e-15);
    let dims = fr.dims_f64();
    let c = DVector::from_iterator(3, chi.iter().zip(&dims).map(|(a, b)| a / b));
    for pi in 0..3 {
        let t = stochastic_matrix(&fr, pi, &dims).unwrap();
        let lambda = chi[pi] / dims[pi];
        assert!((&t * &c - &c * lambda).amax() < 1e-14);
        assert!(lambda.abs() <= 1.0);
    }
}

#[test]
fn non_positive_candidate_is_a_domain_error() {
    let fr = ring("fun:S3");
    assert!(matches!(stochastic_matrix(&fr, 1, &[1.0, 0.0, 2.0]), Err(Error::Domain(_))));
    assert!(matches!(stochastic_matrix(&fr, 1, &[1.0, -1.0, 2.0]), Err(Error::Domain(_))));
}

#[test]
fn inconsistent_fusion_is_rejected() {
    let mut fr = ring("fun:S3");
    let two = (0..3).find(|&i| fr.dims[i] == 2).unwrap();
    fr.mult[two][two][0] += 1;
    assert!(matches!(fr.validate(), Err(Error::Integrity(_))));
    assert!(positive_ring_homs(&fr, 1e-9, 0, 2).is_err());
    fr.mult.pop();
    assert!(matches!(fr.validate(), Err(Error::Shape(_))));
}

#[test]
fn ring_round_trips_through_json() {
    let fr = ring("fun:Q8");
    let text = serde_json::to_string(&fr).unwrap();
    let back: FusionRing = serde_json::from_str(&text).unwrap();
    assert_eq!(fr, back);
    back.validate().unwrap();
}

fn catalogs() -> Vec<String> {
    GroupTable::small_group_names().iter().flat_map(|g| [format!("dual:{g}"), format!("fun:{g}")]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dims_give_stochastic_matrices_in_the_unit_disc(idx in 0usize..28, pi_seed in 0usize..64) {
        let names = catalogs();
        let fr = ring(&names[idx % names.len()]);
        let pi = pi_seed % fr.len();
        let t = stochastic_matrix(&fr, pi, &fr.dims_f64()).unwrap();
        for row in t.row_iter() {
            prop_assert!((row.sum() - 1.0).abs() <= 1e-12);
        }
        prop_assert!(spectral_radius(&t) <= 1.0 + 1e-8);
    }
}
