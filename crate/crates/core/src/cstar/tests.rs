use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::numerics::{c, from_rows, random_complex, random_unitary, real_diag, C64};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn b(blocks: &[usize]) -> FiniteDimCStar {
    FiniteDimCStar::new(blocks.to_vec()).unwrap()
}

fn unit_matrix(n: usize, j: usize, k: usize) -> ComplexMatrix {
    let mut m = zeros(n, n);
    m[(j, k)] = cr(1.0);
    m
}

#[test]
fn identity_on_m2_is_star_hom() {
    let m2 = b(&[2]);
    let phi = StarHom::amplification(&m2, 1);
    assert!(phi.verify(&tol()).ok);
}

#[test]
fn amplification_of_c_is_star_hom() {
    let c = b(&[1]);
    let phi = StarHom::amplification(&c, 2);
    assert!(phi.verify(&tol()).ok);
    assert_eq!(phi.one(), MatrixOverB::identity(&c, 2));
}

#[test]
fn nonlinear_probe_fails() {
    // b ↦ b + 0.01 b² restricted to matrix units of ℂ² is e_i ↦ 1.01 e_i
    let c2 = b(&[1, 1]);
    let images = c2.matrix_units().into_iter().map(|u| c2.matrix_unit(u).scale(cr(1.01))).collect();
    let phi = StarHom::new(c2.clone(), c2, 1, images).unwrap();
    let chk = phi.verify(&tol());
    assert!(!chk.ok);
    assert!(chk.multiplicativity > 1e-3);
    assert!((chk.multiplicativity - 0.0101).abs() < 1e-12);
}

#[test]
fn star_hom_shape_errors() {
    let c = b(&[1]);
    assert!(matches!(StarHom::new(c.clone(), c.clone(), 1, vec![]), Err(Error::Shape(_))));
    assert!(matches!(FiniteDimCStar::new(vec![]), Err(Error::Invalid(_))));
}

#[test]
fn mvn_e11_e22() {
    let m2 = b(&[2]);
    let p = m2.matrix_unit((0, 0, 0));
    let q = m2.matrix_unit((0, 1, 1));
    let v = mvn_equivalent(&p, &q, &tol()).unwrap().expect("equivalent");
    assert!(v.adjoint().mul(&v).dist(&p) < 1e-12);
    assert!(v.mul(&v.adjoint()).dist(&q) < 1e-12);
    // up to a phase the witness is e₂₁
    let e21 = m2.matrix_unit((0, 1, 0));
    assert!((v.blocks[0][(1, 0)].norm() - 1.0).abs() < 1e-12);
    assert!(v.sub(&e21.scale(v.blocks[0][(1, 0)])).norm() < 1e-12);
}

#[test]
fn mvn_distinct_summands() {
    let c2 = b(&[1, 1]);
    let p = c2.matrix_unit((0, 0, 0));
    let q = c2.matrix_unit((1, 0, 0));
    assert_eq!(mvn_equivalent(&p, &q, &tol()).unwrap(), None);
    assert_eq!(rank_vector(&p, &tol()), vec![1, 0]);
}

#[test]
fn mvn_rejects_non_projection() {
    let c = b(&[1]);
    let p = c.unit().scale(cr(0.5));
    assert!(matches!(mvn_equivalent(&p, &p, &tol()), Err(Error::NotProjection { .. })));
}

fn random_projection(base: &FiniteDimCStar, h: usize, ranks: &[usize], rng: &mut ChaCha8Rng) -> MatrixOverB {
    let blocks = base
        .blocks
        .iter()
        .zip(ranks)
        .map(|(&n, &r)| {
            let v = crate::numerics::range_basis(&random_complex(h * n, r, rng), &tol());
            &v * v.adjoint()
        })
        .collect();
    MatrixOverB { rows: h, cols: h, blocks }
}

#[test]
fn random_rank_two_projections_are_equivalent() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let base = b(&[1, 1]);
    let p = random_projection(&base, 3, &[2, 2], &mut rng);
    let q = random_projection(&base, 3, &[2, 2], &mut rng);
    let v = mvn_equivalent(&p, &q, &tol()).unwrap().expect("equal ranks");
    assert!(v.adjoint().mul(&v).dist(&p) <= 1e-9);
    assert!(v.mul(&v.adjoint()).dist(&q) <= 1e-9);
}

#[test]
fn apply_entrywise_of_amplification() {
    let m2 = b(&[2]);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x = MatrixOverB { rows: 2, cols: 1, blocks: vec![random_complex(4, 2, &mut rng)] };
    let phi = StarHom::amplification(&m2, 1);
    assert!(apply_entrywise(&m2, &phi, &x).dist(&x) < 1e-14);
}

#[test]
fn b_over_itself_has_unit_frame() {
    let c = b(&[1]);
    let m = MatrixModule::new(vec![identity(1)], identity(1), Wedderburn::standard(&c)).unwrap();
    let f = frame_for_module(&m, &tol()).unwrap();
    assert_eq!(f.len(), 1);
    assert!((f[0][(0, 0)] - cr(1.0)).norm() < 1e-12);
}

fn gauge_corner() -> MatrixModule {
    // off-diagonal part of M₂ as a module over the diagonal ℂ²
    MatrixModule::new(vec![unit_matrix(2, 0, 1), unit_matrix(2, 1, 0)], identity(2), Wedderburn::standard(&b(&[1, 1]))).unwrap()
}

#[test]
fn gauge_corner_frame() {
    let m = gauge_corner();
    let f = frame_for_module(&m, &tol()).unwrap();
    assert!(m.frame_residual(&f) <= 1e-12);
    // e₁₂e₁₂* + e₂₁e₂₁* = 1 by direct multiplication
    let e12 = unit_matrix(2, 0, 1);
    let e21 = unit_matrix(2, 1, 0);
    assert_eq!(&e12 * e12.adjoint() + &e21 * e21.adjoint(), identity(2));
    for z in &f {
        assert!(z[(0, 0)].norm() < 1e-12 && z[(1, 1)].norm() < 1e-12);
    }
}

#[test]
fn gauge_corner_gram() {
    let m = gauge_corner();
    let g = m.gram(&[unit_matrix(2, 0, 1), unit_matrix(2, 1, 0)]);
    // e₁₂*e₁₂ = e₂₂ and e₂₁*e₂₁ = e₁₁; cross terms vanish
    assert_eq!(g.blocks[0], real_diag(&[0.0, 1.0]));
    assert_eq!(g.blocks[1], real_diag(&[1.0, 0.0]));
}

#[test]
fn gram_examples() {
    let c2 = b(&[1, 1]);
    let m = MatrixModule::new(
        vec![identity(2)],
        identity(2),
        Wedderburn::standard(&c2),
    )
    .unwrap();
    let e1 = from_rows(&[vec![cr(1.0), cr(0.0)], vec![cr(0.0), cr(1.0)]]);
    assert!(m.gram(std::slice::from_ref(&e1)).dist(&MatrixOverB::identity(&c2, 1)) < 1e-14);
    assert!(m.gram(&[e1 * cr(2.0)]).dist(&MatrixOverB::identity(&c2, 1).scale(cr(4.0))) < 1e-14);
}

#[test]
fn non_full_module_is_rejected() {
    let m = MatrixModule::new(vec![unit_matrix(2, 0, 1)], identity(2), Wedderburn::standard(&b(&[1, 1]))).unwrap();
    assert!(matches!(frame_for_module(&m, &tol()), Err(Error::NotMorita { .. })));
}

#[test]
fn wedderburn_of_rotated_algebra() {
    // ℂ ⊕ M₂ with multiplicities (2, 1) inside M₄, rotated by a random unitary
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let alg = b(&[1, 2]);
    let hidden = Wedderburn { algebra: alg.clone(), multiplicities: vec![2, 1], w: random_unitary(4, &mut rng) };
    let basis: Vec<_> = alg.matrix_units().into_iter().map(|u| hidden.from_block(&alg.matrix_unit(u))).collect();
    let found = Wedderburn::decompose(&basis, &tol(), 3).unwrap();
    let mut pairs: Vec<_> = found.algebra.blocks.iter().copied().zip(found.multiplicities.iter().copied()).collect();
    pairs.sort();
    assert_eq!(pairs, vec![(1, 2), (2, 1)]);
    assert!(found.residual(&basis) < 1e-9);
    let x = basis[1].clone() * c(0.3, 0.2) + &basis[3];
    let y = basis[4].clone() + &basis[2];
    let prod = found.to_block(&(&x * &y));
    assert!(prod.dist(&found.to_block(&x).mul(&found.to_block(&y))) < 1e-9);
}

#[test]
fn wedderburn_diagonal() {
    let basis = vec![unit_matrix(2, 0, 0), unit_matrix(2, 1, 1)];
    let w = Wedderburn::decompose(&basis, &tol(), 0).unwrap();
    assert_eq!(w.algebra.blocks, vec![1, 1]);
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn bases() -> Vec<FiniteDimCStar> {
        vec![b(&[1]), b(&[1, 1]), b(&[2])]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rank_vector_is_unitarily_invariant(seed in any::<u64>(), which in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = bases()[which].clone();
            let ranks: Vec<usize> = base.blocks.iter().map(|&n| 1 + (seed as usize) % (2 * n)).collect();
            let p = random_projection(&base, 2, &ranks, &mut rng);
            let u = MatrixOverB { rows: 2, cols: 2, blocks: base.blocks.iter().map(|&n| random_unitary(2 * n, &mut rng)).collect() };
            let q = u.mul(&p).mul(&u.adjoint());
            prop_assert_eq!(rank_vector(&p, &tol()), rank_vector(&q, &tol()));
        }

        #[test]
        fn frames_reconstruct_module_elements(seed in any::<u64>(), which in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_module(&bases()[which], &mut rng);
            let f = frame_for_module(&m, &tol()).unwrap();
            prop_assert!(m.frame_residual(&f) <= 1e-8);
            for _ in 0..5 {
                let x = m.basis.iter().fold(zeros(m.left_unit.nrows(), m.base.ambient_dim()), |acc, e| {
                    acc + e * C64::new(rand::Rng::random_range(&mut rng, -1.0..1.0), rand::Rng::random_range(&mut rng, -1.0..1.0))
                });
                prop_assert!(crate::numerics::op_norm(&(m.fourier(&f, &x) - &x)) <= 1e-8);
            }
        }

        #[test]
        fn mvn_is_an_equivalence(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = b(&[1, 2]);
            let ps: Vec<_> = (0..4).map(|i| random_projection(&base, 2, &[1 + i % 2, 2], &mut rng)).collect();
            let eq = |x: &MatrixOverB, y: &MatrixOverB| mvn_equivalent(x, y, &tol()).unwrap().is_some();
            for x in &ps {
                prop_assert!(eq(x, x));
                for y in &ps {
                    prop_assert_eq!(eq(x, y), eq(y, x));
                    for z in &ps {
                        if eq(x, y) && eq(y, z) {
                            prop_assert!(eq(x, z));
                        }
                    }
                }
            }
        }
    }
}

