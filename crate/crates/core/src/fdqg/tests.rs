use super::*;
use crate::numerics::{op_norm, Tolerance};

fn cat(s: &str) -> Catalog {
    GroupRef::parse(s).unwrap().build().unwrap()
}

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn dual_z2_fusion() {
    let c = cat("dual:Z2");
    assert_eq!(c.len(), 2);
    assert_eq!(c.dims(), vec![1, 1]);
    let parts = &c.fusion_p[1][1];
    assert_eq!(parts.len(), 1);
    assert_eq!(parts[0].irrep, 0);
    assert!((parts[0].isometry[(0, 0)] - cr(1.0)).norm() < 1e-12);
}

#[test]
fn dual_s3_fusion_is_cayley_table() {
    let t = GroupTable::builtin("S3").unwrap();
    let c = build_group_algebra_dual(&t, "dual:S3").unwrap();
    assert_eq!(c.len(), 6);
    for i in 0..6 {
        for j in 0..6 {
            let gi: usize = c.label(i)[1..].parse().unwrap();
            let gj: usize = c.label(j)[1..].parse().unwrap();
            let parts = &c.fusion_p[i][j];
            assert_eq!(parts.len(), 1);
            assert_eq!(c.label(parts[0].irrep), format!("g{}", t.mul(gi, gj)));
        }
    }
}

#[test]
fn dual_haar_solves_invariance_system() {
    // solve (id ⊗ h)Δ(e_k) = h(e_k)·1 as a linear system for h with h(1) = 1
    let c = cat("dual:Z2");
    let g = &c.group;
    let n = g.dim;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for k in 0..n {
        let d = g.comul(&basis(n, k));
        for a in 0..n {
            let mut row = vec![cr(0.0); n];
            for j in 0..n {
                row[j] += d[a * n + j];
            }
            row[k] -= g.unit[a];
            rows.push(row);
            rhs.push(cr(0.0));
        }
    }
    rows.push(g.unit.clone());
    rhs.push(cr(1.0));
    let a = crate::numerics::from_rows(&rows);
    let b = ComplexMatrix::from_column_slice(rhs.len(), 1, &rhs);
    let (h, res) = crate::numerics::least_squares(&a, &b, &tol());
    assert!(res < 1e-12);
    assert!((h[(0, 0)] - cr(1.0)).norm() < 1e-12);
    assert!(h[(1, 0)].norm() < 1e-12);
    assert!((g.haar[0] - cr(1.0)).norm() < 1e-15 && g.haar[1].norm() < 1e-15);
}

#[test]
fn function_algebra_dims() {
    assert_eq!(cat("fun:Z2").dims(), vec![1, 1]);
    let s3 = cat("fun:S3");
    assert_eq!(s3.dims(), vec![1, 1, 2]);
    assert_eq!(s3.dims().iter().map(|d| d * d).sum::<usize>(), 6);
    let labels: Vec<_> = s3.irreps.iter().map(|p| p.label.as_str()).collect();
    assert_eq!(labels, vec!["1", "1'", "2"]);
}

#[test]
fn s3_two_tensor_two_by_characters() {
    // oracle: ⟨χ₂χ₂, χ_σ⟩ = (1/6) Σ_g χ₂(g)² conj χ_σ(g) from the irreps' traces
    let c = cat("fun:S3");
    let n = 6;
    let two = c.index_of("2").unwrap();
    let chi = |i: usize| -> Vec<C64> { c.irreps[i].u.iter().map(|m| m.trace()).collect() };
    let c2 = chi(two);
    for s in 0..c.len() {
        let cs = chi(s);
        let m: C64 = (0..n).map(|g| c2[g] * c2[g] * cs[g].conj()).sum::<C64>() / cr(n as f64);
        assert!((m.re - m.re.round()).abs() < 1e-9);
        assert_eq!(c.multiplicity(s, two, two), m.re.round() as usize, "σ = {}", c.label(s));
    }
    let parts = &c.fusion_p[two][two];
    assert_eq!(parts.len(), 3);
    let mut sum = zeros(4, 4);
    for p in parts {
        sum += &p.isometry * p.isometry.adjoint();
    }
    assert!(op_norm(&(sum - identity(4))) <= 1e-9);
}

#[test]
fn sign_tensor_sign_is_trivial() {
    let c = cat("fun:Z2");
    let parts = &c.fusion_p[1][1];
    assert_eq!(parts.len(), 1);
    assert_eq!(parts[0].irrep, 0);
    assert!((parts[0].isometry[(0, 0)].norm() - 1.0).abs() < 1e-12);
}

#[test]
fn conjugates() {
    let z3 = cat("dual:Z3");
    for i in 0..3 {
        let gi: usize = z3.label(i)[1..].parse().unwrap();
        let gj: usize = z3.label(z3.conj(i))[1..].parse().unwrap();
        assert_eq!((gi + gj) % 3, 0);
        assert!((z3.irreps[i].r[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }
    let s3 = cat("fun:S3");
    let two = s3.index_of("2").unwrap();
    assert_eq!(s3.conj(two), two);
    let r = &s3.irreps[two].r;
    assert!(((r.adjoint() * r)[(0, 0)] - cr(2.0)).norm() < 1e-9);
}

#[test]
fn conjugation_equation_everywhere() {
    for name in ["dual:Z2", "dual:Z3", "dual:S3", "fun:Z2", "fun:Z4", "fun:S3", "fun:D4", "fun:Q8"] {
        let c = cat(name);
        assert!(c.conjugation_residual() <= 1e-9, "{name}: {}", c.conjugation_residual());
    }
}

#[test]
fn quaternionic_rbar_is_minus_r() {
    let q8 = cat("fun:Q8");
    let two = q8.index_of("2").unwrap();
    let p = &q8.irreps[two];
    assert_eq!(p.conjugate, two);
    assert!(op_norm(&(&p.rbar + &p.r)) < 1e-9);
    let d4 = cat("fun:D4");
    let p = &d4.irreps[d4.index_of("2").unwrap()];
    assert!(op_norm(&(&p.rbar - &p.r)) < 1e-9);
}

#[test]
fn catalogs_are_consistent() {
    for name in GroupTable::small_group_names() {
        for kind in ["dual", "fun"] {
            let c = cat(&format!("{kind}:{name}"));
            assert!(c.group.verify().passes(&tol()), "{kind}:{name}");
            assert_eq!(c.dims().iter().map(|d| d * d).sum::<usize>(), c.group.dim);
            assert!(c.fusion_residual() <= 1e-9, "{kind}:{name} {}", c.fusion_residual());
            for p in &c.irreps {
                assert!(verify_representation(&c.group, &p.u, &tol()).unwrap().ok);
                assert!((p.quantum_dim() - p.dim as f64).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn frobenius_reciprocity() {
    let c = cat("fun:S3");
    let k = c.len();
    for s in 0..k {
        for p in 0..k {
            for r in 0..k {
                let lhs = c.multiplicity(s, p, r);
                // m(trivial, σ̄ ⊗ π ⊗ ρ) = Σ_τ m(τ, σ̄ ⊗ π) m(trivial, τ ⊗ ρ)
                let rhs: usize = (0..k).map(|t| c.multiplicity(t, c.conj(s), p) * c.multiplicity(0, t, r)).sum();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn scaled_rep_fails_unitarity() {
    let c = cat("fun:S3");
    let u: Vec<_> = c.irreps[2].u.iter().map(|m| m * cr(0.9)).collect();
    let chk = verify_representation(&c.group, &u, &tol()).unwrap();
    assert!(!chk.ok);
    assert!((chk.unitarity - 0.19).abs() < 1e-9);
    let one = c.group.mat_one(1);
    assert!(verify_representation(&c.group, &one, &tol()).unwrap().ok);
}

#[test]
fn nonabelian_dual_tensor_conventions_differ_only_by_flip() {
    let c = cat("fun:S3");
    let two = c.index_of("2").unwrap();
    let x = c.group.tensor_m(&c.irreps[two].u, &c.irreps[1].u);
    assert!(summands_residual(&c.group, &x, &c.fusion_m[two][1], &c.irreps) <= 1e-9);
}

#[test]
fn rejects_non_group() {
    let bad = GroupTable { order: 2, table: vec![vec![0, 0], vec![0, 1]] };
    assert!(matches!(build_function_algebra(&bad, "x"), Err(Error::NotAGroup(_))));
    assert!(GroupRef::parse("S3").is_err());
}
