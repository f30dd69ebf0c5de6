//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfactor::cstar::{frame_for_module, random_module, FiniteDimCStar};
use qfactor::extract::DynamicalSystem;
use qfactor::factor::{find_conjugacy, pauli_system, random_witness, trivial_system, ConjugacyOutcome, FactorSystem, DEFAULT_BUDGET};
use qfactor::fdqg::{Catalog, GroupRef, GroupTable};
use qfactor::fixtures::{self, FixtureKind, FIXTURES};
use qfactor::fusionring::{positive_ring_homs, spectral_radius, stochastic_matrix, FusionRing, DEFAULT_STARTS};
use qfactor::numerics::{c, cr, op_norm, zeros, ComplexMatrix, Tolerance};
use qfactor::reconstruct::{build_algebra, check_free_m_surjective, verify_unitary_tensor_functor};

const GROUPS: [&str; 5] = ["dual:Z2", "dual:Z2xZ2", "dual:S3", "fun:Z2", "fun:S3"];

fn tol() -> Tolerance {
    Tolerance::default()
}

fn catalog(g: &str) -> Arc<Catalog> {
    Arc::new(GroupRef::parse(g).unwrap().build().unwrap())
}

fn bases() -> Vec<(&'static str, FiniteDimCStar)> {
    vec![("C", FiniteDimCStar::complex()), ("C2", FiniteDimCStar::new(vec![1, 1]).unwrap()), ("M2", FiniteDimCStar::new(vec![2]).unwrap())]
}

fn trivial_systems() -> Vec<(String, FactorSystem)> {
    let mut out = Vec::new();
    for (bn, b) in bases() {
        for g in GROUPS {
            out.push((format!("trivial({bn}, {g})"), trivial_system(&b, catalog(g))));
        }
    }
    out
}

fn valid_factor_fixtures() -> Vec<(String, FactorSystem)> {
    FIXTURES
        .iter()
        .filter(|f| f.kind == FixtureKind::FactorSystem && f.tag == "valid")
        .map(|f| (f.name.to_string(), fixtures::factor_system(f.name).unwrap().0))
        .collect()
}

fn unit(n: usize, j: usize, k: usize) -> ComplexMatrix {
    let mut m = zeros(n, n);
    m[(j, k)] = cr(1.0);
    m
}

/// `M₃` graded by `Ad diag(1, −1, −1)`: free, with odd part `M_{1×2} ⊕ M_{2×1}` and no odd unitary.
fn rank_probe() -> FactorSystem {
    let mut basis = Vec::new();
    let mut images = Vec::new();
    for j in 0..3 {
        for k in 0..3 {
            let x = unit(3, j, k);
            let odd = (j == 0) != (k == 0);
            images.push(if odd { vec![zeros(3, 3), x.clone()] } else { vec![x.clone(), zeros(3, 3)] });
            basis.push(x);
        }
    }
    let ds = DynamicalSystem::new(catalog("dual:Z2"), basis, &images, &tol()).unwrap();
    ds.factor_system_of(&tol()).unwrap().system
}

type Criterion = (&'static str, fn() -> Line);

struct Line {
    ok: bool,
    detail: String,
}

fn criterion_1() -> Line {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for (name, fs) in trivial_systems() {
        let rep = fs.validate(&tol());
        worst = worst.max(rep.max_residual());
        if !rep.pass || rep.max_residual() > 1e-9 {
            failed.push(name);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Line { ok: failed.is_empty() && secs < 10.0, detail: format!("15 systems, max residual {worst:.2e}, {secs:.2}s, failed {failed:?}") }
}

fn recovered(a: &FactorSystem, b: &FactorSystem, seed: u64) -> Option<f64> {
    match find_conjugacy(a, b, &tol(), seed, DEFAULT_BUDGET).ok()? {
        ConjugacyOutcome::Found { residuals, .. } if residuals.max() <= 1e-8 => Some(residuals.max()),
        _ => None,
    }
}

fn criterion_2() -> Line {
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    let mut trials = 0;
    for (name, fs) in valid_factor_fixtures() {
        let alg = build_algebra(&fs, &tol()).unwrap();
        let ds = DynamicalSystem::from_algebra(&alg, fs.catalog.clone(), &tol()).unwrap();
        let back = ds.factor_system_of(&tol()).unwrap().system;
        match recovered(&fs, &back, 0) {
            Some(r) => worst = worst.max(r),
            None => failed.push(format!("{name} round trip")),
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
        for t in 0..50 {
            let w = random_witness(&fs, &mut rng);
            let other = fs.conjugate_by(&w, &tol()).unwrap();
            trials += 1;
            match recovered(&fs, &other, t) {
                Some(r) => worst = worst.max(r),
                None => failed.push(format!("{name} trial {t}")),
            }
        }
    }
    Line { ok: failed.is_empty(), detail: format!("{trials} witness trials, max residual {worst:.2e}, failed {failed:?}") }
}

fn criterion_3() -> Line {
    let mut systems: Vec<(String, DynamicalSystem, bool)> = Vec::new();
    let mut mismatched = Vec::new();
    let mut all: Vec<(String, FactorSystem)> = trivial_systems();
    all.push(("pauli".into(), pauli_system().unwrap()));
    for (name, fs) in &all {
        let alg = build_algebra(fs, &tol()).unwrap();
        let ds = DynamicalSystem::from_algebra(&alg, fs.catalog.clone(), &tol()).unwrap();
        if !check_free_m_surjective(fs, &tol()).free {
            mismatched.push(format!("{name}: factor-level surjectivity"));
        }
        systems.push((name.clone(), ds, true));
    }
    systems.push(("gauge_m2".into(), fixtures::gauge_system(&tol()).unwrap(), true));
    systems.push(("trivial coaction on C2".into(), fixtures::fixed_action(&tol()).unwrap(), false));
    let mut agree = 0;
    for (name, ds, expect) in &systems {
        let e = ds.ellwood(&tol()).free;
        let m = ds.m_surjective(&tol()).free;
        if e == m && e == *expect {
            agree += 1;
        } else {
            mismatched.push(format!("{name}: ellwood {e}, m-surjective {m}, expected {expect}"));
        }
    }
    Line { ok: mismatched.is_empty(), detail: format!("{agree}/{} systems agree, probe rejected by both; issues {mismatched:?}", systems.len()) }
}

fn fixture_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(file)
}

fn criterion_4() -> Line {
    let pauli = build_algebra(&pauli_system().unwrap(), &tol()).unwrap();
    let (triv, _) = fixtures::factor_system("trivial_zz2xzz2").unwrap();
    let triv = build_algebra(&triv, &tol()).unwrap();
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qfactor"))
        .args(["conjugate", "--format", "json"])
        .arg(fixture_path("pauli.json"))
        .arg(fixture_path("trivial_zz2xzz2.json"))
        .output()
        .expect("run qfactor");
    let secs = start.elapsed().as_secs_f64();
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    let ev = &report["checks"]["evidence"];
    let evidence = ev["first"]["center_dim"] == 1 && ev["second"]["center_dim"] == 4 && ev["first"]["dim"] == 4;
    let code = out.status.code();
    let ok = pauli.dim == 4 && pauli.report.center_dim == 1 && triv.report.center_dim == 4 && code == Some(3) && evidence && secs < 1.0;
    Line {
        ok,
        detail: format!(
            "pauli dim {} center {}, trivial center {}, exit {code:?}, evidence {evidence}, {secs:.3}s",
            pauli.dim, pauli.report.center_dim, triv.report.center_dim
        ),
    }
}

fn criterion_5() -> Line {
    let mut cases: Vec<(String, FactorSystem, bool)> = trivial_systems().into_iter().map(|(n, f)| (n, f, true)).collect();
    cases.push(("pauli".into(), pauli_system().unwrap(), true));
    cases.push(("rank probe".into(), rank_probe(), false));
    let mut failed = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, fs, expect) in &cases {
        if fs.is_cleft(&tol()).cleft != *expect {
            failed.push(name.clone());
            continue;
        }
        for t in 0..20 {
            let w = random_witness(fs, &mut rng);
            let other = fs.conjugate_by(&w, &tol()).unwrap();
            if other.is_cleft(&tol()).cleft != *expect {
                failed.push(format!("{name} conjugation {t}"));
            }
        }
    }
    let probe = &cases.last().unwrap().1;
    let equivalent: Vec<bool> = probe.is_cleft(&tol()).irreps.iter().map(|e| e.equivalent).collect();
    Line { ok: failed.is_empty(), detail: format!("{} systems × 20 conjugations, probe equivalence {equivalent:?}, failed {failed:?}", cases.len()) }
}

fn criterion_6() -> Line {
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let all = bases();
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = &all[(seed % 3) as usize].1;
        let m = random_module(b, &mut rng);
        let Ok(f) = frame_for_module(&m, &tol()) else {
            failures += 1;
            continue;
        };
        worst = worst.max(m.frame_residual(&f));
        for _ in 0..20 {
            let x = m.basis.iter().fold(zeros(m.left_unit.nrows(), m.basis[0].ncols()), |acc, e| {
                acc + e * c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            worst = worst.max(op_norm(&(m.fourier(&f, &x) - &x)));
        }
    }
    Line { ok: failures == 0 && worst <= 1e-8, detail: format!("100 modules, max residual {worst:.2e}, frame failures {failures}") }
}

fn criterion_7() -> Line {
    let mut names: Vec<String> = GroupTable::small_group_names().iter().flat_map(|g| [format!("dual:{g}"), format!("fun:{g}")]).collect();
    names.push("fun:S3".into());
    let mut failed = Vec::new();
    let (mut row, mut rad): (f64, f64) = (0.0, 0.0);
    for g in &names {
        let fr = FusionRing::from_catalog(&catalog(g));
        let search = positive_ring_homs(&fr, 1e-9, 0, DEFAULT_STARTS).unwrap();
        let dims = fr.dims_f64();
        let unique = search.homs.len() == 1 && search.homs[0].values.iter().zip(&dims).all(|(v, d)| (v - d).abs() <= 1e-6);
        for pi in 0..fr.len() {
            let t = stochastic_matrix(&fr, pi, &dims).unwrap();
            for r in t.row_iter() {
                row = row.max((r.sum() - 1.0).abs());
            }
            rad = rad.max(spectral_radius(&t));
        }
        if !unique {
            failed.push(g.clone());
        }
    }
    let ok = failed.is_empty() && row <= 1e-10 && rad <= 1.0 + 1e-8;
    Line { ok, detail: format!("{} catalogs, max |row sum − 1| {row:.1e}, max spectral radius {rad:.12}, failed {failed:?}", names.len()) }
}

fn criterion_8() -> Line {
    let mut failed = Vec::new();
    for (name, fs) in valid_factor_fixtures() {
        if !verify_unitary_tensor_functor(&fs, &tol()).pass {
            failed.push(name);
        }
    }
    let (broken, _) = fixtures::factor_system("broken").unwrap();
    let rep = verify_unitary_tensor_functor(&broken, &tol());
    let ok = failed.is_empty() && !rep.pass && rep.isometry > 0.1;
    Line { ok, detail: format!("valid fixtures failing {failed:?}, broken isometry residual {:.3}", rep.isometry) }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("axiom suite", criterion_1),
        ("classification round trip", criterion_2),
        ("freeness equivalence", criterion_3),
        ("Pauli separation", criterion_4),
        ("cleftness", criterion_5),
        ("module frames", criterion_6),
        ("fusion-ring uniqueness", criterion_7),
        ("unitary tensor functor", criterion_8),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let line = f();
        all &= line.ok;
        println!("criterion {} [{name}]: {} ({})", i + 1, if line.ok { "PASS" } else { "FAIL" }, line.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
