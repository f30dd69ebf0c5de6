//! Bundled example inputs.

use std::sync::Arc;

use serde::Serialize;

use crate::cstar::FiniteDimCStar;
use crate::error::Result;
use crate::extract::DynamicalSystem;
use crate::factor::{pauli_system, trivial_system, FactorSystem};
use crate::fdqg::GroupRef;
use crate::io::{DynamicalSystemJson, FactorSystemJson, GroupSpec};
use crate::numerics::{cr, zeros, ComplexMatrix, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureKind {
    FactorSystem,
    DynamicalSystem,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub file: &'static str,
    pub kind: FixtureKind,
    /// `"valid"` or `"broken"`.
    pub tag: &'static str,
    pub description: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture { name: "trivial_zz2", file: "trivial_zz2.json", kind: FixtureKind::FactorSystem, tag: "valid", description: "trivial system over ℂ for the dual of Z/2" },
    Fixture { name: "trivial_zz2xzz2", file: "trivial_zz2xzz2.json", kind: FixtureKind::FactorSystem, tag: "valid", description: "trivial system over ℂ for the dual of Z/2×Z/2" },
    Fixture { name: "trivial_c2_s3", file: "trivial_c2_s3.json", kind: FixtureKind::FactorSystem, tag: "valid", description: "trivial system over ℂ² for C(S3)" },
    Fixture { name: "pauli", file: "pauli.json", kind: FixtureKind::FactorSystem, tag: "valid", description: "Pauli 2-cocycle on Z/2×Z/2 over ℂ; reconstructs M₂" },
    Fixture { name: "gauge_m2", file: "gauge_m2.json", kind: FixtureKind::DynamicalSystem, tag: "valid", description: "M₂ graded by Ad diag(1, −1) under the dual of Z/2" },
    Fixture { name: "nonfree_c2", file: "nonfree_c2.json", kind: FixtureKind::DynamicalSystem, tag: "valid", description: "ℂ² with the trivial coaction of the dual of Z/2; not free" },
    Fixture { name: "broken", file: "broken.json", kind: FixtureKind::FactorSystem, tag: "broken", description: "trivial system over ℂ for the dual of Z/2 with ω scaled by 0.9" },
];

fn catalog(spec: &str) -> Result<Arc<crate::fdqg::Catalog>> {
    Ok(Arc::new(GroupRef::parse(spec)?.build()?))
}

/// The factor system behind a factor-system fixture.
pub fn factor_system(name: &str) -> Result<(FactorSystem, GroupSpec)> {
    let (fs, g) = match name {
        "trivial_zz2" => (trivial_system(&FiniteDimCStar::complex(), catalog("dual:Z2")?), "dual:Z2"),
        "trivial_zz2xzz2" => (trivial_system(&FiniteDimCStar::complex(), catalog("dual:Z2xZ2")?), "dual:Z2xZ2"),
        "trivial_c2_s3" => (trivial_system(&FiniteDimCStar::new(vec![1, 1])?, catalog("fun:S3")?), "fun:S3"),
        "pauli" => (pauli_system()?, "dual:Z2xZ2"),
        "broken" => (trivial_system(&FiniteDimCStar::complex(), catalog("dual:Z2")?).scaled_omega(0.9), "dual:Z2"),
        other => return Err(crate::Error::Invalid(format!("no factor-system fixture named `{other}`"))),
    };
    Ok((fs, GroupSpec::Ref(g.into())))
}

fn unit(n: usize, j: usize, k: usize) -> ComplexMatrix {
    let mut m = zeros(n, n);
    m[(j, k)] = cr(1.0);
    m
}

/// `M₂` with matrix units `e₁₁, e₁₂, e₂₁, e₂₂`; the off-diagonal ones are odd.
pub fn gauge_system(tol: &Tolerance) -> Result<DynamicalSystem> {
    let basis = vec![unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 0), unit(2, 1, 1)];
    let images: Vec<Vec<ComplexMatrix>> = basis
        .iter()
        .enumerate()
        .map(|(a, x)| if a == 1 || a == 2 { vec![zeros(2, 2), x.clone()] } else { vec![x.clone(), zeros(2, 2)] })
        .collect();
    DynamicalSystem::new(catalog("dual:Z2")?, basis, &images, tol)
}

/// `ℂ²` with `α(a) = a ⊗ 1`.
pub fn fixed_action(tol: &Tolerance) -> Result<DynamicalSystem> {
    let basis = vec![unit(2, 0, 0), unit(2, 1, 1)];
    let images: Vec<Vec<ComplexMatrix>> = basis.iter().map(|x| vec![x.clone(), zeros(2, 2)]).collect();
    DynamicalSystem::new(catalog("dual:Z2")?, basis, &images, tol)
}

/// The dynamical system behind a dynamical-system fixture.
pub fn dynamical_system(name: &str, tol: &Tolerance) -> Result<DynamicalSystem> {
    match name {
        "gauge_m2" => gauge_system(tol),
        "nonfree_c2" => fixed_action(tol),
        other => Err(crate::Error::Invalid(format!("no dynamical-system fixture named `{other}`"))),
    }
}

/// The JSON text of a fixture.
pub fn render(f: &Fixture) -> Result<String> {
    let value = match f.kind {
        FixtureKind::FactorSystem => {
            let (fs, g) = factor_system(f.name)?;
            let mut doc = FactorSystemJson::from_system(&fs, g);
            doc.tag = Some(f.tag.into());
            doc.description = Some(f.description.into());
            serde_json::to_value(doc)?
        }
        FixtureKind::DynamicalSystem => {
            let ds = dynamical_system(f.name, &Tolerance::default())?;
            serde_json::to_value(DynamicalSystemJson::from_system(&ds, GroupSpec::Ref("dual:Z2".into())))?
        }
    };
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

pub fn find(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name || f.file == name)
}
