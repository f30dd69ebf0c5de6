//! JSON file formats. Complex numbers are `[re, im]`, matrices are row-major.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cstar::{FiniteDimCStar, MatrixOverB, StarHom};
use crate::error::{Error, Result};
use crate::extract::DynamicalSystem;
use crate::factor::FactorSystem;
use crate::fdqg::{build_function_algebra, build_group_algebra_dual, Catalog, GroupRef, GroupTable};
use crate::fusionring::FusionRing;
use crate::numerics::{c, ComplexMatrix, Tolerance, C64};
use crate::reconstruct::{AlgebraReport, GradedAlgebra, SummandInfo};

/// Largest accepted input document.
pub const MAX_INPUT_BYTES: usize = 16 << 20;
/// Largest accepted matrix side.
pub const MAX_SIDE: usize = 4096;
/// Largest accepted number of matrix entries.
pub const MAX_ENTRIES: usize = 1 << 20;
/// Largest accepted block size of `B` and multiplicity `dim H_π`.
pub const MAX_BLOCK: usize = 64;

fn check_size(text: &str) -> Result<()> {
    if text.len() > MAX_INPUT_BYTES {
        return Err(Error::Invalid(format!("input of {} bytes exceeds the {MAX_INPUT_BYTES}-byte limit", text.len())));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let data = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| [m[(i, j)].re, m[(i, j)].im]).collect();
        MatrixJson { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.rows > MAX_SIDE || self.cols > MAX_SIDE || self.rows * self.cols > MAX_ENTRIES {
            return Err(Error::Invalid(format!("{}×{} matrix exceeds size limits", self.rows, self.cols)));
        }
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Shape(format!("{}×{} matrix has {} entries", self.rows, self.cols, self.data.len())));
        }
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            c(re, im)
        }))
    }
}

/// `L(ℂ^cols, ℂ^rows) ⊗ B` as one `(rows·nᵢ) × (cols·nᵢ)` matrix per block of `B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixOverBJson {
    pub rows: usize,
    pub cols: usize,
    pub blocks: Vec<MatrixJson>,
}

impl MatrixOverBJson {
    pub fn from_matrix(m: &MatrixOverB) -> Self {
        MatrixOverBJson { rows: m.rows, cols: m.cols, blocks: m.blocks.iter().map(MatrixJson::from_matrix).collect() }
    }

    pub fn to_matrix(&self, base: &FiniteDimCStar) -> Result<MatrixOverB> {
        let blocks = self.blocks.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>()?;
        MatrixOverB::from_blocks(base, self.rows, self.cols, blocks)
    }
}

/// A built-in reference such as `"fun:S3"` or an inline group table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Ref(String),
    Inline {
        /// `"dual"` for `ℂ[Γ]`, `"fun"` for `C(Γ)`.
        algebra: String,
        order: usize,
        table: Vec<Vec<usize>>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<Arc<Catalog>> {
        let cat = match self {
            GroupSpec::Ref(s) => GroupRef::parse(s)?.build()?,
            GroupSpec::Inline { algebra, order, table } => {
                let g = GroupTable { order: *order, table: table.clone() };
                g.validate()?;
                match algebra.as_str() {
                    "dual" => build_group_algebra_dual(&g, &format!("dual:table{order}"))?,
                    "fun" => build_function_algebra(&g, &format!("fun:table{order}"))?,
                    other => return Err(Error::Invalid(format!("algebra must be `dual` or `fun`, got `{other}`"))),
                }
            }
        };
        Ok(Arc::new(cat))
    }
}

fn check_base(base: &FiniteDimCStar) -> Result<FiniteDimCStar> {
    if base.blocks.len() > MAX_BLOCK || base.blocks.iter().any(|&n| n > MAX_BLOCK) {
        return Err(Error::Invalid(format!("block algebra {:?} exceeds size limits", base.blocks)));
    }
    FiniteDimCStar::new(base.blocks.clone())
}

/// Factor system file. `gamma[π]` lists `γ_π` on the matrix units of `B` in canonical order;
/// `omega` is keyed by `"π,ρ"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSystemJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub base: FiniteDimCStar,
    pub group: GroupSpec,
    #[serde(rename = "H")]
    pub h: BTreeMap<String, usize>,
    pub gamma: BTreeMap<String, Vec<MatrixOverBJson>>,
    pub omega: BTreeMap<String, MatrixOverBJson>,
}

impl FactorSystemJson {
    pub fn from_system(fs: &FactorSystem, group: GroupSpec) -> Self {
        let cat = &fs.catalog;
        let k = cat.len();
        let label = |i: usize| cat.label(i).to_string();
        FactorSystemJson {
            tag: None,
            description: None,
            base: fs.base.clone(),
            group,
            h: (0..k).map(|i| (label(i), fs.h[i])).collect(),
            gamma: (0..k).map(|i| (label(i), fs.gamma[i].images.iter().map(MatrixOverBJson::from_matrix).collect())).collect(),
            omega: (0..k)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .map(|(i, j)| (format!("{},{}", label(i), label(j)), MatrixOverBJson::from_matrix(&fs.omega[i][j])))
                .collect(),
        }
    }

    pub fn to_system(&self) -> Result<FactorSystem> {
        let base = check_base(&self.base)?;
        let cat = self.group.build()?;
        let k = cat.len();
        let known = |key: &str| cat.index_of(key).map(|_| ());
        for key in self.h.keys().chain(self.gamma.keys()) {
            known(key)?;
        }
        let mut h = Vec::with_capacity(k);
        let mut gamma = Vec::with_capacity(k);
        for i in 0..k {
            let l = cat.label(i);
            let hi = *self.h.get(l).ok_or_else(|| Error::Invalid(format!("H has no entry for `{l}`")))?;
            if hi > MAX_BLOCK {
                return Err(Error::Invalid(format!("dim H_{l} = {hi} exceeds the limit {MAX_BLOCK}")));
            }
            let imgs = self.gamma.get(l).ok_or_else(|| Error::Invalid(format!("gamma has no entry for `{l}`")))?;
            let images = imgs.iter().map(|m| m.to_matrix(&base)).collect::<Result<Vec<_>>>()?;
            gamma.push(StarHom::new(base.clone(), base.clone(), hi, images)?);
            h.push(hi);
        }
        let mut omega = vec![Vec::with_capacity(k); k];
        for key in self.omega.keys() {
            let (a, b) = key.split_once(',').ok_or_else(|| Error::Invalid(format!("omega key `{key}` must be `pi,rho`")))?;
            known(a.trim())?;
            known(b.trim())?;
        }
        let lookup: BTreeMap<(usize, usize), &MatrixOverBJson> = self
            .omega
            .iter()
            .map(|(key, m)| {
                let (a, b) = key.split_once(',').expect("checked above");
                Ok(((cat.index_of(a.trim())?, cat.index_of(b.trim())?), m))
            })
            .collect::<Result<_>>()?;
        for (i, row) in omega.iter_mut().enumerate() {
            for j in 0..k {
                let m = lookup
                    .get(&(i, j))
                    .ok_or_else(|| Error::Invalid(format!("omega has no entry for `{},{}`", cat.label(i), cat.label(j))))?;
                row.push(m.to_matrix(&base)?);
            }
        }
        FactorSystem::new(base, cat, h, gamma, omega)
    }
}

pub fn decode_factor_system(text: &str) -> Result<(FactorSystem, FactorSystemJson)> {
    check_size(text)?;
    let doc: FactorSystemJson = serde_json::from_str(text)?;
    Ok((doc.to_system()?, doc))
}

/// Dynamical system file: a concrete basis of `A ⊆ M_D` and the coaction in basis coordinates,
/// `α(e_a) = Σ coaction[c·dim G + g][a] e_c ⊗ f_g`. Other fields are ignored, so algebra files
/// written by `reconstruct` load as well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicalSystemJson {
    pub group: GroupSpec,
    pub basis: Vec<MatrixJson>,
    pub coaction: MatrixJson,
}

impl DynamicalSystemJson {
    pub fn from_system(ds: &DynamicalSystem, group: GroupSpec) -> Self {
        DynamicalSystemJson { group, basis: ds.basis.iter().map(MatrixJson::from_matrix).collect(), coaction: MatrixJson::from_matrix(&ds.coaction) }
    }

    pub fn to_system(&self, tol: &Tolerance) -> Result<DynamicalSystem> {
        let cat = self.group.build()?;
        if self.basis.len() > MAX_SIDE {
            return Err(Error::Invalid(format!("{} basis elements exceed the limit {MAX_SIDE}", self.basis.len())));
        }
        let basis = self.basis.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>()?;
        let side = basis.first().map_or(0, |m| m.nrows());
        if side * side > MAX_ENTRIES / 4 || basis.len() > side * side {
            return Err(Error::Invalid("algebra basis exceeds size limits".into()));
        }
        DynamicalSystem::with_coords(cat, basis, self.coaction.to_matrix()?, tol)
    }
}

pub fn decode_dynamical_system(text: &str, tol: &Tolerance) -> Result<(DynamicalSystem, DynamicalSystemJson)> {
    check_size(text)?;
    let doc: DynamicalSystemJson = serde_json::from_str(text)?;
    Ok((doc.to_system(tol)?, doc))
}

/// Reconstructed algebra: tables in coordinates of the basis `V̄_π ⊗ Γ(V_π)` and the
/// regular *-representation under `basis`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraJson {
    pub group: GroupSpec,
    pub base: FiniteDimCStar,
    pub dim: usize,
    pub summands: Vec<SummandInfo>,
    /// `e_a e_b = Σ_c structure[(a·dim + b)·dim + c] e_c`.
    pub structure: Vec<[f64; 2]>,
    /// `x⁺ = involution · conj(x)`.
    pub involution: MatrixJson,
    pub unit: Vec<[f64; 2]>,
    pub coaction: MatrixJson,
    pub basis: Vec<MatrixJson>,
    pub report: AlgebraReport,
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

impl AlgebraJson {
    pub fn from_algebra(alg: &GradedAlgebra, group: GroupSpec, tol: &Tolerance) -> Result<Self> {
        Ok(AlgebraJson {
            group,
            base: FiniteDimCStar { blocks: alg.base_blocks.clone() },
            dim: alg.dim,
            summands: alg.summands.clone(),
            structure: pairs(&alg.structure),
            involution: MatrixJson::from_matrix(&alg.involution),
            unit: pairs(&alg.unit),
            coaction: MatrixJson::from_matrix(&alg.coaction),
            basis: alg.regular_representation(tol)?.iter().map(MatrixJson::from_matrix).collect(),
            report: alg.report.clone(),
        })
    }
}

/// Input of `fusion-homs`: a group reference or an explicit fusion ring. Catalog files
/// written by `catalog` carry both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogInput {
    #[serde(default)]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub fusion_ring: Option<FusionRing>,
}

impl CatalogInput {
    pub fn fusion_ring(&self) -> Result<FusionRing> {
        match (&self.fusion_ring, &self.group) {
            (Some(fr), _) => {
                if fr.len() > MAX_SIDE {
                    return Err(Error::Invalid("fusion ring exceeds size limits".into()));
                }
                fr.validate()?;
                Ok(fr.clone())
            }
            (None, Some(g)) => Ok(FusionRing::from_catalog(g.build()?.as_ref())),
            (None, None) => Err(Error::Invalid("catalog input needs `group` or `fusion_ring`".into())),
        }
    }
}

pub fn decode_fusion_ring(text: &str) -> Result<FusionRing> {
    check_size(text)?;
    let doc: CatalogInput = serde_json::from_str(text)?;
    doc.fusion_ring()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrrepJson {
    pub label: String,
    pub dim: usize,
    pub conjugate: String,
    /// `u = Σ_k u[k] ⊗ e_k` over the basis of `G`.
    pub u: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogJson {
    pub group: GroupSpec,
    pub name: String,
    pub dim: usize,
    pub irreps: Vec<IrrepJson>,
    pub fusion_ring: FusionRing,
}

impl CatalogJson {
    pub fn from_catalog(cat: &Catalog, group: GroupSpec) -> Self {
        CatalogJson {
            group,
            name: cat.name.clone(),
            dim: cat.group.dim,
            irreps: cat
                .irreps
                .iter()
                .map(|p| IrrepJson {
                    label: p.label.clone(),
                    dim: p.dim,
                    conjugate: cat.label(p.conjugate).to_string(),
                    u: p.u.iter().map(MatrixJson::from_matrix).collect(),
                })
                .collect(),
            fusion_ring: FusionRing::from_catalog(cat),
        }
    }
}

pub fn decode_group_table(text: &str) -> Result<GroupTable> {
    check_size(text)?;
    GroupTable::from_json(text)
}

#[cfg(test)]
mod tests;
