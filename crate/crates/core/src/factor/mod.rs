//! Factor systems `(H, γ, ω)` over a block algebra `B` and a finite quantum group.
//!
//! `ω(π, ρ)` maps `H_π ⊗ H_ρ` onto `H_{π⊗ρ} = ⊕_k H_{σ_k}`, the sum taken over the
//! catalog decomposition `fusion_m[π][ρ]`.

pub(crate) mod conjugacy;

pub use conjugacy::{find_conjugacy, random_witness, ConjugacyOutcome, ConjugacyResiduals, ConjugacyWitness, DEFAULT_BUDGET};

use std::sync::Arc;

use serde::Serialize;

use crate::cstar::{apply_entrywise, mvn_equivalent, rank_vector, FiniteDimCStar, MatrixOverB, RankVector, StarHom};
use crate::error::{Error, Result};
use crate::fdqg::{Catalog, Summand};
use crate::numerics::{cr, identity, permutation_matrix, zeros, ComplexMatrix, Tolerance};

#[derive(Debug, Clone)]
pub struct FactorSystem {
    pub base: FiniteDimCStar,
    pub catalog: Arc<Catalog>,
    pub h: Vec<usize>,
    pub gamma: Vec<StarHom>,
    pub omega: Vec<Vec<MatrixOverB>>,
}

/// A representation given as an explicit direct sum of catalog irreps.
#[derive(Debug, Clone)]
pub struct Rep {
    pub dim: usize,
    pub parts: Vec<Summand>,
}

impl Rep {
    pub fn irrep(catalog: &Catalog, pi: usize) -> Self {
        let d = catalog.dim(pi);
        Rep { dim: d, parts: vec![Summand { irrep: pi, isometry: identity(d) }] }
    }

    /// Orthogonal direct sum of irreps in the given order.
    pub fn direct_sum(catalog: &Catalog, labels: &[usize]) -> Self {
        let dim: usize = labels.iter().map(|&l| catalog.dim(l)).sum();
        let mut off = 0;
        let parts = labels
            .iter()
            .map(|&l| {
                let d = catalog.dim(l);
                let mut s = zeros(dim, d);
                s.view_mut((off, 0), (d, d)).copy_from(&identity(d));
                off += d;
                Summand { irrep: l, isometry: s }
            })
            .collect();
        Rep { dim, parts }
    }

    /// `X ⊗ Y` decomposed as `(S^X_i ⊗ S^Y_j)·S_l(λ_i, μ_j)` in `(i, j, l)` order.
    pub fn tensor(&self, other: &Rep, catalog: &Catalog) -> Rep {
        let mut parts = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                let outer = crate::numerics::tensor_product(&a.isometry, &b.isometry);
                for s in &catalog.fusion_m[a.irrep][b.irrep] {
                    parts.push(Summand { irrep: s.irrep, isometry: &outer * &s.isometry });
                }
            }
        }
        Rep { dim: self.dim * other.dim, parts }
    }
}

/// Per-axiom maximum residuals of [`FactorSystem::validate`].
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ValidationReport {
    pub normalization: f64,
    pub gamma_star_hom: f64,
    pub partial_isometry: f64,
    pub range: f64,
    pub cokernel: f64,
    pub coaction: f64,
    pub cocycle: f64,
    pub pass: bool,
}

impl ValidationReport {
    pub fn max_residual(&self) -> f64 {
        [self.normalization, self.gamma_star_hom, self.partial_isometry, self.range, self.cokernel, self.coaction, self.cocycle]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CleftEntry {
    pub label: String,
    pub gamma_rank: RankVector,
    pub trivial_rank: RankVector,
    pub equivalent: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CleftReport {
    pub cleft: bool,
    pub irreps: Vec<CleftEntry>,
}

impl FactorSystem {
    pub fn new(
        base: FiniteDimCStar,
        catalog: Arc<Catalog>,
        h: Vec<usize>,
        gamma: Vec<StarHom>,
        omega: Vec<Vec<MatrixOverB>>,
    ) -> Result<Self> {
        let k = catalog.len();
        if h.len() != k || gamma.len() != k || omega.len() != k || omega.iter().any(|r| r.len() != k) {
            return Err(Error::Shape(format!("factor system must list data for all {k} irreps")));
        }
        for (pi, g) in gamma.iter().enumerate() {
            if h[pi] == 0 {
                return Err(Error::Shape(format!("H_{} must be non-zero", catalog.label(pi))));
            }
            if g.source != base || g.target != base || g.h_dim != h[pi] {
                return Err(Error::Shape(format!("gamma_{} does not map B into L(H) ⊗ B", catalog.label(pi))));
            }
        }
        let fs = FactorSystem { base, catalog, h, gamma, omega };
        for pi in 0..k {
            for rho in 0..k {
                let w = &fs.omega[pi][rho];
                let rows = fs.h_of(&fs.tensor(pi, rho));
                if w.rows != rows || w.cols != fs.h[pi] * fs.h[rho] || !w.base(&fs.base) {
                    return Err(Error::Shape(format!(
                        "omega({}, {}) must be {}×{} over B",
                        fs.catalog.label(pi),
                        fs.catalog.label(rho),
                        rows,
                        fs.h[pi] * fs.h[rho]
                    )));
                }
            }
        }
        Ok(fs)
    }

    pub fn irrep(&self, pi: usize) -> Rep {
        Rep::irrep(&self.catalog, pi)
    }

    pub fn tensor(&self, pi: usize, rho: usize) -> Rep {
        self.irrep(pi).tensor(&self.irrep(rho), &self.catalog)
    }

    /// `dim H_X`.
    pub fn h_of(&self, x: &Rep) -> usize {
        x.parts.iter().map(|s| self.h[s.irrep]).sum()
    }

    /// `γ_X`, block-diagonal over the summands of `X`.
    pub fn gamma_of(&self, x: &Rep) -> StarHom {
        let hx = self.h_of(x);
        let images = (0..self.base.dim())
            .map(|u| {
                let parts: Vec<MatrixOverB> = x.parts.iter().map(|s| self.gamma[s.irrep].images[u].clone()).collect();
                MatrixOverB::block_diag(&self.base, &parts)
            })
            .collect();
        StarHom { source: self.base.clone(), target: self.base.clone(), h_dim: hx, images }
    }

    /// `ω(X, Y): H_X ⊗ H_Y → H_{X⊗Y}` with `X ⊗ Y` decomposed by [`Rep::tensor`].
    pub fn omega_of(&self, x: &Rep, y: &Rep) -> MatrixOverB {
        let hx = self.h_of(x);
        let hy = self.h_of(y);
        let offs = |r: &Rep| -> Vec<usize> {
            r.parts.iter().scan(0, |acc, s| {
                let o = *acc;
                *acc += self.h[s.irrep];
                Some(o)
            }).collect()
        };
        let ox = offs(x);
        let oy = offs(y);
        // permutation H_X ⊗ H_Y → ⊕_{ij} H_{λ_i} ⊗ H_{μ_j}
        let mut perm = vec![0usize; hx * hy];
        let mut pos = 0;
        let mut blocks = Vec::new();
        for (i, a) in x.parts.iter().enumerate() {
            for (j, b) in y.parts.iter().enumerate() {
                let (ha, hb) = (self.h[a.irrep], self.h[b.irrep]);
                for p in 0..ha {
                    for q in 0..hb {
                        perm[(ox[i] + p) * hy + oy[j] + q] = pos;
                        pos += 1;
                    }
                }
                blocks.push(self.omega[a.irrep][b.irrep].clone());
            }
        }
        MatrixOverB::block_diag(&self.base, &blocks).rmul_scalar(&permutation_matrix(&perm))
    }

    /// `H(T): H_Y → H_X` for an intertwiner `T: V_Y → V_X`, as a scalar matrix.
    pub fn h_map(&self, x: &Rep, y: &Rep, t: &ComplexMatrix) -> ComplexMatrix {
        let hx = self.h_of(x);
        let hy = self.h_of(y);
        let mut out = zeros(hx, hy);
        let mut r0 = 0;
        for a in &x.parts {
            let ha = self.h[a.irrep];
            let mut c0 = 0;
            for b in &y.parts {
                let hb = self.h[b.irrep];
                if a.irrep == b.irrep {
                    let m = a.isometry.adjoint() * t * &b.isometry;
                    let c = m.trace() / cr(m.nrows() as f64);
                    out.view_mut((r0, c0), (ha, hb)).copy_from(&(identity(ha) * c));
                }
                c0 += hb;
            }
            r0 += ha;
        }
        out
    }

    /// Checks normalization, γ being *-homs, the partial-isometry and range laws,
    /// the coaction condition on matrix units and the cocycle condition on all irrep triples.
    pub fn validate(&self, tol: &Tolerance) -> ValidationReport {
        let k = self.catalog.len();
        let b = &self.base;
        let one = b.unit();
        let t = self.catalog.trivial();
        let mut rep = ValidationReport {
            normalization: 0.0,
            gamma_star_hom: 0.0,
            partial_isometry: 0.0,
            range: 0.0,
            cokernel: 0.0,
            coaction: 0.0,
            cocycle: 0.0,
            pass: false,
        };
        rep.normalization = if self.h[t] != 1 {
            f64::INFINITY
        } else {
            let id = StarHom::amplification(b, 1);
            let g = self.gamma[t]
                .images
                .iter()
                .zip(&id.images)
                .map(|(x, y)| x.dist(y))
                .fold(0.0, f64::max);
            g.max(self.omega[t][t].dist(&one))
        };
        for g in &self.gamma {
            let c = g.verify(tol);
            rep.gamma_star_hom = rep.gamma_star_hom.max(c.multiplicativity).max(c.star);
        }
        for pi in 0..k {
            for rho in 0..k {
                let w = &self.omega[pi][rho];
                let wa = w.adjoint();
                rep.partial_isometry = rep.partial_isometry.max(w.mul(&wa).mul(w).dist(w));
                let pr = self.tensor(pi, rho);
                let gpr = self.gamma_of(&pr);
                rep.range = rep.range.max(w.mul(&wa).dist(&gpr.one()));
                let g_rho = &self.gamma[rho];
                let inner = |x: &MatrixOverB| apply_entrywise(b, g_rho, &self.gamma[pi].apply(x));
                rep.cokernel = rep.cokernel.max(wa.mul(w).dist(&inner(&one)));
                for (u, unit) in b.matrix_units().into_iter().enumerate() {
                    let e = b.matrix_unit(unit);
                    let lhs = gpr.images[u].mul(w);
                    let rhs = w.mul(&inner(&e));
                    rep.coaction = rep.coaction.max(lhs.dist(&rhs));
                }
            }
        }
        for pi in 0..k {
            for rho in 0..k {
                for sigma in 0..k {
                    rep.cocycle = rep.cocycle.max(self.cocycle_residual(pi, rho, sigma));
                }
            }
        }
        rep.pass = rep.max_residual() <= tol.atol;
        rep
    }

    /// `‖ω(π, ρ⊗σ)(1 ⊗ ω(ρ,σ)) − H(T)·ω(π⊗ρ, σ)(id ⊗ γ_σ)(ω(π,ρ))‖`, with `T` relating
    /// the two decompositions of `π ⊗ ρ ⊗ σ`.
    pub fn cocycle_residual(&self, pi: usize, rho: usize, sigma: usize) -> f64 {
        let c = &self.catalog;
        let (xp, xr, xs) = (self.irrep(pi), self.irrep(rho), self.irrep(sigma));
        let rs = xr.tensor(&xs, c);
        let pr = xp.tensor(&xr, c);
        let left_rep = xp.tensor(&rs, c);
        let right_rep = pr.tensor(&xs, c);
        let lhs = self.omega_of(&xp, &rs).mul(&self.omega[rho][sigma].amplify(self.h[pi]));
        let inner = apply_entrywise(&self.base, &self.gamma[sigma], &self.omega[pi][rho]);
        let rhs = self.omega_of(&pr, &xs).mul(&inner);
        let ht = self.h_map(&left_rep, &right_rep, &identity(left_rep.dim));
        lhs.dist(&rhs.lmul_scalar(&ht))
    }

    /// Cleft iff every `γ_π(1)` has the rank vector of `1_{V_π} ⊗ 1_B`.
    pub fn is_cleft(&self, tol: &Tolerance) -> CleftReport {
        let mut entries = Vec::new();
        for pi in 0..self.catalog.len() {
            let p = self.gamma[pi].one();
            let q = MatrixOverB::identity(&self.base, self.catalog.dim(pi));
            let gamma_rank = rank_vector(&p, tol);
            let trivial_rank = rank_vector(&q, tol);
            let equivalent = match mvn_equivalent(&p, &q, tol) {
                Ok(w) => w.is_some(),
                Err(_) => false,
            };
            entries.push(CleftEntry { label: self.catalog.label(pi).to_string(), gamma_rank, trivial_rank, equivalent });
        }
        CleftReport { cleft: entries.iter().all(|e| e.equivalent), irreps: entries }
    }

    /// `γ' = v*γv`, `ω'(π,ρ) = v(π⊗ρ)* ω(π,ρ) (id ⊗ γ_ρ)(v(π)) (1 ⊗ v(ρ))`.
    pub fn conjugate_by(&self, w: &ConjugacyWitness, tol: &Tolerance) -> Result<FactorSystem> {
        let k = self.catalog.len();
        if w.v.len() != k {
            return Err(Error::Shape(format!("witness must have {k} entries")));
        }
        for (pi, v) in w.v.iter().enumerate() {
            if v.rows != self.h[pi] || !v.base(&self.base) {
                return Err(Error::Shape(format!("v({}) must have {} rows over B", self.catalog.label(pi), self.h[pi])));
            }
            let r = v.mul(&v.adjoint()).dist(&self.gamma[pi].one());
            if r > tol.bound(1.0) {
                return Err(Error::Precondition { what: format!("v({0})v({0})* = γ(1)", self.catalog.label(pi)), residual: r });
            }
        }
        let h: Vec<usize> = w.v.iter().map(|v| v.cols).collect();
        let gamma = (0..k)
            .map(|pi| {
                let v = &w.v[pi];
                let images = self.gamma[pi].images.iter().map(|g| v.adjoint().mul(g).mul(v)).collect();
                StarHom { source: self.base.clone(), target: self.base.clone(), h_dim: h[pi], images }
            })
            .collect();
        let omega = (0..k)
            .map(|pi| {
                (0..k)
                    .map(|rho| {
                        let vpr = w.of_rep(&self.base, &self.tensor(pi, rho));
                        let mid = apply_entrywise(&self.base, &self.gamma[rho], &w.v[pi]);
                        vpr.adjoint().mul(&self.omega[pi][rho]).mul(&mid).mul(&w.v[rho].amplify(h[pi]))
                    })
                    .collect()
            })
            .collect();
        FactorSystem::new(self.base.clone(), self.catalog.clone(), h, gamma, omega)
    }

    /// Same data with every `ω` multiplied by `s`.
    pub fn scaled_omega(&self, s: f64) -> FactorSystem {
        let mut out = self.clone();
        for row in &mut out.omega {
            for w in row.iter_mut() {
                *w = w.scale(cr(s));
            }
        }
        out
    }
}

/// `H_π = V_π`, `γ_π(b) = 1 ⊗ b` and `ω(π, ρ)` the stacked adjoints of the catalog isometries.
pub fn trivial_system(base: &FiniteDimCStar, catalog: Arc<Catalog>) -> FactorSystem {
    let k = catalog.len();
    let h = catalog.dims();
    let gamma = (0..k).map(|pi| StarHom::amplification(base, h[pi])).collect();
    let omega = (0..k)
        .map(|pi| {
            (0..k)
                .map(|rho| {
                    let rows: usize = catalog.fusion_m[pi][rho].iter().map(|s| s.isometry.ncols()).sum();
                    let mut m = zeros(rows, h[pi] * h[rho]);
                    let mut r0 = 0;
                    for s in &catalog.fusion_m[pi][rho] {
                        m.view_mut((r0, 0), (s.isometry.ncols(), s.isometry.nrows())).copy_from(&s.isometry.adjoint());
                        r0 += s.isometry.ncols();
                    }
                    MatrixOverB::from_scalar(base, &m)
                })
                .collect()
        })
        .collect();
    FactorSystem { base: base.clone(), catalog, h, gamma, omega }
}

/// Pauli system over `ℂ` for the dual of `Z/2 × Z/2`: `σ_(a,b) = X^a Z^b`,
/// `ω(g, h) = (−1)^{b·a'}`.
pub fn pauli_system() -> Result<FactorSystem> {
    let catalog = Arc::new(crate::fdqg::GroupRef::Dual("Z2xZ2".into()).build()?);
    let base = FiniteDimCStar::complex();
    let mut fs = trivial_system(&base, catalog.clone());
    for pi in 0..4 {
        for rho in 0..4 {
            let g: usize = catalog.label(pi)[1..].parse().map_err(|_| Error::Integrity("label".into()))?;
            let hh: usize = catalog.label(rho)[1..].parse().map_err(|_| Error::Integrity("label".into()))?;
            let sign = if (g % 2) * (hh / 2) == 1 { -1.0 } else { 1.0 };
            fs.omega[pi][rho] = MatrixOverB::from_scalar(&base, &ComplexMatrix::from_element(1, 1, cr(sign)));
        }
    }
    Ok(fs)
}
