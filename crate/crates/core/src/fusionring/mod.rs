//! The representation ring `R(G)` and its positive ring homomorphisms.
//!
//! A positive homomorphism `r` is a common positive eigenvector of the fusion
//! matrices `N_π[ρ][σ] = m(σ, ρ⊗π)` with eigenvalue `r(π)`, normalized by `r(1) = 1`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdqg::Catalog;

pub const DEFAULT_STARTS: usize = 16;

const POWER_ITERATIONS: usize = 2000;
const NEWTON_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionRing {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    /// `mult[π][ρ][σ] = m(σ, π⊗ρ)`.
    pub mult: Vec<Vec<Vec<usize>>>,
    pub conj: Vec<usize>,
}

impl FusionRing {
    pub fn new(labels: Vec<String>, dims: Vec<usize>, mult: Vec<Vec<Vec<usize>>>, conj: Vec<usize>) -> Result<Self> {
        let fr = FusionRing { labels, dims, mult, conj };
        fr.validate()?;
        Ok(fr)
    }

    pub fn from_catalog(cat: &Catalog) -> Self {
        let k = cat.len();
        let mult = (0..k).map(|pi| (0..k).map(|rho| (0..k).map(|sigma| cat.multiplicity(sigma, pi, rho)).collect()).collect()).collect();
        FusionRing {
            labels: cat.irreps.iter().map(|p| p.label.clone()).collect(),
            dims: cat.dims(),
            mult,
            conj: (0..k).map(|i| cat.conj(i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Shapes, unit, conjugation and `dim π · dim ρ = Σ_σ m(σ, π⊗ρ) dim σ`.
    pub fn validate(&self) -> Result<()> {
        let k = self.len();
        if k == 0 {
            return Err(Error::Invalid("fusion ring has no labels".into()));
        }
        if self.dims.len() != k || self.conj.len() != k || self.mult.len() != k {
            return Err(Error::Shape(format!("fusion ring with {k} labels has {} dims, {} conjugates, {} rows", self.dims.len(), self.conj.len(), self.mult.len())));
        }
        if self.mult.iter().any(|row| row.len() != k || row.iter().any(|m| m.len() != k)) {
            return Err(Error::Shape(format!("multiplicity table must be {k}×{k}×{k}")));
        }
        if self.dims.contains(&0) {
            return Err(Error::Integrity("dimensions must be positive".into()));
        }
        if self.conj.iter().any(|&c| c >= k) {
            return Err(Error::Integrity("conjugation map out of range".into()));
        }
        for pi in 0..k {
            for rho in 0..k {
                let total: usize = (0..k).map(|s| self.mult[pi][rho][s] * self.dims[s]).sum();
                if total != self.dims[pi] * self.dims[rho] {
                    return Err(Error::Integrity(format!(
                        "dim {} · dim {} = {} but the fusion rule gives {total}",
                        self.labels[pi],
                        self.labels[rho],
                        self.dims[pi] * self.dims[rho]
                    )));
                }
            }
            let unit = (0..k).map(|s| usize::from(s == pi)).collect::<Vec<_>>();
            if self.mult[0][pi] != unit || self.mult[pi][0] != unit {
                return Err(Error::Integrity(format!("label {} is not the unit of the ring", self.labels[0])));
            }
            let c = self.conj[pi];
            if self.conj[c] != pi || self.mult[pi][c][0] != 1 {
                return Err(Error::Integrity(format!("{} does not pair with its conjugate {}", self.labels[pi], self.labels[c])));
            }
        }
        Ok(())
    }

    /// `N_π[ρ][σ] = m(σ, ρ⊗π)`.
    pub fn fusion_matrix(&self, pi: usize) -> DMatrix<f64> {
        let k = self.len();
        DMatrix::from_fn(k, k, |rho, sigma| self.mult[rho][pi][sigma] as f64)
    }

    pub fn dims_f64(&self) -> Vec<f64> {
        self.dims.iter().map(|&d| d as f64).collect()
    }

    /// Largest `|r(π)r(ρ) − Σ_σ m(σ, π⊗ρ) r(σ)|`.
    pub fn hom_residual(&self, r: &[f64]) -> f64 {
        let k = self.len();
        let mut worst: f64 = (r[0] - 1.0).abs();
        for pi in 0..k {
            for rho in 0..k {
                let rhs: f64 = (0..k).map(|s| self.mult[pi][rho][s] as f64 * r[s]).sum();
                worst = worst.max((r[pi] * r[rho] - rhs).abs());
            }
        }
        worst
    }
}

/// `T(π)_{ρ,σ} = m(σ, ρ⊗π) r(σ) / r(ρ⊗π)`.
pub fn stochastic_matrix(fr: &FusionRing, pi: usize, r: &[f64]) -> Result<DMatrix<f64>> {
    let k = fr.len();
    if pi >= k || r.len() != k {
        return Err(Error::Shape(format!("need a label below {k} and {k} candidate values")));
    }
    if let Some((i, v)) = r.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("candidate value {v} at {} is not strictly positive", fr.labels[i])));
    }
    let mut t = DMatrix::zeros(k, k);
    for rho in 0..k {
        let total: f64 = (0..k).map(|s| fr.mult[rho][pi][s] as f64 * r[s]).sum();
        for sigma in 0..k {
            t[(rho, sigma)] = fr.mult[rho][pi][sigma] as f64 * r[sigma] / total;
        }
    }
    Ok(t)
}

pub fn spectral_radius(t: &DMatrix<f64>) -> f64 {
    let m = faer::Mat::from_fn(t.nrows(), t.ncols(), |i, j| t[(i, j)]);
    match m.eigenvalues() {
        Ok(ev) => ev.iter().fold(0.0, |acc: f64, z| acc.max(z.norm())),
        Err(_) => f64::NAN,
    }
}

/// Eigenvalue certificate comparing a candidate `r` with `dims`.
///
/// With `c = r/dims`, `T(dims, π) c = (r(π)/dim π) c`, and symmetrically with the roles
/// swapped. Unit-disc bounds in both directions force every ratio to be `1`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Certificate {
    pub row_sum: f64,
    pub eigen_residual: f64,
    pub spectral_radius: f64,
    pub max_ratio: f64,
    pub min_ratio: f64,
}

impl Certificate {
    pub fn forces_dims(&self, tol: f64) -> bool {
        self.row_sum <= tol && self.eigen_residual <= tol && self.max_ratio <= 1.0 + tol && self.min_ratio >= 1.0 - tol
    }
}

pub fn certificate(fr: &FusionRing, r: &[f64]) -> Result<Certificate> {
    let dims = fr.dims_f64();
    let mut cert = Certificate { row_sum: 0.0, eigen_residual: 0.0, spectral_radius: 0.0, max_ratio: 0.0, min_ratio: f64::INFINITY };
    for (dir, (r1, r2)) in [(&dims[..], r), (r, &dims[..])].into_iter().enumerate() {
        let cvec = DVector::from_iterator(fr.len(), r2.iter().zip(r1).map(|(a, b)| a / b));
        for pi in 0..fr.len() {
            let t = stochastic_matrix(fr, pi, r1)?;
            for row in t.row_iter() {
                cert.row_sum = cert.row_sum.max((row.sum() - 1.0).abs());
            }
            let lambda = r2[pi] / r1[pi];
            cert.eigen_residual = cert.eigen_residual.max((&t * &cvec - &cvec * lambda).amax());
            cert.spectral_radius = cert.spectral_radius.max(spectral_radius(&t));
            if dir == 0 {
                cert.max_ratio = cert.max_ratio.max(lambda);
                cert.min_ratio = cert.min_ratio.min(lambda);
            }
        }
    }
    Ok(cert)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RingHom {
    pub values: Vec<f64>,
    pub residual: f64,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct HomSearch {
    pub homs: Vec<RingHom>,
    pub starts: usize,
    pub converged: usize,
    pub seed: u64,
}

/// Power iteration on `Σ_π N_π` followed by Newton polishing of the full system.
fn power_iterate(fr: &FusionRing, start: DVector<f64>) -> DVector<f64> {
    let k = fr.len();
    let sum = (0..k).fold(DMatrix::zeros(k, k), |acc, pi| acc + fr.fusion_matrix(pi));
    let mut r = start;
    for _ in 0..POWER_ITERATIONS {
        let next = &sum * &r;
        let next = &next / next[0];
        let delta = (&next - &r).amax();
        r = next;
        if delta < 1e-15 {
            break;
        }
    }
    r
}

/// Damped Gauss–Newton on `r(π)r(ρ) = Σ m r(σ)`, `r(1) = 1`.
fn newton(fr: &FusionRing, mut r: DVector<f64>) -> DVector<f64> {
    let k = fr.len();
    for _ in 0..NEWTON_ITERATIONS {
        let mut f = DVector::zeros(k * k + 1);
        let mut jac = DMatrix::zeros(k * k + 1, k);
        for pi in 0..k {
            for rho in 0..k {
                let row = pi * k + rho;
                f[row] = r[pi] * r[rho] - (0..k).map(|s| fr.mult[pi][rho][s] as f64 * r[s]).sum::<f64>();
                jac[(row, pi)] += r[rho];
                jac[(row, rho)] += r[pi];
                for s in 0..k {
                    jac[(row, s)] -= fr.mult[pi][rho][s] as f64;
                }
            }
        }
        f[k * k] = r[0] - 1.0;
        jac[(k * k, 0)] = 1.0;
        if f.amax() < 1e-15 {
            break;
        }
        let step = match jac.clone().svd(true, true).solve(&f, 1e-13) {
            Ok(s) => s,
            Err(_) => break,
        };
        r -= step;
    }
    r
}

/// All positive ring homomorphisms found from `starts` seeded random positive vectors.
///
/// Each start is refined by Newton directly and by power iteration followed by Newton;
/// strictly positive solutions with residual below `tol` are kept, merged up to `tol`.
pub fn positive_ring_homs(fr: &FusionRing, tol: f64, seed: u64, starts: usize) -> Result<HomSearch> {
    fr.validate()?;
    let k = fr.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<DVector<f64>> = Vec::new();
    let mut converged = 0;
    for _ in 0..starts.max(1) {
        let mut start = DVector::from_fn(k, |_, _| rng.random_range(0.05..8.0));
        start[0] = 1.0;
        for cand in [newton(fr, start.clone()), newton(fr, power_iterate(fr, start))] {
            let v: Vec<f64> = cand.iter().copied().collect();
            if v.iter().any(|x| !x.is_finite() || *x <= 0.0) || fr.hom_residual(&v) > tol {
                continue;
            }
            converged += 1;
            if !found.iter().any(|f| (f - &cand).amax() <= tol) {
                found.push(cand);
            }
        }
    }
    let homs = found
        .into_iter()
        .map(|r| {
            let values: Vec<f64> = r.iter().copied().collect();
            Ok(RingHom { residual: fr.hom_residual(&values), certificate: certificate(fr, &values)?, values })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomSearch { homs, starts: starts.max(1), converged, seed })
}

#[cfg(test)]
mod tests;
