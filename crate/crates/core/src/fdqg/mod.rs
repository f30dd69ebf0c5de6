//! Finite quantum groups, their irreducible representations and fusion data.
//!
//! A matrix over the quantum group `G` (an element of `L(V) ⊗ G`) is stored
//! as one `d × d` matrix per basis element of `G`: `u = Σ_k u[k] ⊗ e_k`.

mod decompose;
pub mod groups;

pub use decompose::{build_function_algebra, build_group_algebra_dual, decompose_tensor, GroupRef};
pub use groups::GroupTable;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{cr, identity, op_norm, psd_sqrt, tensor_product, zeros, ComplexMatrix, Tolerance, C64};

/// Finite-dimensional Hopf *-algebra given by structure tensors on `ℂ^dim`.
#[derive(Debug, Clone)]
pub struct FiniteQuantumGroup {
    pub dim: usize,
    /// `mult[(i * dim + j) * dim + k]`: coefficient of `e_k` in `e_i e_j`.
    pub mult: Vec<C64>,
    pub unit: Vec<C64>,
    /// `comult[(k * dim + i) * dim + j]`: coefficient of `e_i ⊗ e_j` in `Δ(e_k)`.
    pub comult: Vec<C64>,
    pub counit: Vec<C64>,
    /// Column `k` holds the coordinates of `e_k*`.
    pub star: ComplexMatrix,
    pub haar: Vec<C64>,
    regular: Vec<ComplexMatrix>,
}

/// Residuals of the Hopf *-algebra axioms.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub associativity: f64,
    pub unit: f64,
    pub star_involution: f64,
    pub star_antimultiplicative: f64,
    pub comult_multiplicative: f64,
    pub comult_star: f64,
    pub comult_unital: f64,
    pub coassociativity: f64,
    pub counit: f64,
    pub haar_invariance: f64,
    pub haar_min_eigenvalue: f64,
}

impl AxiomReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.associativity,
            self.unit,
            self.star_involution,
            self.star_antimultiplicative,
            self.comult_multiplicative,
            self.comult_star,
            self.comult_unital,
            self.coassociativity,
            self.counit,
            self.haar_invariance,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: &Tolerance) -> bool {
        self.max_residual() <= tol.atol && self.haar_min_eigenvalue > tol.atol
    }
}

fn vec_dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

impl FiniteQuantumGroup {
    /// Assemble from structure tensors. Only shapes are checked here; call
    /// [`FiniteQuantumGroup::verify`] for the axioms.
    pub fn new(
        dim: usize,
        mult: Vec<C64>,
        unit: Vec<C64>,
        comult: Vec<C64>,
        counit: Vec<C64>,
        star: ComplexMatrix,
        haar: Vec<C64>,
    ) -> Result<Self> {
        let d3 = dim * dim * dim;
        if dim == 0
            || mult.len() != d3
            || comult.len() != d3
            || unit.len() != dim
            || counit.len() != dim
            || haar.len() != dim
            || star.shape() != (dim, dim)
        {
            return Err(Error::Shape(format!("quantum group structure tensors do not match dim {dim}")));
        }
        let mut g = FiniteQuantumGroup { dim, mult, unit, comult, counit, star, haar, regular: Vec::new() };
        g.regular = g.build_regular()?;
        Ok(g)
    }

    fn build_regular(&self) -> Result<Vec<ComplexMatrix>> {
        let n = self.dim;
        let gram = ComplexMatrix::from_fn(n, n, |i, j| self.haar_of(&self.mul(&self.star_of(&basis(n, i)), &basis(n, j))));
        let tol = Tolerance::default();
        let c = psd_sqrt(&gram, &tol)?;
        let cinv = c
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Invalid("Haar state is not faithful".into()))?;
        Ok((0..n).map(|k| &c * self.left_mult(k) * &cinv).collect())
    }

    /// Matrix of left multiplication by `e_k` in the basis.
    pub fn left_mult(&self, k: usize) -> ComplexMatrix {
        let n = self.dim;
        ComplexMatrix::from_fn(n, n, |j, i| self.mult[(k * n + i) * n + j])
    }

    pub fn mul(&self, a: &[C64], b: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            if a[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let ab = a[i] * b[j];
                if ab == C64::new(0.0, 0.0) {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += ab * self.mult[(i * n + j) * n + k];
                }
            }
        }
        out
    }

    pub fn star_of(&self, a: &[C64]) -> Vec<C64> {
        let n = self.dim;
        (0..n).map(|c| (0..n).map(|k| a[k].conj() * self.star[(c, k)]).sum()).collect()
    }

    pub fn comul(&self, a: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for (k, ak) in a.iter().enumerate() {
            for ij in 0..n * n {
                out[ij] += ak * self.comult[k * n * n + ij];
            }
        }
        out
    }

    pub fn haar_of(&self, a: &[C64]) -> C64 {
        a.iter().zip(&self.haar).map(|(x, h)| x * h).sum()
    }

    pub fn counit_of(&self, a: &[C64]) -> C64 {
        a.iter().zip(&self.counit).map(|(x, h)| x * h).sum()
    }

    /// `h(e_a e_c)` for all pairs.
    pub fn haar_pairing(&self) -> ComplexMatrix {
        let n = self.dim;
        ComplexMatrix::from_fn(n, n, |a, c| (0..n).map(|k| self.mult[(a * n + c) * n + k] * self.haar[k]).sum())
    }

    /// Faithful *-representation of `G` (GNS for the Haar state).
    pub fn regular_rep(&self, k: usize) -> &ComplexMatrix {
        &self.regular[k]
    }

    pub fn verify(&self) -> AxiomReport {
        let n = self.dim;
        let e = |i| basis(n, i);
        let mut r = AxiomReport {
            associativity: 0.0,
            unit: 0.0,
            star_involution: 0.0,
            star_antimultiplicative: 0.0,
            comult_multiplicative: 0.0,
            comult_star: 0.0,
            comult_unital: vec_dist(&self.comul(&self.unit), &kron_vec(&self.unit, &self.unit)),
            coassociativity: 0.0,
            counit: 0.0,
            haar_invariance: 0.0,
            haar_min_eigenvalue: 0.0,
        };
        let upd = |slot: &mut f64, v: f64| *slot = slot.max(v);
        for i in 0..n {
            upd(&mut r.unit, vec_dist(&self.mul(&self.unit, &e(i)), &e(i)));
            upd(&mut r.unit, vec_dist(&self.mul(&e(i), &self.unit), &e(i)));
            upd(&mut r.star_involution, vec_dist(&self.star_of(&self.star_of(&e(i))), &e(i)));
            let d = self.comul(&e(i));
            upd(&mut r.comult_star, vec_dist(&self.comul(&self.star_of(&e(i))), &self.tensor_star(&d)));
            upd(&mut r.coassociativity, vec_dist(&self.comult_left(&d), &self.comult_right(&d)));
            // (ε ⊗ id)Δ = id = (id ⊗ ε)Δ
            let left: Vec<C64> = (0..n).map(|j| (0..n).map(|a| self.counit[a] * d[a * n + j]).sum()).collect();
            let right: Vec<C64> = (0..n).map(|a| (0..n).map(|j| d[a * n + j] * self.counit[j]).sum()).collect();
            upd(&mut r.counit, vec_dist(&left, &e(i)).max(vec_dist(&right, &e(i))));
            // (id ⊗ h)Δ = h·1 = (h ⊗ id)Δ
            let hv = self.haar[i];
            let ih: Vec<C64> = (0..n).map(|a| (0..n).map(|j| d[a * n + j] * self.haar[j]).sum()).collect();
            let hi: Vec<C64> = (0..n).map(|j| (0..n).map(|a| self.haar[a] * d[a * n + j]).sum()).collect();
            let target: Vec<C64> = self.unit.iter().map(|u| u * hv).collect();
            upd(&mut r.haar_invariance, vec_dist(&ih, &target).max(vec_dist(&hi, &target)));
            for j in 0..n {
                let ij = self.mul(&e(i), &e(j));
                for k in 0..n {
                    let l = self.mul(&ij, &e(k));
                    let rr = self.mul(&e(i), &self.mul(&e(j), &e(k)));
                    upd(&mut r.associativity, vec_dist(&l, &rr));
                }
                let lhs = self.star_of(&ij);
                let rhs = self.mul(&self.star_of(&e(j)), &self.star_of(&e(i)));
                upd(&mut r.star_antimultiplicative, vec_dist(&lhs, &rhs));
                let dij = self.comul(&ij);
                let prod = self.tensor_mul(&self.comul(&e(i)), &self.comul(&e(j)));
                upd(&mut r.comult_multiplicative, vec_dist(&dij, &prod));
            }
        }
        let gram = ComplexMatrix::from_fn(n, n, |i, j| self.haar_of(&self.mul(&self.star_of(&e(i)), &e(j))));
        let herm = op_norm(&(&gram - gram.adjoint()));
        let (vals, _) = crate::numerics::hermitian_eigen(&gram);
        r.haar_min_eigenvalue = vals.first().copied().unwrap_or(0.0) - herm;
        r
    }

    fn tensor_mul(&self, a: &[C64], b: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i1 in 0..n {
            for j1 in 0..n {
                let x = a[i1 * n + j1];
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                for i2 in 0..n {
                    for j2 in 0..n {
                        let y = b[i2 * n + j2];
                        if y == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for p in 0..n {
                            let mp = self.mult[(i1 * n + i2) * n + p];
                            if mp == C64::new(0.0, 0.0) {
                                continue;
                            }
                            for q in 0..n {
                                out[p * n + q] += x * y * mp * self.mult[(j1 * n + j2) * n + q];
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn tensor_star(&self, a: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let x = a[i * n + j].conj();
                for p in 0..n {
                    for q in 0..n {
                        out[p * n + q] += x * self.star[(p, i)] * self.star[(q, j)];
                    }
                }
            }
        }
        out
    }

    /// `(Δ ⊗ id)` applied to an element of `G ⊗ G`.
    fn comult_left(&self, a: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let x = a[i * n + j];
                for pq in 0..n * n {
                    out[pq * n + j] += x * self.comult[i * n * n + pq];
                }
            }
        }
        out
    }

    fn comult_right(&self, a: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let x = a[i * n + j];
                for pq in 0..n * n {
                    out[i * n * n + pq] += x * self.comult[j * n * n + pq];
                }
            }
        }
        out
    }

    // Matrices over G.

    pub fn mat_one(&self, d: usize) -> Vec<ComplexMatrix> {
        self.unit.iter().map(|&u| identity(d) * u).collect()
    }

    pub fn mat_mul(&self, x: &[ComplexMatrix], y: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
        let n = self.dim;
        let mut out = vec![zeros(x[0].nrows(), y[0].ncols()); n];
        for a in 0..n {
            for b in 0..n {
                let mut xy: Option<ComplexMatrix> = None;
                for (k, o) in out.iter_mut().enumerate() {
                    let m = self.mult[(a * n + b) * n + k];
                    if m != C64::new(0.0, 0.0) {
                        let p = xy.get_or_insert_with(|| &x[a] * &y[b]);
                        *o += &*p * m;
                    }
                }
            }
        }
        out
    }

    pub fn mat_adjoint(&self, x: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
        let n = self.dim;
        let mut out = vec![zeros(x[0].ncols(), x[0].nrows()); n];
        for (b, xb) in x.iter().enumerate() {
            let xa = xb.adjoint();
            for (c, o) in out.iter_mut().enumerate() {
                let s = self.star[(c, b)];
                if s != C64::new(0.0, 0.0) {
                    *o += &xa * s;
                }
            }
        }
        out
    }

    /// `u₁₃ w₂₃` on `V_u ⊗ V_w`.
    pub fn tensor_p(&self, u: &[ComplexMatrix], w: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
        let du = u[0].nrows();
        let dw = w[0].nrows();
        let u13: Vec<_> = u.iter().map(|m| tensor_product(m, &identity(dw))).collect();
        let w23: Vec<_> = w.iter().map(|m| tensor_product(&identity(du), m)).collect();
        self.mat_mul(&u13, &w23)
    }

    /// `w₂₃ u₁₃` on `V_u ⊗ V_w`.
    pub fn tensor_m(&self, u: &[ComplexMatrix], w: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
        let du = u[0].nrows();
        let dw = w[0].nrows();
        let u13: Vec<_> = u.iter().map(|m| tensor_product(m, &identity(dw))).collect();
        let w23: Vec<_> = w.iter().map(|m| tensor_product(&identity(du), m)).collect();
        self.mat_mul(&w23, &u13)
    }

    /// Operator norm of an element of `L(V) ⊗ G` in the faithful regular representation.
    pub fn mat_norm(&self, x: &[ComplexMatrix]) -> f64 {
        let mut acc = zeros(x[0].nrows() * self.dim, x[0].ncols() * self.dim);
        for (k, xk) in x.iter().enumerate() {
            acc += tensor_product(xk, &self.regular[k]);
        }
        op_norm(&acc)
    }

    /// Haar averaging `(id ⊗ h)(x)`.
    pub fn mat_haar(&self, x: &[ComplexMatrix]) -> ComplexMatrix {
        let mut out = zeros(x[0].nrows(), x[0].ncols());
        for (k, xk) in x.iter().enumerate() {
            out += xk * self.haar[k];
        }
        out
    }

    /// Coefficients `u[k]` of `Σ_k A_k ⊗ g_k` against the basis, for `g` given as coefficient vectors.
    pub fn mat_from(&self, parts: &[(ComplexMatrix, Vec<C64>)]) -> Vec<ComplexMatrix> {
        let (r, c) = parts[0].0.shape();
        (0..self.dim)
            .map(|k| parts.iter().fold(zeros(r, c), |acc, (m, g)| acc + m * g[k]))
            .collect()
    }
}

pub(crate) fn basis(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[i] = cr(1.0);
    v
}

fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Residuals of the representation identities for `u ∈ L(V) ⊗ G`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RepresentationCheck {
    pub ok: bool,
    pub unitarity: f64,
    pub comultiplication: f64,
}

/// Checks `u*u = uu* = 1` and `(id ⊗ Δ)(u) = u₁₂ u₁₃`.
pub fn verify_representation(g: &FiniteQuantumGroup, u: &[ComplexMatrix], tol: &Tolerance) -> Result<RepresentationCheck> {
    let n = g.dim;
    if u.len() != n || u.is_empty() {
        return Err(Error::Shape(format!("representation has {} coefficients, expected {n}", u.len())));
    }
    let d = u[0].nrows();
    if u.iter().any(|m| m.shape() != (d, d)) {
        return Err(Error::Shape("representation coefficients must be square of equal size".into()));
    }
    let one = g.mat_one(d);
    let us = g.mat_adjoint(u);
    let diff1: Vec<_> = g.mat_mul(&us, u).iter().zip(&one).map(|(a, b)| a - b).collect();
    let diff2: Vec<_> = g.mat_mul(u, &us).iter().zip(&one).map(|(a, b)| a - b).collect();
    let unitarity = g.mat_norm(&diff1).max(g.mat_norm(&diff2));
    // residual in L(V) ⊗ G ⊗ G represented through regular ⊗ regular
    let mut acc = zeros(d * n * n, d * n * n);
    for i in 0..n {
        for j in 0..n {
            let mut c = -(&u[i] * &u[j]);
            for (k, uk) in u.iter().enumerate() {
                let m = g.comult[(k * n + i) * n + j];
                if m != C64::new(0.0, 0.0) {
                    c += uk * m;
                }
            }
            acc += tensor_product(&tensor_product(&c, g.regular_rep(i)), g.regular_rep(j));
        }
    }
    let comultiplication = op_norm(&acc);
    Ok(RepresentationCheck {
        ok: unitarity <= tol.atol && comultiplication <= tol.atol,
        unitarity,
        comultiplication,
    })
}

/// One summand `S: V_σ → V_π ⊗ V_ρ` of a tensor product decomposition.
#[derive(Debug, Clone)]
pub struct Summand {
    pub irrep: usize,
    pub isometry: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    pub u: Vec<ComplexMatrix>,
    pub q: ComplexMatrix,
    pub conjugate: usize,
    /// `R(1) ∈ V_π ⊗ V_π̄` as a column.
    pub r: ComplexMatrix,
    /// `R̄(1) ∈ V_π̄ ⊗ V_π` as a column.
    pub rbar: ComplexMatrix,
}

impl Irrep {
    /// Quantum dimension `Tr Q`.
    pub fn quantum_dim(&self) -> f64 {
        self.q.trace().re
    }

    /// Unitary `J: V̄_π → V_π̄` from the entrywise-conjugate representation to the catalog conjugate.
    pub fn conj_map(&self, conj_dim: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(conj_dim, self.dim, |j, i| self.r[(i * conj_dim + j, 0)])
    }
}

/// A finite quantum group together with its irreps and fusion data.
///
/// `fusion_p[i][j]` decomposes `u_i ⊗ u_j := (u_i)₁₃ (u_j)₂₃`; `fusion_m[i][j]`
/// decomposes `(u_j)₂₃ (u_i)₁₃`, the product the factor-system maps respect.
/// Both agree when `G` is commutative.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub name: String,
    pub group: FiniteQuantumGroup,
    pub irreps: Vec<Irrep>,
    pub fusion_p: Vec<Vec<Vec<Summand>>>,
    pub fusion_m: Vec<Vec<Vec<Summand>>>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.irreps
            .iter()
            .position(|p| p.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn label(&self, i: usize) -> &str {
        &self.irreps[i].label
    }

    pub fn dim(&self, i: usize) -> usize {
        self.irreps[i].dim
    }

    pub fn conj(&self, i: usize) -> usize {
        self.irreps[i].conjugate
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|p| p.dim).collect()
    }

    /// `m(σ, π ⊗ ρ)`.
    pub fn multiplicity(&self, sigma: usize, pi: usize, rho: usize) -> usize {
        self.fusion_p[pi][rho].iter().filter(|s| s.irrep == sigma).count()
    }

    /// Completeness, orthonormality and intertwining residual of both fusion tables.
    pub fn fusion_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (table, prod) in [(&self.fusion_p, 0), (&self.fusion_m, 1)] {
            for i in 0..self.len() {
                for j in 0..self.len() {
                    let x = if prod == 0 {
                        self.group.tensor_p(&self.irreps[i].u, &self.irreps[j].u)
                    } else {
                        self.group.tensor_m(&self.irreps[i].u, &self.irreps[j].u)
                    };
                    worst = worst.max(summands_residual(&self.group, &x, &table[i][j], &self.irreps));
                }
            }
        }
        worst
    }

    /// Residual of `(R* ⊗ id)(id ⊗ R̄) = id` and `Tr Q = Tr Q⁻¹` over the catalog.
    pub fn conjugation_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for p in &self.irreps {
            let d = p.dim;
            let db = self.irreps[p.conjugate].dim;
            let lhs = tensor_product(&p.r.adjoint(), &identity(d)) * tensor_product(&identity(d), &p.rbar);
            worst = worst.max(op_norm(&(lhs - identity(d))));
            if db * d != p.r.nrows() || db * d != p.rbar.nrows() {
                return f64::INFINITY;
            }
            if let Some(qi) = p.q.clone().try_inverse() {
                worst = worst.max((p.q.trace() - qi.trace()).norm());
            } else {
                return f64::INFINITY;
            }
        }
        worst
    }
}

/// Completeness, orthonormality and intertwining residual of one decomposition of `x`.
pub fn summands_residual(g: &FiniteQuantumGroup, x: &[ComplexMatrix], parts: &[Summand], irreps: &[Irrep]) -> f64 {
    let d = x[0].nrows();
    let mut worst: f64 = 0.0;
    let mut sum = zeros(d, d);
    for (a, s) in parts.iter().enumerate() {
        if s.irrep >= irreps.len() || s.isometry.nrows() != d || s.isometry.ncols() != irreps[s.irrep].dim {
            return f64::INFINITY;
        }
        sum += &s.isometry * s.isometry.adjoint();
        for (b, t) in parts.iter().enumerate() {
            let g_ab = s.isometry.adjoint() * &t.isometry;
            let expect = if a == b { identity(g_ab.nrows()) } else { zeros(g_ab.nrows(), g_ab.ncols()) };
            worst = worst.max(op_norm(&(g_ab - expect)));
        }
        let sig = &irreps[s.irrep].u;
        let lhs: Vec<_> = x.iter().map(|xk| xk * &s.isometry).collect();
        let rhs: Vec<_> = sig.iter().map(|sk| &s.isometry * sk).collect();
        let diff: Vec<_> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
        worst = worst.max(g.mat_norm(&diff));
    }
    worst.max(op_norm(&(sum - identity(d))))
}

#[cfg(test)]
mod tests;
