use serde::Serialize;

use super::{gamma_space, mult_map, verify_unitary_tensor_functor, GammaSpace};
use crate::cstar::{apply_entrywise, MatrixOverB};
use crate::error::{Error, Result};
use crate::factor::FactorSystem;
use crate::fdqg::FiniteQuantumGroup;
use crate::numerics::{c, hermitian_eigen, identity, null_space, psd_sqrt, tensor_product, zeros, ComplexMatrix, Tolerance, C64};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SummandInfo {
    pub label: String,
    pub v_dim: usize,
    pub gamma_dim: usize,
    pub offset: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AlgebraReport {
    pub dim: usize,
    pub center_dim: usize,
    pub associativity: f64,
    pub unit: f64,
    pub involutive: f64,
    pub antimultiplicative: f64,
    pub coaction_hom: f64,
    pub coaction_star: f64,
    pub coaction_unit: f64,
    pub coassociativity: f64,
    pub fixed_points: f64,
    pub faithfulness: f64,
    pub pass: bool,
}

/// `A = ⊕_π V̄_π ⊗ Γ(V_π)` in coordinates. Basis order: irrep, `V`-index, `Γ`-index.
#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    pub group: String,
    pub base_blocks: Vec<usize>,
    pub summands: Vec<SummandInfo>,
    pub dim: usize,
    pub dim_g: usize,
    /// `e_a e_b = Σ_c structure[(a·dim + b)·dim + c] e_c`.
    pub structure: Vec<C64>,
    /// `x⁺ = involution · conj(x)`.
    pub involution: ComplexMatrix,
    /// `α(e_a) = Σ coaction[(c·dim_g + g, a)] e_c ⊗ f_g`.
    pub coaction: ComplexMatrix,
    pub unit: Vec<C64>,
    /// Columns are the images of the matrix units of `B` in the fixed-point summand.
    pub b_embedding: ComplexMatrix,
    pub report: AlgebraReport,
    pub quantum_group: FiniteQuantumGroup,
    /// Linear functional `Σ_i Tr(b_i)` in `A`-coordinates, supported on the fixed-point summand.
    b_trace: Vec<C64>,
}

fn zero() -> C64 {
    c(0.0, 0.0)
}

impl GradedAlgebra {
    pub fn mul(&self, a: &[C64], b: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![zero(); n];
        for (i, &x) in a.iter().enumerate() {
            if x == zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == zero() {
                    continue;
                }
                let xy = x * y;
                let row = &self.structure[(i * n + j) * n..(i * n + j + 1) * n];
                for (o, s) in out.iter_mut().zip(row) {
                    *o += xy * s;
                }
            }
        }
        out
    }

    pub fn star(&self, a: &[C64]) -> Vec<C64> {
        let conj: Vec<C64> = a.iter().map(|z| z.conj()).collect();
        (&self.involution * ComplexMatrix::from_column_slice(self.dim, 1, &conj)).as_slice().to_vec()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<C64> {
        let mut v = vec![zero(); self.dim];
        v[i] = c(1.0, 0.0);
        v
    }

    /// Matrix of left multiplication by `a`.
    pub fn left_matrix(&self, a: &[C64]) -> ComplexMatrix {
        let mut m = zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(a, &self.basis_vector(j));
            for (i, z) in col.into_iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    /// Faithful state `τ = Tr_B ∘ (id ⊗ h) ∘ α` evaluated on `a`.
    pub fn state(&self, a: &[C64]) -> C64 {
        let fixed = self.expectation(a);
        self.b_trace.iter().zip(&fixed).map(|(t, x)| t * x).sum()
    }

    /// `P₁ = (id ⊗ h) ∘ α` on coordinates.
    pub fn expectation(&self, a: &[C64]) -> Vec<C64> {
        let alpha = &self.coaction * ComplexMatrix::from_column_slice(self.dim, 1, a);
        let haar = &self.quantum_group.haar;
        (0..self.dim)
            .map(|cc| (0..self.dim_g).map(|g| alpha[(cc * self.dim_g + g, 0)] * haar[g]).sum())
            .collect()
    }

    /// Gram matrix `[τ(e_a⁺ e_b)]`.
    pub fn gram(&self) -> ComplexMatrix {
        let mut g = zeros(self.dim, self.dim);
        let stars: Vec<Vec<C64>> = (0..self.dim).map(|a| self.star(&self.basis_vector(a))).collect();
        for a in 0..self.dim {
            for b in 0..self.dim {
                g[(a, b)] = self.state(&self.mul(&stars[a], &self.basis_vector(b)));
            }
        }
        g
    }

    /// `λ(e_a) = C L_a C⁻¹` with `C = Gram^{1/2}`; a *-representation on `A` with its τ-inner product.
    pub fn regular_representation(&self, tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
        let g = self.gram();
        let herm = (&g + g.adjoint()) * c(0.5, 0.0);
        let cc = psd_sqrt(&herm, tol)?;
        let inv = cc.clone().try_inverse().ok_or(Error::NotPositive { min_eigenvalue: 0.0 })?;
        Ok((0..self.dim).map(|a| &cc * self.left_matrix(&self.basis_vector(a)) * &inv).collect())
    }

    pub fn center_dim(&self, tol: &Tolerance) -> usize {
        let n = self.dim;
        let mut sys = zeros(n * n, n);
        for a in 0..n {
            for j in 0..n {
                for k in 0..n {
                    sys[(a * n + k, j)] = self.structure[(a * n + j) * n + k] - self.structure[(j * n + a) * n + k];
                }
            }
        }
        null_space(&sys, tol).ncols()
    }
}

/// Builds `A` after the unitary-tensor-functor checks and refuses unless the invariant suite passes.
pub fn build_algebra(fs: &FactorSystem, tol: &Tolerance) -> Result<GradedAlgebra> {
    let functor = verify_unitary_tensor_functor(fs, tol);
    if !functor.pass {
        return Err(Error::Verification(format!("unitary tensor functor: {}", serde_json::to_string(&functor)?)));
    }
    let alg = assemble_algebra(fs, tol);
    if !alg.report.pass {
        return Err(Error::Verification(format!("algebra invariants: {}", serde_json::to_string(&alg.report)?)));
    }
    Ok(alg)
}

/// Structure constants, involution and coaction of `A` with the invariant report, without refusing.
pub fn assemble_algebra(fs: &FactorSystem, tol: &Tolerance) -> GradedAlgebra {
    let cat = &fs.catalog;
    let k = cat.len();
    let g = &cat.group;
    let dg = g.dim;
    let spaces: Vec<GammaSpace> = (0..k).map(|pi| gamma_space(fs, pi, tol)).collect();
    let mut summands = Vec::new();
    let mut off = 0;
    for (pi, sp) in spaces.iter().enumerate() {
        summands.push(SummandInfo { label: cat.label(pi).into(), v_dim: cat.dim(pi), gamma_dim: sp.dim(), offset: off });
        off += cat.dim(pi) * sp.dim();
    }
    let n = off;
    let idx = |pi: usize, v: usize, t: usize| summands[pi].offset + v * spaces[pi].dim() + t;

    let mut structure = vec![zero(); n * n * n];
    for pi in 0..k {
        for rho in 0..k {
            let pr = fs.tensor(pi, rho);
            let (dp, dr) = (cat.dim(pi), cat.dim(rho));
            for (t, x) in spaces[pi].basis.iter().enumerate() {
                for (u, y) in spaces[rho].basis.iter().enumerate() {
                    let m = mult_map(fs, pi, rho, x, y);
                    let mut row0 = 0;
                    for part in &pr.parts {
                        let sig = part.irrep;
                        let hs = fs.h[sig];
                        let coords = spaces[sig].coords(&m.sub_matrix(row0, hs, 0, 1));
                        row0 += hs;
                        for vi in 0..dp {
                            for vj in 0..dr {
                                let (a, b) = (idx(pi, vi, t), idx(rho, vj, u));
                                for l in 0..cat.dim(sig) {
                                    let s = part.isometry[(vi * dr + vj, l)];
                                    if s.norm() == 0.0 {
                                        continue;
                                    }
                                    for (q, z) in coords.iter().enumerate() {
                                        structure[(a * n + b) * n + idx(sig, l, q)] += s * z;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let triv = cat.trivial();
    let mut involution = zeros(n, n);
    let mut range_defect: f64 = 0.0;
    for pi in 0..k {
        let pb = cat.conj(pi);
        let j = cat.irreps[pi].conj_map(cat.dim(pb));
        let ppb = fs.tensor(pi, pb);
        let hr = MatrixOverB::from_scalar(&fs.base, &fs.h_map(&ppb, &fs.irrep(triv), &cat.irreps[pi].r));
        for (t, x) in spaces[pi].basis.iter().enumerate() {
            let lx = fs.omega[pi][pb].mul(&apply_entrywise(&fs.base, &fs.gamma[pb], x));
            let xp = lx.adjoint().mul(&hr);
            let coords = spaces[pb].coords(&xp);
            range_defect = range_defect.max(spaces[pb].element(&coords).dist(&xp));
            for jv in 0..cat.dim(pi) {
                for l in 0..cat.dim(pb) {
                    let f = j[(l, jv)].conj();
                    for (q, z) in coords.iter().enumerate() {
                        involution[(idx(pb, l, q), idx(pi, jv, t))] += f * z;
                    }
                }
            }
        }
    }

    let mut coaction = zeros(n * dg, n);
    for pi in 0..k {
        let u = &cat.irreps[pi].u;
        let d = cat.dim(pi);
        for i in 0..d {
            for jj in 0..d {
                // coordinates of (u_ji)*
                let coef: Vec<C64> = (0..dg).map(|cc| (0..dg).map(|kk| u[kk][(jj, i)].conj() * g.star[(cc, kk)]).sum()).collect();
                for t in 0..spaces[pi].dim() {
                    for (cc, z) in coef.iter().enumerate() {
                        coaction[(idx(pi, jj, t) * dg + cc, idx(pi, i, t))] += z;
                    }
                }
            }
        }
    }

    let base = &fs.base;
    let units = base.matrix_units();
    let mut b_embedding = zeros(n, units.len());
    for (col, &unit) in units.iter().enumerate() {
        for (q, z) in spaces[triv].coords(&base.matrix_unit(unit)).into_iter().enumerate() {
            b_embedding[(idx(triv, 0, q), col)] = z;
        }
    }
    let mut unit = vec![zero(); n];
    for (q, z) in spaces[triv].coords(&base.unit()).into_iter().enumerate() {
        unit[idx(triv, 0, q)] = z;
    }
    let mut b_trace = vec![zero(); n];
    for (q, e) in spaces[triv].basis.iter().enumerate() {
        b_trace[idx(triv, 0, q)] = e.blocks.iter().map(|m| m.trace()).sum();
    }

    let mut alg = GradedAlgebra {
        group: cat.name.clone(),
        base_blocks: base.blocks.clone(),
        summands,
        dim: n,
        dim_g: dg,
        structure,
        involution,
        coaction,
        unit,
        b_embedding,
        report: AlgebraReport {
            dim: n,
            center_dim: 0,
            associativity: 0.0,
            unit: 0.0,
            involutive: range_defect,
            antimultiplicative: 0.0,
            coaction_hom: 0.0,
            coaction_star: 0.0,
            coaction_unit: 0.0,
            coassociativity: 0.0,
            fixed_points: 0.0,
            faithfulness: 0.0,
            pass: false,
        },
        quantum_group: g.clone(),
        b_trace,
    };
    alg.report = alg.verify(base, tol, range_defect);
    alg
}

fn vdist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

impl GradedAlgebra {
    /// `α(a)` as a vector on `A ⊗ G`.
    pub fn coact(&self, a: &[C64]) -> Vec<C64> {
        (&self.coaction * ComplexMatrix::from_column_slice(self.dim, 1, a)).as_slice().to_vec()
    }

    /// Product in `A ⊗ G`.
    pub fn mul_ag(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let (n, dg) = (self.dim, self.dim_g);
        let g = &self.quantum_group;
        let nz = |v: &[C64]| -> Vec<(usize, usize, C64)> {
            v.iter().enumerate().filter(|(_, z)| z.norm() > 0.0).map(|(i, z)| (i / dg, i % dg, *z)).collect()
        };
        let mut out = vec![zero(); n * dg];
        let (xs, ys) = (nz(x), nz(y));
        for &(a, ga, za) in &xs {
            for &(b, gb, zb) in &ys {
                let ab = &self.structure[(a * n + b) * n..(a * n + b + 1) * n];
                let gg = &g.mult[(ga * dg + gb) * dg..(ga * dg + gb + 1) * dg];
                for (c1, s) in ab.iter().enumerate() {
                    if s.norm() == 0.0 {
                        continue;
                    }
                    for (c2, t) in gg.iter().enumerate() {
                        out[c1 * dg + c2] += za * zb * s * t;
                    }
                }
            }
        }
        out
    }

    fn verify(&self, base: &crate::cstar::FiniteDimCStar, tol: &Tolerance, range_defect: f64) -> AlgebraReport {
        let n = self.dim;
        let dg = self.dim_g;
        let g = &self.quantum_group;
        let e: Vec<Vec<C64>> = (0..n).map(|i| self.basis_vector(i)).collect();
        let mut r = AlgebraReport {
            dim: n,
            center_dim: self.center_dim(tol),
            associativity: 0.0,
            unit: 0.0,
            involutive: range_defect,
            antimultiplicative: 0.0,
            coaction_hom: 0.0,
            coaction_star: 0.0,
            coaction_unit: 0.0,
            coassociativity: 0.0,
            fixed_points: 0.0,
            faithfulness: 0.0,
            pass: false,
        };
        let prods: Vec<Vec<Vec<C64>>> = (0..n).map(|a| (0..n).map(|b| self.mul(&e[a], &e[b])).collect()).collect();
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    let lhs = self.mul(&prods[a][b], &e[cc]);
                    let rhs = self.mul(&e[a], &prods[b][cc]);
                    r.associativity = r.associativity.max(vdist(&lhs, &rhs));
                }
            }
            r.unit = r.unit.max(vdist(&self.mul(&self.unit, &e[a]), &e[a])).max(vdist(&self.mul(&e[a], &self.unit), &e[a]));
        }
        let stars: Vec<Vec<C64>> = e.iter().map(|x| self.star(x)).collect();
        for a in 0..n {
            r.involutive = r.involutive.max(vdist(&self.star(&stars[a]), &e[a]));
            for b in 0..n {
                let lhs = self.star(&prods[a][b]);
                let rhs = self.mul(&stars[b], &stars[a]);
                r.antimultiplicative = r.antimultiplicative.max(vdist(&lhs, &rhs));
            }
        }
        let alphas: Vec<Vec<C64>> = e.iter().map(|x| self.coact(x)).collect();
        for a in 0..n {
            for b in 0..n {
                let lhs = self.coact(&prods[a][b]);
                let rhs = self.mul_ag(&alphas[a], &alphas[b]);
                r.coaction_hom = r.coaction_hom.max(vdist(&lhs, &rhs));
            }
            // (a ⊗ g)⁺ = a⁺ ⊗ g*
            let mut rhs = vec![zero(); n * dg];
            for (i, z) in alphas[a].iter().enumerate() {
                if z.norm() == 0.0 {
                    continue;
                }
                let (cc, gg) = (i / dg, i % dg);
                for (x, sx) in stars[cc].iter().enumerate() {
                    for y in 0..dg {
                        rhs[x * dg + y] += z.conj() * sx * g.star[(y, gg)];
                    }
                }
            }
            r.coaction_star = r.coaction_star.max(vdist(&self.coact(&stars[a]), &rhs));
        }
        let one_ag: Vec<C64> = self.unit.iter().flat_map(|u| g.unit.iter().map(move |v| u * v)).collect();
        r.coaction_unit = vdist(&self.coact(&self.unit), &one_ag);
        let delta = ComplexMatrix::from_fn(dg * dg, dg, |ij, kk| g.comult[kk * dg * dg + ij]);
        let lhs = tensor_product(&self.coaction, &identity(dg)) * &self.coaction;
        let rhs = tensor_product(&identity(n), &delta) * &self.coaction;
        r.coassociativity = crate::numerics::op_norm(&(lhs - rhs));

        let iota = tensor_product(&identity(n), &ComplexMatrix::from_column_slice(dg, 1, &g.unit));
        let fixed_dim = null_space(&(&self.coaction - iota), tol).ncols();
        r.fixed_points = if fixed_dim == base.dim() { 0.0 } else { f64::INFINITY };
        let units = base.matrix_units();
        let col = |i: usize| self.b_embedding.column(i).iter().copied().collect::<Vec<C64>>();
        for (i, &(bi, ri, ci)) in units.iter().enumerate() {
            let ei = col(i);
            let ai = self.coact(&ei);
            let ei_one: Vec<C64> = ei.iter().flat_map(|u| g.unit.iter().map(move |v| u * v)).collect();
            r.fixed_points = r.fixed_points.max(vdist(&ai, &ei_one));
            let adj = units.iter().position(|&u| u == (bi, ci, ri)).map(col).unwrap_or_default();
            r.fixed_points = r.fixed_points.max(vdist(&self.star(&ei), &adj));
            for (j, &(bj, rj, cj)) in units.iter().enumerate() {
                let prod = self.mul(&ei, &col(j));
                let expect = if bi == bj && ci == rj {
                    units.iter().position(|&u| u == (bi, ri, cj)).map(col).unwrap_or_default()
                } else {
                    vec![zero(); n]
                };
                r.fixed_points = r.fixed_points.max(vdist(&prod, &expect));
            }
        }
        let gram = self.gram();
        let herm = (&gram + gram.adjoint()) * c(0.5, 0.0);
        r.faithfulness = hermitian_eigen(&herm).0.first().copied().unwrap_or(0.0);
        let bound = 10.0 * tol.atol;
        r.pass = [
            r.associativity,
            r.unit,
            r.involutive,
            r.antimultiplicative,
            r.coaction_hom,
            r.coaction_star,
            r.coaction_unit,
            r.coassociativity,
            r.fixed_points,
        ]
        .iter()
        .all(|&x| x <= bound)
            && r.faithfulness > tol.atol;
        r
    }
}
