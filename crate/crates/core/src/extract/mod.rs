//! Factor systems of concrete finite-dimensional actions `α: A → A ⊗ G`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cstar::{frame_for_module, FiniteDimCStar, MatrixModule, MatrixOverB, StarHom, Wedderburn};
use crate::error::{Error, Result};
use crate::factor::{FactorSystem, Rep};
use crate::fdqg::Catalog;
use crate::numerics::{
    cr, identity, least_squares, null_space, op_norm, random_unitary, range_basis, rank, stack_columns, tensor_product, zeros,
    ComplexMatrix, Tolerance, C64,
};
use crate::reconstruct::{FreenessReport, GradedAlgebra, PairRank};

/// A unital *-subalgebra `A ⊆ M_D` given by a linear basis, with a coaction in basis coordinates.
#[derive(Debug, Clone)]
pub struct DynamicalSystem {
    pub catalog: Arc<Catalog>,
    pub basis: Vec<ComplexMatrix>,
    /// `α(e_a) = Σ coaction[(c·dim G + g, a)] e_c ⊗ f_g`.
    pub coaction: ComplexMatrix,
    pinv: ComplexMatrix,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DsReport {
    pub closure: f64,
    pub unital: f64,
    pub multiplicative: f64,
    pub star: f64,
    pub coassociativity: f64,
    pub injective: bool,
    pub density_rank: usize,
    pub density_expected: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EllwoodReport {
    pub rank: usize,
    pub expected: usize,
    pub deficit: usize,
    pub free: bool,
}

/// `A^G` with its conditional expectation and block form.
#[derive(Debug, Clone)]
pub struct FixedPoints {
    pub p1: ComplexMatrix,
    pub basis: Vec<ComplexMatrix>,
    pub wedderburn: Wedderburn,
}

/// A factor system together with the coisometries `s(π)` it was read off from.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub system: FactorSystem,
    /// `s(π)` as a `(d_π·D) × (h_π·D)` matrix with `A`-valued blocks.
    pub coisometries: Vec<ComplexMatrix>,
    pub fixed: FixedPoints,
}

fn vec_of(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_column_slice(m.len(), 1, m.as_slice())
}

impl DynamicalSystem {
    /// `images[a][g]` is the `f_g`-component of `α(e_a)`, an element of `A`.
    pub fn new(catalog: Arc<Catalog>, basis: Vec<ComplexMatrix>, images: &[Vec<ComplexMatrix>], tol: &Tolerance) -> Result<Self> {
        let dg = catalog.group.dim;
        if images.len() != basis.len() || images.iter().any(|row| row.len() != dg) {
            return Err(Error::Shape(format!("coaction must list {dg} components for each of the {} basis elements", basis.len())));
        }
        let mut ds = Self::with_coords(catalog, basis, zeros(0, 0), tol)?;
        let n = ds.dim();
        let mut coaction = zeros(n * dg, n);
        for (a, row) in images.iter().enumerate() {
            for (g, x) in row.iter().enumerate() {
                let (coords, resid) = ds.coords_checked(x)?;
                if resid > 1e3 * tol.bound(op_norm(x)) {
                    return Err(Error::Invalid(format!("coaction component ({a}, {g}) does not lie in A (residual {resid:.3e})")));
                }
                for (cc, z) in coords.into_iter().enumerate() {
                    coaction[(cc * dg + g, a)] = z;
                }
            }
        }
        ds.coaction = coaction;
        Ok(ds)
    }

    pub fn with_coords(catalog: Arc<Catalog>, basis: Vec<ComplexMatrix>, coaction: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let d = basis.first().map_or(0, |m| m.nrows());
        if d == 0 || basis.iter().any(|m| m.shape() != (d, d)) {
            return Err(Error::Shape("algebra basis must be non-empty square matrices of one size".into()));
        }
        let n = basis.len();
        let stacked = stack_columns(&basis);
        if rank(&stacked, tol) != n {
            return Err(Error::Invalid("algebra basis is linearly dependent".into()));
        }
        let dg = catalog.group.dim;
        if !coaction.is_empty() && coaction.shape() != (n * dg, n) {
            return Err(Error::Shape(format!("coaction must be {}×{n}", n * dg)));
        }
        let (pinv, _) = least_squares(&stacked, &identity(d * d), tol);
        Ok(DynamicalSystem { catalog, basis, coaction, pinv })
    }

    /// The reconstructed system in its faithful regular representation.
    pub fn from_algebra(alg: &GradedAlgebra, catalog: Arc<Catalog>, tol: &Tolerance) -> Result<Self> {
        let basis = alg.regular_representation(tol)?;
        Self::with_coords(catalog, basis, alg.coaction.clone(), tol)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.basis[0].nrows()
    }

    pub fn dim_g(&self) -> usize {
        self.catalog.group.dim
    }

    pub fn coords(&self, x: &ComplexMatrix) -> Vec<C64> {
        (&self.pinv * vec_of(x)).as_slice().to_vec()
    }

    fn coords_checked(&self, x: &ComplexMatrix) -> Result<(Vec<C64>, f64)> {
        if x.shape() != (self.ambient(), self.ambient()) {
            return Err(Error::Shape(format!("element must be {0}×{0}", self.ambient())));
        }
        let c = self.coords(x);
        let back = self.element(&c);
        Ok((c, op_norm(&(back - x))))
    }

    pub fn element(&self, coords: &[C64]) -> ComplexMatrix {
        let d = self.ambient();
        self.basis.iter().zip(coords).fold(zeros(d, d), |acc, (m, z)| acc + m * *z)
    }

    /// Components `α(x) = Σ_g x_g ⊗ f_g`.
    pub fn coact(&self, x: &ComplexMatrix) -> Vec<ComplexMatrix> {
        let c = self.coords(x);
        let dg = self.dim_g();
        let alpha = &self.coaction * ComplexMatrix::from_column_slice(self.dim(), 1, &c);
        (0..dg)
            .map(|g| {
                let cg: Vec<C64> = (0..self.dim()).map(|cc| alpha[(cc * dg + g, 0)]).collect();
                self.element(&cg)
            })
            .collect()
    }

    fn mul_ag(&self, x: &[ComplexMatrix], y: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
        let g = &self.catalog.group;
        let d = self.ambient();
        let dg = g.dim;
        let mut out = vec![zeros(d, d); dg];
        for (a, xa) in x.iter().enumerate() {
            for (b, yb) in y.iter().enumerate() {
                let p = xa * yb;
                for (k, o) in out.iter_mut().enumerate() {
                    let m = g.mult[(a * dg + b) * dg + k];
                    if m.norm() != 0.0 {
                        *o += &p * m;
                    }
                }
            }
        }
        out
    }

    fn dist_ag(x: &[ComplexMatrix], y: &[ComplexMatrix]) -> f64 {
        x.iter().zip(y).map(|(a, b)| op_norm(&(a - b))).fold(0.0, f64::max)
    }

    pub fn verify(&self, tol: &Tolerance) -> DsReport {
        let d = self.ambient();
        let n = self.dim();
        let g = &self.catalog.group;
        let dg = g.dim;
        let mut closure: f64 = 0.0;
        let mut multiplicative: f64 = 0.0;
        let mut star: f64 = 0.0;
        let alphas: Vec<Vec<ComplexMatrix>> = self.basis.iter().map(|x| self.coact(x)).collect();
        for (a, x) in self.basis.iter().enumerate() {
            let xs = x.adjoint();
            closure = closure.max(op_norm(&(self.element(&self.coords(&xs)) - &xs)));
            // α(x*) = Σ_g x_g* ⊗ f_g*
            let mut rhs = vec![zeros(d, d); dg];
            for (gg, xg) in alphas[a].iter().enumerate() {
                for (k, r) in rhs.iter_mut().enumerate() {
                    *r += xg.adjoint() * g.star[(k, gg)];
                }
            }
            star = star.max(Self::dist_ag(&self.coact(&xs), &rhs));
            for (b, y) in self.basis.iter().enumerate() {
                let xy = x * y;
                closure = closure.max(op_norm(&(self.element(&self.coords(&xy)) - &xy)));
                multiplicative = multiplicative.max(Self::dist_ag(&self.coact(&xy), &self.mul_ag(&alphas[a], &alphas[b])));
            }
        }
        let one = identity(d);
        closure = closure.max(op_norm(&(self.element(&self.coords(&one)) - &one)));
        let one_g: Vec<ComplexMatrix> = g.unit.iter().map(|u| &one * *u).collect();
        let unital = Self::dist_ag(&self.coact(&one), &one_g);
        let delta = ComplexMatrix::from_fn(dg * dg, dg, |ij, k| g.comult[k * dg * dg + ij]);
        let lhs = tensor_product(&self.coaction, &identity(dg)) * &self.coaction;
        let rhs = tensor_product(&identity(n), &delta) * &self.coaction;
        let coassociativity = op_norm(&(lhs - rhs));
        let injective = rank(&self.coaction, tol) == n;
        // span (1 ⊗ G) α(A)
        let mut vecs = Vec::new();
        for a in 0..n {
            for h in 0..dg {
                let mut v = zeros(n * dg, 1);
                for cc in 0..n {
                    for g1 in 0..dg {
                        let z = self.coaction[(cc * dg + g1, a)];
                        if z.norm() == 0.0 {
                            continue;
                        }
                        for k in 0..dg {
                            v[(cc * dg + k, 0)] += z * g.mult[(h * dg + g1) * dg + k];
                        }
                    }
                }
                vecs.push(v);
            }
        }
        let density_rank = rank(&stack_columns(&vecs), tol);
        let bound = 1e3 * tol.atol;
        let pass = closure.max(unital).max(multiplicative).max(star).max(coassociativity) <= bound
            && injective
            && density_rank == n * dg;
        DsReport { closure, unital, multiplicative, star, coassociativity, injective, density_rank, density_expected: n * dg, pass }
    }

    /// `P₁ = (id ⊗ h) ∘ α` in coordinates, its range and the block form of `A^G`.
    pub fn fixed_point_projection(&self, tol: &Tolerance) -> Result<FixedPoints> {
        let p1 = self.weighted_projection(&self.catalog.group.haar.clone(), cr(1.0));
        let range = range_basis(&p1, tol);
        let basis: Vec<ComplexMatrix> = (0..range.ncols()).map(|j| self.element(range.column(j).as_slice())).collect();
        let wedderburn = Wedderburn::decompose(&basis, tol, 0)?;
        Ok(FixedPoints { p1, basis, wedderburn })
    }

    /// `a ↦ scale · (id ⊗ φ)(α(a))` for a functional `φ` given by its values on the basis of `G`.
    fn weighted_projection(&self, phi: &[C64], scale: C64) -> ComplexMatrix {
        let (n, dg) = (self.dim(), self.dim_g());
        ComplexMatrix::from_fn(n, n, |cc, a| (0..dg).map(|g| self.coaction[(cc * dg + g, a)] * phi[g]).sum::<C64>() * scale)
    }

    /// `P_π(a) = d_π (Tr ⊗ id ⊗ h)(π̄₁₃ α(a)₂₃)`.
    pub fn isotypic_projection(&self, pi: usize) -> ComplexMatrix {
        let g = &self.catalog.group;
        let dg = g.dim;
        let irr = &self.catalog.irreps[pi];
        // χ̄ = Σ_i u_ii* in G-coordinates
        let chi: Vec<C64> = (0..dg).map(|k| (0..irr.dim).map(|i| irr.u[k][(i, i)]).sum()).collect();
        let chibar: Vec<C64> = (0..dg).map(|cc| (0..dg).map(|k| chi[k].conj() * g.star[(cc, k)]).sum()).collect();
        // φ(f_g) = h(χ̄ f_g)
        let phi: Vec<C64> = (0..dg)
            .map(|f| (0..dg).map(|a| chibar[a] * (0..dg).map(|k| g.mult[(a * dg + f) * dg + k] * g.haar[k]).sum::<C64>()).sum())
            .collect();
        self.weighted_projection(&phi, cr(irr.dim as f64))
    }

    /// Basis of `Γ(V_π) = {x ∈ V_π ⊗ A : π₁₃ (id ⊗ α)(x) = x ⊗ 1}`, each `x` stacked as a `(d·D) × D` matrix.
    pub fn multiplicity_space(&self, pi: usize, tol: &Tolerance) -> Vec<ComplexMatrix> {
        let g = &self.catalog.group;
        let (n, dg) = (self.dim(), g.dim);
        let irr = &self.catalog.irreps[pi];
        let d = irr.dim;
        let mut sys = zeros(d * n * dg, d * n);
        for j in 0..d {
            for i in 0..d {
                for a in 0..n {
                    let col = i * n + a;
                    for cc in 0..n {
                        for g2 in 0..dg {
                            let z = self.coaction[(cc * dg + g2, a)];
                            if z.norm() == 0.0 {
                                continue;
                            }
                            for g1 in 0..dg {
                                let u = irr.u[g1][(j, i)];
                                if u.norm() == 0.0 {
                                    continue;
                                }
                                for k in 0..dg {
                                    sys[((j * n + cc) * dg + k, col)] += u * z * g.mult[(g1 * dg + g2) * dg + k];
                                }
                            }
                        }
                    }
                    if i == j {
                        for k in 0..dg {
                            sys[((j * n + a) * dg + k, col)] -= g.unit[k];
                        }
                    }
                }
            }
        }
        let ns = null_space(&sys, tol);
        let dd = self.ambient();
        (0..ns.ncols())
            .map(|col| {
                let mut x = zeros(d * dd, dd);
                for i in 0..d {
                    let coords: Vec<C64> = (0..n).map(|a| ns[(i * n + a, col)]).collect();
                    x.view_mut((i * dd, 0), (dd, dd)).copy_from(&self.element(&coords));
                }
                x
            })
            .collect()
    }

    /// `span{(a ⊗ 1)α(b)} = A ⊗ G`.
    pub fn ellwood(&self, tol: &Tolerance) -> EllwoodReport {
        let (n, dg) = (self.dim(), self.dim_g());
        let alphas: Vec<Vec<ComplexMatrix>> = self.basis.iter().map(|x| self.coact(x)).collect();
        let mut vecs = Vec::new();
        for a in &self.basis {
            for al in &alphas {
                let mut v = zeros(n * dg, 1);
                for (g, xg) in al.iter().enumerate() {
                    for (cc, z) in self.coords(&(a * xg)).into_iter().enumerate() {
                        v[(cc * dg + g, 0)] = z;
                    }
                }
                vecs.push(v);
            }
        }
        let r = rank(&stack_columns(&vecs), tol);
        EllwoodReport { rank: r, expected: n * dg, deficit: n * dg - r, free: r == n * dg }
    }

    /// Image rank of `x ⊗ y ↦ x₁₃ y₂₃` from `Γ(V_π) ⊗ Γ(V_ρ)` against `dim Γ(V_π ⊗ V_ρ)`.
    pub fn m_surjective(&self, tol: &Tolerance) -> FreenessReport {
        let cat = &self.catalog;
        let k = cat.len();
        let dd = self.ambient();
        let spaces: Vec<Vec<ComplexMatrix>> = (0..k).map(|pi| self.multiplicity_space(pi, tol)).collect();
        let mut pairs = Vec::new();
        for pi in 0..k {
            for rho in 0..k {
                let (dp, dr) = (cat.dim(pi), cat.dim(rho));
                let expected: usize = cat.fusion_m[pi][rho].iter().map(|s| spaces[s.irrep].len()).sum();
                let mut vecs = Vec::new();
                for x in &spaces[pi] {
                    for y in &spaces[rho] {
                        let mut v = zeros(dp * dr * dd, dd);
                        for i in 0..dp {
                            for j in 0..dr {
                                let xi = x.view((i * dd, 0), (dd, dd));
                                let yj = y.view((j * dd, 0), (dd, dd));
                                v.view_mut(((i * dr + j) * dd, 0), (dd, dd)).copy_from(&(xi * yj));
                            }
                        }
                        vecs.push(vec_of(&v));
                    }
                }
                let r = if vecs.is_empty() { 0 } else { rank(&stack_columns(&vecs), tol) };
                pairs.push(PairRank { pi: cat.label(pi).into(), rho: cat.label(rho).into(), rank: r, expected });
            }
        }
        FreenessReport { free: pairs.iter().all(|p| p.rank == p.expected), pairs }
    }

    /// `s(π)` with columns a frame of `Γ(V_π)`; `s(1) = 1`.
    /// With `seed`, the multiplicity-space basis is rotated by a random unitary first.
    pub fn coisometry_for(&self, pi: usize, fixed: &FixedPoints, tol: &Tolerance, seed: Option<u64>) -> Result<ComplexMatrix> {
        let dd = self.ambient();
        if pi == self.catalog.trivial() {
            return Ok(identity(dd));
        }
        let d = self.catalog.dim(pi);
        let mut space = self.multiplicity_space(pi, tol);
        if let Some(s) = seed {
            let mut rng = ChaCha8Rng::seed_from_u64(s ^ pi as u64);
            let u = random_unitary(space.len(), &mut rng);
            space = (0..space.len())
                .map(|j| space.iter().enumerate().fold(zeros(d * dd, dd), |acc, (i, x)| acc + x * u[(i, j)]))
                .collect();
        }
        let module = MatrixModule::new(space, identity(d * dd), fixed.wedderburn.clone())?;
        let frame = frame_for_module(&module, tol).map_err(|e| match e {
            Error::NotMorita { residual } => {
                Error::Integrity(format!("no frame for Γ({}) although Ellwood passed (residual {residual:.3e})", self.catalog.label(pi)))
            }
            other => other,
        })?;
        let mut s = zeros(d * dd, frame.len() * dd);
        for (h, z) in frame.iter().enumerate() {
            s.view_mut((0, h * dd), (d * dd, dd)).copy_from(z);
        }
        Ok(s)
    }

    pub fn factor_system_of(&self, tol: &Tolerance) -> Result<Extraction> {
        self.factor_system_with(tol, None)
    }

    /// `γ_π(b) = s(π)*(1 ⊗ b)s(π)` and `ω(π, ρ) = s(π⊗ρ)* s(π)₁₃ s(ρ)₂₃`.
    pub fn factor_system_with(&self, tol: &Tolerance, seed: Option<u64>) -> Result<Extraction> {
        let ell = self.ellwood(tol);
        if !ell.free {
            return Err(Error::NotFree { deficit: ell.deficit });
        }
        let fixed = self.fixed_point_projection(tol)?;
        let w = &fixed.wedderburn;
        let base: FiniteDimCStar = w.algebra.clone();
        let cat = &self.catalog;
        let k = cat.len();
        let dd = self.ambient();
        let s: Vec<ComplexMatrix> = (0..k).map(|pi| self.coisometry_for(pi, &fixed, tol, seed)).collect::<Result<_>>()?;
        let h: Vec<usize> = s.iter().map(|m| m.ncols() / dd).collect();
        let to_b = |m: &ComplexMatrix, rows: usize, cols: usize| -> MatrixOverB {
            let mut out = MatrixOverB::zeros(&base, rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    out.set_entry(r, c, &w.to_block(&m.view((r * dd, c * dd), (dd, dd)).into_owned()));
                }
            }
            out
        };
        let gamma = (0..k)
            .map(|pi| {
                let d = cat.dim(pi);
                let images = base
                    .matrix_units()
                    .into_iter()
                    .map(|u| {
                        let b = w.from_block(&base.matrix_unit(u));
                        to_b(&(s[pi].adjoint() * tensor_product(&identity(d), &b) * &s[pi]), h[pi], h[pi])
                    })
                    .collect();
                StarHom::new(base.clone(), base.clone(), h[pi], images)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut omega = Vec::with_capacity(k);
        for pi in 0..k {
            let mut row = Vec::with_capacity(k);
            for rho in 0..k {
                let rep: Rep = Rep::irrep(cat, pi).tensor(&Rep::irrep(cat, rho), cat);
                let sx = self.coisometry_of_rep(&rep, &s);
                let prod = self.product_13_23(&s[pi], &s[rho], cat.dim(pi), cat.dim(rho));
                let hx = sx.ncols() / dd;
                row.push(to_b(&(sx.adjoint() * prod), hx, h[pi] * h[rho]));
            }
            omega.push(row);
        }
        let system = FactorSystem::new(base, cat.clone(), h, gamma, omega)?;
        Ok(Extraction { system, coisometries: s, fixed })
    }

    /// `s(X) = [(S_k ⊗ 1) s(σ_k)]_k`.
    fn coisometry_of_rep(&self, x: &Rep, s: &[ComplexMatrix]) -> ComplexMatrix {
        let dd = self.ambient();
        let cols: usize = x.parts.iter().map(|p| s[p.irrep].ncols()).sum();
        let mut out = zeros(x.dim * dd, cols);
        let mut c0 = 0;
        for p in &x.parts {
            let block = tensor_product(&p.isometry, &identity(dd)) * &s[p.irrep];
            out.view_mut((0, c0), (x.dim * dd, block.ncols())).copy_from(&block);
            c0 += block.ncols();
        }
        out
    }

    /// `s(π)₁₃ s(ρ)₂₃` with `A`-valued blocks multiplied in order.
    fn product_13_23(&self, sp: &ComplexMatrix, sr: &ComplexMatrix, dp: usize, dr: usize) -> ComplexMatrix {
        let dd = self.ambient();
        let (hp, hr) = (sp.ncols() / dd, sr.ncols() / dd);
        let mut out = zeros(dp * dr * dd, hp * hr * dd);
        for i in 0..dp {
            for j in 0..dr {
                for a in 0..hp {
                    for b in 0..hr {
                        let x = sp.view((i * dd, a * dd), (dd, dd)) * sr.view((j * dd, b * dd), (dd, dd));
                        out.view_mut(((i * dr + j) * dd, (a * hr + b) * dd), (dd, dd)).copy_from(&x);
                    }
                }
            }
        }
        out
    }
}
