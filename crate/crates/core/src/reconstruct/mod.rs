//! The unitary tensor functor `V ↦ Γ(V)` of a factor system and the algebra it builds.

mod algebra;

pub use algebra::{assemble_algebra, build_algebra, AlgebraReport, GradedAlgebra, SummandInfo};

use serde::Serialize;

use crate::cstar::{apply_entrywise, FiniteDimCStar, MatrixOverB};
use crate::factor::{FactorSystem, Rep};
use crate::numerics::{identity, op_norm, range_basis, span_rank, zeros, ComplexMatrix, Tolerance, C64};

/// `Γ(X) = γ_X(1)(H_X ⊗ B)` with a Frobenius-orthonormal linear basis.
#[derive(Debug, Clone)]
pub struct GammaSpace {
    pub h_dim: usize,
    /// Orthonormal basis of the range of `γ_X(1)` in each block.
    pub ranges: Vec<ComplexMatrix>,
    /// Linear basis `q·e_cᵀ`, ordered by block, range vector, column.
    pub basis: Vec<MatrixOverB>,
}

impl GammaSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn block_ranks(&self) -> Vec<usize> {
        self.ranges.iter().map(|q| q.ncols()).collect()
    }

    /// Coordinates of `x ∈ Γ(X)` in [`GammaSpace::basis`].
    pub fn coords(&self, x: &MatrixOverB) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.dim());
        for (q, blk) in self.ranges.iter().zip(&x.blocks) {
            let proj = q.adjoint() * blk;
            for r in 0..proj.nrows() {
                for c in 0..proj.ncols() {
                    out.push(proj[(r, c)]);
                }
            }
        }
        out
    }

    pub fn element(&self, coords: &[C64]) -> MatrixOverB {
        let mut acc = MatrixOverB { rows: self.h_dim, cols: 1, blocks: self.basis.first().map_or(Vec::new(), |b| b.blocks.iter().map(|m| zeros(m.nrows(), m.ncols())).collect()) };
        for (e, z) in self.basis.iter().zip(coords) {
            acc = acc.add(&e.scale(*z));
        }
        acc
    }
}

pub fn gamma_space_of(fs: &FactorSystem, x: &Rep, tol: &Tolerance) -> GammaSpace {
    let p = fs.gamma_of(x).one();
    build_space(&fs.base, &p, tol)
}

pub fn gamma_space(fs: &FactorSystem, pi: usize, tol: &Tolerance) -> GammaSpace {
    gamma_space_of(fs, &fs.irrep(pi), tol)
}

fn build_space(base: &FiniteDimCStar, p: &MatrixOverB, tol: &Tolerance) -> GammaSpace {
    let h_dim = p.rows;
    let mut ranges = Vec::new();
    let mut basis = Vec::new();
    for (i, (blk, &n)) in p.blocks.iter().zip(&base.blocks).enumerate() {
        let full = blk.nrows();
        let q = if op_norm(&(blk - identity(full))) <= tol.atol { identity(full) } else { range_basis(blk, tol) };
        for r in 0..q.ncols() {
            for c in 0..n {
                let mut x = MatrixOverB::zeros(base, h_dim, 1);
                let mut m = zeros(full, n);
                m.set_column(c, &q.column(r));
                x.blocks[i] = m;
                basis.push(x);
            }
        }
        ranges.push(q);
    }
    GammaSpace { h_dim, ranges, basis }
}

/// `m_{X,Y}(x ⊗ y) = ω(X, Y)·(id ⊗ γ_Y)(x)·y`.
pub fn mult(fs: &FactorSystem, x_rep: &Rep, y_rep: &Rep, x: &MatrixOverB, y: &MatrixOverB) -> MatrixOverB {
    let gy = fs.gamma_of(y_rep);
    fs.omega_of(x_rep, y_rep).mul(&apply_entrywise(&fs.base, &gy, x)).mul(y)
}

pub fn mult_map(fs: &FactorSystem, pi: usize, rho: usize, x: &MatrixOverB, y: &MatrixOverB) -> MatrixOverB {
    fs.omega[pi][rho].mul(&apply_entrywise(&fs.base, &fs.gamma[rho], x)).mul(y)
}

fn flatten(x: &MatrixOverB) -> ComplexMatrix {
    let data: Vec<C64> = x.blocks.iter().flat_map(|b| b.iter().copied().collect::<Vec<_>>()).collect();
    ComplexMatrix::from_column_slice(data.len(), 1, &data)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PairRank {
    pub pi: String,
    pub rho: String,
    pub rank: usize,
    pub expected: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FunctorReport {
    pub normalization: f64,
    pub adjoint: f64,
    pub associativity: f64,
    pub isometry: f64,
    pub surjectivity: Vec<PairRank>,
    pub pass: bool,
}

/// Image rank of `m_{π,ρ}` against `dim Γ(V_π ⊗ V_ρ)` for every pair.
pub fn m_ranks(fs: &FactorSystem, tol: &Tolerance) -> Vec<PairRank> {
    let k = fs.catalog.len();
    let spaces: Vec<GammaSpace> = (0..k).map(|pi| gamma_space(fs, pi, tol)).collect();
    let mut out = Vec::new();
    for pi in 0..k {
        for rho in 0..k {
            let target = fs.tensor(pi, rho);
            let expected = gamma_space_of(fs, &target, tol).dim();
            let cols: Vec<ComplexMatrix> = spaces[pi]
                .basis
                .iter()
                .flat_map(|x| spaces[rho].basis.iter().map(move |y| (x, y)))
                .map(|(x, y)| flatten(&mult_map(fs, pi, rho, x, y)))
                .collect();
            let rank = if cols.is_empty() { 0 } else { span_rank(&cols, tol).unwrap_or(0) };
            out.push(PairRank { pi: fs.catalog.label(pi).into(), rho: fs.catalog.label(rho).into(), rank, expected });
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FreenessReport {
    pub free: bool,
    pub pairs: Vec<PairRank>,
}

pub fn check_free_m_surjective(fs: &FactorSystem, tol: &Tolerance) -> FreenessReport {
    let pairs = m_ranks(fs, tol);
    FreenessReport { free: pairs.iter().all(|p| p.rank == p.expected), pairs }
}

pub fn verify_unitary_tensor_functor(fs: &FactorSystem, tol: &Tolerance) -> FunctorReport {
    let k = fs.catalog.len();
    let base = &fs.base;
    let t = fs.catalog.trivial();
    let spaces: Vec<GammaSpace> = (0..k).map(|pi| gamma_space(fs, pi, tol)).collect();
    let units: Vec<MatrixOverB> = base.matrix_units().into_iter().map(|u| base.matrix_unit(u)).collect();

    let mut normalization = if spaces[t].dim() == base.dim() { 0.0 } else { f64::INFINITY };
    for pi in 0..k {
        for x in &spaces[pi].basis {
            for b in &units {
                normalization = normalization.max(mult_map(fs, pi, t, x, b).dist(&x.mul(b)));
                let bx = fs.gamma[pi].apply(b).mul(x);
                normalization = normalization.max(mult_map(fs, t, pi, b, x).dist(&bx));
            }
        }
    }

    let mut adjoint: f64 = 0.0;
    for pi in 0..k {
        for rho in 0..k {
            let pr = fs.tensor(pi, rho);
            for s in &pr.parts {
                let one = fs.irrep(s.irrep);
                let fwd = fs.h_map(&pr, &one, &s.isometry);
                let back = fs.h_map(&one, &pr, &s.isometry.adjoint());
                adjoint = adjoint.max(op_norm(&(back - fwd.adjoint())));
            }
        }
    }

    let mut associativity: f64 = 0.0;
    for pi in 0..k {
        for rho in 0..k {
            for sigma in 0..k {
                let (xp, xr, xs) = (fs.irrep(pi), fs.irrep(rho), fs.irrep(sigma));
                let rs = xr.tensor(&xs, &fs.catalog);
                let pr = xp.tensor(&xr, &fs.catalog);
                let lrep = xp.tensor(&rs, &fs.catalog);
                let rrep = pr.tensor(&xs, &fs.catalog);
                let ht = MatrixOverB::from_scalar(base, &fs.h_map(&lrep, &rrep, &identity(lrep.dim)));
                for x in &spaces[pi].basis {
                    for y in &spaces[rho].basis {
                        let xy = mult(fs, &xp, &xr, x, y);
                        for z in &spaces[sigma].basis {
                            let lhs = mult(fs, &xp, &rs, x, &mult(fs, &xr, &xs, y, z));
                            let rhs = ht.mul(&mult(fs, &pr, &xs, &xy, z));
                            associativity = associativity.max(lhs.dist(&rhs));
                        }
                    }
                }
            }
        }
    }

    let mut isometry: f64 = 0.0;
    for pi in 0..k {
        for rho in 0..k {
            let mut images = Vec::new();
            let mut pre = Vec::new();
            for x in &spaces[pi].basis {
                for y in &spaces[rho].basis {
                    let u = apply_entrywise(base, &fs.gamma[rho], x).mul(y);
                    images.push(fs.omega[pi][rho].mul(&u));
                    pre.push(u);
                }
            }
            if images.is_empty() {
                continue;
            }
            let z = MatrixOverB::hstack(base, &images);
            let u = MatrixOverB::hstack(base, &pre);
            let diff = z.adjoint().mul(&z).sub(&u.adjoint().mul(&u));
            for a in 0..diff.rows {
                for b in 0..diff.cols {
                    isometry = isometry.max(diff.entry(a, b).norm());
                }
            }
        }
    }

    let surjectivity = m_ranks(fs, tol);
    let pass = normalization.max(adjoint).max(associativity).max(isometry) <= tol.atol
        && surjectivity.iter().all(|p| p.rank == p.expected);
    FunctorReport { normalization, adjoint, associativity, isometry, surjectivity, pass }
}
