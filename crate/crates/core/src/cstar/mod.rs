//! Finite-dimensional C*-algebras `B = ⊕ᵢ M_{nᵢ}(ℂ)` and matrices over them.
//!
//! An element of `L(ℂ^c, ℂ^r) ⊗ B` is stored per block as an
//! `(r·nᵢ) × (c·nᵢ)` matrix; row `h·nᵢ + j` pairs the `ℂ^r` index `h` with the
//! `M_{nᵢ}` index `j`.

mod frame;
mod wedderburn;

pub use frame::{frame_for_module, random_module, MatrixModule};
pub use wedderburn::Wedderburn;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    cr, identity, op_norm, projection_residual, range_basis, rank, tensor_product, zeros, ComplexMatrix, Tolerance,
};

/// Block algebra `⊕ᵢ M_{nᵢ}(ℂ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteDimCStar {
    pub blocks: Vec<usize>,
}

impl FiniteDimCStar {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::Invalid(format!("block sizes must be a non-empty list of positive counts, got {blocks:?}")));
        }
        Ok(FiniteDimCStar { blocks })
    }

    pub fn complex() -> Self {
        FiniteDimCStar { blocks: vec![1] }
    }

    /// Vector dimension `Σ nᵢ²`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    /// Matrix units `(block, row, col)` in canonical order.
    pub fn matrix_units(&self) -> Vec<(usize, usize, usize)> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(i, &n)| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .collect()
    }

    pub fn unit(&self) -> MatrixOverB {
        MatrixOverB::identity(self, 1)
    }

    pub fn matrix_unit(&self, (i, j, k): (usize, usize, usize)) -> MatrixOverB {
        let mut m = MatrixOverB::zeros(self, 1, 1);
        m.blocks[i][(j, k)] = cr(1.0);
        m
    }

    /// Elements of `B` from coordinates in the matrix-unit basis.
    pub fn from_coords(&self, coords: &[crate::numerics::C64]) -> MatrixOverB {
        let mut m = MatrixOverB::zeros(self, 1, 1);
        for (&(i, j, k), &z) in self.matrix_units().iter().zip(coords) {
            m.blocks[i][(j, k)] = z;
        }
        m
    }

    pub fn coords(&self, b: &MatrixOverB) -> Vec<crate::numerics::C64> {
        self.matrix_units().iter().map(|&(i, j, k)| b.blocks[i][(j, k)]).collect()
    }
}

/// Element of `L(ℂ^cols, ℂ^rows) ⊗ B`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOverB {
    pub rows: usize,
    pub cols: usize,
    pub blocks: Vec<ComplexMatrix>,
}

/// An element of `B` is a 1 × 1 matrix over `B`.
pub type CStarElement = MatrixOverB;

impl MatrixOverB {
    pub fn zeros(b: &FiniteDimCStar, rows: usize, cols: usize) -> Self {
        MatrixOverB { rows, cols, blocks: b.blocks.iter().map(|&n| zeros(rows * n, cols * n)).collect() }
    }

    pub fn identity(b: &FiniteDimCStar, k: usize) -> Self {
        MatrixOverB { rows: k, cols: k, blocks: b.blocks.iter().map(|&n| identity(k * n)).collect() }
    }

    /// `m ⊗ 1_B` for a scalar matrix `m`.
    pub fn from_scalar(b: &FiniteDimCStar, m: &ComplexMatrix) -> Self {
        MatrixOverB {
            rows: m.nrows(),
            cols: m.ncols(),
            blocks: b.blocks.iter().map(|&n| tensor_product(m, &identity(n))).collect(),
        }
    }

    /// Checks the block shapes against `b`.
    pub fn from_blocks(b: &FiniteDimCStar, rows: usize, cols: usize, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.len() != b.blocks.len()
            || blocks.iter().zip(&b.blocks).any(|(m, &n)| m.shape() != (rows * n, cols * n))
        {
            return Err(Error::Shape(format!("matrix over B with shape {rows}×{cols} does not fit blocks {:?}", b.blocks)));
        }
        Ok(MatrixOverB { rows, cols, blocks })
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|m| m.nrows().checked_div(self.rows).or(m.ncols().checked_div(self.cols)).unwrap_or(0)).collect()
    }

    pub fn base(&self, b: &FiniteDimCStar) -> bool {
        self.blocks.len() == b.blocks.len()
            && self.blocks.iter().zip(&b.blocks).all(|(m, &n)| m.shape() == (self.rows * n, self.cols * n))
    }

    pub fn adjoint(&self) -> Self {
        MatrixOverB { rows: self.cols, cols: self.rows, blocks: self.blocks.iter().map(|m| m.adjoint()).collect() }
    }

    pub fn mul(&self, other: &MatrixOverB) -> Self {
        assert_eq!(self.cols, other.rows, "matrix over B: inner dimensions differ");
        MatrixOverB {
            rows: self.rows,
            cols: other.cols,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn add(&self, other: &MatrixOverB) -> Self {
        MatrixOverB { rows: self.rows, cols: self.cols, blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &MatrixOverB) -> Self {
        MatrixOverB { rows: self.rows, cols: self.cols, blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, z: crate::numerics::C64) -> Self {
        MatrixOverB { rows: self.rows, cols: self.cols, blocks: self.blocks.iter().map(|a| a * z).collect() }
    }

    /// C*-norm: maximum of the block operator norms.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(op_norm).fold(0.0, f64::max)
    }

    pub fn dist(&self, other: &MatrixOverB) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.sub(other).norm()
    }

    /// `1_k ⊗ self`.
    pub fn amplify(&self, k: usize) -> Self {
        MatrixOverB {
            rows: self.rows * k,
            cols: self.cols * k,
            blocks: self.blocks.iter().map(|m| tensor_product(&identity(k), m)).collect(),
        }
    }

    /// Left multiplication by a scalar matrix: `(m ⊗ 1_B)·self`.
    pub fn lmul_scalar(&self, m: &ComplexMatrix) -> Self {
        MatrixOverB {
            rows: m.nrows(),
            cols: self.cols,
            blocks: self
                .blocks
                .iter()
                .zip(self.block_sizes())
                .map(|(x, n)| tensor_product(m, &identity(n)) * x)
                .collect(),
        }
    }

    pub fn rmul_scalar(&self, m: &ComplexMatrix) -> Self {
        MatrixOverB {
            rows: self.rows,
            cols: m.ncols(),
            blocks: self
                .blocks
                .iter()
                .zip(self.block_sizes())
                .map(|(x, n)| x * tensor_product(m, &identity(n)))
                .collect(),
        }
    }

    /// Entry `(h, h')` as an element of `B`.
    pub fn entry(&self, h: usize, hp: usize) -> MatrixOverB {
        let sizes = self.block_sizes();
        MatrixOverB {
            rows: 1,
            cols: 1,
            blocks: self.blocks.iter().zip(sizes).map(|(m, n)| m.view((h * n, hp * n), (n, n)).into_owned()).collect(),
        }
    }

    pub fn set_entry(&mut self, h: usize, hp: usize, b: &MatrixOverB) {
        let sizes = self.block_sizes();
        for ((m, n), v) in self.blocks.iter_mut().zip(sizes).zip(&b.blocks) {
            m.view_mut((h * n, hp * n), (n, n)).copy_from(v);
        }
    }

    /// Sub-matrix of rows `r0..r0+nr` and columns `c0..c0+nc` (in `ℂ^rows`/`ℂ^cols` indices).
    pub fn sub_matrix(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> MatrixOverB {
        let sizes = self.block_sizes();
        MatrixOverB {
            rows: nr,
            cols: nc,
            blocks: self.blocks.iter().zip(sizes).map(|(m, n)| m.view((r0 * n, c0 * n), (nr * n, nc * n)).into_owned()).collect(),
        }
    }

    pub fn set_sub_matrix(&mut self, r0: usize, c0: usize, x: &MatrixOverB) {
        let sizes = self.block_sizes();
        for ((m, n), v) in self.blocks.iter_mut().zip(sizes).zip(&x.blocks) {
            m.view_mut((r0 * n, c0 * n), (x.rows * n, x.cols * n)).copy_from(v);
        }
    }

    pub fn block_diag(b: &FiniteDimCStar, parts: &[MatrixOverB]) -> MatrixOverB {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = MatrixOverB::zeros(b, rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            out.set_sub_matrix(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        out
    }

    pub fn vstack(b: &FiniteDimCStar, parts: &[MatrixOverB]) -> MatrixOverB {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.first().map_or(0, |p| p.cols);
        let mut out = MatrixOverB::zeros(b, rows, cols);
        let mut r = 0;
        for p in parts {
            out.set_sub_matrix(r, 0, p);
            r += p.rows;
        }
        out
    }

    pub fn hstack(b: &FiniteDimCStar, parts: &[MatrixOverB]) -> MatrixOverB {
        let rows = parts.first().map_or(0, |p| p.rows);
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = MatrixOverB::zeros(b, rows, cols);
        let mut c = 0;
        for p in parts {
            out.set_sub_matrix(0, c, p);
            c += p.cols;
        }
        out
    }

    pub fn projection_residual(&self) -> f64 {
        self.blocks.iter().map(projection_residual).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(crate::numerics::is_finite)
    }
}

/// Per-block ranks of a projection.
pub type RankVector = Vec<usize>;

pub fn rank_vector(p: &MatrixOverB, tol: &Tolerance) -> RankVector {
    p.blocks.iter().map(|m| rank(m, tol)).collect()
}

/// `(id ⊗ φ)(x)` for `x ∈ L(K, K') ⊗ B` and `φ: B → L(H) ⊗ B`, giving an element of
/// `L(K ⊗ H, K' ⊗ H) ⊗ B`.
pub fn apply_entrywise(b: &FiniteDimCStar, phi: &StarHom, x: &MatrixOverB) -> MatrixOverB {
    let h = phi.h_dim;
    let mut out = MatrixOverB::zeros(b, x.rows * h, x.cols * h);
    for (u_idx, &(i, j, k)) in b.matrix_units().iter().enumerate() {
        let n = b.blocks[i];
        let img = &phi.images[u_idx];
        for r in 0..x.rows {
            for c in 0..x.cols {
                let z = x.blocks[i][(r * n + j, c * n + k)];
                if z.norm() == 0.0 {
                    continue;
                }
                let mut e = zeros(x.rows, x.cols);
                e[(r, c)] = z;
                for (ob, ib) in out.blocks.iter_mut().zip(&img.blocks) {
                    *ob += tensor_product(&e, ib);
                }
            }
        }
    }
    out
}

/// A linear map `B → L(H) ⊗ B'` given by its values on matrix units of `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarHom {
    pub source: FiniteDimCStar,
    pub target: FiniteDimCStar,
    pub h_dim: usize,
    pub images: Vec<MatrixOverB>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarHomCheck {
    pub ok: bool,
    pub multiplicativity: f64,
    pub star: f64,
}

impl StarHom {
    pub fn new(source: FiniteDimCStar, target: FiniteDimCStar, h_dim: usize, images: Vec<MatrixOverB>) -> Result<Self> {
        let units = source.dim();
        if images.len() != units {
            return Err(Error::Shape(format!("star hom needs {units} matrix-unit images, got {}", images.len())));
        }
        for m in &images {
            if m.rows != h_dim || m.cols != h_dim || !m.base(&target) {
                return Err(Error::Shape(format!("star hom image does not lie in L(ℂ^{h_dim}) ⊗ B")));
            }
        }
        Ok(StarHom { source, target, h_dim, images })
    }

    /// `b ↦ 1_k ⊗ b` on `B`.
    pub fn amplification(b: &FiniteDimCStar, k: usize) -> Self {
        let images = b.matrix_units().into_iter().map(|u| b.matrix_unit(u).amplify(k)).collect();
        StarHom { source: b.clone(), target: b.clone(), h_dim: k, images }
    }

    pub fn apply(&self, x: &MatrixOverB) -> MatrixOverB {
        let mut out = MatrixOverB::zeros(&self.target, self.h_dim, self.h_dim);
        for (idx, &(i, j, k)) in self.source.matrix_units().iter().enumerate() {
            let z = x.blocks[i][(j, k)];
            if z.norm() != 0.0 {
                out = out.add(&self.images[idx].scale(z));
            }
        }
        out
    }

    pub fn one(&self) -> MatrixOverB {
        self.apply(&self.source.unit())
    }

    pub fn verify(&self, tol: &Tolerance) -> StarHomCheck {
        let units = self.source.matrix_units();
        let mut mult: f64 = 0.0;
        let mut star: f64 = 0.0;
        for (a, &(i, j, k)) in units.iter().enumerate() {
            for (bb, &(i2, j2, k2)) in units.iter().enumerate() {
                let prod = self.images[a].mul(&self.images[bb]);
                let expect = if i == i2 && k == j2 {
                    let idx = units.iter().position(|&u| u == (i, j, k2)).expect("unit");
                    self.images[idx].clone()
                } else {
                    MatrixOverB::zeros(&self.target, self.h_dim, self.h_dim)
                };
                mult = mult.max(prod.dist(&expect));
            }
            let t = units.iter().position(|&u| u == (i, k, j)).expect("unit");
            star = star.max(self.images[a].adjoint().dist(&self.images[t]));
        }
        StarHomCheck { ok: mult <= tol.atol && star <= tol.atol, multiplicativity: mult, star }
    }
}

/// Decides Murray–von Neumann equivalence of projections `p ∈ L(H) ⊗ B` and
/// `q ∈ L(H') ⊗ B` by comparing rank vectors. On success returns a partial
/// isometry `v ∈ L(H, H') ⊗ B` with `v*v = p` and `vv* = q`.
pub fn mvn_equivalent(p: &MatrixOverB, q: &MatrixOverB, tol: &Tolerance) -> Result<Option<MatrixOverB>> {
    if p.blocks.len() != q.blocks.len() || p.block_sizes() != q.block_sizes() {
        return Err(Error::Shape("projections live over different base algebras".into()));
    }
    for x in [p, q] {
        let r = x.projection_residual();
        if r > tol.bound(1.0) {
            return Err(Error::NotProjection { residual: r });
        }
    }
    if rank_vector(p, tol) != rank_vector(q, tol) {
        return Ok(None);
    }
    let blocks = p
        .blocks
        .iter()
        .zip(&q.blocks)
        .map(|(pb, qb)| {
            let bp = range_basis(pb, tol);
            let bq = range_basis(qb, tol);
            bq * bp.adjoint()
        })
        .collect();
    Ok(Some(MatrixOverB { rows: q.rows, cols: p.rows, blocks }))
}

#[cfg(test)]
mod tests;
