use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{FiniteDimCStar, MatrixOverB};
use crate::error::{Error, Result};
use crate::numerics::{
    c, cluster, cr, hermitian_eigen, identity, null_space, op_norm, stack_columns, tensor_product, zeros, ComplexMatrix,
    Tolerance, EIGEN_CLUSTER,
};

/// A unital *-subalgebra of `M_D` brought to block form: `W* b W = ⊕ bᵢ ⊗ 1_{mᵢ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wedderburn {
    pub algebra: FiniteDimCStar,
    pub multiplicities: Vec<usize>,
    pub w: ComplexMatrix,
}

impl Wedderburn {
    /// `B` acting on `⊕ ℂ^{nᵢ}` block-diagonally.
    pub fn standard(b: &FiniteDimCStar) -> Self {
        let d: usize = b.blocks.iter().sum();
        Wedderburn { algebra: b.clone(), multiplicities: vec![1; b.blocks.len()], w: identity(d) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn from_block(&self, b: &MatrixOverB) -> ComplexMatrix {
        let mut m = zeros(self.ambient_dim(), self.ambient_dim());
        let mut off = 0;
        for (i, (&n, &mi)) in self.algebra.blocks.iter().zip(&self.multiplicities).enumerate() {
            m.view_mut((off, off), (n * mi, n * mi)).copy_from(&tensor_product(&b.blocks[i], &identity(mi)));
            off += n * mi;
        }
        &self.w * m * self.w.adjoint()
    }

    /// Block coordinates of `m`, averaging over multiplicity copies.
    pub fn to_block(&self, m: &ComplexMatrix) -> MatrixOverB {
        let x = self.w.adjoint() * m * &self.w;
        let mut out = MatrixOverB::zeros(&self.algebra, 1, 1);
        let mut off = 0;
        for (i, (&n, &mi)) in self.algebra.blocks.iter().zip(&self.multiplicities).enumerate() {
            for j in 0..n {
                for k in 0..n {
                    let s: crate::numerics::C64 = (0..mi).map(|t| x[(off + j * mi + t, off + k * mi + t)]).sum();
                    out.blocks[i][(j, k)] = s / cr(mi as f64);
                }
            }
            off += n * mi;
        }
        out
    }

    /// Worst `‖from_block(to_block(a)) − a‖` over the given matrices.
    pub fn residual(&self, basis: &[ComplexMatrix]) -> f64 {
        basis.iter().map(|a| op_norm(&(self.from_block(&self.to_block(a)) - a))).fold(0.0, f64::max)
    }

    /// Numerical Wedderburn decomposition of the unital *-algebra spanned by `basis` inside `M_D`.
    pub fn decompose(basis: &[ComplexMatrix], tol: &Tolerance, seed: u64) -> Result<Self> {
        let d = basis.first().map_or(0, |a| a.nrows());
        if d == 0 || basis.iter().any(|a| a.shape() != (d, d)) {
            return Err(Error::Shape("Wedderburn input must be non-empty square matrices of one size".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let center = center_basis(basis, tol);
        if center.is_empty() {
            return Err(Error::Integrity("algebra has trivial center".into()));
        }
        let mut z = identity(d) * cr(10.0);
        for zc in &center {
            let (h1, h2) = herm_parts(zc);
            z += h1 * cr(rng.sample::<f64, _>(StandardNormal)) + h2 * cr(rng.sample::<f64, _>(StandardNormal));
        }
        let (vals, vecs) = hermitian_eigen(&z);
        let mut blocks = Vec::new();
        let mut mults = Vec::new();
        let mut columns: Vec<ComplexMatrix> = Vec::new();
        for range in cluster(&vals, EIGEN_CLUSTER.max(tol.atol)) {
            let q = vecs.columns(range.start, range.len()).into_owned();
            let p = &q * q.adjoint();
            let corner: Vec<ComplexMatrix> = basis.iter().map(|a| &p * a * &p).collect();
            let (n, m, cols) = split_block(&q, &corner, &mut rng)?;
            blocks.push(n);
            mults.push(m);
            columns.push(cols);
        }
        let mut w = zeros(d, d);
        let mut off = 0;
        for cols in &columns {
            w.view_mut((0, off), (d, cols.ncols())).copy_from(cols);
            off += cols.ncols();
        }
        if off != d {
            return Err(Error::Integrity(format!("Wedderburn columns span {off} of {d} dimensions; algebra is not unital")));
        }
        let out = Wedderburn { algebra: FiniteDimCStar::new(blocks)?, multiplicities: mults, w };
        let unitary = op_norm(&(out.w.adjoint() * &out.w - identity(d)));
        let res = out.residual(basis).max(unitary);
        let scale = basis.iter().map(op_norm).fold(1.0, f64::max);
        if res > 1e3 * tol.bound(scale) {
            return Err(Error::Integrity(format!("Wedderburn decomposition residual {res:.3e}")));
        }
        if out.algebra.dim() != crate::numerics::rank(&stack_columns(basis), tol) {
            return Err(Error::Integrity("Wedderburn block dimensions do not match the algebra dimension".into()));
        }
        Ok(out)
    }
}

fn herm_parts(z: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let h1 = (z + z.adjoint()) * cr(0.5);
    let h2 = (z - z.adjoint()) * c(0.0, -0.5);
    (h1, h2)
}

/// Basis of the center of the algebra spanned by `basis`.
pub(crate) fn center_basis(basis: &[ComplexMatrix], tol: &Tolerance) -> Vec<ComplexMatrix> {
    let k = basis.len();
    let d = basis[0].nrows();
    let mut sys = zeros(k * d * d, k);
    for (l, al) in basis.iter().enumerate() {
        for (j, aj) in basis.iter().enumerate() {
            let comm = al * aj - aj * al;
            for (idx, z) in comm.iter().enumerate() {
                sys[(j * d * d + idx, l)] = *z;
            }
        }
    }
    let ns = null_space(&sys, tol);
    (0..ns.ncols())
        .map(|col| basis.iter().enumerate().fold(zeros(d, d), |acc, (l, a)| acc + a * ns[(l, col)]))
        .collect()
}

/// Splits one simple corner (acting on the range of `q`) into matrix units.
/// Returns `(n, m, columns)` with columns `e_{j1} u_t` in order `j·m + t`.
fn split_block(q: &ComplexMatrix, corner: &[ComplexMatrix], rng: &mut ChaCha8Rng) -> Result<(usize, usize, ComplexMatrix)> {
    let r = q.ncols();
    let mut h = zeros(r, r);
    for a in corner {
        let (h1, h2) = herm_parts(&(q.adjoint() * a * q));
        h += h1 * cr(rng.sample::<f64, _>(StandardNormal)) + h2 * cr(rng.sample::<f64, _>(StandardNormal));
    }
    let (vals, vecs) = hermitian_eigen(&h);
    let ranges = cluster(&vals, EIGEN_CLUSTER);
    let m = ranges[0].len();
    if ranges.iter().any(|rg| rg.len() != m) {
        return Err(Error::Integrity("simple block has unequal eigenvalue multiplicities".into()));
    }
    let n = ranges.len();
    let bs: Vec<ComplexMatrix> = ranges.iter().map(|rg| q * vecs.columns(rg.start, rg.len())).collect();
    let mut cols = zeros(q.nrows(), n * m);
    cols.view_mut((0, 0), (q.nrows(), m)).copy_from(&bs[0]);
    for (j, bj) in bs.iter().enumerate().skip(1) {
        let mut found = None;
        for _ in 0..8 {
            let mut a = zeros(q.nrows(), q.nrows());
            for x in corner {
                a += x * c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal));
            }
            let mm = bs[0].adjoint() * a * bj;
            let cc = (&mm * mm.adjoint()).trace().re / m as f64;
            if cc > 1e-6 {
                found = Some(mm / cr(cc.sqrt()));
                break;
            }
        }
        let u = found.ok_or_else(|| Error::Integrity("could not connect minimal projections".into()))?;
        cols.view_mut((0, j * m), (q.nrows(), m)).copy_from(&(bj * u.adjoint()));
    }
    Ok((n, m, cols))
}
