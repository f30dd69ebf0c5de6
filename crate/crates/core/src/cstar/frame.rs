use super::{MatrixOverB, Wedderburn};
use crate::error::{Error, Result};
use crate::numerics::{least_squares, psd_sqrt, zeros, ComplexMatrix, Tolerance};

/// A finite-dimensional bimodule realized inside `L(ℂ^q, ℂ^p)`.
///
/// The left inner product is `x y*`, the right one `x* y` read in the block
/// coordinates of `base`, and `B` acts on the right through `base.from_block`.
#[derive(Debug, Clone)]
pub struct MatrixModule {
    pub basis: Vec<ComplexMatrix>,
    pub left_unit: ComplexMatrix,
    pub base: Wedderburn,
}

impl MatrixModule {
    pub fn new(basis: Vec<ComplexMatrix>, left_unit: ComplexMatrix, base: Wedderburn) -> Result<Self> {
        let p = left_unit.nrows();
        let q = base.ambient_dim();
        if left_unit.ncols() != p || basis.iter().any(|x| x.shape() != (p, q)) {
            return Err(Error::Shape(format!("module elements must be {p}×{q}")));
        }
        Ok(MatrixModule { basis, left_unit, base })
    }

    pub fn left_inner(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
        x * y.adjoint()
    }

    pub fn right_inner(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> MatrixOverB {
        self.base.to_block(&(x.adjoint() * y))
    }

    pub fn right_act(&self, x: &ComplexMatrix, b: &MatrixOverB) -> ComplexMatrix {
        x * self.base.from_block(b)
    }

    /// `B`-valued Gram matrix `[⟨x_i, x_j⟩]` as an element of `M_n(B)`.
    pub fn gram(&self, xs: &[ComplexMatrix]) -> MatrixOverB {
        let mut g = MatrixOverB::zeros(&self.base.algebra, xs.len(), xs.len());
        for (i, x) in xs.iter().enumerate() {
            for (j, y) in xs.iter().enumerate() {
                g.set_entry(i, j, &self.right_inner(x, y));
            }
        }
        g
    }

    /// `Σ x_i ⟨x_i, x⟩` for a candidate frame.
    pub fn fourier(&self, frame: &[ComplexMatrix], x: &ComplexMatrix) -> ComplexMatrix {
        frame.iter().fold(zeros(x.nrows(), x.ncols()), |acc, f| acc + self.right_act(f, &self.right_inner(f, x)))
    }

    /// `‖Σ ⟨x_i, x_i⟩_L − 1‖`.
    pub fn frame_residual(&self, frame: &[ComplexMatrix]) -> f64 {
        let s = frame.iter().fold(zeros(self.left_unit.nrows(), self.left_unit.ncols()), |acc, x| acc + self.left_inner(x, x));
        crate::numerics::op_norm(&(s - &self.left_unit))
    }
}

/// Finds `z_1, …, z_n` with `Σ z_k z_k* = 1`: solve `1 = Σ ⟨x_p, y_p⟩`, factor the
/// Gram matrix `Y = [⟨y_p, y_q⟩]` as `R R*` and set `z_k = Σ_p x_p · R_{pk}`.
pub fn frame_for_module(module: &MatrixModule, tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
    let xs = &module.basis;
    let n = xs.len();
    let target = &module.left_unit;
    let p = target.nrows();
    if n == 0 {
        return Err(Error::NotMorita { residual: crate::numerics::op_norm(target) });
    }
    let mut a = zeros(p * p, n * n);
    for (i, xi) in xs.iter().enumerate() {
        for (j, xj) in xs.iter().enumerate() {
            for (idx, z) in module.left_inner(xi, xj).iter().enumerate() {
                a[(idx, i * n + j)] = *z;
            }
        }
    }
    let rhs = ComplexMatrix::from_column_slice(p * p, 1, target.as_slice());
    let (coef, resid) = least_squares(&a, &rhs, tol);
    if resid > 1e3 * tol.bound(target.norm()) {
        return Err(Error::NotMorita { residual: resid });
    }
    let ys: Vec<ComplexMatrix> = (0..n)
        .map(|i| (0..n).fold(zeros(xs[0].nrows(), xs[0].ncols()), |acc, j| acc + &xs[j] * coef[(i * n + j, 0)].conj()))
        .collect();
    let y = module.gram(&ys);
    let blocks = y.blocks.iter().map(|b| psd_sqrt(b, tol)).collect::<Result<Vec<_>>>()?;
    let r = MatrixOverB { rows: n, cols: n, blocks };
    let frame = (0..n)
        .map(|k| (0..n).fold(zeros(xs[0].nrows(), xs[0].ncols()), |acc, i| acc + module.right_act(&xs[i], &r.entry(i, k))))
        .collect();
    Ok(frame)
}

/// Random full bimodule `U P (ℂ^k ⊗ B)` with `B` embedded in `M_q` through a
/// random unitary, `P ∈ M_k(B)` a random projection of non-zero rank in every
/// block and `U` a random unitary on `ℂ^k ⊗ ℂ^q`.
pub fn random_module(b: &super::FiniteDimCStar, rng: &mut impl rand::Rng) -> MatrixModule {
    use crate::numerics::{random_complex, random_unitary, range_basis, tensor_product};
    let k = rng.random_range(1..=3usize);
    let mults: Vec<usize> = b.blocks.iter().map(|_| rng.random_range(1..=2usize)).collect();
    let q: usize = b.blocks.iter().zip(&mults).map(|(n, m)| n * m).sum();
    let base = Wedderburn { algebra: b.clone(), multiplicities: mults, w: random_unitary(q, rng) };
    let tol = Tolerance::default();
    let mut proj = MatrixOverB::zeros(b, k, k);
    for (blk, &n) in proj.blocks.iter_mut().zip(&b.blocks) {
        let r = rng.random_range(1..=k * n);
        let v = range_basis(&random_complex(k * n, r, rng), &tol);
        *blk = &v * v.adjoint();
    }
    let mut p_real = zeros(k * q, k * q);
    for s in 0..k {
        for t in 0..k {
            let mut e = zeros(k, k);
            e[(s, t)] = crate::numerics::cr(1.0);
            p_real += tensor_product(&e, &base.from_block(&proj.entry(s, t)));
        }
    }
    let u = random_unitary(k * q, rng);
    let up = &u * &p_real;
    let mut basis = Vec::new();
    for s in 0..k {
        let mut e = zeros(k, 1);
        e[(s, 0)] = crate::numerics::cr(1.0);
        for unit in b.matrix_units() {
            basis.push(&up * tensor_product(&e, &base.from_block(&b.matrix_unit(unit))));
        }
    }
    let left_unit = &up * u.adjoint();
    MatrixModule { basis, left_unit, base }
}
