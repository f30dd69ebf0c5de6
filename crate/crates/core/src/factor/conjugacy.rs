use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{FactorSystem, Rep};
use crate::cstar::{apply_entrywise, FiniteDimCStar, MatrixOverB};
use crate::error::{Error, Result};
use crate::numerics::{c, identity, null_space, polar_partial_isometry, random_unitary, zeros, ComplexMatrix, Tolerance, C64};

pub const DEFAULT_BUDGET: usize = 32;

const LM_ITERATIONS: usize = 200;

/// `v(π) ∈ L(H'_π, H_π) ⊗ B` for every irrep.
#[derive(Debug, Clone)]
pub struct ConjugacyWitness {
    pub v: Vec<MatrixOverB>,
}

impl ConjugacyWitness {
    /// `v(X)`, block-diagonal over the summands of `X`.
    pub fn of_rep(&self, base: &FiniteDimCStar, x: &Rep) -> MatrixOverB {
        let parts: Vec<MatrixOverB> = x.parts.iter().map(|s| self.v[s.irrep].clone()).collect();
        MatrixOverB::block_diag(base, &parts)
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct ConjugacyResiduals {
    pub range: f64,
    pub intertwining: f64,
    pub cocycle: f64,
}

impl ConjugacyResiduals {
    pub fn max(&self) -> f64 {
        self.range.max(self.intertwining).max(self.cocycle)
    }
}

#[derive(Debug, Clone)]
pub enum ConjugacyOutcome {
    Found { witness: ConjugacyWitness, residuals: ConjugacyResiduals, attempts: usize },
    Exhausted { best: ConjugacyResiduals, attempts: usize },
}

/// Residuals of the conjugacy equations `vv* = γ(1)`, `v*v = γ'(1)`, `vγ' = γv` and
/// `v(π⊗ρ)ω' = ω (id⊗γ_ρ)(v(π)) (1⊗v(ρ))`.
pub fn residuals(a: &FactorSystem, b: &FactorSystem, w: &ConjugacyWitness) -> ConjugacyResiduals {
    let base = &a.base;
    let k = a.catalog.len();
    let mut out = ConjugacyResiduals { range: 0.0, intertwining: 0.0, cocycle: 0.0 };
    for pi in 0..k {
        let v = &w.v[pi];
        out.range = out.range.max(v.mul(&v.adjoint()).dist(&a.gamma[pi].one()));
        out.range = out.range.max(v.adjoint().mul(v).dist(&b.gamma[pi].one()));
        for (ga, gb) in a.gamma[pi].images.iter().zip(&b.gamma[pi].images) {
            out.intertwining = out.intertwining.max(v.mul(gb).dist(&ga.mul(v)));
        }
    }
    for pi in 0..k {
        for rho in 0..k {
            let lhs = w.of_rep(base, &a.tensor(pi, rho)).mul(&b.omega[pi][rho]);
            let rhs = a.omega[pi][rho]
                .mul(&apply_entrywise(base, &a.gamma[rho], &w.v[pi]))
                .mul(&w.v[rho].amplify(b.h[pi]));
            out.cocycle = out.cocycle.max(lhs.dist(&rhs));
        }
    }
    out
}

/// Basis of `{v = γ(1) v γ'(1) : v γ'(e) = γ(e) v for all matrix units e}`, one block at a time.
pub(crate) fn intertwiner_basis(a: &FactorSystem, b: &FactorSystem, pi: usize, tol: &Tolerance) -> Vec<MatrixOverB> {
    let base = &a.base;
    let (ha, hb) = (a.h[pi], b.h[pi]);
    let units = base.dim();
    let mut out = Vec::new();
    for (blk, &n) in base.blocks.iter().enumerate() {
        let (r, cc) = (ha * n, hb * n);
        let mut sys = zeros((units + 2) * r * cc, r * cc);
        let pa = &a.gamma[pi].one().blocks[blk];
        let pb = &b.gamma[pi].one().blocks[blk];
        let left = crate::numerics::tensor_product(&identity(cc), &(identity(r) - pa));
        let right = crate::numerics::tensor_product(&(identity(cc) - pb).transpose(), &identity(r));
        sys.view_mut((units * r * cc, 0), (r * cc, r * cc)).copy_from(&left);
        sys.view_mut(((units + 1) * r * cc, 0), (r * cc, r * cc)).copy_from(&right);
        for u in 0..units {
            let g1 = &a.gamma[pi].images[u].blocks[blk];
            let g2 = &b.gamma[pi].images[u].blocks[blk];
            // column-major vec: vec(v g2) = (g2ᵀ ⊗ 1) vec v, vec(g1 v) = (1 ⊗ g1) vec v
            let op = crate::numerics::tensor_product(&g2.transpose(), &identity(r))
                - crate::numerics::tensor_product(&identity(cc), g1);
            sys.view_mut((u * r * cc, 0), (r * cc, r * cc)).copy_from(&op);
        }
        let ns = null_space(&sys, tol);
        for col in 0..ns.ncols() {
            let mut v = MatrixOverB::zeros(base, ha, hb);
            v.blocks[blk] = ComplexMatrix::from_column_slice(r, cc, ns.column(col).as_slice());
            out.push(v);
        }
    }
    out
}

struct Problem<'a> {
    a: &'a FactorSystem,
    b: &'a FactorSystem,
    spaces: Vec<Vec<MatrixOverB>>,
}

impl Problem<'_> {
    fn params(&self) -> usize {
        2 * self.spaces.iter().map(Vec::len).sum::<usize>()
    }

    fn witness(&self, x: &[f64]) -> ConjugacyWitness {
        let mut idx = 0;
        let v = self
            .spaces
            .iter()
            .enumerate()
            .map(|(pi, sp)| {
                let mut acc = MatrixOverB::zeros(&self.a.base, self.a.h[pi], self.b.h[pi]);
                for e in sp {
                    acc = acc.add(&e.scale(c(x[idx], x[idx + 1])));
                    idx += 2;
                }
                acc
            })
            .collect();
        ConjugacyWitness { v }
    }

    /// Least-squares coordinates of `w` in the intertwiner spaces (orthonormal up to block layout).
    fn coords(&self, w: &ConjugacyWitness) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.params());
        for (sp, v) in self.spaces.iter().zip(&w.v) {
            for e in sp {
                let z: C64 = e.blocks.iter().zip(&v.blocks).map(|(p, q)| p.dotc(q)).sum();
                x.push(z.re);
                x.push(z.im);
            }
        }
        x
    }

    fn polar(&self, w: &ConjugacyWitness) -> ConjugacyWitness {
        let tol = Tolerance { atol: 1e-8, rtol: 0.0 };
        let v = w
            .v
            .iter()
            .map(|m| MatrixOverB { rows: m.rows, cols: m.cols, blocks: m.blocks.iter().map(|x| polar_partial_isometry(x, &tol)).collect() })
            .collect();
        ConjugacyWitness { v }
    }

    fn residual_vector(&self, x: &[f64]) -> Vec<f64> {
        let w = self.witness(x);
        let (a, b, base) = (self.a, self.b, &self.a.base);
        let k = a.catalog.len();
        let mut r = Vec::new();
        let mut push = |m: &MatrixOverB| {
            for blk in &m.blocks {
                for z in blk.iter() {
                    r.push(z.re);
                    r.push(z.im);
                }
            }
        };
        for pi in 0..k {
            let v = &w.v[pi];
            push(&v.mul(&v.adjoint()).sub(&a.gamma[pi].one()));
            push(&v.adjoint().mul(v).sub(&b.gamma[pi].one()));
        }
        for pi in 0..k {
            for rho in 0..k {
                let lhs = w.of_rep(base, &a.tensor(pi, rho)).mul(&b.omega[pi][rho]);
                let rhs = a.omega[pi][rho]
                    .mul(&apply_entrywise(base, &a.gamma[rho], &w.v[pi]))
                    .mul(&w.v[rho].amplify(b.h[pi]));
                push(&lhs.sub(&rhs));
            }
        }
        r
    }

    /// Levenberg–Marquardt on `‖r(x)‖²` with a central-difference Jacobian.
    fn solve(&self, mut x: Vec<f64>, tol: f64) -> Vec<f64> {
        let n = x.len();
        let mut r = self.residual_vector(&x);
        let mut cost: f64 = r.iter().map(|t| t * t).sum();
        let mut lambda = 1e-3;
        for _ in 0..LM_ITERATIONS {
            if r.iter().fold(0.0f64, |m, t| m.max(t.abs())) < tol {
                break;
            }
            let m = r.len();
            let mut jac = nalgebra::DMatrix::<f64>::zeros(m, n);
            let h = 1e-6;
            for j in 0..n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let rp = self.residual_vector(&xp);
                let rm = self.residual_vector(&xm);
                for i in 0..m {
                    jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
                }
            }
            let rv = nalgebra::DVector::from_vec(r.clone());
            let jtj = jac.transpose() * &jac;
            let g = jac.transpose() * rv;
            let mut improved = false;
            for _ in 0..12 {
                let mut lhs = jtj.clone();
                for d in 0..n {
                    lhs[(d, d)] += lambda * (jtj[(d, d)] + 1.0);
                }
                let Some(step) = lhs.cholesky().map(|ch| ch.solve(&(-&g))) else {
                    lambda *= 10.0;
                    continue;
                };
                let xn: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + s).collect();
                let rn = self.residual_vector(&xn);
                let cn: f64 = rn.iter().map(|t| t * t).sum();
                if cn < cost {
                    x = xn;
                    r = rn;
                    cost = cn;
                    lambda = (lambda / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
                lambda *= 10.0;
            }
            if !improved {
                break;
            }
        }
        x
    }
}

/// Searches for a witness that `b` is conjugate to `a`: `a.conjugate_by(witness) ≈ b`.
///
/// Tries the polar part of the projected identity, then Levenberg–Marquardt from it and
/// from up to `budget` seeded random starts.
pub fn find_conjugacy(a: &FactorSystem, b: &FactorSystem, tol: &Tolerance, seed: u64, budget: usize) -> Result<ConjugacyOutcome> {
    if a.base != b.base || a.catalog.name != b.catalog.name || a.catalog.len() != b.catalog.len() {
        return Err(Error::Invalid("factor systems live over different algebras or quantum groups".into()));
    }
    let k = a.catalog.len();
    let spaces: Vec<Vec<MatrixOverB>> = (0..k).map(|pi| intertwiner_basis(a, b, pi, tol)).collect();
    let prob = Problem { a, b, spaces };
    let accept = |w: &ConjugacyWitness| -> ConjugacyResiduals { residuals(a, b, w) };
    let mut best: Option<ConjugacyResiduals> = None;
    let mut attempts = 0;
    let mut consider = |w: ConjugacyWitness, attempts: usize| -> Option<ConjugacyOutcome> {
        let res = accept(&w);
        if res.max() <= tol.atol {
            return Some(ConjugacyOutcome::Found { witness: w, residuals: res, attempts });
        }
        if best.is_none_or(|bst| res.max() < bst.max()) {
            best = Some(res);
        }
        None
    };
    let ident = ConjugacyWitness {
        v: (0..k)
            .map(|pi| {
                let (ha, hb) = (a.h[pi], b.h[pi]);
                let mut m = zeros(ha, hb);
                for i in 0..ha.min(hb) {
                    m[(i, i)] = c(1.0, 0.0);
                }
                MatrixOverB::from_scalar(&a.base, &m)
            })
            .collect(),
    };
    let start = prob.polar(&prob.witness(&prob.coords(&ident)));
    attempts += 1;
    if let Some(found) = consider(start.clone(), attempts) {
        return Ok(found);
    }
    let lm_tol = tol.atol * 1e-2;
    let x0 = prob.solve(prob.coords(&start), lm_tol);
    attempts += 1;
    if let Some(found) = consider(prob.polar(&prob.witness(&x0)), attempts) {
        return Ok(found);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let x: Vec<f64> = (0..prob.params()).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let w0 = prob.polar(&prob.witness(&x));
        let x1 = prob.solve(prob.coords(&w0), lm_tol);
        attempts += 1;
        if let Some(found) = consider(prob.polar(&prob.witness(&x1)), attempts) {
            return Ok(found);
        }
    }
    Ok(ConjugacyOutcome::Exhausted {
        best: best.unwrap_or(ConjugacyResiduals { range: f64::INFINITY, intertwining: f64::INFINITY, cocycle: f64::INFINITY }),
        attempts,
    })
}

/// Random witness `v(π) = γ_π(1)·(u ⊗ 1_B)` with `u` a random unitary and `v(1) = 1`.
///
/// For a system with `γ_π(1) = 1` this is unitary, so `conjugate_by` accepts it.
pub fn random_witness(fs: &FactorSystem, rng: &mut impl Rng) -> ConjugacyWitness {
    let t = fs.catalog.trivial();
    let v = (0..fs.catalog.len())
        .map(|pi| {
            if pi == t {
                return fs.gamma[pi].one();
            }
            let u = MatrixOverB {
                rows: fs.h[pi],
                cols: fs.h[pi],
                blocks: fs.base.blocks.iter().map(|&n| {
                    let mut uu = random_unitary(fs.h[pi], rng);
                    uu = crate::numerics::tensor_product(&uu, &identity(n));
                    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    uu * C64::from_polar(1.0, phase)
                }).collect(),
            };
            fs.gamma[pi].one().mul(&u)
        })
        .collect();
    ConjugacyWitness { v }
}
