use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Catalog, FiniteQuantumGroup, GroupTable, Irrep, Summand};
use crate::error::{Error, Result};
use crate::numerics::{
    c, cluster, cr, flip, gram_schmidt, hermitian_eigen, identity, tensor_product, zeros, ComplexMatrix, Tolerance, C64,
    EIGEN_CLUSTER,
};

const IRREP_SEED: u64 = 0x1EE7;

/// Reference to a built-in catalog: `dual:<group>` or `fun:<group>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupRef {
    Dual(String),
    Fun(String),
}

impl GroupRef {
    pub fn parse(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("dual", g)) => Ok(GroupRef::Dual(g.to_string())),
            Some(("fun", g)) => Ok(GroupRef::Fun(g.to_string())),
            _ => Err(Error::Invalid(format!("group reference `{s}` must be dual:<name> or fun:<name>"))),
        }
    }

    pub fn build(&self) -> Result<Catalog> {
        match self {
            GroupRef::Dual(g) => build_group_algebra_dual(&GroupTable::builtin(g)?, &self.to_string()),
            GroupRef::Fun(g) => build_function_algebra(&GroupTable::builtin(g)?, &self.to_string()),
        }
    }
}

impl fmt::Display for GroupRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupRef::Dual(g) => write!(f, "dual:{g}"),
            GroupRef::Fun(g) => write!(f, "fun:{g}"),
        }
    }
}

fn zero() -> C64 {
    c(0.0, 0.0)
}

/// Group algebra `ℂ[Γ]` with `Δg = g ⊗ g`; its irreps are the group elements.
pub fn build_group_algebra_dual(table: &GroupTable, name: &str) -> Result<Catalog> {
    table.validate()?;
    let n = table.order;
    let e = table.identity();
    let mut mult = vec![zero(); n * n * n];
    let mut comult = vec![zero(); n * n * n];
    let mut star = zeros(n, n);
    for g in 0..n {
        for h in 0..n {
            mult[(g * n + h) * n + table.mul(g, h)] = cr(1.0);
        }
        comult[(g * n + g) * n + g] = cr(1.0);
        star[(table.inverse(g), g)] = cr(1.0);
    }
    let mut unit = vec![zero(); n];
    unit[e] = cr(1.0);
    let haar = unit.clone();
    let counit = vec![cr(1.0); n];
    let group = FiniteQuantumGroup::new(n, mult, unit, comult, counit, star, haar)?;
    let order: Vec<usize> = std::iter::once(e).chain((0..n).filter(|&g| g != e)).collect();
    let reps = order
        .iter()
        .map(|&g| {
            let u = (0..n).map(|k| ComplexMatrix::from_element(1, 1, cr(if k == g { 1.0 } else { 0.0 }))).collect();
            (format!("g{g}"), u)
        })
        .collect();
    assemble(name, group, reps)
}

/// Commutative algebra `C(Γ)` with `Δf(x, y) = f(xy)`; irreps are computed by
/// splitting the regular representation with a random element of its commutant.
pub fn build_function_algebra(table: &GroupTable, name: &str) -> Result<Catalog> {
    table.validate()?;
    let n = table.order;
    let e = table.identity();
    let mut mult = vec![zero(); n * n * n];
    let mut comult = vec![zero(); n * n * n];
    for g in 0..n {
        mult[(g * n + g) * n + g] = cr(1.0);
        for x in 0..n {
            for y in 0..n {
                comult[(table.mul(x, y) * n + x) * n + y] = cr(1.0);
            }
        }
    }
    let unit = vec![cr(1.0); n];
    let mut counit = vec![zero(); n];
    counit[e] = cr(1.0);
    let haar = vec![cr(1.0 / n as f64); n];
    let group = FiniteQuantumGroup::new(n, mult, unit, comult, counit, identity(n), haar)?;

    let left = |g: usize| {
        let mut m = zeros(n, n);
        for x in 0..n {
            m[(table.mul(g, x), x)] = cr(1.0);
        }
        m
    };
    let right = |h: usize| {
        let hi = table.inverse(h);
        let mut m = zeros(n, n);
        for x in 0..n {
            m[(table.mul(x, hi), x)] = cr(1.0);
        }
        m
    };
    let mut rng = ChaCha8Rng::seed_from_u64(IRREP_SEED);
    let mut coeff = vec![zero(); n];
    for h in 0..n {
        let hi = table.inverse(h);
        if hi < h {
            continue;
        }
        let z = if hi == h {
            cr(rng.random_range(-1.0..1.0))
        } else {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        };
        coeff[h] = z;
        coeff[hi] = z.conj();
    }
    let mut a = zeros(n, n);
    for (h, z) in coeff.iter().enumerate() {
        a += right(h) * *z;
    }
    let (vals, vecs) = hermitian_eigen(&a);
    let mut found: Vec<(Vec<ComplexMatrix>, Vec<C64>)> = Vec::new();
    for range in cluster(&vals, EIGEN_CLUSTER) {
        let q = vecs.columns(range.start, range.len()).into_owned();
        let rho: Vec<ComplexMatrix> = (0..n).map(|g| q.adjoint() * left(g) * &q).collect();
        let chi: Vec<C64> = rho.iter().map(|m| m.trace()).collect();
        let dup = found
            .iter()
            .any(|(_, other)| other.iter().zip(&chi).all(|(x, y)| (x - y).norm() < 1e-6));
        if !dup {
            found.push((rho, chi));
        }
    }
    let total: usize = found.iter().map(|(r, _)| r[0].nrows().pow(2)).sum();
    if total != n {
        return Err(Error::Integrity(format!("regular representation split into irreps of total dimension {total}, expected {n}")));
    }
    let key = |chi: &[C64]| -> Vec<(i64, i64)> {
        chi.iter().map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)).collect()
    };
    let is_trivial = |chi: &[C64]| chi.iter().all(|z| (z - cr(1.0)).norm() < 1e-6);
    found.sort_by(|(ra, ca), (rb, cb)| {
        match (is_trivial(ca), is_trivial(cb)) {
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        ra[0].nrows().cmp(&rb[0].nrows()).then_with(|| key(cb).cmp(&key(ca)))
    });
    let mut reps = Vec::new();
    let mut count = std::collections::BTreeMap::<usize, usize>::new();
    for (rho, _) in found {
        let d = rho[0].nrows();
        let k = count.entry(d).or_insert(0);
        reps.push((format!("{d}{}", "'".repeat(*k)), rho));
        *k += 1;
    }
    assemble(name, group, reps)
}

/// Complete family of isometric intertwiners `S_k: V_σ → V` for a
/// representation `x` on `V`, by Haar averaging over each catalog irrep.
pub fn decompose_tensor(g: &FiniteQuantumGroup, irreps: &[Irrep], x: &[ComplexMatrix]) -> Vec<Summand> {
    let tol = Tolerance::default();
    let d = x[0].nrows();
    let pairing = g.haar_pairing();
    let mut out = Vec::new();
    for (si, sigma) in irreps.iter().enumerate() {
        let ds = sigma.dim;
        let sstar = g.mat_adjoint(&sigma.u);
        let mut candidates = Vec::with_capacity(d * ds);
        for i in 0..d {
            for j in 0..ds {
                let mut m = zeros(d, ds);
                m[(i, j)] = cr(1.0);
                let mut avg = zeros(d, ds);
                for (a, xa) in x.iter().enumerate() {
                    let xm = xa * &m;
                    for (cc, sc) in sstar.iter().enumerate() {
                        let w = pairing[(a, cc)];
                        if w != zero() {
                            avg += &xm * sc * w;
                        }
                    }
                }
                candidates.push(avg);
            }
        }
        for t in gram_schmidt(&candidates, &tol) {
            out.push(Summand { irrep: si, isometry: t * cr((ds as f64).sqrt()) });
        }
    }
    out
}

fn assemble(name: &str, group: FiniteQuantumGroup, reps: Vec<(String, Vec<ComplexMatrix>)>) -> Result<Catalog> {
    let mut irreps: Vec<Irrep> = reps
        .into_iter()
        .map(|(label, u)| {
            let d = u[0].nrows();
            Irrep { label, dim: d, u, q: identity(d), conjugate: 0, r: zeros(0, 1), rbar: zeros(0, 1) }
        })
        .collect();
    let k = irreps.len();
    let mut fusion_p = vec![vec![Vec::new(); k]; k];
    for i in 0..k {
        for j in 0..k {
            fusion_p[i][j] = if i == 0 {
                vec![Summand { irrep: j, isometry: identity(irreps[j].dim) }]
            } else if j == 0 {
                vec![Summand { irrep: i, isometry: identity(irreps[i].dim) }]
            } else {
                decompose_tensor(&group, &irreps, &group.tensor_p(&irreps[i].u, &irreps[j].u))
            };
        }
    }
    let fusion_m = fusion_m_from_p(&irreps, &fusion_p);
    for i in 0..k {
        let (conj, s) = fusion_p[i]
            .iter()
            .enumerate()
            .find_map(|(j, parts)| parts.iter().find(|s| s.irrep == 0).map(|s| (j, s.isometry.clone())))
            .ok_or_else(|| Error::Integrity(format!("irrep {} has no conjugate", irreps[i].label)))?;
        irreps[i].conjugate = conj;
        irreps[i].r = s * cr((irreps[i].dim as f64).sqrt());
    }
    // fix the phase of the later member of each conjugate pair
    for i in 0..k {
        let j = irreps[i].conjugate;
        if i < j {
            let c = zigzag(&irreps[i], &irreps[j]);
            irreps[j].r /= c;
        }
    }
    for i in 0..k {
        let j = irreps[i].conjugate;
        let c = zigzag(&irreps[i], &irreps[j]);
        irreps[i].rbar = &irreps[j].r / c;
    }
    Ok(Catalog { name: name.to_string(), group, irreps, fusion_p, fusion_m })
}

/// The scalar `c` in `(R_π* ⊗ 1)(1 ⊗ R_π̄) = c·1`.
fn zigzag(p: &Irrep, pbar: &Irrep) -> C64 {
    let d = p.dim;
    let m = tensor_product(&p.r.adjoint(), &identity(d)) * tensor_product(&identity(d), &pbar.r);
    m.trace() / cr(d as f64)
}

pub(crate) fn fusion_m_from_p(irreps: &[Irrep], fusion_p: &[Vec<Vec<Summand>>]) -> Vec<Vec<Vec<Summand>>> {
    let k = irreps.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == 0 || j == 0 {
                        return fusion_p[i][j].clone();
                    }
                    let f = flip(irreps[j].dim, irreps[i].dim);
                    fusion_p[j][i]
                        .iter()
                        .map(|s| Summand { irrep: s.irrep, isometry: &f * &s.isometry })
                        .collect()
                })
                .collect()
        })
        .collect()
}
