//! Dense complex linear algebra shared by every other module.
//!
//! All residuals are operator norms (largest singular value). Rank decisions
//! compare singular values against the absolute tolerance only.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

pub const DEFAULT_ATOL: f64 = 1e-9;
pub const DEFAULT_RTOL: f64 = 1e-9;

/// Threshold used when grouping eigenvalues into degenerate clusters.
pub const EIGEN_CLUSTER: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { atol: DEFAULT_ATOL, rtol: DEFAULT_RTOL }
    }
}

impl Tolerance {
    pub fn new(atol: f64, rtol: f64) -> Result<Self> {
        if !(atol >= 0.0 && rtol >= 0.0 && atol.is_finite() && rtol.is_finite()) {
            return Err(Error::Invalid(format!("tolerance must be finite and non-negative, got atol={atol} rtol={rtol}")));
        }
        Ok(Tolerance { atol, rtol })
    }

    pub fn uniform(t: f64) -> Result<Self> {
        Self::new(t, t)
    }

    /// Acceptance bound for a residual measured against something of norm `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }

    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual <= self.bound(scale)
    }
}

/// A boolean verdict together with the residual that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub ok: bool,
    pub residual: f64,
}

impl Check {
    pub fn new(residual: f64, tol: &Tolerance, scale: f64) -> Self {
        Check { ok: tol.accepts(residual, scale), residual }
    }
}

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(r, c)
}

pub fn diag(entries: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_column_slice(entries))
}

pub fn real_diag(entries: &[f64]) -> ComplexMatrix {
    let v: Vec<C64> = entries.iter().map(|&x| cr(x)).collect();
    diag(&v)
}

/// Build a matrix from rows of complex entries.
pub fn from_rows(rows: &[Vec<C64>]) -> ComplexMatrix {
    let r = rows.len();
    let cols = rows.first().map_or(0, |x| x.len());
    ComplexMatrix::from_fn(r, cols, |i, j| rows[i][j])
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Kronecker product; row index of the result is `i_a * b.rows + i_b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

fn to_faer(a: &ComplexMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 || !is_finite(a) {
        return if is_finite(a) { Vec::new() } else { vec![f64::INFINITY] };
    }
    to_faer(a).singular_values().expect("svd converges")
}

/// Operator norm (largest singular value).
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).into_iter().fold(0.0, f64::max)
}

/// SVD `a = Σ_k s_k u_k v_k*` with singular values sorted decreasingly.
/// `u` is `r × min(r, c)`; `v` is the full `c × c` unitary whose trailing
/// columns span the null space.
pub struct FullSvd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn full_svd(a: &ComplexMatrix) -> FullSvd {
    let (r, cols) = a.shape();
    let m = r.min(cols);
    if m == 0 {
        return FullSvd { u: zeros(r, 0), s: Vec::new(), v: identity(cols) };
    }
    let svd = to_faer(a).svd().expect("svd converges");
    let s: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| s[j].partial_cmp(&s[i]).unwrap_or(std::cmp::Ordering::Equal));
    let u_full = from_faer(svd.U());
    let v_full = from_faer(svd.V());
    let mut uu = zeros(r, m);
    let mut vv = v_full.clone();
    for (slot, &i) in order.iter().enumerate() {
        uu.set_column(slot, &u_full.column(i));
        vv.set_column(slot, &v_full.column(i));
    }
    FullSvd { u: uu, s: order.iter().map(|&i| s[i]).collect(), v: vv }
}

/// Numerical rank: number of singular values above `atol`.
pub fn rank(a: &ComplexMatrix, tol: &Tolerance) -> usize {
    singular_values(a).into_iter().filter(|&s| s > tol.atol).count()
}

/// Orthonormal basis (as columns) of the numerical null space of `a`.
pub fn null_space(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let cols = a.ncols();
    if cols == 0 {
        return zeros(0, 0);
    }
    if a.nrows() == 0 {
        return identity(cols);
    }
    let FullSvd { s, v, .. } = full_svd(a);
    let r = s.iter().filter(|&&x| x > tol.atol).count();
    v.columns(r, cols - r).into_owned()
}

/// Orthonormal basis (as columns) of the numerical column space of `a`.
pub fn range_basis(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    if a.nrows() == 0 || a.ncols() == 0 {
        return zeros(a.nrows(), 0);
    }
    let FullSvd { u, s, .. } = full_svd(a);
    let r = s.iter().filter(|&&x| x > tol.atol).count();
    u.columns(0, r).into_owned()
}

/// Partial isometry `v` of the polar decomposition `a = v |a|`, with
/// singular values below `tol.atol` treated as zero.
pub fn polar_partial_isometry(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let (r, cols) = a.shape();
    if r == 0 || cols == 0 {
        return zeros(r, cols);
    }
    let FullSvd { u, s, v } = full_svd(a);
    let mut out = zeros(r, cols);
    for (k, &sv) in s.iter().enumerate() {
        if sv > tol.atol {
            out += u.column(k) * v.column(k).adjoint();
        }
    }
    out
}

/// `‖a a* a − a‖ ≤ tol`.
pub fn is_partial_isometry(a: &ComplexMatrix, tol: &Tolerance) -> Check {
    let residual = op_norm(&(a * a.adjoint() * a - a));
    Check::new(residual, tol, op_norm(a))
}

/// `‖p² − p‖` and `‖p* − p‖`, whichever is larger.
pub fn projection_residual(p: &ComplexMatrix) -> f64 {
    if p.nrows() != p.ncols() {
        return f64::INFINITY;
    }
    op_norm(&(p * p - p)).max(op_norm(&(p.adjoint() - p)))
}

/// Numerical rank of a family of equally shaped matrices viewed as vectors.
pub fn span_rank(vectors: &[ComplexMatrix], tol: &Tolerance) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let shape = first.shape();
    if let Some(bad) = vectors.iter().find(|v| v.shape() != shape) {
        return Err(Error::Shape(format!("span_rank: expected {:?}, found {:?}", shape, bad.shape())));
    }
    Ok(rank(&stack_columns(vectors), tol))
}

/// Flatten each matrix (column-major) into one column of the result.
pub fn stack_columns(vectors: &[ComplexMatrix]) -> ComplexMatrix {
    let len = vectors.first().map_or(0, |v| v.len());
    let mut m = zeros(len, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        for (i, z) in v.iter().enumerate() {
            m[(i, j)] = *z;
        }
    }
    m
}

/// Eigen-decomposition of the Hermitian part of `a`, eigenvalues ascending.
pub fn hermitian_eigen(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let h = (a + a.adjoint()) * cr(0.5);
    let eig = to_faer(&h).self_adjoint_eigen(faer::Side::Lower).expect("eigen converges");
    let vals: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
    let vecs0 = from_faer(eig.U());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap_or(std::cmp::Ordering::Equal));
    let mut vecs = zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &vecs0.column(i));
    }
    (order.iter().map(|&i| vals[i]).collect(), vecs)
}

/// Group ascending eigenvalues into clusters whose consecutive gaps are
/// below `threshold`; returns index ranges.
pub fn cluster(values: &[f64], threshold: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > threshold {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// Positive square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues in `[-atol, 0)` are clamped to zero; anything more negative
/// is an error.
pub fn psd_sqrt(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let (vals, vecs) = hermitian_eigen(a);
    if let Some(&min) = vals.first() {
        if min < -tol.atol.max(1e-12) * (1.0 + vals.last().copied().unwrap_or(0.0).abs()) {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
    }
    let roots: Vec<C64> = vals.iter().map(|&x| cr(x.max(0.0).sqrt())).collect();
    Ok(&vecs * diag(&roots) * vecs.adjoint())
}

/// Least-squares solution of `a x = b` through the SVD; also returns the
/// residual `‖a x − b‖`.
pub fn least_squares(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> (ComplexMatrix, f64) {
    let (r, cols) = a.shape();
    if cols == 0 {
        return (zeros(0, b.ncols()), op_norm(b));
    }
    let FullSvd { u, s, v } = full_svd(a);
    let mut x = zeros(cols, b.ncols());
    for (k, &sv) in s.iter().enumerate() {
        if sv > tol.atol {
            let coeff = u.column(k).adjoint() * b / cr(sv);
            x += v.column(k) * coeff;
        }
    }
    let resid = if r == 0 { 0.0 } else { (a * &x - b).norm() };
    (x, resid)
}

pub fn random_complex(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let a = random_complex(n, n, rng);
    (&a + a.adjoint()) * cr(0.5)
}

/// Haar-ish random unitary from the polar part of a Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let a = random_complex(n, n, rng);
    polar_partial_isometry(&a, &Tolerance::default())
}

/// Permutation matrix sending basis vector `j` to `perm[j]`.
pub fn permutation_matrix(perm: &[usize]) -> ComplexMatrix {
    let n = perm.len();
    let mut m = zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = cr(1.0);
    }
    m
}

/// Unitary `F: C^a ⊗ C^b → C^b ⊗ C^a` swapping tensor factors.
pub fn flip(a: usize, b: usize) -> ComplexMatrix {
    let perm: Vec<usize> = (0..a * b).map(|idx| (idx % b) * a + idx / b).collect();
    permutation_matrix(&perm)
}

/// Frobenius inner product `tr(x* y)`.
pub fn frob_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Deterministic Gram–Schmidt on a list of matrices under the Frobenius
/// inner product; drops vectors whose remainder has norm below `atol`.
pub fn gram_schmidt(vectors: &[ComplexMatrix], tol: &Tolerance) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let p = frob_inner(q, &w);
                w -= q * p;
            }
        }
        let n = w.norm();
        if n > tol.atol.max(1e-12) {
            out.push(w / cr(n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn tensor_of_identities() {
        assert_eq!(tensor_product(&identity(2), &identity(3)), identity(6));
    }

    #[test]
    fn tensor_of_diagonals() {
        let d = tensor_product(&real_diag(&[1.0, 2.0]), &real_diag(&[3.0]));
        assert_eq!(d, real_diag(&[3.0, 6.0]));
    }

    #[test]
    fn tensor_inverse_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_complex(2, 2, &mut rng);
        let b = random_complex(2, 2, &mut rng);
        // independent route: invert the 4x4 product directly
        let ab = tensor_product(&a, &b);
        let direct = ab.clone().try_inverse().unwrap();
        let via_factors = tensor_product(&a.clone().try_inverse().unwrap(), &b.clone().try_inverse().unwrap());
        assert!(op_norm(&(direct - &via_factors)) < 1e-9);
        assert!(op_norm(&(ab * via_factors - identity(4))) < 1e-9);
    }

    #[test]
    fn polar_examples() {
        let v = polar_partial_isometry(&real_diag(&[2.0, 0.0]), &tol());
        assert!(op_norm(&(v - real_diag(&[1.0, 0.0]))) < 1e-12);
        let n = from_rows(&[vec![cr(0.0), cr(1.0)], vec![cr(0.0), cr(0.0)]]);
        let v = polar_partial_isometry(&n, &tol());
        assert!(op_norm(&(v - &n)) < 1e-12);
        assert_eq!(polar_partial_isometry(&zeros(2, 3), &tol()), zeros(2, 3));
    }

    #[test]
    fn polar_of_tall_full_rank_is_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_complex(3, 2, &mut rng);
        let v = polar_partial_isometry(&a, &tol());
        assert!(op_norm(&(v.adjoint() * &v - identity(2))) < 1e-10);
        // reassembly oracle: a = v |a| with |a| = sqrt(a* a)
        let abs = psd_sqrt(&(a.adjoint() * &a), &tol()).unwrap();
        assert!(op_norm(&(&v * abs - &a)) < 1e-10);
    }

    #[test]
    fn partial_isometry_checks() {
        assert!(is_partial_isometry(&identity(3), &tol()).ok);
        let half = is_partial_isometry(&real_diag(&[0.5]), &tol());
        assert!(!half.ok);
        assert!((half.residual - 0.375).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_complex(4, 3, &mut rng);
        assert!(is_partial_isometry(&polar_partial_isometry(&a, &tol()), &tol()).ok);
    }

    #[test]
    fn span_rank_examples() {
        let e1 = from_rows(&[vec![cr(1.0)], vec![cr(0.0)]]);
        let e2 = from_rows(&[vec![cr(0.0)], vec![cr(1.0)]]);
        let s = &e1 + &e2;
        assert_eq!(span_rank(&[e1.clone(), e2, s], &tol()).unwrap(), 2);
        assert_eq!(span_rank(&[], &tol()).unwrap(), 0);
        assert!(span_rank(&[e1, identity(2)], &tol()).is_err());
    }

    /// Rank by fraction-free Gaussian elimination with partial pivoting, used
    /// as an independent oracle for the SVD-based rank.
    fn gauss_rank(mut m: ComplexMatrix, eps: f64) -> usize {
        let (r, cols) = m.shape();
        let mut rank = 0;
        for col in 0..cols {
            let piv = (rank..r).max_by(|&i, &j| m[(i, col)].norm().partial_cmp(&m[(j, col)].norm()).unwrap());
            let Some(p) = piv else { break };
            if m[(p, col)].norm() < eps {
                continue;
            }
            m.swap_rows(p, rank);
            for i in rank + 1..r {
                let f = m[(i, col)] / m[(rank, col)];
                for j in col..cols {
                    let t = m[(rank, j)];
                    m[(i, j)] -= f * t;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn random_vectors_span_c4() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let vs: Vec<_> = (0..10).map(|_| random_complex(4, 1, &mut rng)).collect();
        let oracle = gauss_rank(stack_columns(&vs), 1e-9);
        assert_eq!(oracle, 4);
        assert_eq!(span_rank(&vs, &tol()).unwrap(), oracle);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = from_rows(&[vec![cr(1.0), cr(1.0), cr(0.0)]]);
        let n = null_space(&a, &tol());
        assert_eq!(n.ncols(), 2);
        assert!(op_norm(&(&a * &n)) < 1e-12);
    }

    #[test]
    fn flip_swaps_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_complex(2, 1, &mut rng);
        let y = random_complex(3, 1, &mut rng);
        let f = flip(2, 3);
        assert!(op_norm(&(f * tensor_product(&x, &y) - tensor_product(&y, &x))) < 1e-14);
    }

    #[test]
    fn psd_sqrt_rejects_negative() {
        assert!(psd_sqrt(&real_diag(&[1.0, -0.5]), &tol()).is_err());
        let r = psd_sqrt(&real_diag(&[4.0, -1e-12]), &tol()).unwrap();
        assert!(op_norm(&(r - real_diag(&[2.0, 0.0]))) < 1e-9);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix() -> impl Strategy<Value = ComplexMatrix> {
            (1usize..4, 1usize..4, any::<u64>()).prop_map(|(r, c, seed)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                random_complex(r, c, &mut rng)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn tensor_is_associative(a in small_matrix(), b in small_matrix(), c in small_matrix()) {
                let l = tensor_product(&tensor_product(&a, &b), &c);
                let r = tensor_product(&a, &tensor_product(&b, &c));
                prop_assert!((l - r).norm() < 1e-12);
            }

            #[test]
            fn polar_passes_partial_isometry(a in small_matrix()) {
                let t = Tolerance::default();
                prop_assert!(is_partial_isometry(&polar_partial_isometry(&a, &t), &t).ok);
            }

            #[test]
            fn norm_is_cstar(a in small_matrix()) {
                let n = op_norm(&a);
                let n2 = op_norm(&(a.adjoint() * &a));
                prop_assert!((n2 - n * n).abs() <= 1e-9 * (1.0 + n2));
                prop_assert_eq!(a.adjoint().adjoint(), a);
            }
        }
    }
}
