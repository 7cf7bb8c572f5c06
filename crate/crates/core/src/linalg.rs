//! Dense complex linear algebra on top of `nalgebra`.
//!
//! Everything here works on small dynamic matrices; the group and
//! representation dimensions in this crate stay in the tens.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;

#[inline]
pub fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `Re tr(a* b)`, the real inner product on matrices.
pub fn inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub fn vec_inner(a: &CVec, b: &CVec) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Frobenius norm, scaled so entries near the overflow range do not
/// square to infinity.
pub fn norm(a: &CMat) -> f64 {
    scaled_norm(a.iter())
}

pub fn vec_norm(v: &CVec) -> f64 {
    scaled_norm(v.iter())
}

fn scaled_norm<'a>(xs: impl Iterator<Item = &'a C64> + Clone) -> f64 {
    let top = xs.clone().map(|x| x.re.abs().max(x.im.abs())).fold(0.0, f64::max);
    if top == 0.0 || !top.is_finite() {
        return top;
    }
    top * sqrt(xs.map(|x| (x / top).norm_sqr()).sum())
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Conjugation `g a g⁻¹`.
pub fn conjugate(g: &CMat, a: &CMat, g_inv: &CMat) -> CMat {
    g * a * g_inv
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(entries: &[C64]) -> CMat {
    let n = entries.len();
    CMat::from_fn(n, n, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) })
}

pub fn real_diag(entries: &[f64]) -> CMat {
    let n = entries.len();
    CMat::from_fn(n, n, |i, j| if i == j { re(entries[i]) } else { C64::new(0.0, 0.0) })
}

pub fn is_diagonal(a: &CMat, tol: f64) -> bool {
    a.shape().0 == a.shape().1
        && (0..a.nrows()).all(|i| (0..a.ncols()).all(|j| i == j || a[(i, j)].norm() <= tol))
}

/// Norm of the anti-Hermitian part of `a`.
pub fn hermitian_defect(a: &CMat) -> f64 {
    norm(&(a - a.adjoint())) / 2.0
}

pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()) * re(0.5)
}

pub fn scale_of(a: &CMat) -> f64 {
    norm(a).max(1.0)
}

/// Eigen-decomposition of a Hermitian matrix with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMat,
}

pub fn hermitian_eigen(h: &CMat) -> HermitianEigen {
    let n = h.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: CMat::zeros(0, 0),
        };
    }
    let sym = hermitian_part(h);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// Groups sorted real values whose consecutive gaps are at most `tol`.
/// Returns `(mean, member indices)` per cluster, in ascending order.
pub fn cluster_sorted(values: &[f64], tol: f64) -> Vec<(f64, Vec<usize>)> {
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some((_, members)) if v - values[*members.last().unwrap()] <= tol => members.push(i),
            _ => out.push((v, alloc::vec![i])),
        }
    }
    for (mean, members) in out.iter_mut() {
        *mean = members.iter().map(|&i| values[i]).sum::<f64>() / members.len() as f64;
    }
    out
}

/// Singular values in descending order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Rank with singular values above `rel * reference` counted as nonzero.
pub fn rank(a: &CMat, rel: f64, reference: f64) -> usize {
    singular_values(a).into_iter().filter(|&s| s > rel * reference).count()
}

/// Orthonormal basis (as columns) of the kernel of `a`; singular values
/// at most `threshold` count as zero.
pub fn null_space(a: &CMat, threshold: f64) -> CMat {
    let (m, n) = a.shape();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    // pad to at least n rows so that the SVD yields a full right factor
    let padded = if m < n {
        let mut p = CMat::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let cols: Vec<CVec> = (0..v_t.nrows())
        .filter(|&i| svd.singular_values[i] <= threshold)
        .map(|i| v_t.row(i).adjoint())
        .collect();
    columns_to_matrix(n, &cols)
}

/// Real counterpart of [`null_space`].
pub fn real_null_space(a: &RMat, threshold: f64) -> RMat {
    let (m, n) = a.shape();
    if n == 0 {
        return RMat::zeros(0, 0);
    }
    let padded = if m < n {
        let mut p = RMat::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let rows: Vec<usize> = (0..v_t.nrows())
        .filter(|&i| svd.singular_values[i] <= threshold)
        .collect();
    RMat::from_fn(n, rows.len(), |r, c| v_t[(rows[c], r)])
}

pub fn real_singular_values(a: &RMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

pub fn columns_to_matrix(rows: usize, cols: &[CVec]) -> CMat {
    CMat::from_fn(rows, cols.len(), |r, c| cols[c][r])
}

/// Gram–Schmidt with re-orthogonalisation. Columns whose residual norm
/// falls below `tol` are dropped.
pub fn orthonormalize(cols: &[CVec], tol: f64) -> Vec<CVec> {
    let mut basis: Vec<CVec> = Vec::new();
    for c in cols {
        let mut w = c.clone();
        for _ in 0..2 {
            for b in &basis {
                let p = vec_inner(b, &w);
                w -= b * p;
            }
        }
        let nw = vec_norm(&w);
        if nw > tol {
            basis.push(w / re(nw));
        }
    }
    basis
}

/// Orthonormal basis of a family of matrices for the real inner product
/// `Re tr(a* b)`.
pub fn orthonormalize_real(mats: &[CMat], tol: f64) -> Vec<CMat> {
    let mut basis: Vec<CMat> = Vec::new();
    for m in mats {
        let mut w = m.clone();
        for _ in 0..2 {
            for b in &basis {
                let p = inner(b, &w);
                w -= b * re(p);
            }
        }
        let nw = norm(&w);
        if nw > tol {
            basis.push(w / re(nw));
        }
    }
    basis
}

/// Largest sine of the principal angles between the column spans of two
/// matrices with orthonormal columns. Returns 1 when dimensions differ.
pub fn subspace_distance(qa: &CMat, qb: &CMat) -> f64 {
    if qa.ncols() != qb.ncols() {
        return 1.0;
    }
    if qa.ncols() == 0 {
        return 0.0;
    }
    let residual = qb - qa * (qa.adjoint() * qb);
    singular_values(&residual).first().copied().unwrap_or(0.0)
}

pub fn inverse(a: &CMat) -> Option<CMat> {
    a.clone().try_inverse()
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let nrm = norm(a);
    let mut squarings = 0u32;
    let mut scaled = nrm;
    while scaled > 0.25 {
        scaled *= 0.5;
        squarings += 1;
    }
    let b = a * re(libm::ldexp(1.0, -(squarings as i32)));
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..=20 {
        term = &term * &b * re(1.0 / k as f64);
        sum += &term;
        if norm(&term) <= 1e-18 * norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(t h)` for Hermitian `h` via its eigen-decomposition.
pub fn exp_hermitian(h: &CMat, t: f64) -> CMat {
    let eig = hermitian_eigen(h);
    let d: Vec<C64> = eig.values.iter().map(|&l| re(libm::exp(t * l))).collect();
    &eig.vectors * diag(&d) * eig.vectors.adjoint()
}

/// `log h` for a positive-definite Hermitian `h`.
pub fn log_positive(h: &CMat) -> CMat {
    let eig = hermitian_eigen(h);
    let d: Vec<C64> = eig.values.iter().map(|&l| re(libm::log(l))).collect();
    &eig.vectors * diag(&d) * eig.vectors.adjoint()
}

/// Stacks real and imaginary parts: ℂⁿ → ℝ²ⁿ.
pub fn realify(v: &CVec) -> DVector<f64> {
    let n = v.len();
    DVector::from_fn(2 * n, |i, _| if i < n { v[i].re } else { v[i - n].im })
}

/// Flattens a complex matrix into ℝ^{2mn} (row-major real parts, then
/// imaginary parts).
pub fn realify_mat(a: &CMat) -> DVector<f64> {
    let (m, n) = a.shape();
    let len = m * n;
    DVector::from_fn(2 * len, |i, _| {
        let k = i % len;
        let z = a[(k / n, k % n)];
        if i < len {
            z.re
        } else {
            z.im
        }
    })
}

/// `e^{-x} - 1 + x` without cancellation for small `x`.
pub fn exp_neg_remainder(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        x2 * (0.5 - x / 6.0 + x2 / 24.0 - x2 * x / 120.0)
    } else {
        libm::expm1(-x) + x
    }
}
