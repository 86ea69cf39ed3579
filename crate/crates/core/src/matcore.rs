//! Dense symmetric matrices, a cyclic Jacobi eigensolver, and the Euclidean
//! projection onto the positive semidefinite cone.
//!
//! Matrices are stored as a packed upper triangle in row-major order. Norms
//! and inner products are always taken over the full matrix, so every
//! off-diagonal entry contributes twice.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Off-diagonal Frobenius mass, relative to `max(1, ‖X‖_F)`, at which the
/// Jacobi iteration stops.
pub const JACOBI_TOL: f64 = 1e-13;

/// Maximum number of cyclic sweeps before [`eig`] gives up.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Real symmetric matrix of order `n`.
#[derive(Clone, PartialEq)]
pub struct SymMat {
    n: usize,
    data: Vec<f64>,
}

#[inline]
fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

impl SymMat {
    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        debug_assert!(j < self.n);
        // rows 0..i of the upper triangle hold n, n-1, ..., n-i+1 entries
        i * self.n - i * i.saturating_sub(1) / 2 + (j - i)
    }

    /// The zero matrix. Panics if `n == 0`.
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix order must be positive");
        Self {
            n,
            data: vec![0.0; packed_len(n)],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { 0.0 })
    }

    /// Builds a matrix by evaluating `f(i, j)` for `i <= j` (0-based).
    ///
    /// Panics if `n == 0` or if `f` produces a non-finite value; use
    /// [`SymMat::from_packed`] for fallible construction from untrusted data.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n >= 1, "matrix order must be positive");
        let mut data = Vec::with_capacity(packed_len(n));
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                assert!(v.is_finite(), "non-finite entry at ({i}, {j})");
                data.push(v);
            }
        }
        Self { n, data }
    }

    /// Wraps a packed upper triangle (row-major, `i <= j`).
    pub fn from_packed(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix order must be positive".into()));
        }
        if data.len() != packed_len(n) {
            return Err(Error::InvalidArgument(format!(
                "packed storage for order {n} needs {} entries, got {}",
                packed_len(n),
                data.len()
            )));
        }
        let m = Self { n, data };
        for i in 0..n {
            for j in i..n {
                if !m.get(i, j).is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from a dense row-major buffer, rejecting it when any
    /// pair of mirrored entries differs by more than `sym_tol`. The upper
    /// triangle is kept.
    pub fn from_dense(n: usize, dense: &[f64], sym_tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix order must be positive".into()));
        }
        if dense.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "dense storage for order {n} needs {} entries, got {}",
                n * n,
                dense.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if !dense[i * n + j].is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let diff = (dense[i * n + j] - dense[j * n + i]).abs();
                if diff > sym_tol {
                    return Err(Error::Asymmetric { i, j, diff });
                }
            }
        }
        Ok(Self::from_fn(n, |i, j| dense[i * n + j]))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 0-based; `(j, i)` reads the same storage.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.offset(i, j)]
    }

    pub fn packed(&self) -> &[f64] {
        &self.data
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.get(i, j);
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn fro_norm(&self) -> f64 {
        self.fro_norm_sq().sqrt()
    }

    fn fro_norm_sq(&self) -> f64 {
        let mut diag = 0.0;
        let mut off = 0.0;
        for i in 0..self.n {
            let d = self.get(i, i);
            diag += d * d;
            for j in i + 1..self.n {
                let v = self.get(i, j);
                off += v * v;
            }
        }
        diag + 2.0 * off
    }

    /// Full-matrix inner product `∑ X_ij Y_ij`.
    pub fn inner(&self, other: &SymMat) -> Result<f64> {
        self.check_order(other)?;
        let mut diag = 0.0;
        let mut off = 0.0;
        for i in 0..self.n {
            diag += self.get(i, i) * other.get(i, i);
            for j in i + 1..self.n {
                off += self.get(i, j) * other.get(i, j);
            }
        }
        Ok(diag + 2.0 * off)
    }

    pub fn check_order(&self, other: &SymMat) -> Result<()> {
        if self.n != other.n {
            return Err(Error::OrderMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn scaled(&self, t: f64) -> SymMat {
        SymMat {
            n: self.n,
            data: self.data.iter().map(|v| v * t).collect(),
        }
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &SymMat) -> f64 {
        assert_eq!(self.n, other.n, "matrix orders differ");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Principal submatrix on the given (0-based) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> SymMat {
        SymMat::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    fn zip_with(&self, other: &SymMat, f: impl Fn(f64, f64) -> f64) -> SymMat {
        assert_eq!(self.n, other.n, "matrix orders differ");
        SymMat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl fmt::Debug for SymMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymMat")
            .field("n", &self.n)
            .field("rows", &self.to_rows())
            .finish()
    }
}

impl Serialize for SymMat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl Add for &SymMat {
    type Output = SymMat;
    fn add(self, rhs: &SymMat) -> SymMat {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SymMat {
    type Output = SymMat;
    fn sub(self, rhs: &SymMat) -> SymMat {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<&SymMat> for f64 {
    type Output = SymMat;
    fn mul(self, rhs: &SymMat) -> SymMat {
        rhs.scaled(self)
    }
}

/// Eigenvalues in ascending order with a matching orthonormal eigenvector
/// matrix (column `k` belongs to `eigenvalues[k]`).
#[derive(Debug, Clone)]
pub struct EigDecomp {
    pub eigenvalues: Vec<f64>,
    /// Row-major `n × n`.
    pub eigenvectors: Vec<f64>,
}

impl EigDecomp {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        let n = self.n();
        (0..n).map(|i| self.eigenvectors[i * n + k]).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `Q f(Λ) Qᵀ`.
    pub fn recompose(&self, f: impl Fn(f64) -> f64) -> SymMat {
        let n = self.n();
        let q = &self.eigenvectors;
        let lam: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        SymMat::from_fn(n, |i, j| {
            (0..n)
                .map(|k| q[i * n + k] * lam[k] * q[j * n + k])
                .sum()
        })
    }

    /// `‖QᵀQ − I‖_F`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.n();
        let q = &self.eigenvectors;
        let mut acc = 0.0;
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n).map(|i| q[i * n + a] * q[i * n + b]).sum();
                let e = dot - if a == b { 1.0 } else { 0.0 };
                acc += e * e;
            }
        }
        acc.sqrt()
    }
}

fn off_diagonal_mass(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += a[i * n + j] * a[i * n + j];
        }
    }
    (2.0 * s).sqrt()
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Iterates row-cyclic sweeps until the off-diagonal Frobenius mass drops to
/// `JACOBI_TOL · max(1, ‖X‖_F)`; fails with [`Error::NoConvergence`] after
/// `JACOBI_MAX_SWEEPS` sweeps.
pub fn eig(x: &SymMat) -> Result<EigDecomp> {
    let n = x.n();
    let mut a = x.to_dense();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = JACOBI_TOL * x.fro_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_mass(&a, n);
        if off <= threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let eigenvalues = order.iter().map(|&k| a[k * n + k]).collect();
    let mut eigenvectors = vec![0.0; n * n];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[i * n + col] = v[i * n + k];
        }
    }
    Ok(EigDecomp {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilates `a[p][q]` with the rotation `AJ`, `JᵀAJ`, accumulating `V ← VJ`.
fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    } else {
        // |a_pq| negligible next to the diagonal gap
        0.5 / theta
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = c * akp - s * akq;
        a[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = c * apk - s * aqk;
        a[q * n + k] = s * apk + c * aqk;
    }
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues are set to 0.
pub fn psd_project(x: &SymMat) -> Result<SymMat> {
    Ok(eig(x)?.recompose(|l| l.max(0.0)))
}

/// Distance from a matrix to the PSD cone, with the data that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct PsdDistance {
    pub distance: f64,
    /// Negative eigenvalues, ascending.
    pub negative_eigenvalues: Vec<f64>,
    pub projection: SymMat,
}

/// `‖X − P(X)‖_F`, evaluated from the spectrum as `√∑ min(λ, 0)²`.
pub fn dist_to_psd(x: &SymMat) -> Result<PsdDistance> {
    let e = eig(x)?;
    let negative_eigenvalues: Vec<f64> = e.eigenvalues.iter().copied().filter(|&l| l < 0.0).collect();
    let distance = negative_eigenvalues.iter().map(|l| l * l).sum::<f64>().sqrt();
    Ok(PsdDistance {
        distance,
        negative_eigenvalues,
        projection: e.recompose(|l| l.max(0.0)),
    })
}

/// Like [`dist_to_psd`] but skips forming the projection.
pub fn psd_distance(x: &SymMat) -> Result<f64> {
    let e = eig(x)?;
    Ok(e
        .eigenvalues
        .iter()
        .map(|&l| l.min(0.0).powi(2))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: f64, b: f64, n: usize) -> SymMat {
        SymMat::from_fn(n, |i, j| if i == j { b } else { -a })
    }

    #[test]
    fn packed_layout_is_row_major_upper() {
        let m = SymMat::from_packed(3, vec![1., 2., 3., 4., 5., 6.]).unwrap();
        assert_eq!(m.to_rows(), vec![vec![1., 2., 3.], vec![2., 4., 5.], vec![3., 5., 6.]]);
        assert_eq!(m.get(2, 0), m.get(0, 2));
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(matches!(
            SymMat::from_packed(2, vec![1., f64::NAN, 1.]),
            Err(Error::NonFinite { i: 0, j: 1 })
        ));
        assert!(SymMat::from_packed(2, vec![1., 2.]).is_err());
        assert!(matches!(
            SymMat::from_dense(2, &[1., 2., 2.5, 1.], 1e-12),
            Err(Error::Asymmetric { i: 0, j: 1, .. })
        ));
        assert!(SymMat::from_dense(2, &[1., 2., 2. + 1e-13, 1.], 1e-12).is_ok());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(g(0.25, 0.25, 4).trace(), 1.0);
        assert_eq!(SymMat::identity(3).trace(), 3.0);
        assert_eq!(SymMat::zeros(5).trace(), 0.0);
    }

    #[test]
    fn fro_norm_examples() {
        assert!((SymMat::identity(3).fro_norm() - 3f64.sqrt()).abs() < 1e-15);
        assert!((SymMat::from_diag(&[1., -1.]).fro_norm() - 2f64.sqrt()).abs() < 1e-15);
        for n in 2..=8 {
            let x = g(1.0 / n as f64, 1.0 / n as f64, n);
            // brute-force sum over the dense matrix
            let dense: f64 = x.to_dense().iter().map(|v| v * v).sum();
            assert!((dense.sqrt() - 1.0).abs() < 1e-14);
            assert!((x.fro_norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn inner_examples() {
        let i3 = SymMat::identity(3);
        assert_eq!(i3.inner(&i3).unwrap(), 3.0);
        let x = SymMat::from_packed(3, vec![1., 2., 3., 4., 5., 6.]).unwrap();
        assert_eq!(x.inner(&i3).unwrap(), x.trace());
        let g3 = g(1., 1., 3);
        assert_eq!(g3.inner(&g3).unwrap(), 9.0);
        assert_eq!(
            i3.inner(&SymMat::identity(2)),
            Err(Error::OrderMismatch { left: 3, right: 2 })
        );
    }

    #[test]
    fn eig_examples() {
        let e = eig(&g(1., 1., 3)).unwrap();
        for (got, want) in e.eigenvalues.iter().zip([-1., 2., 2.]) {
            assert!((got - want).abs() < 1e-12);
        }

        let star = SymMat::from_fn(4, |i, j| match (i, j) {
            (3, 3) => 1.0,
            (_, 3) => 0.5,
            _ => 0.0,
        });
        let e = eig(&star).unwrap();
        for (got, want) in e.eigenvalues.iter().zip([-0.5, 0., 0., 1.5]) {
            assert!((got - want).abs() < 1e-12);
        }

        let e = eig(&SymMat::from_diag(&[3., 1., 2.])).unwrap();
        assert_eq!(e.eigenvalues, vec![1., 2., 3.]);
        // Q is a permutation matrix
        for k in 0..3 {
            let col = e.eigenvector(k);
            assert_eq!(col.iter().filter(|v| v.abs() == 1.0).count(), 1);
        }
        assert_eq!(e.eigenvector(0), vec![0., 1., 0.]);
    }

    #[test]
    fn eig_order_one_and_zero() {
        let e = eig(&SymMat::from_diag(&[-4.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![-4.0]);
        assert_eq!(e.eigenvectors, vec![1.0]);
        let e = eig(&SymMat::zeros(4)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 4]);
    }

    #[test]
    fn eig_handles_badly_scaled_entries() {
        let x = SymMat::from_packed(2, vec![1e200, 1e-200, -1e200]).unwrap();
        let e = eig(&x).unwrap();
        assert_eq!(e.eigenvalues, vec![-1e200, 1e200]);
    }

    #[test]
    fn projection_examples() {
        let p = psd_project(&SymMat::from_diag(&[1., -1.])).unwrap();
        assert!(p.max_abs_diff(&SymMat::from_diag(&[1., 0.])) < 1e-15);

        let x = g(1., 1., 3);
        let d = dist_to_psd(&x).unwrap();
        assert!((d.distance - 1.0).abs() < 1e-12);
        assert!(((&x - &d.projection).fro_norm() - 1.0).abs() < 1e-12);
        let pe = eig(&d.projection).unwrap();
        for (got, want) in pe.eigenvalues.iter().zip([0., 2., 2.]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(d.negative_eigenvalues.len(), 1);
    }

    #[test]
    fn distance_examples() {
        for n in 2..=10 {
            let nf = n as f64;
            let d = psd_distance(&g(1. / nf, 1. / nf, n)).unwrap();
            assert!((d - (nf - 2.) / nf).abs() < 1e-12, "n={n}");
        }
        assert_eq!(dist_to_psd(&SymMat::identity(5)).unwrap().distance, 0.0);
    }
}
