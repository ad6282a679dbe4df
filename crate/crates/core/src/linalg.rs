//! Dense complex matrices and a Hermitian eigensolver.
//!
//! Storage is row-major: `data[i * cols + j]` holds `A[i, j]`. Every
//! operation returns a fresh matrix; the sizes handled here never exceed a
//! few dozen rows, so there are no in-place or sparse variants.
//!
//! The eigensolver is a cyclic complex Jacobi method. Each rotation zeroes
//! one off-diagonal pair exactly, and sweeps continue until the
//! off-diagonal Frobenius mass reaches machine precision (or stops
//! shrinking). Success is declared when that mass is within
//! `tol * |A|_F`.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default relative tolerance for Hermiticity, PSD and convergence checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Upper bound on Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;

pub type C64 = Complex64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data, rejecting bad lengths and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidData {
                rows,
                cols,
                got: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { c(0.0, 0.0) })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { c(diag[i], 0.0) } else { c(0.0, 0.0) })
    }

    /// Real-valued matrix from row slices. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(rows.len(), ncols, |i, j| c(rows[i][j], 0.0))
    }

    /// Complex matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(rows.len(), ncols, |i, j| rows[i][j])
    }

    /// Column vector `v` as an `n x 1` matrix.
    pub fn column(v: &[C64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Rank-one projector `v v^dag`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn column_vec(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.shape(),
                got: other.shape(),
            })
        }
    }

    /// Standard matrix product.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: (self.cols, other.cols),
                got: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product: `(a ⊗ b)[i*p + k, j*q + l] = a[i,j] * b[k,l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = other.shape();
        Self::from_fn(self.rows * p, self.cols * q, |r, s| {
            self[(r / p, s / q)] * other[(r % p, s % q)]
        })
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Entrywise (Schur) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a * b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// `|A - A^dag|_F / |A|_F`, or the absolute deviation when `A = 0`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.rows;
        let mut dev = 0.0;
        for i in 0..n {
            for j in 0..n {
                dev += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        let dev = dev.sqrt();
        let norm = self.frobenius_norm();
        if norm > 0.0 {
            dev / norm
        } else {
            dev
        }
    }

    /// `(A + A^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Validates squareness and Hermiticity within `tol`, returning the
    /// symmetrized matrix.
    pub fn symmetrized(&self, tol: f64) -> Result<Self> {
        self.require_square()?;
        let deviation = self.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(self.hermitian_part())
    }

    /// First off-diagonal entry with modulus above `tol`, if any.
    pub fn off_diagonal_position(&self, tol: f64) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && self[(i, j)].norm() > tol {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Reorders the tensor factors of an operator on `⊗_k C^{dims[k]}`.
    ///
    /// Factor `k` of the result is factor `perm[k]` of the input, applied to
    /// row and column indices alike. Row-major multi-indices are used, so the
    /// first factor is the most significant digit.
    pub fn permute_subsystems(&self, dims: &[usize], perm: &[usize]) -> Result<Self> {
        let n = self.require_square()?;
        let total: usize = dims.iter().product();
        if total != n {
            return Err(Error::DimensionMismatch {
                expected: (total, total),
                got: self.shape(),
            });
        }
        let mut seen = vec![false; dims.len()];
        if perm.len() != dims.len()
            || perm
                .iter()
                .any(|&p| p >= dims.len() || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidDimension(format!(
                "{perm:?} is not a permutation of {} factors",
                dims.len()
            )));
        }
        let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
        // new flat index -> old flat index
        let map: Vec<usize> = (0..n)
            .map(|new_flat| {
                let digits = unflatten(new_flat, &new_dims);
                let mut old_digits = vec![0; dims.len()];
                for (k, &p) in perm.iter().enumerate() {
                    old_digits[p] = digits[k];
                }
                flatten(&old_digits, dims)
            })
            .collect();
        Ok(Self::from_fn(n, n, |i, j| self[(map[i], map[j])]))
    }
}

fn unflatten(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        digits[k] = flat % dims[k];
        flat /= dims[k];
    }
    digits
}

fn flatten(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

/// Spectrum and orthonormal eigenvectors of a Hermitian matrix.
///
/// Eigenvalues are ascending; column `i` of `eigenvectors` pairs with
/// `eigenvalues[i]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// `V diag(λ) V^dag`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj()).sum()
        })
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
pub fn hermitian_eigensolve(a: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    let mut m = a.symmetrized(tol)?;
    let n = m.rows();
    let scale = m.frobenius_norm();
    let mut v = ComplexMatrix::identity(n);

    let floor = f64::EPSILON * scale;
    let mut off = off_diagonal_norm(&m);
    let mut sweeps = 0;
    while off > floor && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let zeta = (aqq - app) / (2.0 * r);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // J restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                let jpp = c(cs, 0.0);
                let jpq = c(sn, 0.0);
                let jqp = -phase.conj() * sn;
                let jqq = phase.conj() * cs;
                rotate(&mut m, &mut v, p, q, [jpp, jpq, jqp, jqq]);
            }
        }
        let next = off_diagonal_norm(&m);
        if next >= off && next <= tol * scale {
            off = next;
            break;
        }
        off = next;
    }
    if off > tol * scale {
        return Err(Error::NoConvergence {
            sweeps,
            off_diagonal: off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Applies `m <- J^dag m J`, `v <- v J` for a rotation acting on (p, q).
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, j: [C64; 4]) {
    let [jpp, jpq, jqp, jqq] = j;
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m.set(k, p, mkp * jpp + mkq * jqp);
        m.set(k, q, mkp * jpq + mkq * jqq);
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v.set(k, p, vkp * jpp + vkq * jqp);
        v.set(k, q, vkp * jpq + vkq * jqq);
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m.set(p, k, jpp.conj() * mpk + jqp.conj() * mqk);
        m.set(q, k, jpq.conj() * mpk + jqq.conj() * mqk);
    }
    m.set(p, q, c(0.0, 0.0));
    m.set(q, p, c(0.0, 0.0));
    let dp = m[(p, p)].re;
    let dq = m[(q, q)].re;
    m.set(p, p, c(dp, 0.0));
    m.set(q, q, c(dq, 0.0));
}

/// Ascending eigenvalues only.
pub fn hermitian_eigenvalues(a: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    hermitian_eigensolve(a, tol).map(|e| e.eigenvalues)
}

/// True iff the smallest eigenvalue is at least `-tol * |A|_F`.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    let eig = hermitian_eigensolve(a, tol)?;
    Ok(eig.min_eigenvalue() >= -tol * a.frobenius_norm())
}
