//! Dense numerical kernels: symmetric eigenvalues, singular values through the
//! smaller Gram matrix, and exact integer determinants.
//!
//! The kernel dimension of every eigenproblem is supplied by the caller, who
//! knows it combinatorially. The solver snaps that many smallest eigenvalues to
//! exact zero and fails with [`Error::KernelMismatch`] if the next one is
//! numerically indistinguishable from zero.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Matrices up to this order use cyclic Jacobi; larger ones are reduced to
/// tridiagonal form and solved by implicit QL.
pub const JACOBI_MAX_ORDER: usize = 160;

const SYMMETRY_TOL: f64 = 1e-12;
const JACOBI_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-8;
const KERNEL_GAP_TOL: f64 = 1e-7;
const PSD_TOL: f64 = 1e-9;
const MAX_SWEEPS: usize = 100;
const MAX_QL_ITERATIONS: usize = 100;

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Ok(DenseMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(other.row(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `A Aᵀ`, exploiting zero entries column by column.
    pub fn gram_rows(&self) -> DenseMatrix {
        let mut g = Self::zeros(self.rows, self.rows);
        let mut nz = Vec::new();
        for k in 0..self.cols {
            nz.clear();
            nz.extend((0..self.rows).filter_map(|i| {
                let x = self[(i, k)];
                (x != 0.0).then_some((i, x))
            }));
            for &(i, xi) in &nz {
                for &(j, xj) in &nz {
                    g[(i, j)] += xi * xj;
                }
            }
        }
        g
    }

    /// `Aᵀ A`.
    pub fn gram_cols(&self) -> DenseMatrix {
        let mut g = Self::zeros(self.cols, self.cols);
        let mut nz = Vec::new();
        for i in 0..self.rows {
            nz.clear();
            nz.extend(
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter_map(|(j, &x)| (x != 0.0).then_some((j, x))),
            );
            for &(a, xa) in &nz {
                for &(b, xb) in &nz {
                    g[(a, b)] += xa * xb;
                }
            }
        }
        g
    }

    fn check_symmetric(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let tol = SYMMETRY_TOL * self.frobenius_norm();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self[(i, j)] - self[(j, i)]).abs() > tol {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Row-major exact integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Drops row `r` and column `c`.
    pub fn minor(&self, r: usize, c: usize) -> IntMatrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                data.push(self[(i, j)]);
            }
        }
        IntMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Ascending eigenvalues or singular values, the first `zero_count` of which
/// are exactly zero and the rest strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    zero_count: usize,
}

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn positive(&self) -> &[f64] {
        &self.values[self.zero_count..]
    }

    pub fn min_positive(&self) -> Option<f64> {
        self.positive().first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Number of values `<= t`.
    pub fn count_le(&self, t: f64) -> usize {
        self.values.partition_point(|&x| x <= t)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Eigenvalues of a symmetric matrix whose kernel has dimension `known_kernel_dim`.
pub fn sym_eigenvalues(m: &DenseMatrix, known_kernel_dim: usize) -> Result<Spectrum> {
    m.check_symmetric()?;
    let raw = raw_eigenvalues(m)?;
    snap_kernel(raw, known_kernel_dim, m.frobenius_norm())
}

/// Singular values of `a`, one per domain dimension (column), computed from the
/// smaller of `AᵀA` and `AAᵀ`. `known_kernel_dim` is `dim ker a`.
pub fn singular_values(a: &DenseMatrix, known_kernel_dim: usize) -> Result<Spectrum> {
    let (n, m) = (a.rows, a.cols);
    if known_kernel_dim > m {
        return Err(Error::KernelTooLarge {
            kernel: known_kernel_dim,
            size: m,
        });
    }
    let rank = m - known_kernel_dim;
    let (gram, gram_kernel) = if m <= n {
        (a.gram_cols(), known_kernel_dim)
    } else {
        if rank > n {
            return Err(Error::InvalidArgument(format!(
                "rank {rank} of a {n}x{m} matrix exceeds its row count"
            )));
        }
        (a.gram_rows(), n - rank)
    };
    let fro = gram.frobenius_norm();
    let raw = raw_eigenvalues(&gram)?;
    if let Some(&lowest) = raw.first() {
        if lowest < -PSD_TOL * fro {
            return Err(Error::NotPositiveSemidefinite { value: lowest });
        }
    }
    let squares = snap_kernel(raw, gram_kernel, fro)?;
    let mut values = vec![0.0; m - squares.len()];
    values.extend(squares.values.iter().map(|&x| x.sqrt()));
    Ok(Spectrum {
        values,
        zero_count: known_kernel_dim,
    })
}

/// Ascending eigenvalues with the trace conservation check applied.
pub(crate) fn raw_eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    let n = m.rows;
    let mut values = if n <= JACOBI_MAX_ORDER {
        jacobi_eigenvalues(m)?
    } else {
        tridiagonal_ql_eigenvalues(m)?
    };
    values.sort_by(f64::total_cmp);
    let sum: f64 = values.iter().sum();
    let trace = m.trace();
    if (sum - trace).abs() > TRACE_TOL * m.frobenius_norm().max(f64::MIN_POSITIVE) {
        return Err(Error::TraceMismatch { sum, trace });
    }
    Ok(values)
}

pub(crate) fn snap_kernel(mut values: Vec<f64>, kernel: usize, fro: f64) -> Result<Spectrum> {
    let n = values.len();
    if kernel > n {
        return Err(Error::KernelTooLarge { kernel, size: n });
    }
    if kernel < n {
        let threshold = KERNEL_GAP_TOL * (1.0 + fro);
        if values[kernel] < threshold {
            return Err(Error::KernelMismatch {
                expected: kernel,
                next: values[kernel],
                threshold,
            });
        }
    }
    for v in &mut values[..kernel] {
        *v = 0.0;
    }
    Ok(Spectrum {
        values,
        zero_count: kernel,
    })
}

/// Cyclic Jacobi rotations until the off-diagonal norm drops below
/// `1e-12 * ‖m‖_F`. Unsorted eigenvalues.
pub fn jacobi_eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    let n = m.rows;
    let mut a = m.data.clone();
    let target = JACOBI_TOL * m.frobenius_norm();
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let g = a[r * n + p];
                    let h = a[r * n + q];
                    let rp = g - s * (h + g * tau);
                    let rq = h + s * (g - h * tau);
                    a[r * n + p] = rp;
                    a[p * n + r] = rp;
                    a[r * n + q] = rq;
                    a[q * n + r] = rq;
                }
            }
        }
    }
    Ok((0..n).map(|i| a[i * n + i]).collect())
}

/// Householder reduction to tridiagonal form followed by implicit QL.
/// Unsorted eigenvalues.
pub fn tridiagonal_ql_eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    let (mut d, mut e) = householder_tridiagonalize(m);
    tql_eigenvalues(&mut d, &mut e)?;
    Ok(d)
}

/// Returns the diagonal and the subdiagonal (`e[i]` couples `i` and `i+1`,
/// `e[n-1] = 0`).
fn householder_tridiagonalize(m: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.rows;
    let mut a = m.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let norm = (lo..n).map(|i| a[i * n + k].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let x0 = a[lo * n + k];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        for i in lo..n {
            v[i] = a[i * n + k];
        }
        v[lo] -= alpha;
        let vnorm = (lo..n).map(|i| v[i] * v[i]).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            e[k] = x0;
            continue;
        }
        for vi in &mut v[lo..n] {
            *vi /= vnorm;
        }
        // p = A v on the trailing block
        for i in lo..n {
            let row = &a[i * n + lo..i * n + n];
            p[i] = row.iter().zip(&v[lo..n]).map(|(x, y)| x * y).sum();
        }
        let vp: f64 = (lo..n).map(|i| v[i] * p[i]).sum();
        for i in lo..n {
            p[i] -= vp * v[i];
        }
        // A <- A - 2 v pᵀ - 2 p vᵀ
        for i in lo..n {
            let (vi, pi) = (v[i], p[i]);
            let row = &mut a[i * n + lo..i * n + n];
            for (j, x) in row.iter_mut().enumerate() {
                let j = j + lo;
                *x -= 2.0 * (vi * p[j] + pi * v[j]);
            }
        }
        e[k] = alpha;
        for i in lo..n {
            a[i * n + k] = 0.0;
            a[k * n + i] = 0.0;
        }
        a[lo * n + k] = alpha;
        a[k * n + lo] = alpha;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + (n - 2)];
    }
    if n >= 1 {
        e[n - 1] = 0.0;
    }
    (d, e)
}

fn tql_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iterations == MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence { sweeps: iterations });
            }
            iterations += 1;

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn integer_determinant(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(m[(i, j)])).collect())
        .collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}
