//! Small dense linear algebra: a row-major matrix type and a symmetric
//! eigenvalue solver (reduction to tridiagonal form followed by implicit QL).
//!
//! Banded inputs are reduced with Givens rotations and bulge chasing, which
//! costs `O(n^2 kd)` instead of the `O(n^3)` Householder reduction used for
//! general matrices.

use std::ops::{Index, IndexMut, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(Self {
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

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest `|i - j|` over the nonzero entries.
    pub fn half_bandwidth(&self) -> usize {
        let mut kd = 0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)] != 0.0 {
                    kd = kd.max(i.abs_diff(j));
                }
            }
        }
        kd
    }

    /// The symmetric `(r + c) x (r + c)` matrix `[[0, M], [M^T, 0]]`.
    ///
    /// Its eigenvalues are `+-s_k` (the singular values of `M`) padded with zeros.
    pub fn hermitian_dilation(&self) -> Self {
        let (r, c) = (self.rows, self.cols);
        Self::from_fn(r + c, r + c, |i, j| {
            if i < r && j >= r {
                self[(i, j - r)]
            } else if i >= r && j < r {
                self[(j, i - r)]
            } else {
                0.0
            }
        })
    }

    pub fn check_symmetric(&self, tol: f64) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{}, expected square",
                self.rows, self.cols
            )));
        }
        let scale = self.max_abs().max(1.0);
        for i in 0..self.rows {
            for j in 0..i {
                let diff = (self[(i, j)] - self[(j, i)]).abs();
                if diff > tol * scale {
                    return Err(Error::NotSymmetric { i, j, diff });
                }
            }
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Symmetry tolerance accepted by [`symmetric_eigenvalues`], relative to `max |a_ij|`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// All eigenvalues of a real symmetric matrix, in no particular order.
pub fn symmetric_eigenvalues(matrix: &DenseMatrix) -> Result<Vec<f64>> {
    matrix.check_symmetric(SYMMETRY_TOL)?;
    let n = matrix.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut work = matrix.clone();
    // Symmetrize exactly so the reductions below can trust either triangle.
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (work[(i, j)] + work[(j, i)]);
            work[(i, j)] = m;
            work[(j, i)] = m;
        }
    }
    let kd = work.half_bandwidth();
    let (mut d, mut e) = if kd <= 1 {
        extract_tridiagonal(&work)
    } else if 8 * kd < n {
        band_to_tridiagonal(&mut work, kd);
        extract_tridiagonal(&work)
    } else {
        householder_tridiagonal(&mut work)
    };
    tridiagonal_ql(&mut d, &mut e)?;
    Ok(d)
}

fn extract_tridiagonal(a: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let d = (0..n).map(|i| a[(i, i)]).collect();
    let mut e = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        e[i] = a[(i + 1, i)];
    }
    (d, e)
}

/// Householder reduction of a full symmetric matrix. Returns the diagonal and
/// subdiagonal (`e[i]` couples `d[i]` and `d[i + 1]`, `e[n - 1] = 0`).
fn householder_tridiagonal(a: &mut DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let norm = (k + 1..n).map(|i| a[(i, k)].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = if x0 > 0.0 { -norm } else { norm };
        for (t, i) in (k + 1..n).enumerate() {
            v[t] = a[(i, k)];
        }
        v[0] -= alpha;
        let vnorm = v[..m].iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            e[k] = x0;
            continue;
        }
        v[..m].iter_mut().for_each(|x| *x /= vnorm);

        // p = A22 v, q = p - (v.p) v, A22 -= 2 (v q^T + q v^T)
        for (t, i) in (k + 1..n).enumerate() {
            let row = &a.data[i * n + k + 1..(i + 1) * n];
            p[t] = row.iter().zip(&v[..m]).map(|(x, y)| x * y).sum();
        }
        let kdot: f64 = p[..m].iter().zip(&v[..m]).map(|(x, y)| x * y).sum();
        for t in 0..m {
            p[t] -= kdot * v[t];
        }
        for (t, i) in (k + 1..n).enumerate() {
            let (vt, qt) = (v[t], p[t]);
            let row = &mut a.data[i * n + k + 1..(i + 1) * n];
            for (s, x) in row.iter_mut().enumerate() {
                *x -= 2.0 * (vt * p[s] + qt * v[s]);
            }
        }
        e[k] = alpha;
        for i in k + 1..n {
            a[(i, k)] = 0.0;
            a[(k, i)] = 0.0;
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha;
    }
    for i in 0..n {
        d[i] = a[(i, i)];
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1, n - 2)];
    }
    e[n - 1] = 0.0;
    (d, e)
}

/// Reduces a symmetric matrix of half-bandwidth `kd` to tridiagonal form in
/// place using Givens rotations, chasing each bulge down the band.
fn band_to_tridiagonal(a: &mut DenseMatrix, kd: usize) {
    let n = a.rows();
    for j in 0..n.saturating_sub(2) {
        let top = (j + kd).min(n - 1);
        for k in (j + 2..=top).rev() {
            if a[(k, j)] == 0.0 {
                continue;
            }
            givens_annihilate(a, kd, k - 1, j);
            let (mut row, mut col) = (k + kd, k - 1);
            while row < n {
                if a[(row, col)] != 0.0 {
                    givens_annihilate(a, kd, row - 1, col);
                }
                col = row - 1;
                row += kd;
            }
        }
    }
}

/// Rotates rows/columns `p` and `p + 1` so that `a[p + 1][col]` becomes zero.
fn givens_annihilate(a: &mut DenseMatrix, kd: usize, p: usize, col: usize) {
    let n = a.rows();
    let q = p + 1;
    let (x, y) = (a[(p, col)], a[(q, col)]);
    let r = x.hypot(y);
    if r == 0.0 {
        return;
    }
    let (c, s) = (x / r, y / r);
    let lo = p.saturating_sub(kd + 1);
    let hi = (q + kd + 1).min(n - 1);
    for t in lo..=hi {
        let (u, w) = (a[(p, t)], a[(q, t)]);
        a[(p, t)] = c * u + s * w;
        a[(q, t)] = -s * u + c * w;
    }
    for t in lo..=hi {
        let (u, w) = (a[(t, p)], a[(t, q)]);
        a[(t, p)] = c * u + s * w;
        a[(t, q)] = -s * u + c * w;
    }
    a[(q, col)] = 0.0;
    a[(col, q)] = 0.0;
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
/// On return `d` holds the eigenvalues.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence(l));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let bb = c * e[i];
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
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
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

/// Sum of singular values of an arbitrary (not necessarily square) matrix.
pub fn nuclear_norm(m: &DenseMatrix) -> Result<f64> {
    let eig = symmetric_eigenvalues(&m.hermitian_dilation())?;
    Ok(0.5 * eig.iter().map(|v| v.abs()).sum::<f64>())
}
