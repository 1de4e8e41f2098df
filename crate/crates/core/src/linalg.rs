//! Small dense linear algebra: real matrices, complex matrices, and the
//! Jacobi-type eigen/singular value solvers used throughout the crate.
//!
//! Dimensions here are tiny (Lie algebra dimension ≤ 8, representation
//! dimension up to a few hundred), so everything is row-major `Vec<f64>`
//! and the solvers are plain cyclic Jacobi sweeps.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense row-major real matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{:>14.6e}", self[(r, c)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
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

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Builds a square matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    found: col.len(),
                });
            }
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Vec<f64> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `xᵀ M x` for square `M`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.matvec(x))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Largest entrywise deviation from symmetry.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..self.rows {
            for c in 0..r {
                worst = worst.max((self[(r, c)] - self[(c, r)]).abs());
            }
        }
        worst
    }

    pub fn symmetrize(&self) -> Self {
        let mut out = self.clone();
        for r in 0..self.rows {
            for c in 0..r {
                let v = 0.5 * (self[(r, c)] + self[(c, r)]);
                out[(r, c)] = v;
                out[(c, r)] = v;
            }
        }
        out
    }

    /// Residual `‖MᵀM − I‖_max`; zero for orthogonal matrices.
    pub fn orthogonality_defect(&self) -> f64 {
        let g = &self.transpose() * self;
        let mut worst = 0.0_f64;
        for r in 0..g.rows {
            for c in 0..g.cols {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((g[(r, c)] - target).abs());
            }
        }
        worst
    }

    /// Determinant by partial-pivot elimination.
    pub fn determinant(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let (p, pv) = (k..n)
                .map(|r| (r, a[r * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pv == 0.0 {
                return 0.0;
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                det = -det;
            }
            let piv = a[k * n + k];
            det *= piv;
            for r in k + 1..n {
                let f = a[r * n + k] / piv;
                if f != 0.0 {
                    for c in k..n {
                        a[r * n + c] -= f * a[k * n + c];
                    }
                }
            }
        }
        det
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| a[(x, k)].abs().total_cmp(&a[(y, k)].abs()))
                .unwrap_or(k);
            if a[(p, k)].abs() <= 1e-300 * scale {
                return Err(Error::SingularMatrix {
                    det: 0.0,
                    threshold: 0.0,
                });
            }
            if p != k {
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                    inv.data.swap(k * n + c, p * n + c);
                }
            }
            let piv = a[(k, k)];
            for c in 0..n {
                a[(k, c)] /= piv;
                inv[(k, c)] /= piv;
            }
            for r in 0..n {
                if r == k {
                    continue;
                }
                let f = a[(r, k)];
                if f != 0.0 {
                    for c in 0..n {
                        a[(r, c)] -= f * a[(k, c)];
                        inv[(r, c)] -= f * inv[(k, c)];
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Block-diagonal direct sum.
    pub fn block_diag(blocks: &[&Matrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out[(r0 + r, c0 + c)] = b[(r, c)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Largest absolute entry of `self − other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0.0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.data[k * rhs.cols + c];
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in solver output order (diagonal of the converged matrix).
    pub values: Vec<f64>,
    /// Columns are the corresponding orthonormal eigenvectors.
    pub vectors: Matrix,
    pub sweeps: usize,
}

impl SymmetricEigen {
    /// Reorders into descending eigenvalue order. Equal eigenvalues keep their
    /// relative solver order.
    pub fn sorted_descending(self) -> Self {
        let n = self.values.len();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| self.values[b].total_cmp(&self.values[a]));
        let values = idx.iter().map(|&i| self.values[i]).collect();
        let mut vectors = Matrix::zeros(n, n);
        for (new, &old) in idx.iter().enumerate() {
            for r in 0..n {
                vectors[(r, new)] = self.vectors[(r, old)];
            }
        }
        Self {
            values,
            vectors,
            sweeps: self.sweeps,
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Relative off-diagonal stopping threshold for the cyclic Jacobi solver.
pub const JACOBI_REL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigen-solver for real symmetric matrices.
///
/// Sweeps until the off-diagonal Frobenius mass drops below
/// `JACOBI_REL_TOL · ‖M‖_F`.
pub fn symmetric_eigen(m: &Matrix) -> Result<SymmetricEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let scale = m.frobenius_norm();
    if m.asymmetry() > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSymmetric {
            residual: m.asymmetry(),
        });
    }
    let mut a = m.symmetrize();
    let mut v = Matrix::identity(n);
    let target = JACOBI_REL_TOL * scale;
    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)] * a[(r, c)])
            .sum::<f64>()
            .sqrt();
        if off <= target || scale == 0.0 {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if sweeps >= JACOBI_MAX_SWEEPS {
        return Err(Error::NoConvergence {
            what: "cyclic Jacobi",
            iterations: sweeps,
        });
    }
    Ok(SymmetricEigen {
        values: (0..n).map(|i| a[(i, i)]).collect(),
        vectors: v,
        sweeps,
    })
}

/// Orthonormal basis of the span of `vectors` and the singular values of the
/// stacked matrix, by one-sided (Hestenes) Jacobi on the columns.
///
/// Directions whose singular value is at most `rel_tol` times the largest one
/// are discarded from the returned basis.
pub fn span_basis(vectors: &[Vec<f64>], rel_tol: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut cols: Vec<Vec<f64>> = vectors.to_vec();
    if cols.is_empty() {
        return (Vec::new(), Vec::new());
    }
    hestenes(&mut cols);
    let mut norms: Vec<(usize, f64)> = cols.iter().map(|c| norm(c)).enumerate().collect();
    norms.sort_by(|a, b| b.1.total_cmp(&a.1));
    let top = norms[0].1;
    let singular: Vec<f64> = norms.iter().map(|x| x.1).collect();
    if top == 0.0 {
        return (Vec::new(), singular);
    }
    let basis = norms
        .iter()
        .filter(|(_, s)| *s > rel_tol * top)
        .map(|(i, s)| cols[*i].iter().map(|v| v / s).collect())
        .collect();
    (basis, singular)
}

/// Numerical rank of the matrix whose columns are `vectors`.
pub fn rank(vectors: &[Vec<f64>], rel_tol: f64) -> usize {
    span_basis(vectors, rel_tol).0.len()
}

fn hestenes(cols: &mut [Vec<f64>]) {
    let n = cols.len();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (a, b) = (*x, *y);
                    *x = c * a - s * b;
                    *y = s * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

/// Dense complex square matrix (row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `self += s · other`.
    pub fn add_scaled(&mut self, other: &CMatrix, s: f64) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> Self {
        let n = self.n * other.n;
        let mut out = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.n {
                    for l in 0..other.n {
                        out[(i * other.n + k, j * other.n + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Real symmetric `2n×2n` form `[[Re, −Im], [Im, Re]]`, whose spectrum is
    /// the hermitian spectrum with every eigenvalue doubled in multiplicity.
    pub fn realify(&self) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(2 * n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                let z = self[(r, c)];
                out[(r, c)] = z.re;
                out[(r + n, c + n)] = z.re;
                out[(r, c + n)] = -z.im;
                out[(r + n, c)] = z.im;
            }
        }
        out
    }

    /// Columns of the realified matrix, one per real degree of freedom.
    pub fn realified_columns(&self) -> Vec<Vec<f64>> {
        let r = self.realify();
        (0..r.cols()).map(|c| r.column(c)).collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.n + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Smallest eigenvalue of a hermitian matrix, via Jacobi on the realified form.
pub fn lambda_min_hermitian(m: &CMatrix) -> Result<f64> {
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let defect = m.max_abs_diff(&m.adjoint());
    if defect > 1e-10 * scale {
        return Err(Error::NotHermitian { residual: defect });
    }
    if m.dim() == 1 {
        return Ok(m[(0, 0)].re);
    }
    let herm = &(m + &m.adjoint()).scale_real(0.5);
    if herm.data.iter().all(|z| z.im == 0.0) {
        let n = herm.n;
        let real =
            Matrix::from_row_major(n, n, herm.data.iter().map(|z| z.re).collect()).expect("shape");
        return Ok(symmetric_eigen(&real)?.min());
    }
    Ok(symmetric_eigen(&herm.realify())?.min())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonal_input() {
        let e = symmetric_eigen(&Matrix::diag(&[5.0, 2.0, 7.0])).unwrap();
        assert_eq!(e.min(), 2.0);
        let s = e.sorted_descending();
        assert_eq!(s.values, vec![7.0, 5.0, 2.0]);
    }

    #[test]
    fn jacobi_reconstructs() {
        let m = Matrix::from_rows(&[
            vec![4.0, 1.0, -2.0],
            vec![1.0, 2.0, 0.5],
            vec![-2.0, 0.5, 3.0],
        ])
        .unwrap();
        let e = symmetric_eigen(&m).unwrap();
        let d = Matrix::diag(&e.values);
        let back = &(&e.vectors * &d) * &e.vectors.transpose();
        assert!(back.max_abs_diff(&m) < 1e-12);
        assert!(e.vectors.orthogonality_defect() < 1e-13);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(symmetric_eigen(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        assert!((m.determinant() - 5.0).abs() < 1e-14);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).max_abs_diff(&Matrix::identity(2)) < 1e-14);
        let sing = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn span_basis_detects_rank() {
        let v = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
        ];
        assert_eq!(rank(&v, 1e-9), 2);
        let (basis, sv) = span_basis(&v, 1e-9);
        assert_eq!(sv.len(), 3);
        for b in &basis {
            assert!((norm(b) - 1.0).abs() < 1e-14);
            assert!(b[2].abs() < 1e-15);
        }
    }

    #[test]
    fn hermitian_identity_and_diag() {
        assert_eq!(lambda_min_hermitian(&CMatrix::identity(3)).unwrap(), 1.0);
        let mut d = CMatrix::zeros(3);
        d[(0, 0)] = Complex64::new(5.0, 0.0);
        d[(1, 1)] = Complex64::new(2.0, 0.0);
        d[(2, 2)] = Complex64::new(7.0, 0.0);
        assert!((lambda_min_hermitian(&d).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_two_by_two_closed_form() {
        // [[a, b], [b̄, c]] has eigenvalues (a+c)/2 ± sqrt(((a−c)/2)² + |b|²).
        let (a, c) = (1.5, -0.25);
        let b = Complex64::new(0.3, -0.7);
        let mut m = CMatrix::zeros(2);
        m[(0, 0)] = Complex64::new(a, 0.0);
        m[(1, 1)] = Complex64::new(c, 0.0);
        m[(0, 1)] = b;
        m[(1, 0)] = b.conj();
        let exact = 0.5 * (a + c) - ((0.5 * (a - c)).powi(2) + b.norm_sqr()).sqrt();
        assert!((lambda_min_hermitian(&m).unwrap() - exact).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        m[(1, 0)] = Complex64::new(0.0, 1.0);
        assert!(matches!(
            lambda_min_hermitian(&m),
            Err(Error::NotHermitian { .. })
        ));
    }
}
