//! Dense matrices over a [`Scalar`] field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::scalar::{Scalar, TOL_HERMITIAN, TOL_RESIDUAL};

/// Counts of positive, negative and zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Inertia {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn new(plus: usize, minus: usize, zero: usize) -> Self {
        Inertia { plus, minus, zero }
    }

    pub fn rank(&self) -> usize {
        self.plus + self.minus
    }

    pub fn order(&self) -> usize {
        self.plus + self.minus + self.zero
    }

    /// Inertia of the negated matrix.
    pub fn flipped(&self) -> Self {
        Inertia::new(self.minus, self.plus, self.zero)
    }

    /// `i_+` for `sign = 1`, `i_−` for `sign = -1`.
    pub fn signed(&self, positive: bool) -> usize {
        if positive {
            self.plus
        } else {
            self.minus
        }
    }
}

impl Add for Inertia {
    type Output = Inertia;
    fn add(self, o: Inertia) -> Inertia {
        Inertia::new(self.plus + o.plus, self.minus + o.minus, self.zero + o.zero)
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.plus, self.minus, self.zero)
    }
}

/// Row-major dense matrix. Either dimension may be zero.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}[", self.rows, self.cols)?;
        for (i, row) in self.data.chunks(self.cols.max(1)).enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x:?}")?;
            }
        }
        f.write_str("]")
    }
}

impl<T: Scalar> Matrix<T> {
    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Matrix { rows, cols, data }
    }

    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(mismatch(
                "Matrix::new",
                format!("{} entries for a {rows}x{cols} matrix", data.len()),
            ));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds from nested rows. An empty outer vector gives a 0×0 matrix.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Ragged(format!(
                "row {bad} has {} entries, expected {cols}",
                rows[bad].len()
            )));
        }
        let n = rows.len();
        Ok(Matrix::from_vec(n, cols, rows.into_iter().flatten().collect()))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn scalar(x: T) -> Self {
        Matrix::from_vec(1, 1, vec![x])
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        Matrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Zero test with the field's notion of closeness.
    pub fn is_negligible(&self) -> bool {
        T::close(self, &Matrix::zeros(self.rows, self.cols), TOL_RESIDUAL)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        T::close(self, other, TOL_RESIDUAL)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// Panics when row counts differ; use [`block`] for checked assembly.
    pub fn hstack(parts: &[&Matrix<T>]) -> Self {
        let rows = parts.first().map_or(0, |m| m.rows);
        assert!(parts.iter().all(|m| m.rows == rows), "hstack row mismatch");
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for m in parts {
                data.extend_from_slice(m.row(i));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics when column counts differ; use [`block`] for checked assembly.
    pub fn vstack(parts: &[&Matrix<T>]) -> Self {
        let cols = parts.first().map_or(0, |m| m.cols);
        assert!(parts.iter().all(|m| m.cols == cols), "vstack column mismatch");
        let rows = parts.iter().map(|m| m.rows).sum();
        let data = parts.iter().flat_map(|m| m.data.iter().cloned()).collect();
        Matrix { rows, cols, data }
    }

    pub fn direct_sum(a: &Matrix<T>, b: &Matrix<T>) -> Self {
        Matrix::from_fn(a.rows + b.rows, a.cols + b.cols, |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j).clone(),
                (false, false) => b.get(i - a.rows, j - a.cols).clone(),
                _ => T::zero(),
            }
        })
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix<T>) -> Self {
        let (r, c) = (other.rows, other.cols);
        Matrix::from_fn(self.rows * r, self.cols * c, |i, j| {
            self.get(i / r, j / c).clone() * other.get(i % r, j % c).clone()
        })
    }

    /// Column-major vectorization, so that `vec(AXB) = (Bᵀ ⊗ A)·vec(X)`.
    pub fn vec(&self) -> Self {
        Matrix::from_fn(self.rows * self.cols, 1, |k, _| {
            self.get(k % self.rows, k / self.rows).clone()
        })
    }

    /// Inverse of [`Matrix::vec`].
    pub fn unvec(v: &Matrix<T>, rows: usize, cols: usize) -> Self {
        assert_eq!(v.rows * v.cols, rows * cols, "unvec size mismatch");
        Matrix::from_fn(rows, cols, |i, j| v.data[j * rows + i].clone())
    }

    /// `(H + H*)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::from_ratio(1, 2);
        let s = self.conj_transpose();
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j).clone() + s.get(i, j).clone()) * half.clone()
        })
    }

    /// Exact equality with the adjoint (Exact), or within τ_herm (Float).
    pub fn is_hermitian(&self) -> bool {
        self.is_square() && T::close(self, &self.conj_transpose(), TOL_HERMITIAN)
    }

    pub fn rank(&self) -> usize {
        T::rank(self)
    }

    pub fn pinv(&self) -> Self {
        T::pinv(self)
    }

    /// `E_A = I − A·A†`.
    pub fn proj_e(&self) -> Self {
        let p = self * &self.pinv();
        &Matrix::identity(self.rows) - &p
    }

    /// `F_A = I − A†·A`.
    pub fn proj_f(&self) -> Self {
        let p = &self.pinv() * self;
        &Matrix::identity(self.cols) - &p
    }

    fn checked_mul(&self, rhs: &Matrix<T>) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "product of {}x{} and {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            let a = self.row(i);
            for j in 0..rhs.cols {
                let mut acc = T::zero();
                for (k, x) in a.iter().enumerate() {
                    let y = rhs.get(k, j);
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc + x.clone() * y.clone();
                    }
                }
                data.push(acc);
            }
        }
        Matrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }

    fn zip(&self, rhs: &Matrix<T>, op: &str, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "{op} of mismatched shapes");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.zip(rhs, "sum", |a, b| a.clone() + b.clone())
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.zip(rhs, "difference", |a, b| a.clone() - b.clone())
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_mul(rhs)
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

/// Product of a chain of matrices, left to right.
pub fn product<T: Scalar>(factors: &[&Matrix<T>]) -> Matrix<T> {
    let (first, rest) = factors.split_first().expect("empty product");
    rest.iter().fold((*first).clone(), |acc, m| &acc * m)
}

/// Assembles a block matrix. Every block row must share a height, and every
/// block column a width.
pub fn block<T: Scalar>(rows: &[Vec<&Matrix<T>>]) -> Result<Matrix<T>> {
    let Some(first) = rows.first() else {
        return Ok(Matrix::zeros(0, 0));
    };
    let widths: Vec<usize> = first.iter().map(|m| m.cols).collect();
    for (bi, br) in rows.iter().enumerate() {
        if br.len() != widths.len() {
            return Err(Error::Ragged(format!(
                "block row {bi} has {} blocks, expected {}",
                br.len(),
                widths.len()
            )));
        }
        let h = br.first().map_or(0, |m| m.rows);
        for (bj, m) in br.iter().enumerate() {
            if m.rows != h {
                return Err(Error::Ragged(format!(
                    "block ({bi},{bj}) has {} rows, expected {h}",
                    m.rows
                )));
            }
            if m.cols != widths[bj] {
                return Err(Error::Ragged(format!(
                    "block ({bi},{bj}) has {} columns, expected {}",
                    m.cols, widths[bj]
                )));
            }
        }
    }
    let strips: Vec<Matrix<T>> = rows.iter().map(|br| Matrix::hstack(br)).collect();
    Ok(Matrix::vstack(&strips.iter().collect::<Vec<_>>()))
}

/// `true` iff `R(x) ⊆ R(y)`, tested as `Y·Y†·X = X`.
pub fn range_included<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>) -> Result<bool> {
    if x.rows != y.rows {
        return Err(mismatch(
            "range_included",
            format!("x has {} rows, y has {}", x.rows, y.rows),
        ));
    }
    let proj = &(y * &y.pinv()) * x;
    Ok(T::close(&proj, x, TOL_RESIDUAL))
}

/// A square matrix certified equal to its conjugate transpose.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix<T>(Matrix<T>);

impl<T: fmt::Debug> fmt::Debug for HermitianMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<T: Scalar> HermitianMatrix<T> {
    /// Certifies `m`. In Float mode the stored matrix is `(m + m*)/2`.
    pub fn new(m: Matrix<T>) -> Result<Self> {
        if !m.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        Ok(Self::from_computed(m))
    }

    /// For matrices Hermitian by construction (e.g. `BMB*`). Float round-off is
    /// removed by symmetrizing; exact inputs are only checked in debug builds.
    pub(crate) fn from_computed(m: Matrix<T>) -> Self {
        match T::MODE {
            crate::scalar::Mode::Exact => {
                debug_assert!(m.is_square() && m == m.conj_transpose(), "not Hermitian: {m:?}");
                HermitianMatrix(m)
            }
            crate::scalar::Mode::Float => HermitianMatrix(m.hermitian_part()),
        }
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(Matrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(Matrix::identity(n))
    }

    pub fn order(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn inertia(&self) -> Inertia {
        T::inertia(&self.0)
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn is_psd(&self) -> bool {
        self.inertia().minus == 0
    }

    pub fn is_nsd(&self) -> bool {
        self.inertia().plus == 0
    }

    pub fn is_pd(&self) -> bool {
        self.inertia().plus == self.order()
    }

    pub fn is_nd(&self) -> bool {
        self.inertia().minus == self.order()
    }

    pub fn neg(&self) -> Self {
        HermitianMatrix(-&self.0)
    }

    /// Disjoint PSD split `H = H1 − H2` with `H1·H2 = 0` (Float mode only).
    pub fn psd_split(&self) -> Result<(Self, Self)> {
        let (a, b) = T::psd_split(&self.0)?;
        Ok((HermitianMatrix(a), HermitianMatrix(b)))
    }

    /// `P·H·P*`.
    pub fn congruence(&self, p: &Matrix<T>) -> Self {
        HermitianMatrix::from_computed(product(&[p, &self.0, &p.conj_transpose()]))
    }
}

/// Free-function forms used by the matrix-core operation list.
pub fn conj_transpose<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    m.conj_transpose()
}

pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    m.rank()
}

pub fn inertia<T: Scalar>(h: &HermitianMatrix<T>) -> Inertia {
    h.inertia()
}

pub fn moore_penrose<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    m.pinv()
}

pub fn proj_e<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    a.proj_e()
}

pub fn proj_f<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    a.proj_f()
}

pub fn psd_split<T: Scalar>(
    h: &HermitianMatrix<T>,
) -> Result<(HermitianMatrix<T>, HermitianMatrix<T>)> {
    h.psd_split()
}
