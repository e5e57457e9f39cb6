//! Random Gaussian-integer test data.
//!
//! Low-rank and prescribed-inertia generators matter as much as the dense
//! ones: uniformly random matrices are almost always full rank and would never
//! reach the degenerate branches of the formulas.

use rand::Rng;

use crate::matrix::{product, HermitianMatrix, Matrix};
use crate::scalar::Scalar;

pub fn gauss_int<T: Scalar, R: Rng + ?Sized>(rng: &mut R, bound: i64) -> T {
    T::from_parts(rng.random_range(-bound..=bound), rng.random_range(-bound..=bound))
}

pub fn real_int<T: Scalar, R: Rng + ?Sized>(rng: &mut R, bound: i64) -> T {
    T::from_parts(rng.random_range(-bound..=bound), 0)
}

pub fn matrix<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    bound: i64,
) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| gauss_int(rng, bound))
}

/// A product of `rows×r` and `r×cols` factors, so rank ≤ `r`.
pub fn low_rank<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    r: usize,
    bound: i64,
) -> Matrix<T> {
    let f = matrix(rng, rows, r, bound);
    let g = matrix(rng, r, cols, bound);
    &f * &g
}

/// Dense matrix, or with probability ~1/3 a rank-deficient one.
pub fn mixed<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    bound: i64,
) -> Matrix<T> {
    let full = rows.min(cols);
    match rng.random_range(0..6) {
        0 => Matrix::zeros(rows, cols),
        1 | 2 if full > 0 => {
            let r = rng.random_range(0..full);
            low_rank(rng, rows, cols, r, bound.min(3))
        }
        _ => matrix(rng, rows, cols, bound),
    }
}

pub fn hermitian<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> HermitianMatrix<T> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, real_int(rng, bound));
        for j in i + 1..n {
            let z: T = gauss_int(rng, bound);
            m.set(j, i, z.conj());
            m.set(i, j, z);
        }
    }
    HermitianMatrix::from_computed(m)
}

/// Unit lower times unit upper triangular: always invertible.
pub fn invertible<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> Matrix<T> {
    let l = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => T::one(),
        std::cmp::Ordering::Greater => gauss_int(rng, bound),
        std::cmp::Ordering::Less => T::zero(),
    });
    let u = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => T::one(),
        std::cmp::Ordering::Less => gauss_int(rng, bound),
        std::cmp::Ordering::Greater => T::zero(),
    });
    &l * &u
}

/// `P·diag(1,…,1,−1,…,−1,0,…)·P*` with `plus` ones and `minus` minus-ones.
pub fn with_inertia<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    plus: usize,
    minus: usize,
    bound: i64,
) -> HermitianMatrix<T> {
    assert!(plus + minus <= n);
    let d: Vec<T> = (0..n)
        .map(|k| {
            if k < plus {
                T::one()
            } else if k < plus + minus {
                -T::one()
            } else {
                T::zero()
            }
        })
        .collect();
    let p = invertible(rng, n, bound);
    HermitianMatrix::from_computed(product(&[&p, &Matrix::diag(&d), &p.conj_transpose()]))
}

/// Hermitian matrix with a random inertia, or a dense random one.
pub fn mixed_hermitian<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    bound: i64,
) -> HermitianMatrix<T> {
    if rng.random_bool(0.5) {
        hermitian(rng, n, bound)
    } else {
        let plus = rng.random_range(0..=n);
        let minus = rng.random_range(0..=n - plus);
        with_inertia(rng, n, plus, minus, bound.min(2))
    }
}

/// Positive semi-definite of rank ≤ `r`.
pub fn psd<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize, bound: i64) -> HermitianMatrix<T> {
    let f: Matrix<T> = matrix(rng, n, r, bound);
    HermitianMatrix::from_computed(&f * &f.conj_transpose())
}

/// A problem with every dimension in `1..=max_dim` and a mix of dense,
/// rank-deficient and zero coefficient matrices.
pub fn problem<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    max_dim: usize,
    bound: i64,
) -> crate::qmvf::QmvfProblem<T> {
    let mut dim = || rng.random_range(1..=max_dim);
    let (n, p, m, q) = (dim(), dim(), dim(), dim());
    crate::qmvf::QmvfProblem::new(
        mixed(rng, n, p, bound),
        mixed(rng, m, q, bound),
        mixed(rng, n, q, bound),
        mixed_hermitian(rng, n, bound),
        mixed_hermitian(rng, q, bound),
    )
    .expect("shapes chosen to agree")
}
