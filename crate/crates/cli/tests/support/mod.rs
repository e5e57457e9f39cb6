//! Oracles that share no kernel with the library: inertia and rank come from
//! the characteristic polynomial (Faddeev–LeVerrier) and Descartes' rule of
//! signs, which is exact for polynomials with only real roots.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qhmf_core::qmvf::QmvfProblem;
use qhmf_core::random;
use qhmf_core::{GaussianRational as Q, HermitianMatrix, Inertia, Matrix, Scalar};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn q(re: i64, im: i64) -> Q {
    Q::from_parts(re, im)
}

pub fn mat(rows: &[&[i64]]) -> Matrix<Q> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v, 0)).collect()).collect()).unwrap()
}

pub fn herm(m: Matrix<Q>) -> HermitianMatrix<Q> {
    HermitianMatrix::new(m).expect("Hermitian by construction")
}

/// Coefficients `c[0..=n]` of `det(λI − A) = Σ c_k λ^k`.
pub fn char_poly(a: &Matrix<Q>) -> Vec<Q> {
    let n = a.rows();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut mk: Matrix<Q> = Matrix::zeros(n, n);
    for k in 1..=n {
        mk = &(a * &mk) + &Matrix::identity(n).scale(&c[n - k + 1]);
        let t = (a * &mk).trace();
        c[n - k] = -(t / q(k as i64, 0));
    }
    c
}

pub fn inertia(h: &Matrix<Q>) -> Inertia {
    assert!(h.is_hermitian());
    let n = h.rows();
    let c = char_poly(h);
    let zero = c.iter().position(|x| !x.is_zero()).expect("monic");
    let signs: Vec<bool> = c[zero..]
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| {
            assert!(x.is_real(), "Hermitian characteristic polynomial is real");
            x.re > Q::zero().re
        })
        .collect();
    let positive = signs.windows(2).filter(|w| w[0] != w[1]).count();
    Inertia::new(positive, n - zero - positive, zero)
}

pub fn rank(m: &Matrix<Q>) -> usize {
    inertia(&(m * &m.conj_transpose())).rank()
}

/// `re(x) ≤ re(y)` for real values.
pub fn real_le(x: &Q, y: &Q) -> bool {
    x.re <= y.re
}

pub fn dense_problem(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> QmvfProblem<Q> {
    let mut dim = || rng.random_range(1..=max_dim);
    let (n, p, m, qd) = (dim(), dim(), dim(), dim());
    QmvfProblem::new(
        random::matrix(rng, n, p, bound),
        random::matrix(rng, m, qd, bound),
        random::matrix(rng, n, qd, bound),
        random::hermitian(rng, n, bound),
        random::hermitian(rng, qd, bound),
    )
    .unwrap()
}

/// A random matrix that is not zero.
pub fn nonzero(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Matrix<Q> {
    loop {
        let m = random::mixed(rng, rows, cols, bound);
        if !m.is_zero() {
            return m;
        }
    }
}

/// `I − X·X†`, which annihilates the columns of `X` from the left.
pub fn left_annihilator(x: &Matrix<Q>) -> Matrix<Q> {
    &Matrix::identity(x.rows()) - &(x * &x.pinv())
}
