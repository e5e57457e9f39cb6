//! Exact Gaussian-rational arithmetic and the fraction-free kernels built on it.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{Inertia, Matrix};
use crate::scalar::{rational_tokens, split_complex, Mode, Scalar};

/// `re + im·i` with arbitrary-precision rational parts.
///
/// `BigRational` keeps both parts reduced with a positive denominator, so
/// structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    /// The exact value of a finite double-precision complex number.
    pub fn from_c64(z: Complex64) -> Option<Self> {
        Some(GaussianRational {
            re: BigRational::from_float(z.re)?,
            im: BigRational::from_float(z.im)?,
        })
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// |z|², always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero Gaussian rational");
        GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        }
    }

    fn mul_ref(&self, o: &Self) -> Self {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl<'a> $tr<&'a GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                let ($a, $b) = (self, rhs);
                $body
            }
        }
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianRational {
    re: &a.re + &b.re,
    im: &a.im + &b.im
});
forward_binop!(Sub, sub, |a, b| GaussianRational {
    re: &a.re - &b.re,
    im: &a.im - &b.im
});
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));
forward_binop!(Div, div, |a, b| a.mul_ref(&b.inv()));

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

fn rational_literal(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (negative, num, den) = rational_tokens(s)?;
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    let r = BigRational::new(num, den);
    Some(if negative { -r } else { r })
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for GaussianRational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        GaussianRational::default()
    }

    fn one() -> Self {
        GaussianRational::real(BigRational::one())
    }

    fn from_parts(re: i64, im: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        GaussianRational::real(BigRational::new(num.into(), den.into()))
    }

    fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    fn parse_literal(s: &str) -> Result<Self> {
        let (re, im) = split_complex(s, parse_rational, |r| -r, BigRational::zero)?;
        Ok(GaussianRational { re, im })
    }

    fn to_literal(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => rational_literal(&self.re),
            (true, false) => format!("{}i", rational_literal(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                format!(
                    "{}{}{}i",
                    rational_literal(&self.re),
                    sign,
                    rational_literal(&self.im.abs())
                )
            }
        }
    }

    fn rank(m: &Matrix<Self>) -> usize {
        bareiss_rank(m)
    }

    fn inertia(h: &Matrix<Self>) -> Inertia {
        congruence_inertia(h)
    }

    fn pinv(m: &Matrix<Self>) -> Matrix<Self> {
        full_rank_pinv(m)
    }

    fn psd_split(_h: &Matrix<Self>) -> Result<(Matrix<Self>, Matrix<Self>)> {
        Err(Error::UnsupportedMode("psd_split"))
    }

    fn close(a: &Matrix<Self>, b: &Matrix<Self>, _rel_tol: f64) -> bool {
        a == b
    }
}

// ---------------------------------------------------------------------------
// Gaussian integers, used only inside Bareiss elimination.

#[derive(Clone, Debug, PartialEq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    /// Division known to be exact in Z[i].
    fn div_exact(&self, d: &GaussInt) -> GaussInt {
        let n = &d.re * &d.re + &d.im * &d.im;
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        let (qr, rr) = re.div_rem(&n);
        let (qi, ri) = im.div_rem(&n);
        debug_assert!(rr.is_zero() && ri.is_zero(), "inexact Bareiss division");
        GaussInt { re: qr, im: qi }
    }
}

/// Scales each row by the lcm of its denominators, giving a Gaussian-integer matrix
/// with the same rank.
fn integer_rows(m: &Matrix<GaussianRational>) -> Vec<Vec<GaussInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, z| {
                acc.lcm(z.re.denom()).lcm(z.im.denom())
            });
            row.iter()
                .map(|z| GaussInt {
                    re: (&z.re * &l).to_integer(),
                    im: (&z.im * &l).to_integer(),
                })
                .collect()
        })
        .collect()
}

/// Rank by fraction-free (Bareiss) elimination over Z[i].
pub fn bareiss_rank(m: &Matrix<GaussianRational>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut a = integer_rows(m);
    let mut prev = GaussInt {
        re: BigInt::one(),
        im: BigInt::zero(),
    };
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][col].clone();
        for i in r + 1..rows {
            let lead = a[i][col].clone();
            for j in col + 1..cols {
                let v = pivot.mul(&a[i][j]).sub(&lead.mul(&a[r][j]));
                a[i][j] = v.div_exact(&prev);
            }
            a[i][col] = GaussInt {
                re: BigInt::zero(),
                im: BigInt::zero(),
            };
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Inertia by Hermitian congruence with symmetric pivoting.
///
/// A nonzero diagonal pivot contributes its sign. When the active diagonal is
/// all zero but some off-diagonal `b` survives, the block `[[0,b],[b̄,0]]` has
/// one eigenvalue of each sign and is eliminated as a unit.
pub fn congruence_inertia(h: &Matrix<GaussianRational>) -> Inertia {
    let n = h.rows();
    let mut a: Vec<Vec<GaussianRational>> = (0..n).map(|i| h.row(i).to_vec()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut plus, mut minus) = (0usize, 0usize);

    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[i][i].re.is_zero()) {
            let i = active.swap_remove(pos);
            let d = a[i][i].re.clone();
            if d.is_positive() {
                plus += 1;
            } else {
                minus += 1;
            }
            let inv_d = GaussianRational::real(d.recip());
            for &k in &active {
                if a[k][i].is_zero() {
                    continue;
                }
                let f = &a[k][i] * &inv_d;
                for &l in &active {
                    if !a[i][l].is_zero() {
                        let t = &f * &a[i][l];
                        a[k][l] = &a[k][l] - &t;
                    }
                }
            }
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(pi, &i)| {
            active[pi + 1..]
                .iter()
                .find(|&&j| !a[i][j].is_zero())
                .map(|&j| (i, j))
        });
        let Some((i, j)) = pair else {
            break;
        };
        plus += 1;
        minus += 1;
        active.retain(|&k| k != i && k != j);
        // inverse of [[0,b],[b̄,0]] is [[0,1/b̄],[1/b,0]]
        let inv_b = a[i][j].inv();
        let inv_bc = inv_b.conj();
        for &k in &active {
            let (ki, kj) = (a[k][i].clone(), a[k][j].clone());
            if ki.is_zero() && kj.is_zero() {
                continue;
            }
            let fi = &ki * &inv_bc;
            let fj = &kj * &inv_b;
            for &l in &active {
                let t = &(&fi * &a[j][l]) + &(&fj * &a[i][l]);
                if !t.is_zero() {
                    a[k][l] = &a[k][l] - &t;
                }
            }
        }
    }
    Inertia::new(plus, minus, n - plus - minus)
}

/// Reduced row echelon form over Q(i); returns the matrix and its pivot columns.
pub fn rref(m: &Matrix<GaussianRational>) -> (Matrix<GaussianRational>, Vec<usize>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<GaussianRational>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].inv();
        for j in col..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i == r || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in col..cols {
                if !a[r][j].is_zero() {
                    let t = &f * &a[r][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let data = a.into_iter().flatten().collect();
    (Matrix::from_vec(rows, cols, data), pivots)
}

/// Inverse of a nonsingular square matrix by Gauss–Jordan.
pub fn inverse(m: &Matrix<GaussianRational>) -> Option<Matrix<GaussianRational>> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "inverse of a non-square matrix");
    let aug = Matrix::hstack(&[m, &Matrix::identity(n)]);
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.select_cols(&(n..2 * n).collect::<Vec<_>>()))
}

/// Moore–Penrose inverse through the full-rank factorization `A = F·G`, where
/// `G` holds the nonzero rows of the RREF and `F` the pivot columns of `A`.
pub fn full_rank_pinv(m: &Matrix<GaussianRational>) -> Matrix<GaussianRational> {
    let (red, pivots) = rref(m);
    if pivots.is_empty() {
        return Matrix::zeros(m.cols(), m.rows());
    }
    let r = pivots.len();
    let g = red.select_rows(&(0..r).collect::<Vec<_>>());
    let f = m.select_cols(&pivots);
    let gs = g.conj_transpose();
    let fs = f.conj_transpose();
    let ggs = inverse(&(&g * &gs)).expect("G has full row rank");
    let fsf = inverse(&(&fs * &f)).expect("F has full column rank");
    &(&(&gs * &ggs) * &fsf) * &fs
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = GaussianRational;

    fn q(s: &str) -> Q {
        Q::parse_literal(s).unwrap()
    }

    fn mat(rows: &[&[&str]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn literal_round_trip() {
        for s in ["0", "3", "-7", "1/2", "-3/4i", "1/2-3/4i", "2+1i", "-1i", "5i"] {
            assert_eq!(q(s).to_literal(), s);
        }
        assert_eq!(q("+2/4").to_literal(), "1/2");
        assert_eq!(q("0+0i").to_literal(), "0");
        assert_eq!(q("-1-1i").to_literal(), "-1-1i");
        assert_eq!(q("+3i"), Q::from_parts(0, 3));
    }

    #[test]
    fn rejects_malformed_literals() {
        for s in ["", "1//2", "1/0", "i", "1+i", "1.5", "1 + 2i", "2i3", "abc", "1/2/3"] {
            assert!(Q::parse_literal(s).is_err(), "{s:?} accepted");
        }
    }

    #[test]
    fn field_arithmetic() {
        let a = q("1+2i");
        let b = q("3-1i");
        assert_eq!(&a * &b, q("5+5i"));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(a.inv(), q("1/5-2/5i"));
    }

    #[test]
    fn bareiss_handles_skipped_columns() {
        let m = mat(&[&["0", "1", "2"], &["0", "2", "4"], &["0", "0", "1i"]]);
        assert_eq!(bareiss_rank(&m), 2);
        let m = mat(&[&["1/2", "1/3"], &["1/4", "1/6"]]);
        assert_eq!(bareiss_rank(&m), 1);
        let m = mat(&[&["1", "1i"], &["-1i", "1"]]);
        assert_eq!(bareiss_rank(&m), 1);
    }

    #[test]
    fn congruence_two_by_two_block() {
        let h = mat(&[&["0", "1+1i", "0"], &["1-1i", "0", "0"], &["0", "0", "0"]]);
        assert_eq!(congruence_inertia(&h), Inertia::new(1, 1, 1));
        let h = mat(&[&["0", "2", "1"], &["2", "0", "1"], &["1", "1", "0"]]);
        // trace 0 and det 4 force one positive and two negative eigenvalues
        assert_eq!(congruence_inertia(&h), Inertia::new(1, 2, 0));
    }

    #[test]
    fn inverse_and_singular() {
        let m = mat(&[&["2", "1"], &["1", "1"]]);
        assert_eq!(inverse(&m).unwrap(), mat(&[&["1", "-1"], &["-1", "2"]]));
        assert!(inverse(&mat(&[&["1", "2"], &["2", "4"]])).is_none());
    }
}
