//! Complex double-precision kernels backed by nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::{Inertia, Matrix};
use crate::scalar::{is_decimal_literal, split_complex, Mode, Scalar};

const EPS: f64 = f64::EPSILON;

fn to_na(m: &Matrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.entries())
}

fn from_na(m: &DMatrix<Complex64>) -> Matrix<Complex64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn singular_values(m: &Matrix<Complex64>) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    to_na(m).singular_values().iter().copied().collect()
}

fn rank_threshold(m: &Matrix<Complex64>, sigma_max: f64) -> f64 {
    m.rows().max(m.cols()) as f64 * sigma_max * EPS * 64.0
}

/// Eigenvalues and eigenvectors of a Hermitian matrix (columns of the second value).
fn hermitian_eigen(h: &Matrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = SymmetricEigen::new(to_na(h));
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

fn eigen_threshold(n: usize, eigenvalues: &[f64]) -> f64 {
    let top = eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    n as f64 * top * EPS * 64.0
}

fn parse_decimal(s: &str) -> Option<f64> {
    if !is_decimal_literal(s) {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Float mode additionally accepts rationals `p/q`.
fn parse_real(s: &str) -> Option<f64> {
    if let Some((num, den)) = s.split_once('/') {
        let (num, den) = (parse_decimal(num)?, parse_decimal(den)?);
        if den == 0.0 || den.is_sign_negative() || den.fract() != 0.0 || num.fract() != 0.0 {
            return None;
        }
        return Some(num / den);
    }
    parse_decimal(s)
}

fn real_literal(x: f64) -> String {
    // Display for f64 is shortest-round-trip and never uses an exponent.
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

impl Scalar for Complex64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_parts(re: i64, im: i64) -> Self {
        Complex64::new(re as f64, im as f64)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn parse_literal(s: &str) -> Result<Self> {
        let (re, im) = split_complex(s, parse_real, |x| -x, || 0.0)?;
        Ok(Complex64::new(re, im))
    }

    fn to_literal(&self) -> String {
        match (self.re == 0.0, self.im == 0.0) {
            (_, true) => real_literal(self.re),
            (true, false) => format!("{}i", real_literal(self.im)),
            (false, false) => {
                let sign = if self.im < 0.0 { '-' } else { '+' };
                format!("{}{}{}i", real_literal(self.re), sign, real_literal(self.im.abs()))
            }
        }
    }

    fn rank(m: &Matrix<Self>) -> usize {
        let sv = singular_values(m);
        let top = sv.iter().fold(0.0f64, |a, &s| a.max(s));
        if top == 0.0 {
            return 0;
        }
        let tol = rank_threshold(m, top);
        sv.iter().filter(|&&s| s > tol).count()
    }

    fn inertia(h: &Matrix<Self>) -> Inertia {
        let n = h.rows();
        if n == 0 {
            return Inertia::new(0, 0, 0);
        }
        let (vals, _) = hermitian_eigen(h);
        let tol = eigen_threshold(n, &vals);
        let plus = vals.iter().filter(|&&l| l > tol).count();
        let minus = vals.iter().filter(|&&l| l < -tol).count();
        Inertia::new(plus, minus, n - plus - minus)
    }

    fn pinv(m: &Matrix<Self>) -> Matrix<Self> {
        if m.rows() == 0 || m.cols() == 0 {
            return Matrix::zeros(m.cols(), m.rows());
        }
        let svd = to_na(m).svd(true, true);
        let top = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
        let tol = rank_threshold(m, top).max(f64::MIN_POSITIVE);
        let p = svd
            .pseudo_inverse(tol)
            .expect("both singular vector sets were requested");
        from_na(&p)
    }

    fn psd_split(h: &Matrix<Self>) -> Result<(Matrix<Self>, Matrix<Self>)> {
        let n = h.rows();
        if n == 0 {
            return Ok((Matrix::zeros(0, 0), Matrix::zeros(0, 0)));
        }
        let (vals, vecs) = hermitian_eigen(h);
        let tol = eigen_threshold(n, &vals);
        let part = |keep: &dyn Fn(f64) -> f64| {
            let mut acc = DMatrix::<Complex64>::zeros(n, n);
            for (k, &l) in vals.iter().enumerate() {
                let w = keep(l);
                if w > tol {
                    let v = vecs.column(k);
                    acc += v * v.adjoint() * Complex64::new(w, 0.0);
                }
            }
            from_na(&acc).hermitian_part()
        };
        Ok((part(&|l| l), part(&|l| -l)))
    }

    fn close(a: &Matrix<Self>, b: &Matrix<Self>, rel_tol: f64) -> bool {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return false;
        }
        let scale = a
            .entries()
            .iter()
            .chain(b.entries())
            .fold(1.0f64, |m, z| m.max(z.norm()));
        a.entries()
            .iter()
            .zip(b.entries())
            .all(|(x, y)| (x - y).norm() <= rel_tol * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn literals() {
        assert_eq!(Complex64::parse_literal("1.5-2i").unwrap(), c(1.5, -2.0));
        assert_eq!(Complex64::parse_literal("1e-3+1E2i").unwrap(), c(1e-3, 100.0));
        assert_eq!(Complex64::parse_literal("-1/4").unwrap(), c(-0.25, 0.0));
        assert_eq!(Complex64::parse_literal("-.5i").unwrap(), c(0.0, -0.5));
        for bad in ["inf", "NaN", "1//2", "", "1e", "1+i"] {
            assert!(Complex64::parse_literal(bad).is_err(), "{bad}");
        }
        assert_eq!(c(-0.0, 0.0).to_literal(), "0");
        assert_eq!(c(0.1, -2.0).to_literal(), "0.1-2i");
        let z = c(1.0 / 3.0, 7e-12);
        assert_eq!(Complex64::parse_literal(&z.to_literal()).unwrap(), z);
    }

    #[test]
    fn kernels() {
        let m = Matrix::from_fn(2, 2, |i, j| c(((i + 1) * (j + 1)) as f64, 0.0));
        assert_eq!(Complex64::rank(&m), 1);
        let h = Matrix::from_fn(2, 2, |i, j| if i == j { c(0.0, 0.0) } else { c(1.0, 0.0) });
        assert_eq!(Complex64::inertia(&h), Inertia::new(1, 1, 0));
        let (h1, h2) = Complex64::psd_split(&h).unwrap();
        let half = Matrix::from_fn(2, 2, |_, _| c(0.5, 0.0));
        assert!(Complex64::close(&h1, &half, 1e-12));
        assert!(Complex64::close(&(&h1 - &h2), &h, 1e-12));
    }
}
