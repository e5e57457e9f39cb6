//! The scalar field abstraction.
//!
//! Two fields are provided: [`GaussianRational`](crate::exact::GaussianRational)
//! (exact arithmetic in Q(i), the default for every identity check) and
//! [`Complex64`] (IEEE doubles, needed for spectral splitting and large inputs).
//! Rank, inertia and pseudo-inverse are dispatched through the trait so that
//! each field can use the algorithm that is sound for it.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Inertia, Matrix};

/// Arithmetic mode of a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// Relative residual tolerance for range-inclusion and consistency tests (Float mode).
pub const TOL_RESIDUAL: f64 = 1e-9;
/// Relative tolerance for Hermitian certification (Float mode).
pub const TOL_HERMITIAN: f64 = 1e-10;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    /// The Gaussian integer `re + im·i`.
    fn from_parts(re: i64, im: i64) -> Self;
    /// The real rational `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_c64(&self) -> Complex64;
    fn parse_literal(s: &str) -> Result<Self>;
    fn to_literal(&self) -> String;

    // Field-specific kernels.

    fn rank(m: &Matrix<Self>) -> usize;
    /// Inertia of a matrix the caller has certified Hermitian.
    fn inertia(h: &Matrix<Self>) -> Inertia;
    fn pinv(m: &Matrix<Self>) -> Matrix<Self>;
    /// Disjoint PSD split `h = h1 − h2`, `h1·h2 = 0`.
    fn psd_split(h: &Matrix<Self>) -> Result<(Matrix<Self>, Matrix<Self>)>;
    /// Equality for exact fields; max-entry relative closeness for floats.
    fn close(a: &Matrix<Self>, b: &Matrix<Self>, rel_tol: f64) -> bool;
}

/// Splits `[+-]? body` into a sign and the body.
fn strip_sign(s: &str) -> (bool, &str) {
    if let Some(rest) = s.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = s.strip_prefix('+') {
        (false, rest)
    } else {
        (false, s)
    }
}

/// Splits a complex literal into a real-part literal and an imaginary-part literal.
///
/// `parse_part` parses one signed real literal. Accepted shapes are `re`, `re±imi`
/// and `±imi`.
pub(crate) fn split_complex<R>(
    src: &str,
    parse_part: impl Fn(&str) -> Option<R>,
    neg: impl Fn(R) -> R,
    zero: impl Fn() -> R,
) -> Result<(R, R)> {
    let s = src.trim();
    let bad = || Error::ParseScalar(src.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return parse_part(s).map(|re| (re, zero())).ok_or_else(bad);
    };
    if let Some(im) = parse_part(body) {
        return Ok((zero(), im));
    }
    let bytes = body.as_bytes();
    for k in 1..bytes.len() {
        let c = bytes[k];
        if c != b'+' && c != b'-' {
            continue;
        }
        if matches!(bytes[k - 1], b'e' | b'E') {
            continue;
        }
        let (re_txt, im_txt) = (&body[..k], &body[k + 1..]);
        if let (Some(re), Some(im)) = (parse_part(re_txt), parse_part(im_txt)) {
            let im = if c == b'-' { neg(im) } else { im };
            return Ok((re, im));
        }
    }
    Err(bad())
}

/// Parses `[+-]? digits ("/" digits)?` into (negative, numerator digits, denominator digits).
pub(crate) fn rational_tokens(s: &str) -> Option<(bool, &str, Option<&str>)> {
    let (negative, body) = strip_sign(s);
    let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    match body.split_once('/') {
        Some((num, den)) if all_digits(num) && all_digits(den) => Some((negative, num, Some(den))),
        None if all_digits(body) => Some((negative, body, None)),
        _ => None,
    }
}

/// Decimal literal check for Float mode: `[+-]? (digits ("." digits?)? | "." digits) ([eE][+-]?digits)?`.
pub(crate) fn is_decimal_literal(s: &str) -> bool {
    let (_, body) = strip_sign(s);
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(k) => (&body[..k], Some(&body[k + 1..])),
        None => (body, None),
    };
    let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = match mantissa.split_once('.') {
        Some((int, frac)) => (!int.is_empty() || !frac.is_empty()) && digits(int) && digits(frac),
        None => !mantissa.is_empty() && digits(mantissa),
    };
    let exponent_ok = match exponent {
        None => true,
        Some(e) => {
            let (_, e) = strip_sign(e);
            !e.is_empty() && digits(e)
        }
    };
    mantissa_ok && exponent_ok
}
