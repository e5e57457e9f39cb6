//! Midpoint convexity of `φ`.
//!
//! The midpoint gap `φ((X₁+X₂)/2) − φ(X₁)/2 − φ(X₂)/2` equals
//! `−¼·AΔ(BMB*)Δ*A*` with `Δ = X₁ − X₂`, itself a quadratic function of `Δ`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::identities::ExtremalBounds;
use crate::matrix::{product, HermitianMatrix, Matrix};
use crate::qmvf::{extremal, Erratum, ErratumKind, QmvfProblem};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvexityClass {
    Convex,
    Concave,
    Affine,
    Neither,
}

pub const PREDICATES: [&str; 8] = [
    "exists_nonsingular_gap",
    "exists_zero_gap",
    "exists_pd_gap",
    "exists_nd_gap",
    "exists_psd_gap",
    "exists_nsd_gap",
    "always_psd_gap",
    "always_nsd_gap",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub class: ConvexityClass,
    /// Extremes of the gap over pairs with `X₁ ≠ X₂`.
    pub midpoint_bounds: ExtremalBounds,
    pub predicates: BTreeMap<&'static str, bool>,
    pub errata: Vec<Erratum>,
}

/// `(A, B, 0, 0, −M/4)`: evaluating it at `Δ` gives the midpoint gap.
pub fn gap_problem<T: Scalar>(p: &QmvfProblem<T>) -> QmvfProblem<T> {
    let d = p.dims();
    let m = p.m.matrix().scale(&T::from_ratio(-1, 4));
    QmvfProblem::new(
        p.a.clone(),
        p.b.clone(),
        Matrix::zeros(d.n, d.q),
        HermitianMatrix::zeros(d.n),
        HermitianMatrix::new(m).expect("scaled Hermitian stays Hermitian"),
    )
    .expect("shapes taken from a valid problem")
}

/// The gap computed from three evaluations, checked against the closed form.
pub fn midpoint_gap<T: Scalar>(p: &QmvfProblem<T>, x1: &Matrix<T>, x2: &Matrix<T>) -> Result<HermitianMatrix<T>> {
    p.check_variable(x1)?;
    p.check_variable(x2)?;
    let half = T::from_ratio(1, 2);
    let mid = (x1 + x2).scale(&half);
    let avg = (p.evaluate_unchecked(x1).matrix() + p.evaluate_unchecked(x2).matrix()).scale(&half);
    let gap = p.evaluate_unchecked(&mid).matrix() - &avg;
    let closed = gap_problem(p).evaluate_unchecked(&(x1 - x2));
    if !gap.approx_eq(closed.matrix()) {
        return Err(Error::IdentityViolation("midpoint gap differs from its closed form".into()));
    }
    Ok(closed)
}

struct Facts {
    n: usize,
    p: usize,
    r_a: usize,
    r_w: usize,
    plus_w: usize,
    minus_w: usize,
    w_pd: bool,
    w_nd: bool,
    w_psd: bool,
    w_nsd: bool,
}

impl Facts {
    fn of<T: Scalar>(p: &QmvfProblem<T>) -> Self {
        let w = p.bmb();
        let wi = w.inertia();
        let m = w.order();
        Facts {
            n: p.dims().n,
            p: p.dims().p,
            r_a: p.a.rank(),
            r_w: wi.rank(),
            plus_w: wi.plus,
            minus_w: wi.minus,
            w_pd: wi.plus == m,
            w_nd: wi.minus == m,
            w_psd: wi.minus == 0,
            w_nsd: wi.plus == 0,
        }
    }

    /// `AΔ ≠ 0` for every `Δ ≠ 0` and `v*Wv ≠ 0` for every `v ≠ 0` (with
    /// `v*Wv` of fixed sign `s`).
    fn definite_on_nonzero(&self, positive: bool) -> bool {
        self.r_a == self.p && if positive { self.w_pd } else { self.w_nd }
    }

    /// The printed formulas, read literally.
    fn printed_bounds(&self) -> [i64; 6] {
        let one_if = |b: bool| i64::from(b);
        [
            self.r_a.min(self.r_w) as i64,
            one_if((self.w_pd || self.w_nd) && self.r_a == self.p),
            self.r_a.min(self.minus_w) as i64,
            self.r_a.min(self.plus_w) as i64,
            one_if(self.w_nd && self.r_a == self.p),
            one_if(self.w_pd && self.r_a == self.p),
        ]
    }

    fn printed_predicates(&self) -> [bool; 8] {
        [
            self.r_a == self.n && self.r_w >= self.n,
            (!self.w_pd && !self.w_nd) || self.r_a < self.p,
            self.w_nd && self.r_a == self.n,
            self.w_pd && self.r_a == self.n,
            !self.w_pd || self.r_a < self.p,
            !self.w_nd || self.r_a < self.p,
            self.w_nsd,
            self.w_psd,
        ]
    }
}

fn predicates_from_bounds(b: &ExtremalBounds, n: usize) -> [bool; 8] {
    let n = n as i64;
    [
        b.max_rank == n,
        b.min_rank == 0,
        b.max_plus == n,
        b.max_minus == n,
        b.min_minus == 0,
        b.min_plus == 0,
        b.max_minus == 0,
        b.max_plus == 0,
    ]
}

/// Extremes of the gap over `Δ ≠ 0`.
///
/// Maxima come from the general extremal formulas applied to the gap
/// problem; `Δ = 0` cannot raise a maximum. Minima exclude `Δ = 0`: the gap
/// vanishes for some `Δ ≠ 0` unless `A` is injective and `BMB*` is definite,
/// and then rank one is reached by a rank-one `Δ`.
pub fn midpoint_bounds<T: Scalar>(p: &QmvfProblem<T>) -> ExtremalBounds {
    let d = p.dims();
    let gp = gap_problem(p);
    let mut b = extremal(&gp).bounds;
    if d.p * d.m == 0 {
        // a single point, so no distinct pairs
        return ExtremalBounds::constant(HermitianMatrix::<T>::zeros(d.n).inertia());
    }
    let f = Facts::of(p);
    // the gap carries −¼·W, so a positive W gives a negative gap
    let neg_definite_gap = f.definite_on_nonzero(true);
    let pos_definite_gap = f.definite_on_nonzero(false);
    b.min_rank = i64::from(neg_definite_gap || pos_definite_gap);
    b.min_plus = i64::from(pos_definite_gap);
    b.min_minus = i64::from(neg_definite_gap);
    b
}

pub fn convexity_classify<T: Scalar>(p: &QmvfProblem<T>) -> ConvexityReport {
    let f = Facts::of(p);
    let class = if f.r_w == 0 || f.r_a == 0 {
        ConvexityClass::Affine
    } else if f.w_psd {
        ConvexityClass::Convex
    } else if f.w_nsd {
        ConvexityClass::Concave
    } else {
        ConvexityClass::Neither
    };
    let bounds = midpoint_bounds(p);
    let general = predicates_from_bounds(&bounds, f.n);
    let mut errata = Vec::new();
    // the printed statement assumes A ≠ 0 and BMB* ≠ 0
    if f.r_a > 0 && f.r_w > 0 && p.dims().p * p.dims().m > 0 {
        for (k, (&printed, &value)) in f.printed_bounds().iter().zip(bounds.values().iter()).enumerate() {
            if printed != value {
                errata.push(Erratum {
                    source: "midpoint extremal formulas".into(),
                    field: ExtremalBounds::FIELD_NAMES[k].into(),
                    kind: ErratumKind::Disagreement,
                    printed,
                    general: value,
                });
            }
        }
        for (k, (&printed, &value)) in f.printed_predicates().iter().zip(general.iter()).enumerate() {
            if printed != value {
                errata.push(Erratum {
                    source: "midpoint predicates".into(),
                    field: PREDICATES[k].into(),
                    kind: ErratumKind::Disagreement,
                    printed: i64::from(printed),
                    general: i64::from(value),
                });
            }
        }
    }
    ConvexityReport {
        class,
        midpoint_bounds: bounds,
        predicates: PREDICATES.iter().copied().zip(general).collect(),
        errata,
    }
}

/// `−¼·AΔ(BMB*)Δ*A*` without the evaluation cross-check.
pub fn gap_closed_form<T: Scalar>(p: &QmvfProblem<T>, delta: &Matrix<T>) -> Matrix<T> {
    let w = p.bmb();
    let ad = &p.a * delta;
    product(&[&ad, w.matrix(), &ad.conj_transpose()]).scale(&T::from_ratio(-1, 4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmvf::p_scalar;
    use crate::GaussianRational as Q;

    fn q(v: i64) -> Q {
        Q::from_parts(v, 0)
    }

    fn scalar_problem(c: i64, d: i64, m: i64) -> QmvfProblem<Q> {
        let one = Matrix::scalar(q(1));
        QmvfProblem::new(
            one.clone(),
            one,
            Matrix::scalar(q(c)),
            HermitianMatrix::new(Matrix::scalar(q(d))).unwrap(),
            HermitianMatrix::new(Matrix::scalar(q(m))).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn gap_examples() {
        let p = scalar_problem(0, 0, 1);
        let g = midpoint_gap(&p, &Matrix::scalar(q(0)), &Matrix::scalar(q(2))).unwrap();
        assert_eq!(g.matrix(), &Matrix::scalar(q(-1)));
        let x = Matrix::scalar(Q::from_parts(3, -1));
        assert!(midpoint_gap(&p, &x, &x).unwrap().matrix().is_zero());
        let p0 = scalar_problem(4, 1, 0);
        assert!(midpoint_gap(&p0, &Matrix::scalar(q(7)), &Matrix::scalar(q(-2))).unwrap().matrix().is_zero());
    }

    #[test]
    fn p_scalar_is_convex() {
        let r = convexity_classify(&p_scalar::<Q>());
        assert_eq!(r.class, ConvexityClass::Convex);
        assert_eq!(r.midpoint_bounds.max_minus, 1);
        assert_eq!(r.midpoint_bounds.min_minus, 1);
        assert_eq!(r.midpoint_bounds.min_rank, 1);
        assert!(r.predicates["always_nsd_gap"]);
        assert!(r.errata.is_empty());
        assert_eq!(convexity_classify(&scalar_problem(0, 0, -1)).class, ConvexityClass::Concave);
        assert_eq!(convexity_classify(&scalar_problem(0, 0, 0)).class, ConvexityClass::Affine);
    }

    #[test]
    fn indefinite_weight() {
        let p = QmvfProblem::new(
            Matrix::scalar(q(1)),
            Matrix::identity(2),
            Matrix::zeros(1, 2),
            HermitianMatrix::zeros(1),
            HermitianMatrix::new(Matrix::diag(&[q(1), q(-1)])).unwrap(),
        )
        .unwrap();
        let r = convexity_classify(&p);
        assert_eq!(r.class, ConvexityClass::Neither);
        assert!(r.midpoint_bounds.max_plus >= 1 && r.midpoint_bounds.max_minus >= 1);
        // a definite gap exists although BMB* is not definite
        assert!(r.predicates["exists_pd_gap"]);
        assert!(r.errata.iter().any(|e| e.field == "exists_pd_gap"));
    }
}
