//! Least squares for `AXB = C`: the general solution, Löwner-minimal
//! residual Grams, and weighted trace objectives.
//!
//! Every residual Gram is also expressed as a [`QmvfProblem`], so that the
//! closed forms here can be compared with the general extremal and optimum
//! machinery.

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::identities::{solve_axb_c, AxbSolution, ExtremalBounds, SolutionFamily};
use crate::loewner::{global_min_single, Infeasible, OptimumCertificate};
use crate::matrix::{block, product, range_included, HermitianMatrix, Matrix};
use crate::qmvf::{extremal, QmvfProblem};
use crate::scalar::Scalar;

/// Which Gram of the residual `R = C − AXB` is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramSide {
    /// `R·W·R*`.
    LeftGram,
    /// `R*·W·R`.
    RightGram,
}

/// Placement of the weight in a weighted trace objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightSide {
    /// `trace(R·M·R*)`.
    Right,
    /// `trace(R*·N·R)`.
    Left,
}

impl WeightSide {
    pub fn gram(self) -> GramSide {
        match self {
            WeightSide::Right => GramSide::LeftGram,
            WeightSide::Left => GramSide::RightGram,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LstsqResult<T> {
    pub family: SolutionFamily<T>,
    /// `C − A·X0·B`.
    pub residual_at_particular: Matrix<T>,
    /// Trace of the (weighted) residual Gram at the particular solution.
    pub trace_value: T,
    /// `(max, min)` of `r(C − AXB)`.
    pub rank_bounds: (usize, usize),
    /// Extremes of the (weighted) residual Gram over all `X`.
    pub gram_bounds: ExtremalBounds,
}

fn check_system<T: Scalar>(op: &'static str, a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>) -> Result<()> {
    if a.rows() != c.rows() || b.cols() != c.cols() {
        return Err(mismatch(
            op,
            format!(
                "A {}x{}, B {}x{}, C {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols()
            ),
        ));
    }
    Ok(())
}

fn check_variable<T: Scalar>(op: &'static str, a: &Matrix<T>, b: &Matrix<T>, x: &Matrix<T>) -> Result<()> {
    if x.shape() != (a.cols(), b.rows()) {
        return Err(mismatch(
            op,
            format!("X is {}x{}, expected {}x{}", x.rows(), x.cols(), a.cols(), b.rows()),
        ));
    }
    Ok(())
}

fn weight_order(c: &Matrix<impl Scalar>, side: GramSide) -> usize {
    match side {
        GramSide::LeftGram => c.cols(),
        GramSide::RightGram => c.rows(),
    }
}

/// `C − AXB`.
pub fn residual<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>, x: &Matrix<T>) -> Matrix<T> {
    c - &product(&[a, x, b])
}

/// `R·W·R*` or `R*·W·R` at `X`.
pub fn residual_gram<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    w: &HermitianMatrix<T>,
    side: GramSide,
    x: &Matrix<T>,
) -> HermitianMatrix<T> {
    let r = residual(a, b, c, x);
    let rs = r.conj_transpose();
    HermitianMatrix::from_computed(match side {
        GramSide::LeftGram => product(&[&r, w.matrix(), &rs]),
        GramSide::RightGram => product(&[&rs, w.matrix(), &r]),
    })
}

/// The residual Gram as `φ`.
///
/// `LeftGram` gives `(−A, B, C, 0, W)` in the variable `X`; `RightGram` gives
/// `(B*, −A*, C*, 0, W)` in the variable `X*`.
pub fn residual_gram_problem<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    w: &HermitianMatrix<T>,
    side: GramSide,
) -> Result<QmvfProblem<T>> {
    check_system("residual_gram_problem", a, b, c)?;
    match side {
        GramSide::LeftGram => QmvfProblem::new(-a, b.clone(), c.clone(), HermitianMatrix::zeros(c.rows()), w.clone()),
        GramSide::RightGram => QmvfProblem::new(
            b.conj_transpose(),
            -&a.conj_transpose(),
            c.conj_transpose(),
            HermitianMatrix::zeros(c.cols()),
            w.clone(),
        ),
    }
}

/// `A*A·X·BB* − A*CB*`.
pub fn normal_residual<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>, x: &Matrix<T>) -> Matrix<T> {
    let (as_, bs) = (a.conj_transpose(), b.conj_transpose());
    &product(&[&as_, a, x, b, &bs]) - &product(&[&as_, c, &bs])
}

/// Coefficients `(A', B', C')` of the weighted normal equation `A'XB' = C'`.
fn weighted_normal<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    w: &HermitianMatrix<T>,
    side: WeightSide,
) -> (Matrix<T>, Matrix<T>, Matrix<T>) {
    let (as_, bs) = (a.conj_transpose(), b.conj_transpose());
    let w = w.matrix();
    match side {
        WeightSide::Right => (&as_ * a, product(&[b, w, &bs]), product(&[&as_, c, w, &bs])),
        WeightSide::Left => (product(&[&as_, w, a]), b * &bs, product(&[&as_, w, c, &bs])),
    }
}

/// Left side minus right side of the weighted normal equation at `X`.
pub fn weighted_normal_residual<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    w: &HermitianMatrix<T>,
    side: WeightSide,
    x: &Matrix<T>,
) -> Matrix<T> {
    let (na, nb, nc) = weighted_normal(a, b, c, w, side);
    &product(&[&na, x, &nb]) - &nc
}

/// `(max, min)` of `r(C − AXB)` from `r[A, C]`, `r[B; C]` and `r[[C, A], [B, 0]]`.
pub fn residual_rank_bounds<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>) -> Result<(usize, usize)> {
    check_system("residual_rank_bounds", a, b, c)?;
    let r_ac = Matrix::hstack(&[a, c]).rank();
    let r_bc = Matrix::vstack(&[b, c]).rank();
    let zero = Matrix::zeros(b.rows(), a.cols());
    let r_full = block(&[vec![c, a], vec![b, &zero]])?.rank();
    Ok((r_ac.min(r_bc), r_ac + r_bc - r_full))
}

/// `x ≤ y` for real `x`, `y`, decided by the sign of `y − x`.
pub fn real_le<T: Scalar>(x: &T, y: &T) -> bool {
    HermitianMatrix::new(Matrix::scalar(y.clone() - x.clone())).is_ok_and(|h| h.is_psd())
}

fn result_from_family<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    w: &HermitianMatrix<T>,
    side: GramSide,
    family: SolutionFamily<T>,
) -> Result<LstsqResult<T>> {
    let gram = residual_gram(a, b, c, w, side, &family.particular);
    let gram_bounds = extremal(&residual_gram_problem(a, b, c, w, side)?).bounds;
    Ok(LstsqResult {
        residual_at_particular: residual(a, b, c, &family.particular),
        trace_value: gram.matrix().trace(),
        rank_bounds: residual_rank_bounds(a, b, c)?,
        gram_bounds,
        family,
    })
}

/// The least-squares family `A†CB† + F_A·V1 + V2·E_B`.
pub fn lstsq_general<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>) -> Result<LstsqResult<T>> {
    check_system("lstsq_general", a, b, c)?;
    let (ap, bp) = (a.pinv(), b.pinv());
    let (p, m) = (a.cols(), b.rows());
    let family = SolutionFamily {
        particular: product(&[&ap, c, &bp]),
        left_annihilator: &Matrix::identity(p) - &(&ap * a),
        right_annihilator: &Matrix::identity(m) - &(b * &bp),
        shape: (p, m),
        unique: a.rank() == p && b.rank() == m,
    };
    if !normal_residual(a, b, c, &family.particular).is_negligible() {
        return Err(Error::IdentityViolation("A†CB† misses the normal equation".into()));
    }
    let w = HermitianMatrix::identity(c.cols());
    result_from_family(a, b, c, &w, GramSide::LeftGram, family)
}

/// `X ↦ X*` applied to a family.
fn adjoint<T: Scalar>(f: SolutionFamily<T>) -> SolutionFamily<T> {
    SolutionFamily {
        particular: f.particular.conj_transpose(),
        left_annihilator: f.right_annihilator.conj_transpose(),
        right_annihilator: f.left_annihilator.conj_transpose(),
        shape: (f.shape.1, f.shape.0),
        unique: f.unique,
    }
}

/// Löwner minimum of `RR*` (`LeftGram`) or `R*R` (`RightGram`) over all `X`,
/// computed on the residual Gram as `φ`. The family is in terms of `X`.
pub fn loewner_min_residual<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    side: GramSide,
) -> Result<std::result::Result<OptimumCertificate<T>, Infeasible>> {
    let w = HermitianMatrix::identity(weight_order(c, side));
    let p = residual_gram_problem(a, b, c, &w, side)?;
    Ok(global_min_single(&p).map(|mut cert| {
        if side == GramSide::RightGram {
            cert.family = adjoint(cert.family);
        }
        cert
    }))
}

/// The closed form read literally: `CC* − CB†BC*` when `R(CB*) ⊆ R(A)`, or
/// `C*C − C*AA†C` when `R(C*A) ⊆ R(B*)`.
pub fn printed_residual_optimum<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    side: GramSide,
) -> Result<Option<HermitianMatrix<T>>> {
    check_system("printed_residual_optimum", a, b, c)?;
    let cs = c.conj_transpose();
    let value = match side {
        GramSide::LeftGram => {
            if !range_included(&(c * &b.conj_transpose()), a)? {
                return Ok(None);
            }
            &(c * &cs) - &product(&[c, &b.pinv(), b, &cs])
        }
        GramSide::RightGram => {
            if !range_included(&(&cs * a), &b.conj_transpose())? {
                return Ok(None);
            }
            &(&cs * c) - &product(&[&cs, a, &a.pinv(), c])
        }
    };
    Ok(Some(HermitianMatrix::from_computed(value)))
}

/// Closed form against the general optimum path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResidualCrossCheck {
    pub printed_feasible: bool,
    pub general_feasible: bool,
    /// Vacuously true unless both sides are feasible.
    pub value_agrees: bool,
    /// The optimizers equal the least-squares family.
    pub family_agrees: bool,
}

impl ResidualCrossCheck {
    pub fn agrees(&self) -> bool {
        self.printed_feasible == self.general_feasible && self.value_agrees && self.family_agrees
    }
}

pub fn residual_cross_check<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    side: GramSide,
) -> Result<ResidualCrossCheck> {
    let printed = printed_residual_optimum(a, b, c, side)?;
    let general = loewner_min_residual(a, b, c, side)?.ok();
    let ls = lstsq_general(a, b, c)?.family;
    let (value_agrees, family_agrees) = match (&printed, &general) {
        (Some(v), Some(cert)) => (v.matrix().approx_eq(cert.value.matrix()), cert.family.same_set(&ls)),
        _ => (true, true),
    };
    Ok(ResidualCrossCheck {
        printed_feasible: printed.is_some(),
        general_feasible: general.is_some(),
        value_agrees,
        family_agrees,
    })
}

/// Common minimizer family of `A*RR*A`, `BR*RB*` (both in the Löwner
/// ordering) and `trace(RR*)`.
///
/// The two sandwiches are the Grams of the residuals of `(A*A, B, A*C)` and
/// `(A, BB*, CB*)`; their optimizer families are computed independently and
/// must coincide with the least-squares family.
pub fn sandwich_min<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>) -> Result<SolutionFamily<T>> {
    let ls = lstsq_general(a, b, c)?.family;
    let (as_, bs) = (a.conj_transpose(), b.conj_transpose());
    let sandwiches = [
        ("A-side", loewner_min_residual(&(&as_ * a), b, &(&as_ * c), GramSide::LeftGram)?),
        ("B-side", loewner_min_residual(a, &(b * &bs), &(c * &bs), GramSide::RightGram)?),
    ];
    for (name, outcome) in sandwiches {
        let cert = outcome.map_err(|e| Error::IdentityViolation(format!("{name} sandwich: {e}")))?;
        if !cert.family.same_set(&ls) {
            return Err(Error::IdentityViolation(format!(
                "{name} sandwich minimizers differ from the least-squares family"
            )));
        }
    }
    Ok(ls)
}

/// `x_opt` is no worse than `x_probe` for all three objectives.
pub fn sandwich_minimal<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    x_opt: &Matrix<T>,
    x_probe: &Matrix<T>,
) -> Result<bool> {
    check_system("sandwich_minimal", a, b, c)?;
    check_variable("sandwich_minimal", a, b, x_opt)?;
    check_variable("sandwich_minimal", a, b, x_probe)?;
    let (as_, bs) = (a.conj_transpose(), b.conj_transpose());
    let (r_opt, r_probe) = (residual(a, b, c, x_opt), residual(a, b, c, x_probe));
    let psd_gap = |f: &dyn Fn(&Matrix<T>) -> Matrix<T>| {
        HermitianMatrix::from_computed(&f(&r_probe) - &f(&r_opt)).is_psd()
    };
    let left = psd_gap(&|r| product(&[&as_, r, &r.conj_transpose(), a]));
    let right = psd_gap(&|r| product(&[b, &r.conj_transpose(), r, &bs]));
    let trace = |r: &Matrix<T>| (r * &r.conj_transpose()).trace();
    Ok(left && right && real_le(&trace(&r_opt), &trace(&r_probe)))
}

/// Minimizes `trace(R·M·R*)` (`Right`) or `trace(R*·N·R)` (`Left`) for a PSD
/// weight.
///
/// Stationarity gives `A*A·X·BMB* = A*C·MB*` (`Right`) or
/// `A*NA·X·BB* = A*NCB*` (`Left`), which is consistent for PSD weights. The
/// particular solution is cross-checked against the vectorized system
/// `(B'ᵀ ⊗ A')·vec(X) = vec(C')`.
pub fn weighted_lstsq<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    w: &HermitianMatrix<T>,
    side: WeightSide,
) -> Result<LstsqResult<T>> {
    check_system("weighted_lstsq", a, b, c)?;
    let gram = side.gram();
    if w.order() != weight_order(c, gram) {
        return Err(mismatch(
            "weighted_lstsq",
            format!("weight order {}, expected {}", w.order(), weight_order(c, gram)),
        ));
    }
    if !w.is_psd() {
        return Err(Error::NotPsd("weight"));
    }
    let (na, nb, nc) = weighted_normal(a, b, c, w, side);
    let family = match solve_axb_c(&na, &nb, &nc)? {
        AxbSolution::Consistent(f) => f,
        AxbSolution::Inconsistent { .. } => {
            return Err(Error::IdentityViolation("weighted normal equation inconsistent".into()))
        }
    };
    let k = nb.transpose().kron(&na);
    let z = &k.pinv() * &nc.vec();
    if !Matrix::unvec(&z, a.cols(), b.rows()).approx_eq(&family.particular) {
        return Err(Error::IdentityViolation(
            "vectorized normal equation gives another particular solution".into(),
        ));
    }
    result_from_family(a, b, c, w, gram, family)
}
