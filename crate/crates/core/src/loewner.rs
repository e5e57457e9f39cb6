//! Global minimal and maximal matrices of `φ` in the Löwner partial
//! ordering, for one variable, several coupled variables, and sums of
//! independent quadratic terms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::identities::{solve_axb_c, AxbSolution, SolutionFamily};
use crate::matrix::{product, range_included, HermitianMatrix, Inertia, Matrix};
use crate::qmvf::QmvfProblem;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

impl Direction {
    fn psd(self) -> bool {
        matches!(self, Direction::Min)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Min => "min",
            Direction::Max => "max",
        })
    }
}

/// A failed feasibility condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `BMB*` is not PSD (Min) or not NSD (Max).
    BmbSign,
    /// `R(CMB*) ⊄ R(A)`.
    CmbRange,
    /// `R(BMC*) ⊄ R(BMB*)`.
    BmcRange,
    /// The coupled linear equation for several variables has no solution.
    CoupledEquation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Infeasible {
    pub direction: Direction,
    pub failed: Vec<Condition>,
    /// Offending term of a multi-term problem.
    pub term: Option<usize>,
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.direction.psd() { "PSD" } else { "NSD" };
        let parts: Vec<String> = self
            .failed
            .iter()
            .map(|c| match c {
                Condition::BmbSign => format!("BMB* not {sign}"),
                Condition::CmbRange => "R(CMB*) not contained in R(A)".into(),
                Condition::BmcRange => "R(BMC*) not contained in R(BMB*)".into(),
                Condition::CoupledEquation => "coupled equation inconsistent".into(),
            })
            .collect();
        if let Some(t) = self.term {
            write!(f, "term {}: ", t + 1)?;
        }
        write!(f, "no global {}imum: {}", self.direction, parts.join("; "))
    }
}

pub const GAP_RANK_FORMULA: &str = "r(phi(X) - value) = r(A X BMB* + CMB*)";
pub const GAP_RANK_FORMULA_MULTI: &str = "r(phi(X) - value) = r(sum A_i X_i B_i MB* + CMB*)";

#[derive(Debug, Clone, PartialEq)]
pub struct OptimumCertificate<T, F = SolutionFamily<T>> {
    pub direction: Direction,
    pub family: F,
    pub value: HermitianMatrix<T>,
    /// From the block matrix `N`, not from `value` directly.
    pub value_inertia: Inertia,
    pub gap_rank_formula: &'static str,
    pub unique: bool,
    /// The zero matrix is an optimizer (`CMB* = 0`).
    pub zero_solution: bool,
    /// The optimum value itself has the direction's sign (`φ ⪰ φ(X̂) ⪰ 0` for Min).
    pub value_semidefinite: bool,
}

/// Block matrix `[[D + CMC*, CMB*], [BMC*, BMB*]]` and its parts.
struct Blocks<T> {
    h: HermitianMatrix<T>,
    cmb: Matrix<T>,
    bmb: HermitianMatrix<T>,
}

impl<T: Scalar> Blocks<T> {
    fn of(p: &QmvfProblem<T>) -> Self {
        Blocks {
            h: p.value_at_zero(),
            cmb: p.cmb(),
            bmb: p.bmb(),
        }
    }

    fn n(&self) -> HermitianMatrix<T> {
        let top = Matrix::hstack(&[self.h.matrix(), &self.cmb]);
        let bottom = Matrix::hstack(&[&self.cmb.conj_transpose(), self.bmb.matrix()]);
        HermitianMatrix::from_computed(Matrix::vstack(&[&top, &bottom]))
    }

    fn sign_ok(&self, dir: Direction) -> bool {
        if dir.psd() {
            self.bmb.is_psd()
        } else {
            self.bmb.is_nsd()
        }
    }

    fn strict(&self, dir: Direction) -> bool {
        if dir.psd() {
            self.bmb.is_pd()
        } else {
            self.bmb.is_nd()
        }
    }

    fn bmc_in_range(&self) -> bool {
        range_included(&self.cmb.conj_transpose(), self.bmb.matrix()).expect("BMC* and BMB* share rows")
    }

    /// `D + CMC* − CMB*(BMB*)†BMC*`.
    fn value(&self) -> HermitianMatrix<T> {
        let corr = product(&[&self.cmb, &self.bmb.matrix().pinv(), &self.cmb.conj_transpose()]);
        HermitianMatrix::from_computed(self.h.matrix() - &corr)
    }

    /// Inertia of the optimum value read off `N`: the `BMB*` block's rank is
    /// removed from the direction's own sign.
    fn value_inertia(&self, dir: Direction) -> Inertia {
        let ni = self.n().inertia();
        let r = self.bmb.rank();
        let (plus, minus) = if dir.psd() {
            (ni.plus - r, ni.minus)
        } else {
            (ni.plus, ni.minus - r)
        };
        Inertia::new(plus, minus, self.h.order() - plus - minus)
    }

    fn certificate<F>(&self, dir: Direction, family: F, unique: bool, formula: &'static str) -> OptimumCertificate<T, F> {
        let value = self.value();
        let value_semidefinite = if dir.psd() { value.is_psd() } else { value.is_nsd() };
        OptimumCertificate {
            direction: dir,
            family,
            value_inertia: self.value_inertia(dir),
            value,
            gap_rank_formula: formula,
            unique,
            zero_solution: self.cmb.is_negligible(),
            value_semidefinite,
        }
    }
}

/// Global minimum (`Min`) or maximum (`Max`) of `φ` in the Löwner ordering.
///
/// `A = 0` makes `φ` constant, so every `X` is optimal whatever the range
/// conditions say.
pub fn global_optimum_single<T: Scalar>(
    p: &QmvfProblem<T>,
    dir: Direction,
) -> std::result::Result<OptimumCertificate<T>, Infeasible> {
    let blocks = Blocks::of(p);
    let d = p.dims();
    if p.a_is_zero() {
        let family = SolutionFamily::everything(d.p, d.m);
        let value = p.value_at_zero();
        let inertia = value.inertia();
        let value_semidefinite = if dir.psd() { value.is_psd() } else { value.is_nsd() };
        return Ok(OptimumCertificate {
            direction: dir,
            unique: family.unique,
            family,
            value,
            value_inertia: inertia,
            gap_rank_formula: GAP_RANK_FORMULA,
            zero_solution: true,
            value_semidefinite,
        });
    }
    let mut failed = Vec::new();
    if !blocks.sign_ok(dir) {
        failed.push(Condition::BmbSign);
    }
    if !range_included(&blocks.cmb, &p.a).expect("CMB* and A share rows") {
        failed.push(Condition::CmbRange);
    }
    if !blocks.bmc_in_range() {
        failed.push(Condition::BmcRange);
    }
    if !failed.is_empty() {
        return Err(Infeasible {
            direction: dir,
            failed,
            term: None,
        });
    }
    let family = match solve_axb_c(&p.a, blocks.bmb.matrix(), &-&blocks.cmb).expect("shapes agree") {
        AxbSolution::Consistent(f) => f,
        AxbSolution::Inconsistent { .. } => unreachable!("range conditions imply consistency"),
    };
    let unique = p.a.rank() == d.p && blocks.strict(dir);
    Ok(blocks.certificate(dir, family, unique, GAP_RANK_FORMULA))
}

pub fn global_min_single<T: Scalar>(p: &QmvfProblem<T>) -> std::result::Result<OptimumCertificate<T>, Infeasible> {
    global_optimum_single(p, Direction::Min)
}

pub fn global_max_single<T: Scalar>(p: &QmvfProblem<T>) -> std::result::Result<OptimumCertificate<T>, Infeasible> {
    global_optimum_single(p, Direction::Max)
}

/// `r(A·X·BMB* + CMB*)`, the rank of `φ(X) − φ(X̂)` at any optimizer.
pub fn gap_rank<T: Scalar>(p: &QmvfProblem<T>, x: &Matrix<T>) -> Result<usize> {
    p.check_variable(x)?;
    let bmb = p.bmb();
    Ok((&product(&[&p.a, x, bmb.matrix()]) + &p.cmb()).rank())
}

/// `(Σ AᵢXᵢBᵢ + C)M(Σ AᵢXᵢBᵢ + C)* + D`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiProblem<T> {
    pub terms: Vec<(Matrix<T>, Matrix<T>)>,
    pub c: Matrix<T>,
    pub m: HermitianMatrix<T>,
    pub d: HermitianMatrix<T>,
}

impl<T: Scalar> MultiProblem<T> {
    pub fn new(
        terms: Vec<(Matrix<T>, Matrix<T>)>,
        c: Matrix<T>,
        m: HermitianMatrix<T>,
        d: HermitianMatrix<T>,
    ) -> Result<Self> {
        let (n, q) = c.shape();
        if d.order() != n || m.order() != q {
            return Err(mismatch(
                "MultiProblem",
                format!("C {n}x{q}, D order {}, M order {}", d.order(), m.order()),
            ));
        }
        for (i, (a, b)) in terms.iter().enumerate() {
            if a.rows() != n || b.cols() != q {
                return Err(mismatch(
                    "MultiProblem",
                    format!(
                        "term {}: A {}x{}, B {}x{} against C {n}x{q}",
                        i + 1,
                        a.rows(),
                        a.cols(),
                        b.rows(),
                        b.cols()
                    ),
                ));
            }
        }
        Ok(MultiProblem { terms, c, m, d })
    }

    /// `(pᵢ, mᵢ)` for each variable.
    pub fn shapes(&self) -> Vec<(usize, usize)> {
        self.terms.iter().map(|(a, b)| (a.cols(), b.rows())).collect()
    }

    /// Stacked `[B₁; …; B_k]`.
    pub fn stacked_b(&self) -> Matrix<T> {
        if self.terms.is_empty() {
            return Matrix::zeros(0, self.c.cols());
        }
        let bs: Vec<&Matrix<T>> = self.terms.iter().map(|(_, b)| b).collect();
        Matrix::vstack(&bs)
    }

    pub fn affine(&self, xs: &[Matrix<T>]) -> Result<Matrix<T>> {
        if xs.len() != self.terms.len() {
            return Err(mismatch(
                "evaluate",
                format!("{} variables for {} terms", xs.len(), self.terms.len()),
            ));
        }
        let mut y = self.c.clone();
        for ((a, b), x) in self.terms.iter().zip(xs) {
            if x.shape() != (a.cols(), b.rows()) {
                return Err(mismatch(
                    "evaluate",
                    format!("X is {}x{}, expected {}x{}", x.rows(), x.cols(), a.cols(), b.rows()),
                ));
            }
            y = &y + &product(&[a, x, b]);
        }
        Ok(y)
    }

    pub fn evaluate(&self, xs: &[Matrix<T>]) -> Result<HermitianMatrix<T>> {
        let y = self.affine(xs)?;
        Ok(HermitianMatrix::from_computed(self.m.congruence(&y).matrix() + self.d.matrix()))
    }

    /// The one-variable problem with `A = [A₁, …, A_k]` would mix variables;
    /// this is only the view used for `N`: `A` is irrelevant to it.
    fn blocks(&self) -> Blocks<T> {
        let b = self.stacked_b();
        let cmc = self.m.congruence(&self.c);
        Blocks {
            h: HermitianMatrix::from_computed(self.d.matrix() + cmc.matrix()),
            cmb: product(&[&self.c, self.m.matrix(), &b.conj_transpose()]),
            bmb: self.m.congruence(&b),
        }
    }

    /// The problem with terms whose `Aᵢ` vanishes removed; they do not
    /// influence `φ`.
    fn active(&self) -> (MultiProblem<T>, Vec<usize>) {
        let keep: Vec<usize> = (0..self.terms.len())
            .filter(|&i| !self.terms[i].0.is_negligible())
            .collect();
        let mp = MultiProblem {
            terms: keep.iter().map(|&i| self.terms[i].clone()).collect(),
            c: self.c.clone(),
            m: self.m.clone(),
            d: self.d.clone(),
        };
        (mp, keep)
    }
}

/// Solutions `(X₁, …, X_k)` of a coupled linear equation, as
/// `vec`-stacked `z₀ + F·w` for free `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedFamily<T> {
    pub particular: Vec<Matrix<T>>,
    /// Projector onto the null space of the vectorized coefficient.
    pub null_projector: Matrix<T>,
    pub shapes: Vec<(usize, usize)>,
    pub unique: bool,
}

impl<T: Scalar> StackedFamily<T> {
    pub fn unknowns(&self) -> usize {
        self.shapes.iter().map(|(p, m)| p * m).sum()
    }

    /// Splits a stacked `vec` into the individual variables.
    pub fn split(&self, z: &Matrix<T>) -> Vec<Matrix<T>> {
        let mut out = Vec::with_capacity(self.shapes.len());
        let mut at = 0;
        for &(p, m) in &self.shapes {
            let part = Matrix::from_fn(p * m, 1, |i, _| z.get(at + i, 0).clone());
            out.push(Matrix::unvec(&part, p, m));
            at += p * m;
        }
        out
    }

    pub fn stack(xs: &[Matrix<T>]) -> Matrix<T> {
        let parts: Vec<Matrix<T>> = xs.iter().map(|x| x.vec()).collect();
        let refs: Vec<&Matrix<T>> = parts.iter().collect();
        if refs.is_empty() {
            return Matrix::zeros(0, 1);
        }
        Matrix::vstack(&refs)
    }

    /// `w` is a column of length [`StackedFamily::unknowns`].
    pub fn instantiate(&self, w: &Matrix<T>) -> Vec<Matrix<T>> {
        let z = &Self::stack(&self.particular) + &(&self.null_projector * w);
        self.split(&z)
    }
}

/// `[ (BᵢMB*)ᵀ ⊗ Aᵢ ]ᵢ`, so that the coefficient times the stacked `vec(Xᵢ)`
/// is `vec(Σ AᵢXᵢBᵢMB*)`.
fn coupled_coefficient<T: Scalar>(mp: &MultiProblem<T>) -> Matrix<T> {
    let b = mp.stacked_b();
    let mb = product(&[mp.m.matrix(), &b.conj_transpose()]);
    let (n, q_rows) = (mp.c.rows(), b.rows());
    let blocks: Vec<Matrix<T>> = mp
        .terms
        .iter()
        .map(|(a, bi)| (bi * &mb).transpose().kron(a))
        .collect();
    if blocks.is_empty() {
        return Matrix::zeros(n * q_rows, 0);
    }
    let refs: Vec<&Matrix<T>> = blocks.iter().collect();
    Matrix::hstack(&refs)
}

/// Global optimum of the coupled multi-variable function.
pub fn global_optimum_multi<T: Scalar>(
    mp: &MultiProblem<T>,
    dir: Direction,
) -> std::result::Result<OptimumCertificate<T, StackedFamily<T>>, Infeasible> {
    let shapes = mp.shapes();
    let (active, keep) = mp.active();
    let blocks = active.blocks();
    if active.terms.is_empty() {
        let value = blocks.h.clone();
        let unknowns: usize = shapes.iter().map(|(p, m)| p * m).sum();
        let family = StackedFamily {
            particular: shapes.iter().map(|&(p, m)| Matrix::zeros(p, m)).collect(),
            null_projector: Matrix::identity(unknowns),
            shapes,
            unique: unknowns == 0,
        };
        let value_semidefinite = if dir.psd() { value.is_psd() } else { value.is_nsd() };
        return Ok(OptimumCertificate {
            direction: dir,
            unique: family.unique,
            family,
            value_inertia: value.inertia(),
            value,
            gap_rank_formula: GAP_RANK_FORMULA_MULTI,
            zero_solution: true,
            value_semidefinite,
        });
    }
    let mut failed = Vec::new();
    if !blocks.sign_ok(dir) {
        failed.push(Condition::BmbSign);
    }
    if !blocks.bmc_in_range() {
        failed.push(Condition::BmcRange);
    }
    let k = coupled_coefficient(&active);
    let rhs = (-&blocks.cmb).vec();
    let kp = k.pinv();
    let z0 = &kp * &rhs;
    if !(&k * &z0).approx_eq(&rhs) {
        failed.push(Condition::CoupledEquation);
    }
    if !failed.is_empty() {
        return Err(Infeasible {
            direction: dir,
            failed,
            term: None,
        });
    }
    let active_unknowns = k.cols();
    let unique = k.rank() == active_unknowns && active_unknowns == shapes.iter().map(|(p, m)| p * m).sum::<usize>();
    let null_active = &Matrix::identity(active_unknowns) - &(&kp * &k);
    let family = embed_family(&shapes, &keep, &z0, &null_active, unique);
    Ok(blocks.certificate(dir, family, unique, GAP_RANK_FORMULA_MULTI))
}

/// Places the active variables' solution into the full stacked layout;
/// variables of vanished terms are entirely free.
fn embed_family<T: Scalar>(
    shapes: &[(usize, usize)],
    keep: &[usize],
    z0: &Matrix<T>,
    null_active: &Matrix<T>,
    unique: bool,
) -> StackedFamily<T> {
    let offsets: Vec<usize> = shapes
        .iter()
        .scan(0, |acc, (p, m)| {
            let o = *acc;
            *acc += p * m;
            Some(o)
        })
        .collect();
    let total: usize = shapes.iter().map(|(p, m)| p * m).sum();
    // position of each active unknown within the full layout
    let mut map = Vec::new();
    for &i in keep {
        let (p, m) = shapes[i];
        map.extend(offsets[i]..offsets[i] + p * m);
    }
    let mut z = Matrix::zeros(total, 1);
    for (a, &full) in map.iter().enumerate() {
        z.set(full, 0, z0.get(a, 0).clone());
    }
    let mut f = Matrix::identity(total);
    for &r in &map {
        for &c in &map {
            f.set(r, c, T::zero());
        }
    }
    for (ar, &r) in map.iter().enumerate() {
        for (ac, &c) in map.iter().enumerate() {
            f.set(r, c, null_active.get(ar, ac).clone());
        }
    }
    let mut fam = StackedFamily {
        particular: Vec::new(),
        null_projector: f,
        shapes: shapes.to_vec(),
        unique,
    };
    fam.particular = fam.split(&z);
    fam
}

pub fn global_min_multi<T: Scalar>(
    mp: &MultiProblem<T>,
) -> std::result::Result<OptimumCertificate<T, StackedFamily<T>>, Infeasible> {
    global_optimum_multi(mp, Direction::Min)
}

pub fn global_max_multi<T: Scalar>(
    mp: &MultiProblem<T>,
) -> std::result::Result<OptimumCertificate<T, StackedFamily<T>>, Infeasible> {
    global_optimum_multi(mp, Direction::Max)
}

/// `r(Σ AᵢXᵢBᵢMB* + CMB*)`.
pub fn gap_rank_multi<T: Scalar>(mp: &MultiProblem<T>, xs: &[Matrix<T>]) -> Result<usize> {
    let b = mp.stacked_b();
    let y = mp.affine(xs)?;
    Ok(product(&[&y, mp.m.matrix(), &b.conj_transpose()]).rank())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Semidefiniteness {
    AlwaysPsd,
    AlwaysNsd,
    Neither,
}

/// Whether `φ(X₁, …, X_k)` keeps one sign for all arguments.
///
/// Variables whose `Aᵢ` vanishes are dropped first; with none left `φ` is
/// the constant `D + CMC*`.
pub fn semidefinite_everywhere<T: Scalar>(mp: &MultiProblem<T>) -> Semidefiniteness {
    let (active, _) = mp.active();
    let blocks = active.blocks();
    let n = if active.terms.is_empty() { blocks.h } else { blocks.n() };
    if n.is_psd() {
        Semidefiniteness::AlwaysPsd
    } else if n.is_nsd() {
        Semidefiniteness::AlwaysNsd
    } else {
        Semidefiniteness::Neither
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term<T> {
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: Matrix<T>,
    pub m: HermitianMatrix<T>,
}

/// `Σ (AᵢXᵢBᵢ + Cᵢ)Mᵢ(AᵢXᵢBᵢ + Cᵢ)* + D`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiTermProblem<T> {
    pub terms: Vec<Term<T>>,
    pub d: HermitianMatrix<T>,
}

impl<T: Scalar> MultiTermProblem<T> {
    pub fn new(terms: Vec<Term<T>>, d: HermitianMatrix<T>) -> Result<Self> {
        let n = d.order();
        for (i, t) in terms.iter().enumerate() {
            QmvfProblem::new(
                t.a.clone(),
                t.b.clone(),
                t.c.clone(),
                HermitianMatrix::zeros(n),
                t.m.clone(),
            )
            .map_err(|e| match e {
                Error::DimensionMismatch { detail, .. } => {
                    mismatch("MultiTermProblem", format!("term {}: {detail}", i + 1))
                }
                other => other,
            })?;
        }
        Ok(MultiTermProblem { terms, d })
    }

    /// Term `i` on its own, with `D = 0`.
    pub fn term_problem(&self, i: usize) -> QmvfProblem<T> {
        let t = &self.terms[i];
        QmvfProblem::new(
            t.a.clone(),
            t.b.clone(),
            t.c.clone(),
            HermitianMatrix::zeros(self.d.order()),
            t.m.clone(),
        )
        .expect("validated on construction")
    }

    pub fn evaluate(&self, xs: &[Matrix<T>]) -> Result<HermitianMatrix<T>> {
        if xs.len() != self.terms.len() {
            return Err(mismatch(
                "evaluate",
                format!("{} variables for {} terms", xs.len(), self.terms.len()),
            ));
        }
        let mut acc = self.d.matrix().clone();
        for (i, x) in xs.iter().enumerate() {
            acc = &acc + self.term_problem(i).evaluate(x)?.matrix();
        }
        Ok(HermitianMatrix::from_computed(acc))
    }

    /// The coupled form with `B = diag(Bᵢ)` spread as block rows,
    /// `C = [C₁, …, C_k]` and `M = diag(Mᵢ)`.
    pub fn as_multi(&self) -> MultiProblem<T> {
        let n = self.d.order();
        let qs: Vec<usize> = self.terms.iter().map(|t| t.m.order()).collect();
        let q: usize = qs.iter().sum();
        let mut c = Matrix::zeros(n, 0);
        let mut m = Matrix::zeros(0, 0);
        let mut terms = Vec::new();
        let mut at = 0;
        for (t, &qi) in self.terms.iter().zip(&qs) {
            c = Matrix::hstack(&[&c, &t.c]);
            m = Matrix::direct_sum(&m, t.m.matrix());
            let bi = Matrix::hstack(&[
                &Matrix::zeros(t.b.rows(), at),
                &t.b,
                &Matrix::zeros(t.b.rows(), q - at - qi),
            ]);
            terms.push((t.a.clone(), bi));
            at += qi;
        }
        MultiProblem {
            terms,
            c,
            m: HermitianMatrix::from_computed(m),
            d: self.d.clone(),
        }
    }
}

/// Per-term optima of a multi-term function. The value is
/// `D + Σ (CᵢMᵢCᵢ* − CᵢMᵢBᵢ*(BᵢMᵢBᵢ*)†BᵢMᵢCᵢ*)`; the family holds each
/// term's own solution set.
pub fn global_optimum_multiterm<T: Scalar>(
    mtp: &MultiTermProblem<T>,
    dir: Direction,
) -> std::result::Result<OptimumCertificate<T, Vec<SolutionFamily<T>>>, Infeasible> {
    let mut families = Vec::new();
    let mut value = mtp.d.matrix().clone();
    let mut unique = true;
    let mut zero_solution = true;
    for i in 0..mtp.terms.len() {
        let cert = global_optimum_single(&mtp.term_problem(i), dir).map_err(|mut e| {
            e.term = Some(i);
            e
        })?;
        value = &value + cert.value.matrix();
        unique &= cert.unique;
        zero_solution &= cert.zero_solution;
        families.push(cert.family);
    }
    let value = HermitianMatrix::from_computed(value);
    let value_semidefinite = if dir.psd() { value.is_psd() } else { value.is_nsd() };
    Ok(OptimumCertificate {
        direction: dir,
        family: families,
        value_inertia: value.inertia(),
        value,
        gap_rank_formula: GAP_RANK_FORMULA_MULTI,
        unique,
        zero_solution,
        value_semidefinite,
    })
}

pub fn global_min_multiterm<T: Scalar>(
    mtp: &MultiTermProblem<T>,
) -> std::result::Result<OptimumCertificate<T, Vec<SolutionFamily<T>>>, Infeasible> {
    global_optimum_multiterm(mtp, Direction::Min)
}

pub fn global_max_multiterm<T: Scalar>(
    mtp: &MultiTermProblem<T>,
) -> std::result::Result<OptimumCertificate<T, Vec<SolutionFamily<T>>>, Infeasible> {
    global_optimum_multiterm(mtp, Direction::Max)
}

/// Solves the multi-term problem twice, per term and through the coupled
/// reduction, and fails if the optimum values differ.
pub fn multiterm_reduction_agrees<T: Scalar>(mtp: &MultiTermProblem<T>, dir: Direction) -> Result<bool> {
    let direct = global_optimum_multiterm(mtp, dir);
    let reduced = global_optimum_multi(&mtp.as_multi(), dir);
    match (direct, reduced) {
        (Ok(a), Ok(b)) => Ok(a.value.matrix().approx_eq(b.value.matrix())),
        (Err(_), Err(_)) => Ok(true),
        _ => Ok(false),
    }
}
