//! The quadratic Hermitian matrix-valued function
//! `φ(X) = (AXB + C)M(AXB + C)* + D`: evaluation, extremal ranks and
//! inertias along two independent derivations, and definiteness
//! classification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::identities::{extremal_hermitian_affine, record, record_inertia, solve_axb_c, AxbSolution, ExtremalBounds};
use crate::matrix::{block, product, range_included, HermitianMatrix, Inertia, Matrix};
use crate::scalar::Scalar;

/// Dimensions of a problem: `A` is `n×p`, `B` is `m×q`, `X` is `p×m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub n: usize,
    pub p: usize,
    pub m: usize,
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QmvfProblem<T> {
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: Matrix<T>,
    pub d: HermitianMatrix<T>,
    pub m: HermitianMatrix<T>,
}

impl<T: Scalar> QmvfProblem<T> {
    pub fn new(
        a: Matrix<T>,
        b: Matrix<T>,
        c: Matrix<T>,
        d: HermitianMatrix<T>,
        m: HermitianMatrix<T>,
    ) -> Result<Self> {
        let (n, q) = (a.rows(), b.cols());
        if c.shape() != (n, q) || d.order() != n || m.order() != q {
            return Err(mismatch(
                "QmvfProblem",
                format!(
                    "A {}x{}, B {}x{}, C {}x{}, D order {}, M order {}",
                    a.rows(),
                    a.cols(),
                    b.rows(),
                    b.cols(),
                    c.rows(),
                    c.cols(),
                    d.order(),
                    m.order()
                ),
            ));
        }
        Ok(QmvfProblem { a, b, c, d, m })
    }

    pub fn dims(&self) -> Dims {
        Dims {
            n: self.a.rows(),
            p: self.a.cols(),
            m: self.b.rows(),
            q: self.b.cols(),
        }
    }

    /// `D + CMC*`.
    pub fn value_at_zero(&self) -> HermitianMatrix<T> {
        let cmc = product(&[&self.c, self.m.matrix(), &self.c.conj_transpose()]);
        HermitianMatrix::from_computed(self.d.matrix() + &cmc)
    }

    /// `CMB*`.
    pub fn cmb(&self) -> Matrix<T> {
        product(&[&self.c, self.m.matrix(), &self.b.conj_transpose()])
    }

    /// `BMB*`.
    pub fn bmb(&self) -> HermitianMatrix<T> {
        self.m.congruence(&self.b)
    }

    /// `AXB + C`.
    pub fn affine(&self, x: &Matrix<T>) -> Matrix<T> {
        &product(&[&self.a, x, &self.b]) + &self.c
    }

    pub fn check_variable(&self, x: &Matrix<T>) -> Result<()> {
        let d = self.dims();
        if x.shape() != (d.p, d.m) {
            return Err(mismatch(
                "evaluate",
                format!("X is {}x{}, expected {}x{}", x.rows(), x.cols(), d.p, d.m),
            ));
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &Matrix<T>) -> Result<HermitianMatrix<T>> {
        self.check_variable(x)?;
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &Matrix<T>) -> HermitianMatrix<T> {
        let y = self.affine(x);
        let quad = self.m.congruence(&y);
        HermitianMatrix::from_computed(quad.matrix() + self.d.matrix())
    }

    /// `A = 0` (including `p = 0`) makes `φ` constant.
    pub(crate) fn a_is_zero(&self) -> bool {
        self.a.is_negligible()
    }
}

/// `P_scalar`: `φ(x) = |x|² − 1`.
pub fn p_scalar<T: Scalar>() -> QmvfProblem<T> {
    let one = Matrix::scalar(T::one());
    QmvfProblem::new(
        one.clone(),
        one.clone(),
        Matrix::scalar(T::zero()),
        HermitianMatrix::from_computed(Matrix::scalar(-T::one())),
        HermitianMatrix::from_computed(one),
    )
    .expect("scalar shapes agree")
}

#[derive(Debug, Clone, PartialEq)]
pub struct NQuadruple<T> {
    pub n1: HermitianMatrix<T>,
    pub n2: Matrix<T>,
    pub n3: HermitianMatrix<T>,
    pub n4: Matrix<T>,
}

pub fn build_n<T: Scalar>(p: &QmvfProblem<T>) -> NQuadruple<T> {
    let Dims { p: pc, m, .. } = p.dims();
    let h = p.value_at_zero();
    let h = h.matrix();
    let cmb = p.cmb();
    let bmc = cmb.conj_transpose();
    let bmb = p.bmb();
    let a = &p.a;
    let a_s = a.conj_transpose();
    let z_pp = Matrix::zeros(pc, pc);
    let z_pm = Matrix::zeros(pc, m);
    let z_mp = Matrix::zeros(m, pc);
    let assemble = |rows: &[Vec<&Matrix<T>>]| block(rows).expect("N-blocks are conformable");
    NQuadruple {
        n1: HermitianMatrix::from_computed(assemble(&[vec![h, a], vec![&a_s, &z_pp]])),
        n2: assemble(&[vec![h, &cmb, a], vec![&a_s, &z_pm, &z_pp]]),
        n3: HermitianMatrix::from_computed(assemble(&[vec![h, &cmb], vec![&bmc, bmb.matrix()]])),
        n4: assemble(&[vec![h, &cmb, a], vec![&bmc, bmb.matrix(), &z_mp]]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErratumKind {
    /// The specialized formula gives a different value from the general one.
    Disagreement,
    /// The literal printed form differs from the reading that was implemented.
    Transcription,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erratum {
    pub source: String,
    pub field: String,
    pub kind: ErratumKind,
    pub printed: i64,
    pub general: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    #[serde(flatten)]
    pub bounds: ExtremalBounds,
    pub errata: Vec<Erratum>,
}

impl ExtremalReport {
    fn plain(bounds: ExtremalBounds) -> Self {
        ExtremalReport {
            bounds,
            errata: Vec::new(),
        }
    }
}

/// Ranks and inertias every general-path formula consumes.
struct NStats {
    r_row: i64,
    n1: Inertia,
    n3: Inertia,
    r_n2: i64,
    r_n4: i64,
}

fn n_stats<T: Scalar>(p: &QmvfProblem<T>, im: &mut BTreeMap<String, i64>) -> NStats {
    let nq = build_n(p);
    let h = p.value_at_zero();
    let row = Matrix::hstack(&[h.matrix(), &p.cmb(), &p.a]);
    let r_row = record(im, "r[D+CMC*,CMB*,A]", row.rank());
    let n1 = nq.n1.inertia();
    let n3 = nq.n3.inertia();
    record_inertia(im, "N1", n1);
    record_inertia(im, "N3", n3);
    let r_n2 = record(im, "r(N2)", nq.n2.rank());
    let r_n4 = record(im, "r(N4)", nq.n4.rank());
    NStats {
        r_row,
        n1,
        n3,
        r_n2,
        r_n4,
    }
}

fn general_formulas(s: &NStats, im: &mut BTreeMap<String, i64>) -> ExtremalBounds {
    let (n1p, n1m, n1r) = (s.n1.plus as i64, s.n1.minus as i64, s.n1.rank() as i64);
    let (n3p, n3m, n3r) = (s.n3.plus as i64, s.n3.minus as i64, s.n3.rank() as i64);
    let s1 = record(im, "s1", n1r - 2 * s.r_n2);
    let s2 = record(im, "s2", n3r - 2 * s.r_n4);
    let s3 = record(im, "s3", n1p + n3m - s.r_n2 - s.r_n4);
    let s4 = record(im, "s4", n1m + n3p - s.r_n2 - s.r_n4);
    ExtremalBounds {
        max_rank: s.r_row.min(n1r).min(n3r),
        min_rank: 2 * s.r_row + s1.max(s2).max(s3).max(s4),
        max_plus: n1p.min(n3p),
        max_minus: n1m.min(n3m),
        min_plus: s.r_row + (n1p - s.r_n2).max(n3p - s.r_n4),
        min_minus: s.r_row + (n1m - s.r_n2).max(n3m - s.r_n4),
        intermediates: im.clone(),
    }
}

/// Global extremal rank and inertias of `φ` from the `N1`–`N4` formulas.
pub fn extremal<T: Scalar>(p: &QmvfProblem<T>) -> ExtremalReport {
    let mut im = BTreeMap::new();
    let s = n_stats(p, &mut im);
    ExtremalReport::plain(general_formulas(&s, &mut im))
}

/// The same six values derived independently: `φ` is the Schur complement of
/// `−M` in the linear function
/// `ψ(X) = [[−M, MC*], [CM, D]] + [0; A]·X·[BM, 0] + (…)*`,
/// whose extremes come from the affine Hermitian formulas.
pub fn extremal_via_linearization<T: Scalar>(p: &QmvfProblem<T>) -> ExtremalReport {
    let Dims { n, p: pc, m, q } = p.dims();
    let mm = p.m.matrix();
    let mcs = mm * &p.c.conj_transpose();
    let cm = &p.c * mm;
    let a_lin = block(&[vec![&-mm, &mcs], vec![&cm, p.d.matrix()]]).expect("conformable");
    let b_lin = Matrix::vstack(&[&Matrix::zeros(q, pc), &p.a]);
    let c_lin = Matrix::hstack(&[&(&p.b * mm), &Matrix::zeros(m, n)]);
    let psi = extremal_hermitian_affine(&HermitianMatrix::from_computed(a_lin), &b_lin, &c_lin)
        .expect("linearization blocks are conformable");

    let im_m = p.m.inertia();
    let (mp, mn, mr) = (im_m.plus as i64, im_m.minus as i64, im_m.rank() as i64);
    let mut im: BTreeMap<String, i64> = psi
        .intermediates
        .iter()
        .map(|(k, v)| (format!("psi:{k}"), *v))
        .collect();
    record_inertia(&mut im, "M", im_m);
    ExtremalReport::plain(ExtremalBounds {
        max_rank: psi.max_rank - mr,
        min_rank: psi.min_rank - mr,
        max_plus: psi.max_plus - mn,
        max_minus: psi.max_minus - mp,
        min_plus: psi.min_plus - mn,
        min_minus: psi.min_minus - mp,
        intermediates: im,
    })
}

/// Definiteness and solvability predicates of `φ` over all `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub exists_nonsingular: bool,
    pub always_nonsingular: bool,
    pub equation_solvable: bool,
    pub exists_pd: bool,
    pub exists_nd: bool,
    pub always_pd: bool,
    pub always_nd: bool,
    pub exists_psd: bool,
    pub exists_nsd: bool,
    pub always_psd: bool,
    pub always_nsd: bool,
}

impl ClassificationReport {
    /// Reads every predicate off the extremal values of an order-`n` function.
    pub fn from_bounds(b: &ExtremalBounds, n: usize) -> Self {
        let n = n as i64;
        ClassificationReport {
            exists_nonsingular: b.max_rank == n,
            always_nonsingular: b.min_rank == n,
            equation_solvable: b.min_rank == 0,
            exists_pd: b.max_plus == n,
            exists_nd: b.max_minus == n,
            always_pd: b.min_plus == n,
            always_nd: b.min_minus == n,
            exists_psd: b.min_minus == 0,
            exists_nsd: b.min_plus == 0,
            always_psd: b.max_minus == 0,
            always_nsd: b.max_plus == 0,
        }
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        Some(match name {
            "exists_nonsingular" => self.exists_nonsingular,
            "always_nonsingular" => self.always_nonsingular,
            "equation_solvable" => self.equation_solvable,
            "exists_pd" => self.exists_pd,
            "exists_nd" => self.exists_nd,
            "always_pd" => self.always_pd,
            "always_nd" => self.always_nd,
            "exists_psd" => self.exists_psd,
            "exists_nsd" => self.exists_nsd,
            "always_psd" => self.always_psd,
            "always_nsd" => self.always_nsd,
            _ => return None,
        })
    }
}

pub fn classify<T: Scalar>(p: &QmvfProblem<T>) -> ClassificationReport {
    ClassificationReport::from_bounds(&extremal(p).bounds, p.dims().n)
}

/// Direct block-matrix characterizations of nine of the predicates, computed
/// without the extremal values.
pub fn classify_closed_form<T: Scalar>(p: &QmvfProblem<T>) -> BTreeMap<&'static str, bool> {
    let n = p.dims().n;
    let nq = build_n(p);
    let h = p.value_at_zero();
    let ih = h.inertia();
    let n1 = nq.n1.inertia();
    let n3 = nq.n3.inertia();
    let r_row = Matrix::hstack(&[h.matrix(), &p.cmb(), &p.a]).rank();
    let (r_n2, r_n4) = (nq.n2.rank(), nq.n4.rank());

    // With A = 0 the function is the constant D + CMC*, and the N3 conditions
    // below are sufficient but no longer necessary.
    let constant = p.a_is_zero();
    let a_in_n3 = || {
        let stacked = Matrix::vstack(&[&p.a, &Matrix::zeros(p.dims().m, p.dims().p)]);
        range_included(&stacked, nq.n3.matrix()).expect("conformable")
    };
    let always_pd = if constant {
        ih.plus == n
    } else {
        ih.plus == n && n3.minus == 0 && a_in_n3()
    };
    let always_nd = if constant {
        ih.minus == n
    } else {
        ih.minus == n && n3.plus == 0 && a_in_n3()
    };
    let (always_psd, always_nsd) = if constant {
        (ih.minus == 0, ih.plus == 0)
    } else {
        (n3.minus == 0, n3.plus == 0)
    };

    BTreeMap::from([
        (
            "exists_nonsingular",
            r_row == n && n1.rank() >= n && n3.rank() >= n,
        ),
        (
            "exists_pd",
            (n1.plus == n && n3.plus >= n) || (n1.plus >= n && n3.plus == n),
        ),
        (
            "exists_nd",
            (n1.minus == n && n3.minus >= n) || (n1.minus >= n && n3.minus == n),
        ),
        ("always_pd", always_pd),
        ("always_nd", always_nd),
        (
            "exists_psd",
            r_row + n1.minus <= r_n2 && r_row + n3.minus <= r_n4,
        ),
        (
            "exists_nsd",
            r_row + n1.plus <= r_n2 && r_row + n3.plus <= r_n4,
        ),
        ("always_psd", always_psd),
        ("always_nsd", always_nsd),
    ])
}

/// Names of predicates on which the two classification paths disagree.
pub fn classification_disagreements<T: Scalar>(p: &QmvfProblem<T>) -> Vec<&'static str> {
    let dict = classify(p);
    classify_closed_form(p)
        .into_iter()
        .filter(|(k, v)| dict.get(k) != Some(*v))
        .map(|(k, _)| k)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    /// `M = I`, `D = −I`: `φ(X) = (AXB + C)(AXB + C)* − I`.
    UnitaryResidual,
    /// `AXB + C = 0` is solvable.
    ConsistentAffine,
    /// `B = I`: `φ(X) = (AX + C)M(AX + C)* + D`.
    LeftOnly,
    /// `A = I`: `φ(X) = (XB + C)M(XB + C)* + D`.
    RightOnly,
}

impl SpecialCase {
    pub const ALL: [SpecialCase; 4] = [
        SpecialCase::UnitaryResidual,
        SpecialCase::ConsistentAffine,
        SpecialCase::LeftOnly,
        SpecialCase::RightOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpecialCase::UnitaryResidual => "unitary_residual",
            SpecialCase::ConsistentAffine => "consistent_affine",
            SpecialCase::LeftOnly => "left_only",
            SpecialCase::RightOnly => "right_only",
        }
    }

    fn check<T: Scalar>(self, p: &QmvfProblem<T>) -> Result<()> {
        let Dims { n, p: pc, m, q } = p.dims();
        let ok = match self {
            SpecialCase::UnitaryResidual => {
                p.m.matrix() == &Matrix::identity(q) && p.d.matrix() == &-&Matrix::identity(n)
            }
            SpecialCase::ConsistentAffine => matches!(
                solve_axb_c(&p.a, &p.b, &-&p.c)?,
                AxbSolution::Consistent(_)
            ),
            SpecialCase::LeftOnly => m == q && p.b.approx_eq(&Matrix::identity(m)),
            SpecialCase::RightOnly => n == pc && p.a.approx_eq(&Matrix::identity(n)),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ShapePrecondition(format!(
                "problem is not of the {} form",
                self.name()
            )))
        }
    }
}

fn bounds6(v: [i64; 6], intermediates: BTreeMap<String, i64>) -> ExtremalBounds {
    ExtremalBounds {
        max_rank: v[0],
        min_rank: v[1],
        max_plus: v[2],
        max_minus: v[3],
        min_plus: v[4],
        min_minus: v[5],
        intermediates,
    }
}

fn max_of(xs: &[i64]) -> i64 {
    *xs.iter().max().expect("nonempty")
}

fn ci(i: Inertia) -> (i64, i64, i64) {
    (i.plus as i64, i.minus as i64, i.rank() as i64)
}

/// Unitary-residual form: the general formulas with `D + CMC* = CC* − I`,
/// `CMB* = CB*`, `BMB* = BB*` substituted.
fn unitary_residual<T: Scalar>(p: &QmvfProblem<T>) -> ExtremalBounds {
    let Dims { n, p: pc, m, .. } = p.dims();
    let cs = p.c.conj_transpose();
    let bs = p.b.conj_transpose();
    let h = &(&p.c * &cs) - &Matrix::identity(n);
    let cb = &p.c * &bs;
    let bc = cb.conj_transpose();
    let bb = &p.b * &bs;
    let a_s = p.a.conj_transpose();
    let zpp = Matrix::zeros(pc, pc);
    let zpm = Matrix::zeros(pc, m);
    let zmp = Matrix::zeros(m, pc);
    let n1 = block(&[vec![&h, &p.a], vec![&a_s, &zpp]]).expect("conformable");
    let n2 = block(&[vec![&h, &cb, &p.a], vec![&a_s, &zpm, &zpp]]).expect("conformable");
    let n3 = block(&[vec![&h, &cb], vec![&bc, &bb]]).expect("conformable");
    let n4 = block(&[vec![&h, &cb, &p.a], vec![&bc, &bb, &zmp]]).expect("conformable");
    let mut im = BTreeMap::new();
    let s = NStats {
        r_row: record(&mut im, "r[CC*-I,CB*,A]", Matrix::hstack(&[&h, &cb, &p.a]).rank()),
        n1: HermitianMatrix::from_computed(n1).inertia(),
        n3: HermitianMatrix::from_computed(n3).inertia(),
        r_n2: n2.rank() as i64,
        r_n4: n4.rank() as i64,
    };
    general_formulas(&s, &mut im)
}

/// Consistent-affine form with `N = [[D, A], [A*, 0]]`. `literal` selects the
/// printed text, which writes `M` where `N` is meant in two places.
fn consistent_affine<T: Scalar>(p: &QmvfProblem<T>, literal: bool) -> ExtremalBounds {
    let pc = p.dims().p;
    let a_s = p.a.conj_transpose();
    let nn = block(&[vec![p.d.matrix(), &p.a], vec![&a_s, &Matrix::zeros(pc, pc)]])
        .expect("conformable");
    let (np, nm, nr) = ci(HermitianMatrix::from_computed(nn).inertia());
    let (dp, dm, dr) = ci(p.d.inertia());
    let (bp, bm, br) = ci(p.bmb().inertia());
    let (mp, mm, mr) = ci(p.m.inertia());
    let r_ad = Matrix::hstack(&[&p.a, p.d.matrix()]).rank() as i64;
    let mut im = BTreeMap::new();
    record(&mut im, "r[A,D]", r_ad);
    record(&mut im, "r(N)", nr);
    let (first_sub, cap_plus, cap_minus) = if literal { (mr, mp, mm) } else { (nr, np, nm) };
    bounds6(
        [
            r_ad.min(br + dr),
            max_of(&[
                2 * r_ad - first_sub,
                dr - br,
                r_ad + dm - bp - nm,
                r_ad + dp - bm - np,
            ]),
            cap_plus.min(bp + dp),
            cap_minus.min(bm + dm),
            (r_ad - nm).max(dp - bm),
            (r_ad - np).max(dm - bp),
        ],
        im,
    )
}

/// Left-only form (`B = I`). `literal` selects the printed signs of `i_∓(D)`
/// in `s3`/`s4`; the implemented reading follows from substituting `B = I`
/// into the general formulas.
fn left_only<T: Scalar>(p: &QmvfProblem<T>, literal: bool) -> ExtremalBounds {
    let pc = p.dims().p;
    let h = p.value_at_zero();
    let cm = &p.c * p.m.matrix();
    let a_s = p.a.conj_transpose();
    let n1 = block(&[vec![h.matrix(), &p.a], vec![&a_s, &Matrix::zeros(pc, pc)]]).expect("conformable");
    let n2 = block(&[
        vec![p.d.matrix(), &cm, &p.a],
        vec![&a_s, &Matrix::zeros(pc, cm.cols()), &Matrix::zeros(pc, pc)],
    ])
    .expect("conformable");
    let (n1p, n1m, n1r) = ci(HermitianMatrix::from_computed(n1).inertia());
    let r_n2 = n2.rank() as i64;
    let (dp, dm, dr) = ci(p.d.inertia());
    let (mp, mm, mr) = ci(p.m.inertia());
    let r_acd = Matrix::hstack(&[&p.a, &cm, p.d.matrix()]).rank() as i64;
    let r_ad = Matrix::hstack(&[&p.a, p.d.matrix()]).rank() as i64;
    let mut im = BTreeMap::new();
    record(&mut im, "r[A,CM,D]", r_acd);
    record(&mut im, "r[A,D]", r_ad);
    record(&mut im, "r(N2)", r_n2);
    let s1 = record(&mut im, "s1", n1r - 2 * r_n2);
    let s2 = record(&mut im, "s2", dr - 2 * r_ad - mr);
    let sign = if literal { -1 } else { 1 };
    let s3 = record(&mut im, "s3", n1p - r_n2 + sign * dm - r_ad - mp);
    let s4 = record(&mut im, "s4", n1m - r_n2 + sign * dp - r_ad - mm);
    bounds6(
        [
            r_acd.min(n1r).min(mr + dr),
            2 * r_acd + max_of(&[s1, s2, s3, s4]),
            n1p.min(mp + dp),
            n1m.min(mm + dm),
            r_acd + (n1p - r_n2).max(dp - r_ad - mm),
            r_acd + (n1m - r_n2).max(dm - r_ad - mp),
        ],
        im,
    )
}

/// Right-only form (`A = I`), exactly as printed: the maximal rank is stated
/// as `n` and the minimal inertias carry a leading `n +`.
fn right_only_printed<T: Scalar>(p: &QmvfProblem<T>) -> ExtremalBounds {
    let n = p.dims().n as i64;
    let h = p.value_at_zero();
    let cmb = p.cmb();
    let bmc = cmb.conj_transpose();
    let bmb = p.bmb();
    let n1 = block(&[vec![h.matrix(), &cmb], vec![&bmc, bmb.matrix()]]).expect("conformable");
    let n2 = Matrix::hstack(&[bmb.matrix(), &bmc]);
    let (n1p, n1m, n1r) = ci(HermitianMatrix::from_computed(n1).inertia());
    let r_n2 = n2.rank() as i64;
    let mut im = BTreeMap::new();
    record(&mut im, "r(N1)", n1r);
    record(&mut im, "r(N2)", r_n2);
    bounds6(
        [
            n,
            max_of(&[0, n1r - 2 * r_n2, n1p - r_n2, n1m - r_n2]),
            n.min(n1p),
            n.min(n1m),
            n + (n1p - r_n2).max(0),
            n + (n1m - r_n2).max(0),
        ],
        im,
    )
}

fn diff_errata(
    source: &str,
    kind: ErratumKind,
    printed: &ExtremalBounds,
    general: &ExtremalBounds,
) -> Vec<Erratum> {
    printed
        .values()
        .iter()
        .zip(general.values())
        .zip(ExtremalBounds::FIELD_NAMES)
        .filter(|((a, b), _)| *a != b)
        .map(|((a, b), f)| Erratum {
            source: source.to_string(),
            field: f.to_string(),
            kind,
            printed: *a,
            general: b,
        })
        .collect()
}

/// Extremal values from a specialized formula set, cross-checked against
/// [`extremal`]. Disagreeing fields take the general value and are recorded
/// as [`ErratumKind::Disagreement`]; literal-reading slips that the
/// implemented formulas correct are recorded as [`ErratumKind::Transcription`].
pub fn extremal_special<T: Scalar>(p: &QmvfProblem<T>, case: SpecialCase) -> Result<ExtremalReport> {
    case.check(p)?;
    let general = extremal(p).bounds;
    let (special, literal) = match case {
        SpecialCase::UnitaryResidual => (unitary_residual(p), None),
        SpecialCase::ConsistentAffine => (consistent_affine(p, false), Some(consistent_affine(p, true))),
        SpecialCase::LeftOnly => (left_only(p, false), Some(left_only(p, true))),
        SpecialCase::RightOnly => (right_only_printed(p), None),
    };
    let mut errata = diff_errata(case.name(), ErratumKind::Disagreement, &special, &general);
    if let Some(lit) = literal {
        errata.extend(diff_errata(case.name(), ErratumKind::Transcription, &lit, &general));
    }
    let mut bounds = special;
    for k in 0..6 {
        *bounds.value_mut(k) = general.values()[k];
    }
    Ok(ExtremalReport { bounds, errata })
}

/// `φ = φ1 − φ2` with both parts PSD-valued, from disjoint PSD splits of `D`
/// and `M` (Float mode only).
pub fn decompose<T: Scalar>(p: &QmvfProblem<T>) -> Result<(QmvfProblem<T>, QmvfProblem<T>)> {
    let (d1, d2) = p.d.psd_split()?;
    let (m1, m2) = p.m.psd_split()?;
    let part = |d, m| QmvfProblem {
        a: p.a.clone(),
        b: p.b.clone(),
        c: p.c.clone(),
        d,
        m,
    };
    Ok((part(d1, m1), part(d2, m2)))
}
