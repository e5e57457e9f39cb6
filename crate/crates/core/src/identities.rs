//! Block inertia expansions, the `AXB = C` solution family, and extremal
//! ranks/inertias of affine matrix functions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{mismatch, Result};
use crate::matrix::{block, product, range_included, HermitianMatrix, Inertia, Matrix};
use crate::scalar::Scalar;

/// `X0 + F·V1 + V2·E` for free `V1`, `V2` of shape `shape`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFamily<T> {
    pub particular: Matrix<T>,
    pub left_annihilator: Matrix<T>,
    pub right_annihilator: Matrix<T>,
    pub shape: (usize, usize),
    pub unique: bool,
}

impl<T: Scalar> SolutionFamily<T> {
    pub fn instantiate(&self, v1: &Matrix<T>, v2: &Matrix<T>) -> Matrix<T> {
        let a = &self.left_annihilator * v1;
        let b = v2 * &self.right_annihilator;
        &(&self.particular + &a) + &b
    }

    /// Basis of the free directions `F·V1 + V2·E`, vectorized.
    fn span(&self) -> Matrix<T> {
        let (p, m) = self.shape;
        let left = Matrix::identity(m).kron(&self.left_annihilator);
        let right = self.right_annihilator.transpose().kron(&Matrix::identity(p));
        Matrix::hstack(&[&left, &right])
    }

    /// Both families describe the same affine set of matrices.
    pub fn same_set(&self, other: &Self) -> bool {
        if self.shape != other.shape {
            return false;
        }
        let (s, t) = (self.span(), other.span());
        let r = s.rank();
        let shift = (&self.particular - &other.particular).vec();
        r == t.rank() && Matrix::hstack(&[&s, &t]).rank() == r && Matrix::hstack(&[&s, &shift]).rank() == r
    }

    pub fn contains(&self, x: &Matrix<T>) -> bool {
        if x.shape() != self.shape {
            return false;
        }
        let s = self.span();
        let shift = (x - &self.particular).vec();
        Matrix::hstack(&[&s, &shift]).rank() == s.rank()
    }

    /// The family is a single matrix.
    pub fn is_singleton(&self) -> bool {
        self.span().is_negligible()
    }

    /// Every `p×m` matrix.
    pub fn everything(p: usize, m: usize) -> Self {
        SolutionFamily {
            particular: Matrix::zeros(p, m),
            left_annihilator: Matrix::identity(p),
            right_annihilator: Matrix::identity(m),
            shape: (p, m),
            unique: p * m == 0,
        }
    }
}

/// Outcome of [`solve_axb_c`].
#[derive(Debug, Clone, PartialEq)]
pub enum AxbSolution<T> {
    Consistent(SolutionFamily<T>),
    /// Carries `AA†CB†B − C`.
    Inconsistent { residual: Matrix<T> },
}

impl<T> AxbSolution<T> {
    pub fn family(self) -> Option<SolutionFamily<T>> {
        match self {
            AxbSolution::Consistent(f) => Some(f),
            AxbSolution::Inconsistent { .. } => None,
        }
    }
}

/// The six extremal values with the named intermediates that produced them.
///
/// Values are signed so that a report can be perturbed below zero in
/// mutation tests; a correct report never holds a negative value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalBounds {
    pub max_rank: i64,
    pub min_rank: i64,
    pub max_plus: i64,
    pub max_minus: i64,
    pub min_plus: i64,
    pub min_minus: i64,
    pub intermediates: BTreeMap<String, i64>,
}

impl ExtremalBounds {
    pub fn constant(inertia: Inertia) -> Self {
        let (p, m) = (inertia.plus as i64, inertia.minus as i64);
        ExtremalBounds {
            max_rank: p + m,
            min_rank: p + m,
            max_plus: p,
            max_minus: m,
            min_plus: p,
            min_minus: m,
            intermediates: BTreeMap::new(),
        }
    }

    /// The six values in a fixed order: max_rank, min_rank, max_plus, max_minus, min_plus, min_minus.
    pub fn values(&self) -> [i64; 6] {
        [
            self.max_rank,
            self.min_rank,
            self.max_plus,
            self.max_minus,
            self.min_plus,
            self.min_minus,
        ]
    }

    pub fn same_values(&self, other: &ExtremalBounds) -> bool {
        self.values() == other.values()
    }

    pub fn value_mut(&mut self, k: usize) -> &mut i64 {
        match k {
            0 => &mut self.max_rank,
            1 => &mut self.min_rank,
            2 => &mut self.max_plus,
            3 => &mut self.max_minus,
            4 => &mut self.min_plus,
            5 => &mut self.min_minus,
            _ => panic!("ExtremalBounds has six values"),
        }
    }

    pub const FIELD_NAMES: [&'static str; 6] = [
        "max_rank",
        "min_rank",
        "max_plus",
        "max_minus",
        "min_plus",
        "min_minus",
    ];
}

pub(crate) fn record(map: &mut BTreeMap<String, i64>, key: &str, v: impl TryInto<i64>) -> i64 {
    let v = v.try_into().ok().expect("count fits in i64");
    map.insert(key.to_string(), v);
    v
}

pub(crate) fn record_inertia(map: &mut BTreeMap<String, i64>, name: &str, i: Inertia) {
    record(map, &format!("i+({name})"), i.plus);
    record(map, &format!("i-({name})"), i.minus);
    record(map, &format!("r({name})"), i.rank());
}

/// Inertia of `[[A, B], [B*, 0]]` from `i_±(M1) = r(B) + i_±(E_B·A·E_B)`.
///
/// Semidefinite `A` short-cuts to `(r[A,B], r(B))` or its mirror.
pub fn block_inertia_m1<T: Scalar>(a: &HermitianMatrix<T>, b: &Matrix<T>) -> Result<Inertia> {
    if a.order() != b.rows() {
        return Err(mismatch(
            "block_inertia_m1",
            format!("A has order {}, B has {} rows", a.order(), b.rows()),
        ));
    }
    let order = a.order() + b.cols();
    let ia = a.inertia();
    let rb = b.rank();
    let (plus, minus) = if ia.minus == 0 || ia.plus == 0 {
        let rab = Matrix::hstack(&[a.matrix(), b]).rank();
        if ia.minus == 0 {
            (rab, rb)
        } else {
            (rb, rab)
        }
    } else {
        let e = b.proj_e();
        let inner = HermitianMatrix::from_computed(product(&[&e, a.matrix(), &e]));
        let ii = inner.inertia();
        (rb + ii.plus, rb + ii.minus)
    };
    Ok(Inertia::new(plus, minus, order - plus - minus))
}

fn check_m2<T: Scalar>(
    op: &'static str,
    a: &HermitianMatrix<T>,
    b: &Matrix<T>,
    d: &HermitianMatrix<T>,
) -> Result<()> {
    if a.order() != b.rows() || d.order() != b.cols() {
        return Err(mismatch(
            op,
            format!(
                "A order {}, B {}x{}, D order {}",
                a.order(),
                b.rows(),
                b.cols(),
                d.order()
            ),
        ));
    }
    Ok(())
}

/// `D − B*A†B`.
fn schur<T: Scalar>(a: &HermitianMatrix<T>, b: &Matrix<T>, d: &HermitianMatrix<T>) -> HermitianMatrix<T> {
    let s = product(&[&b.conj_transpose(), &a.matrix().pinv(), b]);
    HermitianMatrix::from_computed(d.matrix() - &s)
}

/// Inertia of `[[A, B], [B*, D]]` from
/// `i_±(M2) = i_±(A) + i_±[[0, E_A·B], [B*·E_A, D − B*A†B]]`,
/// or the Schur-complement form when `R(B) ⊆ R(A)`.
pub fn block_inertia_m2<T: Scalar>(
    a: &HermitianMatrix<T>,
    b: &Matrix<T>,
    d: &HermitianMatrix<T>,
) -> Result<Inertia> {
    check_m2("block_inertia_m2", a, b, d)?;
    let ia = a.inertia();
    let s = schur(a, b, d);
    let tail = if range_included(b, a.matrix())? {
        s.inertia()
    } else {
        // [[0, Q], [Q*, S]] is a permutation congruence of [[S, Q*], [Q, 0]].
        let q = &a.matrix().proj_e() * b;
        block_inertia_m1(&s, &q.conj_transpose())?
    };
    let (plus, minus) = (ia.plus + tail.plus, ia.minus + tail.minus);
    Ok(Inertia::new(plus, minus, a.order() + d.order() - plus - minus))
}

/// `r[[A, B], [B*, D]] = r(A)` iff `R(B) ⊆ R(A)` and `D = B*A†B`.
pub fn rank_equals_corner<T: Scalar>(
    a: &HermitianMatrix<T>,
    b: &Matrix<T>,
    d: &HermitianMatrix<T>,
) -> Result<bool> {
    check_m2("rank_equals_corner", a, b, d)?;
    Ok(range_included(b, a.matrix())? && schur(a, b, d).matrix().is_negligible())
}

/// `[[A, B], [B*, D]] ⪰ 0` iff `A ⪰ 0`, `R(B) ⊆ R(A)` and `D − B*A†B ⪰ 0`.
pub fn block_psd<T: Scalar>(a: &HermitianMatrix<T>, b: &Matrix<T>, d: &HermitianMatrix<T>) -> Result<bool> {
    check_m2("block_psd", a, b, d)?;
    Ok(a.is_psd() && range_included(b, a.matrix())? && schur(a, b, d).is_psd())
}

/// Solves `AXB = C`: consistent iff `AA†CB†B = C`, with family
/// `A†CB† + F_A·V1 + V2·E_B`.
pub fn solve_axb_c<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>) -> Result<AxbSolution<T>> {
    if a.rows() != c.rows() || b.cols() != c.cols() {
        return Err(mismatch(
            "solve_axb_c",
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
    let (ap, bp) = (a.pinv(), b.pinv());
    let x0 = product(&[&ap, c, &bp]);
    let back = product(&[a, &x0, b]);
    if !back.approx_eq(c) {
        return Ok(AxbSolution::Inconsistent {
            residual: &back - c,
        });
    }
    let (p, m) = (a.cols(), b.rows());
    Ok(AxbSolution::Consistent(SolutionFamily {
        particular: x0,
        left_annihilator: &Matrix::identity(p) - &(&ap * a),
        right_annihilator: &Matrix::identity(m) - &(b * &bp),
        shape: (p, m),
        unique: a.rank() == p && b.rank() == m,
    }))
}

/// `(max, min)` of `r(A + BXC)` over all `X`.
pub fn extremal_rank_affine<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>) -> Result<(usize, usize)> {
    if a.rows() != b.rows() || a.cols() != c.cols() {
        return Err(mismatch(
            "extremal_rank_affine",
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
    let r_ab = Matrix::hstack(&[a, b]).rank();
    let r_ac = Matrix::vstack(&[a, c]).rank();
    let zero = Matrix::zeros(c.rows(), b.cols());
    let r_full = block(&[vec![a, b], vec![c, &zero]])?.rank();
    Ok((r_ab.min(r_ac), r_ab + r_ac - r_full))
}

/// Extremal rank and inertias of `A + BXC + (BXC)*` over all `X`.
pub fn extremal_hermitian_affine<T: Scalar>(
    a: &HermitianMatrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
) -> Result<ExtremalBounds> {
    if a.order() != b.rows() || a.order() != c.cols() {
        return Err(mismatch(
            "extremal_hermitian_affine",
            format!(
                "A order {}, B {}x{}, C {}x{}",
                a.order(),
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols()
            ),
        ));
    }
    let cs = c.conj_transpose();
    let mut im = BTreeMap::new();

    let h = Matrix::hstack(&[a.matrix(), b, &cs]);
    let r_h = record(&mut im, "r[A,B,C*]", h.rank());
    let g1 = block_inertia_m1(a, b)?;
    let g2 = block_inertia_m1(a, &cs)?;
    record_inertia(&mut im, "G1", g1);
    record_inertia(&mut im, "G2", g2);
    let h1 = Matrix::vstack(&[&h, &Matrix::hstack(&[&b.conj_transpose(), &Matrix::zeros(b.cols(), b.cols() + c.rows())])]);
    let h2 = Matrix::vstack(&[&h, &Matrix::hstack(&[c, &Matrix::zeros(c.rows(), b.cols() + c.rows())])]);
    let r_h1 = record(&mut im, "r(H1)", h1.rank());
    let r_h2 = record(&mut im, "r(H2)", h2.rank());

    let (g1p, g1m, g1r) = (g1.plus as i64, g1.minus as i64, g1.rank() as i64);
    let (g2p, g2m, g2r) = (g2.plus as i64, g2.minus as i64, g2.rank() as i64);
    let s_plus = record(&mut im, "s+", g1p - r_h1);
    let s_minus = record(&mut im, "s-", g1m - r_h1);
    let t_plus = record(&mut im, "t+", g2p - r_h2);
    let t_minus = record(&mut im, "t-", g2m - r_h2);

    let min_rank_corr = [
        s_plus + s_minus,
        t_plus + t_minus,
        s_plus + t_minus,
        s_minus + t_plus,
    ]
    .into_iter()
    .max()
    .expect("nonempty");
    Ok(ExtremalBounds {
        max_rank: r_h.min(g1r).min(g2r),
        min_rank: 2 * r_h + min_rank_corr,
        max_plus: g1p.min(g2p),
        max_minus: g1m.min(g2m),
        min_plus: r_h + s_plus.max(t_plus),
        min_minus: r_h + s_minus.max(t_minus),
        intermediates: im,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussianRational as Q;

    fn m(rows: &[&[&str]]) -> Matrix<Q> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| Q::parse_literal(s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn h(rows: &[&[&str]]) -> HermitianMatrix<Q> {
        HermitianMatrix::new(m(rows)).unwrap()
    }

    #[test]
    fn m1_examples() {
        let i2 = Matrix::identity(2);
        assert_eq!(
            block_inertia_m1(&HermitianMatrix::<Q>::zeros(2), &i2).unwrap(),
            Inertia::new(2, 2, 0)
        );
        assert_eq!(
            block_inertia_m1(&h(&[&["1"]]), &m(&[&["0"]])).unwrap(),
            Inertia::new(1, 0, 1)
        );
        assert_eq!(
            block_inertia_m1(&h(&[&["1"]]), &m(&[&["1"]])).unwrap(),
            Inertia::new(1, 1, 0)
        );
        assert!(block_inertia_m1(&h(&[&["1"]]), &i2).is_err());
    }

    #[test]
    fn m2_examples() {
        let one = h(&[&["1"]]);
        assert_eq!(
            block_inertia_m2(&one, &m(&[&["1"]]), &h(&[&["0"]])).unwrap(),
            Inertia::new(1, 1, 0)
        );
        assert_eq!(
            block_inertia_m2(&HermitianMatrix::identity(2), &Matrix::zeros(2, 1), &h(&[&["5"]]))
                .unwrap(),
            Inertia::new(3, 0, 0)
        );
        assert_eq!(
            block_inertia_m2(&one, &m(&[&["1"]]), &one).unwrap(),
            Inertia::new(1, 0, 1)
        );
        // Non-Schur path: R(B) ⊄ R(A).
        assert_eq!(
            block_inertia_m2(&h(&[&["0"]]), &m(&[&["1"]]), &h(&[&["3"]])).unwrap(),
            Inertia::new(1, 1, 0)
        );
    }

    #[test]
    fn corner_and_psd_examples() {
        let one = h(&[&["1"]]);
        let b = m(&[&["1"]]);
        assert!(rank_equals_corner(&one, &b, &one).unwrap());
        assert!(block_psd(&one, &b, &h(&[&["2"]])).unwrap());
        let zero = h(&[&["0"]]);
        assert!(!rank_equals_corner(&zero, &b, &zero).unwrap());
        assert!(!block_psd(&zero, &b, &zero).unwrap());
    }

    #[test]
    fn solve_examples() {
        let i2 = Matrix::<Q>::identity(2);
        let c = m(&[&["1", "2i"], &["3", "-1/2"]]);
        let f = solve_axb_c(&i2, &i2, &c).unwrap().family().unwrap();
        assert_eq!(f.particular, c);
        assert!(f.unique);

        let a = m(&[&["1", "0"], &["0", "0"]]);
        let c = m(&[&["0", "0"], &["0", "1"]]);
        match solve_axb_c(&a, &i2, &c).unwrap() {
            AxbSolution::Inconsistent { residual } => assert!(!residual.is_zero()),
            other => panic!("expected inconsistency, got {other:?}"),
        }

        let f = solve_axb_c(&m(&[&["1"], &["1"]]), &m(&[&["1"]]), &m(&[&["2"], &["2"]]))
            .unwrap()
            .family()
            .unwrap();
        assert_eq!(f.particular, m(&[&["2"]]));
        assert!(f.unique);
        assert!(f.left_annihilator.is_zero() && f.right_annihilator.is_zero());
    }

    #[test]
    fn rank_affine_examples() {
        let i2 = Matrix::<Q>::identity(2);
        let z = Matrix::<Q>::zeros(2, 2);
        assert_eq!(extremal_rank_affine(&z, &i2, &i2).unwrap(), (2, 0));
        let a = m(&[&["1", "1"], &["1", "1"]]);
        assert_eq!(extremal_rank_affine(&a, &z, &z).unwrap(), (1, 1));
        assert_eq!(
            extremal_rank_affine(&i2, &m(&[&["1"], &["0"]]), &m(&[&["0", "1"]])).unwrap(),
            (2, 2)
        );
    }

    #[test]
    fn hermitian_affine_examples() {
        let b = extremal_hermitian_affine(&h(&[&["0"]]), &m(&[&["1"]]), &m(&[&["1"]])).unwrap();
        assert_eq!(b.values(), [1, 0, 1, 1, 0, 0]);
        for k in ["s+", "s-", "t+", "t-"] {
            assert_eq!(b.intermediates[k], -1, "{k}");
        }
        let a = h(&[&["1", "0"], &["0", "-1"]]);
        let b = extremal_hermitian_affine(&a, &Matrix::zeros(2, 1), &Matrix::zeros(1, 2)).unwrap();
        assert_eq!(b.values(), [2, 2, 1, 1, 1, 1]);
        let a = h(&[&["3", "1i"], &["-1i", "0"]]);
        let b = extremal_hermitian_affine(&a, &Matrix::zeros(2, 2), &Matrix::zeros(3, 2)).unwrap();
        assert!(b.same_values(&ExtremalBounds::constant(a.inertia())));
    }
}
