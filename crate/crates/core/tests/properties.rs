use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qhmf_core::convexity::{gap_closed_form, midpoint_gap};
use qhmf_core::lstsq::{lstsq_general, normal_residual, residual_cross_check, GramSide};
use qhmf_core::oracle::{check_soundness, check_witnesses, sample_bounds, SampleConfig};
use qhmf_core::qmvf::{extremal, extremal_via_linearization};
use qhmf_core::random;
use qhmf_core::{Complex64, GaussianRational as Q, HermitianMatrix, Matrix, Scalar};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn to_float(m: &Matrix<Q>) -> Matrix<Complex64> {
    Matrix::from_vec(m.rows(), m.cols(), m.entries().iter().map(Scalar::to_c64).collect())
}

fn shape(r: &mut ChaCha8Rng) -> (usize, usize) {
    (r.random_range(1..=4), r.random_range(1..=4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pseudoinverse_satisfies_the_four_equations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (m, n) = shape(&mut r);
        let a: Matrix<Q> = random::mixed(&mut r, m, n, 5);
        let g = a.pinv();
        prop_assert_eq!(&(&(&a * &g) * &a), &a);
        prop_assert_eq!(&(&(&g * &a) * &g), &g);
        let ag = &a * &g;
        let ga = &g * &a;
        prop_assert!(ag.is_hermitian());
        prop_assert!(ga.is_hermitian());
        prop_assert_eq!(ag.trace(), Q::from_parts(a.rank() as i64, 0));
    }

    #[test]
    fn rank_is_invariant_under_adjoint_and_gram(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (m, n) = shape(&mut r);
        let a: Matrix<Q> = random::mixed(&mut r, m, n, 5);
        prop_assert_eq!(a.rank(), a.conj_transpose().rank());
        prop_assert_eq!(a.rank(), (&a * &a.conj_transpose()).rank());
    }

    #[test]
    fn float_inertia_matches_exact_on_integer_data(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=4);
        let k = r.random_range(0..=n);
        let h: HermitianMatrix<Q> = random::psd(&mut r, n, k, 3);
        let g: HermitianMatrix<Q> = random::psd(&mut r, n, n - k, 3);
        let d = HermitianMatrix::new(h.matrix() - g.matrix()).unwrap();
        let f = HermitianMatrix::new(to_float(d.matrix())).unwrap();
        prop_assert_eq!(f.inertia(), d.inertia());
    }

    #[test]
    fn least_squares_solution_satisfies_normal_equations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (n, p) = shape(&mut r);
        let (q, m) = shape(&mut r);
        let a: Matrix<Q> = random::mixed(&mut r, n, p, 5);
        let b: Matrix<Q> = random::mixed(&mut r, q, m, 5);
        let c: Matrix<Q> = random::matrix(&mut r, n, m, 5);
        let res = lstsq_general(&a, &b, &c).unwrap();
        prop_assert!(normal_residual(&a, &b, &c, &res.family.particular).is_zero());
        let (max, min) = res.rank_bounds;
        prop_assert!(min <= max);
        for side in [GramSide::LeftGram, GramSide::RightGram] {
            let cc = residual_cross_check(&a, &b, &c, side).unwrap();
            prop_assert!(cc.value_agrees && cc.family_agrees);
        }
    }

    #[test]
    fn extremal_formulas_agree_with_linearization(seed in any::<u64>()) {
        let p = random::problem::<Q, _>(&mut rng(seed), 3, 5);
        prop_assert!(extremal(&p).bounds.same_values(&extremal_via_linearization(&p).bounds));
    }

    #[test]
    fn midpoint_gap_has_the_closed_form(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random::problem::<Q, _>(&mut r, 3, 5);
        let d = p.dims();
        let x1 = random::matrix(&mut r, d.p, d.m, 5);
        let x2 = random::matrix(&mut r, d.p, d.m, 5);
        let gap = midpoint_gap(&p, &x1, &x2).unwrap();
        prop_assert_eq!(gap.matrix(), &gap_closed_form(&p, &(&x1 - &x2)));
    }

    #[test]
    fn sampling_is_deterministic_and_sound(seed in any::<u64>()) {
        let p = random::problem::<Q, _>(&mut rng(seed), 2, 4);
        let cfg = SampleConfig { seed, samples: 8, ..SampleConfig::default() };
        let s1 = sample_bounds(&p, &cfg).unwrap();
        let s2 = sample_bounds(&p, &cfg).unwrap();
        prop_assert_eq!(&s1, &s2);
        prop_assert!(check_soundness(&extremal(&p), &s1).passed());
        prop_assert!(check_witnesses(&p, &s1).passed());
    }
}

#[test]
fn float_and_exact_agree_on_an_integer_problem() {
    let mut r = rng(7);
    let p = random::problem::<Q, _>(&mut r, 3, 4);
    let exact = extremal(&p).bounds;
    let fp = qhmf_core::qmvf::QmvfProblem::<Complex64>::new(
        to_float(&p.a),
        to_float(&p.b),
        to_float(&p.c),
        HermitianMatrix::new(to_float(p.d.matrix())).unwrap(),
        HermitianMatrix::new(to_float(p.m.matrix())).unwrap(),
    )
    .unwrap();
    assert!(extremal(&fp).bounds.same_values(&exact));
}
