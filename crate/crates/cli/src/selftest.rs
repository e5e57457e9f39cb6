//! `identities-selftest`: each identity against a direct computation on the
//! assembled matrices, over random exact instances of order at most 5.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use qhmf_core::identities::{
    block_inertia_m1, block_inertia_m2, block_psd, extremal_hermitian_affine, extremal_rank_affine, rank_equals_corner,
    solve_axb_c, AxbSolution,
};
use qhmf_core::random;
use qhmf_core::{block, GaussianRational as Q, HermitianMatrix, Inertia, Matrix};

use crate::report::to_value;

const MAX_ORDER: usize = 5;
const BOUND: i64 = 9;
const PROBES: usize = 10;

#[derive(Debug, Default, Serialize)]
struct Tally {
    name: &'static str,
    checks: usize,
    failures: usize,
    first_failing_case: Option<usize>,
}

struct Case<'a> {
    k: usize,
    tallies: &'a mut Vec<Tally>,
}

impl Case<'_> {
    fn check(&mut self, name: &'static str, ok: bool) {
        let t = match self.tallies.iter().position(|t| t.name == name) {
            Some(i) => &mut self.tallies[i],
            None => {
                self.tallies.push(Tally { name, ..Tally::default() });
                self.tallies.last_mut().expect("just pushed")
            }
        };
        t.checks += 1;
        if !ok {
            t.failures += 1;
            t.first_failing_case.get_or_insert(self.k);
        }
    }
}

fn herm(m: Matrix<Q>) -> HermitianMatrix<Q> {
    HermitianMatrix::new(m).expect("assembled from Hermitian blocks")
}

fn direct_m2(a: &HermitianMatrix<Q>, b: &Matrix<Q>, d: &HermitianMatrix<Q>) -> HermitianMatrix<Q> {
    let bs = b.conj_transpose();
    herm(block(&[vec![a.matrix(), b], vec![&bs, d.matrix()]]).expect("conformable"))
}

fn one_case(k: usize, rng: &mut ChaCha8Rng, tallies: &mut Vec<Tally>) {
    let mut case = Case { k, tallies };
    let mut dim = |lo: usize| rng.random_range(lo..=MAX_ORDER);
    let (n, m) = (dim(1), dim(1));
    let (p, q) = (rng.random_range(1..=3), rng.random_range(1..=3));

    let h: HermitianMatrix<Q> = random::mixed_hermitian(rng, n, BOUND);
    let g: HermitianMatrix<Q> = random::mixed_hermitian(rng, m, BOUND);
    let pm: Matrix<Q> = random::invertible(rng, n, 3);
    case.check("sylvester_invariance", h.congruence(&pm).inertia() == h.inertia());
    case.check("sign_flip", h.neg().inertia() == h.inertia().flipped());
    case.check(
        "direct_sum",
        herm(Matrix::direct_sum(h.matrix(), g.matrix())).inertia() == h.inertia() + g.inertia(),
    );
    let qm: Matrix<Q> = random::mixed(rng, n, m, BOUND);
    let anti = herm(
        block(&[
            vec![&Matrix::zeros(n, n), &qm],
            vec![&qm.conj_transpose(), &Matrix::zeros(m, m)],
        ])
        .expect("conformable"),
    );
    let r = qm.rank();
    case.check("anti_diagonal", anti.inertia() == Inertia::new(r, r, n + m - 2 * r));

    // Half of the instances satisfy R(B) ⊆ R(A) so the Schur branches run.
    let a = if rng.random_bool(0.3) {
        let r = rng.random_range(0..=n);
        random::psd(rng, n, r, 3)
    } else {
        h.clone()
    };
    let (b, d) = if rng.random_bool(0.5) {
        let y: Matrix<Q> = random::mixed(rng, n, m, 3);
        let b = a.matrix() * &y;
        let base = &(&y.conj_transpose() * a.matrix()) * &y;
        let d = match rng.random_range(0..3) {
            0 => herm(base),
            1 => herm(&base + random::psd::<Q, _>(rng, m, 1, 3).matrix()),
            _ => herm(&base + g.matrix()),
        };
        (b, d)
    } else {
        (random::mixed(rng, n, m, BOUND), g.clone())
    };
    let direct = direct_m2(&a, &b, &d);
    let zero = HermitianMatrix::zeros(m);
    case.check(
        "block_inertia_m1",
        block_inertia_m1(&a, &b).ok() == Some(direct_m2(&a, &b, &zero).inertia()),
    );
    case.check("block_inertia_m2", block_inertia_m2(&a, &b, &d).ok() == Some(direct.inertia()));
    case.check(
        "rank_equals_corner",
        rank_equals_corner(&a, &b, &d).ok() == Some(direct.rank() == a.rank()),
    );
    case.check("block_psd", block_psd(&a, &b, &d).ok() == Some(direct.is_psd()));

    let am: Matrix<Q> = random::mixed(rng, n, p, BOUND);
    let bm: Matrix<Q> = random::mixed(rng, q, m, BOUND);
    let x0: Matrix<Q> = random::matrix(rng, p, q, BOUND);
    let c = &(&am * &x0) * &bm;
    let family_ok = match solve_axb_c(&am, &bm, &c) {
        Ok(AxbSolution::Consistent(f)) => (0..3).all(|_| {
            let v1 = random::matrix(rng, p, q, BOUND);
            let v2 = random::matrix(rng, p, q, BOUND);
            let x = f.instantiate(&v1, &v2);
            &(&am * &x) * &bm == c
        }),
        _ => false,
    };
    case.check("solution_family", family_ok);

    let c2: Matrix<Q> = random::mixed(rng, q, m, BOUND);
    let base: Matrix<Q> = random::mixed(rng, n, m, BOUND);
    match extremal_rank_affine(&base, &am, &c2) {
        Ok((max, min)) => {
            for _ in 0..PROBES {
                let x = random::matrix(rng, p, q, BOUND);
                let r = (&base + &(&(&am * &x) * &c2)).rank();
                case.check("affine_rank", min <= r && r <= max);
            }
        }
        Err(_) => case.check("affine_rank", false),
    }

    let cc: Matrix<Q> = random::mixed(rng, q, n, BOUND);
    match extremal_hermitian_affine(&h, &am, &cc) {
        Ok(bounds) => {
            for _ in 0..PROBES {
                let x = random::matrix(rng, p, q, BOUND);
                let bxc = &(&am * &x) * &cc;
                let i = herm(&(h.matrix() + &bxc) + &bxc.conj_transpose()).inertia();
                let (plus, minus) = (i.plus as i64, i.minus as i64);
                case.check(
                    "hermitian_affine",
                    bounds.min_plus <= plus
                        && plus <= bounds.max_plus
                        && bounds.min_minus <= minus
                        && minus <= bounds.max_minus
                        && bounds.min_rank <= plus + minus
                        && plus + minus <= bounds.max_rank,
                );
            }
        }
        Err(_) => case.check("hermitian_affine", false),
    }
}

/// Returns the report section and whether every check passed.
pub(crate) fn run(seed: u64, cases: usize) -> (Value, bool) {
    let mut tallies = Vec::new();
    for k in 0..cases {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        one_case(k, &mut rng, &mut tallies);
    }
    let ok = tallies.iter().all(|t| t.failures == 0);
    let section = serde_json::json!({
        "seed": seed,
        "cases": cases,
        "identities": to_value(&tallies),
    });
    (section, ok)
}
