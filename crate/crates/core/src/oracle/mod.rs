//! Independent checks of the closed forms: sampling and exhaustive
//! enumeration of `φ`, soundness of extremal reports, and Löwner optimality
//! certificates. Everything here runs in exact arithmetic.
//!
//! Draw `k` uses its own ChaCha stream keyed by `(seed, k)`, so results do
//! not depend on the number of threads.

mod search;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::identities::{ExtremalBounds, SolutionFamily};
use crate::loewner::{gap_rank, gap_rank_multi, Direction, MultiProblem, MultiTermProblem, OptimumCertificate, StackedFamily};
use crate::matrix::{HermitianMatrix, Inertia, Matrix};
use crate::qmvf::{ExtremalReport, QmvfProblem};
use crate::random;
use crate::GaussianRational as Q;

pub const GRID_LIMIT: u128 = 1_000_000;

/// Streams at or above this offset feed the guided witness search.
const GUIDED_STREAM: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
    pub entry_bound: i64,
    /// Finite entry set; when present, every matrix over it is evaluated
    /// instead of random draws.
    pub grid: Option<Vec<Q>>,
    /// Add the guided witness search to the uniform draws.
    pub guided: bool,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 0,
            samples: 200,
            entry_bound: 9,
            grid: None,
            guided: true,
        }
    }
}

impl SampleConfig {
    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        if self.entry_bound < 1 {
            return Err(Error::InvalidConfig("entry bound must be at least 1".into()));
        }
        Ok(())
    }
}

fn stream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// One observed extreme and a matrix reaching it.
#[derive(Debug, Clone, PartialEq)]
pub struct Observed {
    pub value: i64,
    pub witness: Matrix<Q>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledBounds {
    /// In the order of [`ExtremalBounds::FIELD_NAMES`].
    pub observed: [Observed; 6],
    pub draws: usize,
    /// Produced by exhaustive enumeration, so observed minima are exact
    /// minima over the grid.
    pub exhaustive: bool,
}

fn is_max(k: usize) -> bool {
    matches!(k, 0 | 2 | 3)
}

fn statistic(i: Inertia, k: usize) -> i64 {
    (match k {
        0 | 1 => i.rank(),
        2 | 4 => i.plus,
        _ => i.minus,
    }) as i64
}

impl SampledBounds {
    pub fn values(&self) -> [i64; 6] {
        std::array::from_fn(|k| self.observed[k].value)
    }

    pub fn get(&self, field: &str) -> Option<&Observed> {
        ExtremalBounds::FIELD_NAMES
            .iter()
            .position(|f| *f == field)
            .map(|k| &self.observed[k])
    }

    /// Earlier draws win ties.
    fn fold(draws: Vec<(Matrix<Q>, Inertia)>, exhaustive: bool) -> Self {
        let n = draws.len();
        let mut iter = draws.into_iter();
        let (x0, i0) = iter.next().expect("at least one draw");
        let mut observed: [Observed; 6] = std::array::from_fn(|k| Observed {
            value: statistic(i0, k),
            witness: x0.clone(),
        });
        for (x, i) in iter {
            for (k, o) in observed.iter_mut().enumerate() {
                let v = statistic(i, k);
                if (is_max(k) && v > o.value) || (!is_max(k) && v < o.value) {
                    *o = Observed {
                        value: v,
                        witness: x.clone(),
                    };
                }
            }
        }
        SampledBounds {
            observed,
            draws: n,
            exhaustive,
        }
    }
}

fn evaluate_all(p: &QmvfProblem<Q>, xs: Vec<Matrix<Q>>) -> Vec<(Matrix<Q>, Inertia)> {
    xs.into_par_iter()
        .map(|x| {
            let i = p.evaluate(&x).expect("draws have the variable's shape").inertia();
            (x, i)
        })
        .collect()
}

/// Uniform Gaussian-integer draws, plus guided witnesses when enabled.
pub fn sample_bounds(p: &QmvfProblem<Q>, cfg: &SampleConfig) -> Result<SampledBounds> {
    cfg.validate()?;
    let d = p.dims();
    let xs: Vec<Matrix<Q>> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| random::matrix(&mut stream(cfg.seed, k as u64), d.p, d.m, cfg.entry_bound))
        .collect();
    let mut draws = evaluate_all(p, xs);
    if cfg.guided && !p.a_is_zero() {
        let extra = search::candidates(p, |k| stream(cfg.seed, GUIDED_STREAM + k));
        draws.extend(evaluate_all(p, extra));
    }
    Ok(SampledBounds::fold(draws, false))
}

/// Every `X` whose entries lie in `grid`.
pub fn grid_search(p: &QmvfProblem<Q>, grid: &[Q]) -> Result<SampledBounds> {
    let d = p.dims();
    let cells = d.p * d.m;
    let combos = u32::try_from(cells)
        .ok()
        .and_then(|c| (grid.len() as u128).checked_pow(c))
        .unwrap_or(u128::MAX);
    if combos > GRID_LIMIT {
        return Err(Error::GridTooLarge(combos));
    }
    if combos == 0 {
        return Err(Error::InvalidConfig("grid has no entries".into()));
    }
    let g = grid.len();
    let xs: Vec<Matrix<Q>> = (0..combos as usize)
        .into_par_iter()
        .map(|mut idx| {
            Matrix::from_fn(d.p, d.m, |_, _| {
                let v = grid[idx % g].clone();
                idx /= g;
                v
            })
        })
        .collect();
    Ok(SampledBounds::fold(evaluate_all(p, xs), true))
}

/// [`grid_search`] when the configuration has a grid, else [`sample_bounds`].
pub fn observe(p: &QmvfProblem<Q>, cfg: &SampleConfig) -> Result<SampledBounds> {
    match &cfg.grid {
        Some(grid) => grid_search(p, grid),
        None => sample_bounds(p, cfg),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// An observed value above the formula maximum.
    MaxExceeded { field: &'static str, formula: i64, observed: i64 },
    /// An observed value below the formula minimum.
    MinViolated { field: &'static str, formula: i64, observed: i64 },
    MaxNotAttained { field: &'static str, formula: i64, observed: i64 },
    /// Only checked on exhaustive observations.
    MinNotAttained { field: &'static str, formula: i64, observed: i64 },
    /// A witness does not reproduce its recorded value.
    Witness { field: &'static str },
    /// `φ(X) − value` has eigenvalues of the forbidden sign.
    WrongSign { draw: usize, inertia: Inertia },
    GapRank { draw: usize, observed: usize, formula: usize },
    /// `φ` at a member of the optimal family is not the value; `draw` is
    /// absent for the particular solution.
    ValueMismatch { draw: Option<usize> },
    ValueInertia { claimed: Inertia, actual: Inertia },
    Uniqueness { claimed: bool },
    ZeroSolution { claimed: bool },
    ValueSign { claimed: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Formula minima never exceed observations, observations never exceed
/// formula maxima, and every maximum is observed. Exhaustive observations
/// must also reach every minimum.
pub fn check_soundness(report: &ExtremalReport, sampled: &SampledBounds) -> CheckOutcome {
    let formula = report.bounds.values();
    let mut violations = Vec::new();
    for k in 0..6 {
        let field = ExtremalBounds::FIELD_NAMES[k];
        let (f, o) = (formula[k], sampled.observed[k].value);
        let v = if is_max(k) {
            match o.cmp(&f) {
                std::cmp::Ordering::Greater => Some(Violation::MaxExceeded { field, formula: f, observed: o }),
                std::cmp::Ordering::Less => Some(Violation::MaxNotAttained { field, formula: f, observed: o }),
                std::cmp::Ordering::Equal => None,
            }
        } else if o < f {
            Some(Violation::MinViolated { field, formula: f, observed: o })
        } else if o > f && sampled.exhaustive {
            Some(Violation::MinNotAttained { field, formula: f, observed: o })
        } else {
            None
        };
        violations.extend(v);
    }
    CheckOutcome { checks: 6, violations }
}

/// Every witness re-evaluates to its recorded value.
pub fn check_witnesses(p: &QmvfProblem<Q>, sampled: &SampledBounds) -> CheckOutcome {
    let violations = sampled
        .observed
        .iter()
        .enumerate()
        .filter(|(k, o)| {
            p.evaluate(&o.witness)
                .map_or(true, |h| statistic(h.inertia(), *k) != o.value)
        })
        .map(|(k, _)| Violation::Witness {
            field: ExtremalBounds::FIELD_NAMES[k],
        })
        .collect();
    CheckOutcome { checks: 6, violations }
}

/// A function with Löwner optimality certificates that the oracle can probe.
pub trait LoewnerTarget: Sync {
    type Family: Sync;

    fn shapes(&self) -> Vec<(usize, usize)>;
    /// `xs` must have the shapes of [`LoewnerTarget::shapes`].
    fn value_at(&self, xs: &[Matrix<Q>]) -> HermitianMatrix<Q>;
    /// `r(φ(X) − value)` predicted without evaluating `φ`.
    fn gap_rank(&self, xs: &[Matrix<Q>]) -> usize;
    fn particular(f: &Self::Family) -> Vec<Matrix<Q>>;
    fn member(f: &Self::Family, rng: &mut ChaCha8Rng, bound: i64) -> Vec<Matrix<Q>>;
    fn singleton(f: &Self::Family) -> bool;
    fn contains_zero(f: &Self::Family) -> bool;
}

/// Gap rank of the coupled form with vanishing `Aᵢ` removed; with none left
/// `φ` is constant and the gap is zero.
fn active_gap_rank(mp: &MultiProblem<Q>, xs: &[Matrix<Q>]) -> usize {
    let keep: Vec<usize> = (0..mp.terms.len())
        .filter(|&i| !mp.terms[i].0.is_zero())
        .collect();
    if keep.is_empty() {
        return 0;
    }
    let active = MultiProblem {
        terms: keep.iter().map(|&i| mp.terms[i].clone()).collect(),
        c: mp.c.clone(),
        m: mp.m.clone(),
        d: mp.d.clone(),
    };
    let xs: Vec<Matrix<Q>> = keep.iter().map(|&i| xs[i].clone()).collect();
    gap_rank_multi(&active, &xs).expect("shapes checked by the caller")
}

fn family_member(f: &SolutionFamily<Q>, rng: &mut ChaCha8Rng, bound: i64) -> Matrix<Q> {
    let (p, m) = f.shape;
    let v1 = random::matrix(rng, p, m, bound);
    let v2 = random::matrix(rng, p, m, bound);
    f.instantiate(&v1, &v2)
}

impl LoewnerTarget for QmvfProblem<Q> {
    type Family = SolutionFamily<Q>;

    fn shapes(&self) -> Vec<(usize, usize)> {
        let d = self.dims();
        vec![(d.p, d.m)]
    }

    fn value_at(&self, xs: &[Matrix<Q>]) -> HermitianMatrix<Q> {
        self.evaluate(&xs[0]).expect("shape checked")
    }

    fn gap_rank(&self, xs: &[Matrix<Q>]) -> usize {
        if self.a_is_zero() {
            0
        } else {
            gap_rank(self, &xs[0]).expect("shape checked")
        }
    }

    fn particular(f: &Self::Family) -> Vec<Matrix<Q>> {
        vec![f.particular.clone()]
    }

    fn member(f: &Self::Family, rng: &mut ChaCha8Rng, bound: i64) -> Vec<Matrix<Q>> {
        vec![family_member(f, rng, bound)]
    }

    fn singleton(f: &Self::Family) -> bool {
        f.is_singleton()
    }

    fn contains_zero(f: &Self::Family) -> bool {
        f.contains(&Matrix::zeros(f.shape.0, f.shape.1))
    }
}

impl LoewnerTarget for MultiProblem<Q> {
    type Family = StackedFamily<Q>;

    fn shapes(&self) -> Vec<(usize, usize)> {
        MultiProblem::shapes(self)
    }

    fn value_at(&self, xs: &[Matrix<Q>]) -> HermitianMatrix<Q> {
        self.evaluate(xs).expect("shapes checked")
    }

    fn gap_rank(&self, xs: &[Matrix<Q>]) -> usize {
        active_gap_rank(self, xs)
    }

    fn particular(f: &Self::Family) -> Vec<Matrix<Q>> {
        f.particular.clone()
    }

    fn member(f: &Self::Family, rng: &mut ChaCha8Rng, bound: i64) -> Vec<Matrix<Q>> {
        f.instantiate(&random::matrix(rng, f.unknowns(), 1, bound))
    }

    fn singleton(f: &Self::Family) -> bool {
        f.null_projector.is_zero()
    }

    fn contains_zero(f: &Self::Family) -> bool {
        let z = StackedFamily::stack(&f.particular);
        let r = f.null_projector.rank();
        Matrix::hstack(&[&f.null_projector, &z]).rank() == r
    }
}

impl LoewnerTarget for MultiTermProblem<Q> {
    type Family = Vec<SolutionFamily<Q>>;

    fn shapes(&self) -> Vec<(usize, usize)> {
        self.terms.iter().map(|t| (t.a.cols(), t.b.rows())).collect()
    }

    fn value_at(&self, xs: &[Matrix<Q>]) -> HermitianMatrix<Q> {
        self.evaluate(xs).expect("shapes checked")
    }

    fn gap_rank(&self, xs: &[Matrix<Q>]) -> usize {
        active_gap_rank(&self.as_multi(), xs)
    }

    fn particular(f: &Self::Family) -> Vec<Matrix<Q>> {
        f.iter().map(|g| g.particular.clone()).collect()
    }

    fn member(f: &Self::Family, rng: &mut ChaCha8Rng, bound: i64) -> Vec<Matrix<Q>> {
        f.iter().map(|g| family_member(g, rng, bound)).collect()
    }

    fn singleton(f: &Self::Family) -> bool {
        f.iter().all(SolutionFamily::is_singleton)
    }

    fn contains_zero(f: &Self::Family) -> bool {
        f.iter().all(|g| g.contains(&Matrix::zeros(g.shape.0, g.shape.1)))
    }
}

/// Probes a certificate: every draw `X` has `φ(X) − value` of the
/// direction's sign with the predicted rank, random members of the family
/// attain the value, and the certificate's flags match the family.
pub fn verify_loewner<P: LoewnerTarget>(
    p: &P,
    cert: &OptimumCertificate<Q, P::Family>,
    cfg: &SampleConfig,
) -> Result<CheckOutcome> {
    cfg.validate()?;
    let min = cert.direction == Direction::Min;
    let value = &cert.value;
    let sign_ok = |h: &HermitianMatrix<Q>| if min { h.is_psd() } else { h.is_nsd() };
    let mut violations = Vec::new();
    let actual = value.inertia();
    if cert.value_inertia != actual {
        violations.push(Violation::ValueInertia {
            claimed: cert.value_inertia,
            actual,
        });
    }
    if cert.unique != P::singleton(&cert.family) {
        violations.push(Violation::Uniqueness { claimed: cert.unique });
    }
    if cert.zero_solution != P::contains_zero(&cert.family) {
        violations.push(Violation::ZeroSolution {
            claimed: cert.zero_solution,
        });
    }
    if cert.value_semidefinite != sign_ok(value) {
        violations.push(Violation::ValueSign {
            claimed: cert.value_semidefinite,
        });
    }
    if p.value_at(&P::particular(&cert.family)) != *value {
        violations.push(Violation::ValueMismatch { draw: None });
    }
    let shapes = p.shapes();
    let per_draw: Vec<Vec<Violation>> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(cfg.seed, k as u64);
            let xs: Vec<Matrix<Q>> = shapes
                .iter()
                .map(|&(r, c)| random::matrix(&mut rng, r, c, cfg.entry_bound))
                .collect();
            let gap = HermitianMatrix::from_computed(p.value_at(&xs).matrix() - value.matrix());
            let mut out = Vec::new();
            let inertia = gap.inertia();
            if (min && inertia.minus > 0) || (!min && inertia.plus > 0) {
                out.push(Violation::WrongSign { draw: k, inertia });
            }
            let formula = p.gap_rank(&xs);
            if inertia.rank() != formula {
                out.push(Violation::GapRank {
                    draw: k,
                    observed: inertia.rank(),
                    formula,
                });
            }
            let member = P::member(&cert.family, &mut rng, cfg.entry_bound);
            if p.value_at(&member) != *value {
                out.push(Violation::ValueMismatch { draw: Some(k) });
            }
            out
        })
        .collect();
    violations.extend(per_draw.into_iter().flatten());
    Ok(CheckOutcome {
        checks: 5 + 3 * cfg.samples,
        violations,
    })
}
