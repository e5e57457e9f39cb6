//! The `verify` command. Always exact: float files are converted entry by
//! entry, which is lossless for finite doubles.

use serde_json::{json, Value};

use qhmf_core::loewner::{
    global_optimum_multi, global_optimum_multiterm, global_optimum_single, multiterm_reduction_agrees, Direction,
    MultiProblem, MultiTermProblem, Term,
};
use qhmf_core::lstsq::{lstsq_general, residual_gram_problem, GramSide, WeightSide};
use qhmf_core::oracle::{check_soundness, check_witnesses, observe, verify_loewner, CheckOutcome, SampleConfig};
use qhmf_core::qmvf::{extremal, extremal_via_linearization, QmvfProblem};
use qhmf_core::{Complex64, GaussianRational as Q, HermitianMatrix, Matrix, Mode, Scalar};

use crate::problem::{render, InputError, LstsqSystem, Problem, ProblemFile};
use crate::report::{to_value, Digest, InfeasibleOut, Report, Status};

pub(crate) fn run(
    file: &ProblemFile,
    mode: Mode,
    samples: usize,
    seed: u64,
    grid: Option<&str>,
    r: &mut Report,
) -> Result<(), InputError> {
    let p = match mode {
        Mode::Exact => file.parse::<Q>()?,
        Mode::Float => {
            let fp = file.parse::<Complex64>()?;
            r.problem = Some(Digest::of(&fp));
            exact_problem(&fp)?
        }
    };
    if r.problem.is_none() {
        r.problem = Some(Digest::of(&p));
    }
    let grid = grid.map(parse_grid).transpose()?;
    let cfg = SampleConfig {
        seed,
        samples,
        grid,
        ..SampleConfig::default()
    };
    let mut failures = Vec::new();
    let section = match &p {
        Problem::Single(s) => single(s, &cfg, &mut failures),
        Problem::Multi(mp) => multi(mp, &cfg, &mut failures),
        Problem::MultiTerm(mt) => multiterm(mt, &cfg, &mut failures),
        Problem::Lstsq(sys) => lstsq(sys, &cfg, &mut failures),
    }
    .map_err(|e| InputError(e.to_string()))?;
    r.verification = Some(section);
    if !failures.is_empty() {
        r.escalate(Status::VerificationFailed, Some(failures.join("; ")));
    }
    Ok(())
}

fn parse_grid(s: &str) -> Result<Vec<Q>, InputError> {
    s.split(',')
        .map(|t| Q::parse_literal(t.trim()).map_err(|e| InputError(format!("--grid: {e}"))))
        .collect()
}

fn exact_matrix(m: &Matrix<Complex64>) -> Result<Matrix<Q>, InputError> {
    let entries: Option<Vec<Q>> = m.entries().iter().map(|z| Q::from_c64(*z)).collect();
    let entries = entries.ok_or_else(|| InputError("non-finite entry cannot be verified".into()))?;
    Matrix::new(m.rows(), m.cols(), entries).map_err(|e| InputError(e.to_string()))
}

fn exact_hermitian(h: &HermitianMatrix<Complex64>) -> Result<HermitianMatrix<Q>, InputError> {
    HermitianMatrix::new(exact_matrix(h.matrix())?)
        .map_err(|_| InputError("matrix is Hermitian only within float tolerance".into()))
}

fn exact_problem(p: &Problem<Complex64>) -> Result<Problem<Q>, InputError> {
    let dims = |e: qhmf_core::Error| InputError(e.to_string());
    Ok(match p {
        Problem::Single(s) => Problem::Single(
            QmvfProblem::new(
                exact_matrix(&s.a)?,
                exact_matrix(&s.b)?,
                exact_matrix(&s.c)?,
                exact_hermitian(&s.d)?,
                exact_hermitian(&s.m)?,
            )
            .map_err(dims)?,
        ),
        Problem::Multi(mp) => {
            let mut terms = Vec::new();
            for (a, b) in &mp.terms {
                terms.push((exact_matrix(a)?, exact_matrix(b)?));
            }
            Problem::Multi(
                MultiProblem::new(terms, exact_matrix(&mp.c)?, exact_hermitian(&mp.m)?, exact_hermitian(&mp.d)?)
                    .map_err(dims)?,
            )
        }
        Problem::MultiTerm(mt) => {
            let mut terms = Vec::new();
            for t in &mt.terms {
                terms.push(Term {
                    a: exact_matrix(&t.a)?,
                    b: exact_matrix(&t.b)?,
                    c: exact_matrix(&t.c)?,
                    m: exact_hermitian(&t.m)?,
                });
            }
            Problem::MultiTerm(MultiTermProblem::new(terms, exact_hermitian(&mt.d)?).map_err(dims)?)
        }
        Problem::Lstsq(sys) => Problem::Lstsq(LstsqSystem {
            a: exact_matrix(&sys.a)?,
            b: exact_matrix(&sys.b)?,
            c: exact_matrix(&sys.c)?,
            weight: sys.weight.as_ref().map(exact_hermitian).transpose()?,
            side: sys.side,
        }),
    })
}

fn record(name: &str, outcome: &CheckOutcome, failures: &mut Vec<String>) -> Value {
    if !outcome.passed() {
        failures.push(format!("{name}: {} violation(s)", outcome.violations.len()));
    }
    to_value(outcome)
}

/// Certificates in both directions, each probed when it exists.
fn loewner_both<C>(
    name: &str,
    mut certify: impl FnMut(Direction) -> Result<C, qhmf_core::loewner::Infeasible>,
    mut probe: impl FnMut(&C) -> qhmf_core::Result<CheckOutcome>,
    failures: &mut Vec<String>,
) -> qhmf_core::Result<Value> {
    let mut out = serde_json::Map::new();
    for dir in [Direction::Min, Direction::Max] {
        let entry = match certify(dir) {
            Ok(cert) => {
                let outcome = probe(&cert)?;
                json!({ "outcome": record(&format!("{name} {dir}"), &outcome, failures) })
            }
            Err(e) => json!({ "infeasible": to_value(InfeasibleOut::of(&e)) }),
        };
        out.insert(dir.to_string(), entry);
    }
    Ok(Value::Object(out))
}

fn single(p: &QmvfProblem<Q>, cfg: &SampleConfig, failures: &mut Vec<String>) -> qhmf_core::Result<Value> {
    let report = extremal(p);
    let sampled = observe(p, cfg)?;
    let agrees = report.bounds.same_values(&extremal_via_linearization(p).bounds);
    if !agrees {
        failures.push("extremal formulas disagree with the linearization".into());
    }
    let observed: Vec<Value> = qhmf_core::identities::ExtremalBounds::FIELD_NAMES
        .iter()
        .zip(&sampled.observed)
        .map(|(field, o)| json!({ "field": field, "value": o.value, "witness": render(&o.witness) }))
        .collect();
    let soundness = check_soundness(&report, &sampled);
    let witnesses = check_witnesses(p, &sampled);
    let probe_cfg = SampleConfig { grid: None, ..cfg.clone() };
    let loewner = loewner_both(
        "loewner",
        |d| global_optimum_single(p, d),
        |c| verify_loewner(p, c, &probe_cfg),
        failures,
    )?;
    Ok(json!({
        "formula": report.bounds.values(),
        "observed": observed,
        "draws": sampled.draws,
        "exhaustive": sampled.exhaustive,
        "soundness": record("soundness", &soundness, failures),
        "witnesses": record("witnesses", &witnesses, failures),
        "linearization_agrees": agrees,
        "loewner": loewner,
    }))
}

fn multi(mp: &MultiProblem<Q>, cfg: &SampleConfig, failures: &mut Vec<String>) -> qhmf_core::Result<Value> {
    let cfg = SampleConfig { grid: None, ..cfg.clone() };
    let loewner = loewner_both(
        "loewner",
        |d| global_optimum_multi(mp, d),
        |c| verify_loewner(mp, c, &cfg),
        failures,
    )?;
    Ok(json!({ "loewner": loewner }))
}

fn multiterm(mt: &MultiTermProblem<Q>, cfg: &SampleConfig, failures: &mut Vec<String>) -> qhmf_core::Result<Value> {
    let cfg = SampleConfig { grid: None, ..cfg.clone() };
    let loewner = loewner_both(
        "loewner",
        |d| global_optimum_multiterm(mt, d),
        |c| verify_loewner(mt, c, &cfg),
        failures,
    )?;
    let mut reduction = serde_json::Map::new();
    for dir in [Direction::Min, Direction::Max] {
        let ok = multiterm_reduction_agrees(mt, dir)?;
        if !ok {
            failures.push(format!("multi-term reduction {dir} disagrees"));
        }
        reduction.insert(dir.to_string(), json!(ok));
    }
    Ok(json!({ "loewner": loewner, "reduction_agrees": reduction }))
}

/// The residual Gram as a single-variable function, plus agreement of its
/// rank bounds with the least-squares rank bounds when unweighted.
fn lstsq(sys: &LstsqSystem<Q>, cfg: &SampleConfig, failures: &mut Vec<String>) -> qhmf_core::Result<Value> {
    let (w, side) = match &sys.weight {
        Some(w) => (w.clone(), sys.side.unwrap_or(WeightSide::Right).gram()),
        None => (HermitianMatrix::identity(sys.c.cols()), GramSide::LeftGram),
    };
    let gram = residual_gram_problem(&sys.a, &sys.b, &sys.c, &w, side)?;
    let mut out = single(&gram, cfg, failures)?;
    out["gram_side"] = to_value(side);
    if sys.weight.is_none() {
        let (max, min) = lstsq_general(&sys.a, &sys.b, &sys.c)?.rank_bounds;
        let b = extremal(&gram).bounds;
        let agrees = b.max_rank == max as i64 && b.min_rank == min as i64;
        if !agrees {
            failures.push("residual rank bounds disagree with the Gram bounds".into());
        }
        out["rank_bounds_agree"] = json!(agrees);
    }
    Ok(out)
}
