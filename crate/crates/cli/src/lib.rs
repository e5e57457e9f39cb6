//! Batch front end: reads a problem file, runs one command and prints a
//! JSON report. The exit code is 0 on success, 1 when no optimum exists,
//! 2 on bad input and 3 when a verification or cross-check fails.

pub mod problem;
pub mod report;
mod selftest;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qhmf_core::convexity::convexity_classify;
use qhmf_core::loewner::{
    global_optimum_multi, global_optimum_multiterm, global_optimum_single, multiterm_reduction_agrees,
    semidefinite_everywhere, Direction,
};
use qhmf_core::lstsq::{
    lstsq_general, residual_cross_check, sandwich_min, weighted_lstsq, GramSide, LstsqResult, WeightSide,
};
use qhmf_core::qmvf::{classification_disagreements, classify, extremal, extremal_special, extremal_via_linearization, SpecialCase};
use qhmf_core::{Complex64, Error as CoreError, GaussianRational, Mode, Scalar};

use problem::{render, InputError, Problem, ProblemFile};
use report::{to_value, CertificateOut, CommandEcho, Digest, FamilyOut, InfeasibleOut, Report, StackedOut, Status};

#[derive(Debug, Parser)]
#[command(name = "qhmf", version, about = "Extremal ranks, inertias and Löwner optima of (AXB+C)M(AXB+C)* + D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Min,
    Max,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Min => Direction::Min,
            DirectionArg::Max => Direction::Max,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Global maximal and minimal rank and inertias.
    Extremal { file: PathBuf },
    /// Definiteness and solvability predicates.
    Classify { file: PathBuf },
    /// Löwner minimum or maximum of a single-variable function.
    Optimize {
        #[arg(long, value_enum)]
        direction: DirectionArg,
        file: PathBuf,
    },
    /// Löwner minimum or maximum of a multi-variable or multi-term function.
    MultiOptimize {
        #[arg(long, value_enum)]
        direction: DirectionArg,
        file: PathBuf,
    },
    /// Midpoint convexity class and gap bounds.
    Convexity { file: PathBuf },
    /// Least-squares solutions of AXB = C.
    Lstsq {
        #[arg(long)]
        weighted: bool,
        #[arg(long, value_enum, requires = "weighted")]
        side: Option<SideArg>,
        file: PathBuf,
    },
    /// Check the formulas against sampled or enumerated matrices.
    Verify {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated entry set, e.g. "0,1,-1,1i,-1i"; enumerates every matrix over it.
        #[arg(long)]
        grid: Option<String>,
        file: PathBuf,
    },
    /// Random checks of the block inertia and affine-function identities.
    IdentitiesSelftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Extremal { .. } => "extremal",
            Command::Classify { .. } => "classify",
            Command::Optimize { .. } => "optimize",
            Command::MultiOptimize { .. } => "multi-optimize",
            Command::Convexity { .. } => "convexity",
            Command::Lstsq { .. } => "lstsq",
            Command::Verify { .. } => "verify",
            Command::IdentitiesSelftest { .. } => "identities-selftest",
        }
    }

    fn file(&self) -> Option<&PathBuf> {
        match self {
            Command::Extremal { file }
            | Command::Classify { file }
            | Command::Optimize { file, .. }
            | Command::MultiOptimize { file, .. }
            | Command::Convexity { file }
            | Command::Lstsq { file, .. }
            | Command::Verify { file, .. } => Some(file),
            Command::IdentitiesSelftest { .. } => None,
        }
    }
}

/// Runs one command line (program name first) and returns the exit code
/// and the text for standard output.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            let mut r = Report::new(CommandEcho {
                name: args.first().cloned().unwrap_or_default(),
                args,
            });
            r.escalate(Status::InputError, Some(e.to_string().trim_end().to_string()));
            return (2, r.to_json());
        }
    };
    let mut report = Report::new(CommandEcho {
        name: cli.command.name().to_string(),
        args,
    });
    execute(&cli.command, &mut report);
    (report.status.exit_code(), report.to_json())
}

fn execute(cmd: &Command, r: &mut Report) {
    if let Command::IdentitiesSelftest { seed, cases } = cmd {
        let (section, ok) = selftest::run(*seed, *cases);
        r.selftest = Some(section);
        if !ok {
            r.escalate(Status::VerificationFailed, Some("identity self-test failed".into()));
        }
        return;
    }
    let path = cmd.file().expect("every other command takes a file");
    let file = match std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
        .and_then(|text| ProblemFile::from_json(&text))
    {
        Ok(f) => f,
        Err(e) => return r.escalate(Status::InputError, Some(e.0)),
    };
    let outcome = match (cmd, file.mode) {
        (Command::Verify { samples, seed, grid, .. }, mode) => verify::run(&file, mode, *samples, *seed, grid.as_deref(), r),
        (_, Mode::Exact) => file.parse::<GaussianRational>().map(|p| dispatch(cmd, &p, r)),
        (_, Mode::Float) => file.parse::<Complex64>().map(|p| dispatch(cmd, &p, r)),
    };
    if let Err(e) = outcome {
        r.escalate(Status::InputError, Some(e.0));
    }
}

fn wrong_kind<T: Scalar>(cmd: &Command, p: &Problem<T>, r: &mut Report, wanted: &str) {
    r.escalate(
        Status::InputError,
        Some(format!("{} needs a {wanted} problem, got kind {}", cmd.name(), p.kind().name())),
    );
}

fn core_error(r: &mut Report, e: CoreError) {
    let status = match e {
        CoreError::IdentityViolation(_) => Status::VerificationFailed,
        _ => Status::InputError,
    };
    r.escalate(status, Some(e.to_string()));
}

fn dispatch<T: Scalar>(cmd: &Command, p: &Problem<T>, r: &mut Report) {
    r.problem = Some(Digest::of(p));
    match (cmd, p) {
        (Command::Extremal { .. }, Problem::Single(s)) => {
            let report = extremal(s);
            let lin = extremal_via_linearization(s);
            let agrees = report.bounds.same_values(&lin.bounds);
            let mut cases = Vec::new();
            let mut errata = report.errata.clone();
            for case in SpecialCase::ALL {
                if let Ok(special) = extremal_special(s, case) {
                    cases.push(case.name());
                    errata.extend(special.errata);
                }
            }
            r.extremal = Some(json!({
                "bounds": to_value(&report.bounds),
                "linearization_agrees": agrees,
                "special_cases": cases,
                "errata": to_value(&errata),
            }));
            if !agrees {
                r.escalate(
                    Status::VerificationFailed,
                    Some("extremal formulas disagree with the linearization".into()),
                );
            }
        }
        (Command::Classify { .. }, Problem::Single(s)) => {
            let disagreements = classification_disagreements(s);
            r.classification = Some(json!({
                "predicates": to_value(classify(s)),
                "closed_form_disagreements": disagreements,
            }));
            if !disagreements.is_empty() {
                r.escalate(
                    Status::VerificationFailed,
                    Some(format!("closed-form classification disagrees on {}", disagreements.join(", "))),
                );
            }
        }
        (Command::Optimize { direction, .. }, Problem::Single(s)) => {
            match global_optimum_single(s, (*direction).into()) {
                Ok(cert) => {
                    r.optimum = Some(to_value(CertificateOut::of(&cert, to_value(FamilyOut::of(&cert.family)))));
                }
                Err(e) => infeasible(r, &e),
            }
        }
        (Command::MultiOptimize { direction, .. }, Problem::Multi(mp)) => {
            let sign = to_value(semidefinite_everywhere(mp));
            match global_optimum_multi(mp, (*direction).into()) {
                Ok(cert) => {
                    let mut out = to_value(CertificateOut::of(&cert, to_value(StackedOut::of(&cert.family))));
                    out["semidefinite_everywhere"] = sign;
                    r.optimum = Some(out);
                }
                Err(e) => infeasible(r, &e),
            }
        }
        (Command::MultiOptimize { direction, .. }, Problem::MultiTerm(mt)) => {
            let dir = (*direction).into();
            let reduction = multiterm_reduction_agrees(mt, dir);
            match global_optimum_multiterm(mt, dir) {
                Ok(cert) => {
                    let families: Vec<FamilyOut> = cert.family.iter().map(FamilyOut::of).collect();
                    let mut out = to_value(CertificateOut::of(&cert, to_value(families)));
                    out["reduction_agrees"] = to_value(reduction.as_ref().ok());
                    r.optimum = Some(out);
                }
                Err(e) => infeasible(r, &e),
            }
            match reduction {
                Ok(true) => {}
                Ok(false) => r.escalate(
                    Status::VerificationFailed,
                    Some("per-term optimum differs from the coupled reduction".into()),
                ),
                Err(e) => core_error(r, e),
            }
        }
        (Command::Convexity { .. }, Problem::Single(s)) => {
            r.convexity = Some(to_value(convexity_classify(s)));
        }
        (Command::Lstsq { weighted, side, .. }, Problem::Lstsq(sys)) => {
            if let Err(e) = lstsq_command(sys, *weighted, *side, r) {
                core_error(r, e);
            }
        }
        (Command::Extremal { .. } | Command::Classify { .. } | Command::Optimize { .. } | Command::Convexity { .. }, _) => {
            wrong_kind(cmd, p, r, "single")
        }
        (Command::MultiOptimize { .. }, _) => wrong_kind(cmd, p, r, "multi or multiterm"),
        (Command::Lstsq { .. }, _) => wrong_kind(cmd, p, r, "lstsq"),
        (Command::Verify { .. } | Command::IdentitiesSelftest { .. }, _) => unreachable!("handled before dispatch"),
    }
}

fn infeasible(r: &mut Report, e: &qhmf_core::loewner::Infeasible) {
    let out = InfeasibleOut::of(e);
    r.escalate(Status::Infeasible, Some(out.explanation.clone()));
    r.optimum = Some(json!({ "infeasible": to_value(out) }));
}

fn lstsq_out<T: Scalar>(res: &LstsqResult<T>) -> serde_json::Value {
    json!({
        "family": to_value(FamilyOut::of(&res.family)),
        "residual_at_particular": render(&res.residual_at_particular),
        "trace_value": res.trace_value.to_literal(),
        "rank_bounds": { "max": res.rank_bounds.0, "min": res.rank_bounds.1 },
        "gram_bounds": to_value(&res.gram_bounds),
    })
}

fn lstsq_command<T: Scalar>(
    sys: &problem::LstsqSystem<T>,
    weighted: bool,
    side: Option<SideArg>,
    r: &mut Report,
) -> qhmf_core::Result<()> {
    if weighted {
        let Some(w) = &sys.weight else {
            r.escalate(Status::InputError, Some("--weighted needs a weight M in the problem file".into()));
            return Ok(());
        };
        let side = match side {
            Some(SideArg::Left) => WeightSide::Left,
            Some(SideArg::Right) => WeightSide::Right,
            None => sys.side.unwrap_or(WeightSide::Right),
        };
        let res = weighted_lstsq(&sys.a, &sys.b, &sys.c, w, side)?;
        let mut out = lstsq_out(&res);
        out["weighted"] = json!({ "side": to_value(side) });
        r.lstsq = Some(out);
        return Ok(());
    }
    let res = lstsq_general(&sys.a, &sys.b, &sys.c)?;
    let mut out = lstsq_out(&res);
    let mut failures = Vec::new();
    let mut checks = serde_json::Map::new();
    for side in [GramSide::LeftGram, GramSide::RightGram] {
        let cc = residual_cross_check(&sys.a, &sys.b, &sys.c, side)?;
        // the printed condition is sufficient, not necessary, when A or B vanishes
        if (cc.printed_feasible && !cc.general_feasible) || !cc.value_agrees || !cc.family_agrees {
            failures.push(format!("{side:?} optimum disagrees with the closed form"));
        }
        checks.insert(to_value(side).as_str().unwrap_or_default().to_string(), to_value(cc));
    }
    out["cross_checks"] = serde_json::Value::Object(checks);
    let sandwich = sandwich_min(&sys.a, &sys.b, &sys.c);
    out["sandwich_agrees"] = json!(sandwich.is_ok());
    if let Err(e) = sandwich {
        failures.push(e.to_string());
    }
    r.lstsq = Some(out);
    if !failures.is_empty() {
        r.escalate(Status::VerificationFailed, Some(failures.join("; ")));
    }
    Ok(())
}
