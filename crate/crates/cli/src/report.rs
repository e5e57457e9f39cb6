//! The report printed by every command.
//!
//! One schema for all commands: sections a command does not produce are
//! `null`. Matrices are arrays of rows of scalar literals.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use qhmf_core::identities::SolutionFamily;
use qhmf_core::loewner::{Infeasible, OptimumCertificate, StackedFamily};
use qhmf_core::{Inertia, Matrix, Mode, Scalar};

use crate::problem::{render, Kind, Problem, RawMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Infeasible,
    InputError,
    VerificationFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Infeasible => 1,
            Status::InputError => 2,
            Status::VerificationFailed => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digest {
    pub kind: Kind,
    pub mode: Mode,
    /// `rows×cols` of every coefficient, keyed by field name.
    pub shapes: BTreeMap<String, [usize; 2]>,
}

impl Digest {
    pub fn of<T: Scalar>(p: &Problem<T>) -> Self {
        let mut shapes = BTreeMap::new();
        let mut put = |k: String, m: &Matrix<T>| {
            shapes.insert(k, [m.rows(), m.cols()]);
        };
        match p {
            Problem::Single(s) => {
                put("A".into(), &s.a);
                put("B".into(), &s.b);
                put("C".into(), &s.c);
                put("D".into(), s.d.matrix());
                put("M".into(), s.m.matrix());
            }
            Problem::Multi(mp) => {
                for (i, (a, b)) in mp.terms.iter().enumerate() {
                    put(format!("terms[{i}].A"), a);
                    put(format!("terms[{i}].B"), b);
                }
                put("C".into(), &mp.c);
                put("D".into(), mp.d.matrix());
                put("M".into(), mp.m.matrix());
            }
            Problem::MultiTerm(mt) => {
                for (i, t) in mt.terms.iter().enumerate() {
                    put(format!("terms[{i}].A"), &t.a);
                    put(format!("terms[{i}].B"), &t.b);
                    put(format!("terms[{i}].C"), &t.c);
                    put(format!("terms[{i}].M"), t.m.matrix());
                }
                put("D".into(), mt.d.matrix());
            }
            Problem::Lstsq(s) => {
                put("A".into(), &s.a);
                put("B".into(), &s.b);
                put("C".into(), &s.c);
                if let Some(w) = &s.weight {
                    put("M".into(), w.matrix());
                }
            }
        }
        Digest {
            kind: p.kind(),
            mode: T::MODE,
            shapes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: CommandEcho,
    pub status: Status,
    pub message: Option<String>,
    pub problem: Option<Digest>,
    pub extremal: Option<Value>,
    pub classification: Option<Value>,
    pub optimum: Option<Value>,
    pub convexity: Option<Value>,
    pub lstsq: Option<Value>,
    pub verification: Option<Value>,
    pub selftest: Option<Value>,
}

impl Report {
    pub fn new(command: CommandEcho) -> Self {
        Report {
            command,
            status: Status::Ok,
            message: None,
            problem: None,
            extremal: None,
            classification: None,
            optimum: None,
            convexity: None,
            lstsq: None,
            verification: None,
            selftest: None,
        }
    }

    /// Keeps the most severe status seen so far.
    pub fn escalate(&mut self, status: Status, message: Option<String>) {
        if status.exit_code() > self.status.exit_code() {
            self.status = status;
            self.message = message;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report sections always serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyOut {
    pub particular: RawMatrix,
    pub left_annihilator: RawMatrix,
    pub right_annihilator: RawMatrix,
    pub unique: bool,
}

impl FamilyOut {
    pub fn of<T: Scalar>(f: &SolutionFamily<T>) -> Self {
        FamilyOut {
            particular: render(&f.particular),
            left_annihilator: render(&f.left_annihilator),
            right_annihilator: render(&f.right_annihilator),
            unique: f.unique,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackedOut {
    pub particular: Vec<RawMatrix>,
    pub null_projector: RawMatrix,
    pub unique: bool,
}

impl StackedOut {
    pub fn of<T: Scalar>(f: &StackedFamily<T>) -> Self {
        StackedOut {
            particular: f.particular.iter().map(render).collect(),
            null_projector: render(&f.null_projector),
            unique: f.unique,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateOut {
    pub direction: String,
    pub value: RawMatrix,
    pub value_inertia: Inertia,
    pub unique: bool,
    pub zero_solution: bool,
    pub value_semidefinite: bool,
    pub gap_rank_formula: String,
    pub family: Value,
}

impl CertificateOut {
    pub fn of<T: Scalar, F>(c: &OptimumCertificate<T, F>, family: Value) -> Self {
        CertificateOut {
            direction: c.direction.to_string(),
            value: render(c.value.matrix()),
            value_inertia: c.value_inertia,
            unique: c.unique,
            zero_solution: c.zero_solution,
            value_semidefinite: c.value_semidefinite,
            gap_rank_formula: c.gap_rank_formula.to_string(),
            family,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfeasibleOut {
    pub direction: String,
    pub failed: Value,
    pub term: Option<usize>,
    pub explanation: String,
}

impl InfeasibleOut {
    pub fn of(e: &Infeasible) -> Self {
        InfeasibleOut {
            direction: e.direction.to_string(),
            failed: to_value(&e.failed),
            term: e.term,
            explanation: e.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blank() -> Report {
        Report::new(CommandEcho {
            name: "extremal".into(),
            args: vec![],
        })
    }

    #[test]
    fn escalation_keeps_the_worst_status() {
        let mut r = blank();
        r.escalate(Status::VerificationFailed, Some("first".into()));
        r.escalate(Status::Infeasible, Some("second".into()));
        assert_eq!(r.status, Status::VerificationFailed);
        assert_eq!(r.message.as_deref(), Some("first"));
    }

    #[test]
    fn status_serializes_in_snake_case() {
        assert_eq!(to_value(Status::VerificationFailed), "verification_failed");
        assert_eq!(Status::InputError.exit_code(), 2);
    }

    #[test]
    fn empty_sections_serialize_as_null() {
        let v = to_value(blank());
        assert!(v["extremal"].is_null());
        assert_eq!(v["status"], "ok");
    }
}
