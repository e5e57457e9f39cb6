//! Problem files: JSON with matrices as arrays of rows of scalar literals.

use serde::{Deserialize, Serialize};

use qhmf_core::loewner::{MultiProblem, MultiTermProblem, Term};
use qhmf_core::lstsq::WeightSide;
use qhmf_core::qmvf::QmvfProblem;
use qhmf_core::{Error as CoreError, HermitianMatrix, Matrix, Mode, Scalar};

pub type RawMatrix = Vec<Vec<String>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Single,
    Multi,
    Multiterm,
    Lstsq,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Single => "single",
            Kind::Multi => "multi",
            Kind::Multiterm => "multiterm",
            Kind::Lstsq => "lstsq",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    #[serde(rename = "A")]
    pub a: RawMatrix,
    #[serde(rename = "B")]
    pub b: RawMatrix,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<RawMatrix>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<RawMatrix>,
}

/// The file as written, before any scalar is parsed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub mode: Mode,
    pub kind: Kind,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<RawMatrix>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<RawMatrix>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<RawMatrix>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<RawMatrix>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<RawTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<WeightSide>,
}

/// A problem file that could not be turned into a problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LstsqSystem<T> {
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: Matrix<T>,
    pub weight: Option<HermitianMatrix<T>>,
    pub side: Option<WeightSide>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Problem<T> {
    Single(QmvfProblem<T>),
    Multi(MultiProblem<T>),
    MultiTerm(MultiTermProblem<T>),
    Lstsq(LstsqSystem<T>),
}

impl<T: Scalar> Problem<T> {
    pub fn kind(&self) -> Kind {
        match self {
            Problem::Single(_) => Kind::Single,
            Problem::Multi(_) => Kind::Multi,
            Problem::MultiTerm(_) => Kind::Multiterm,
            Problem::Lstsq(_) => Kind::Lstsq,
        }
    }
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| input(format!("problem file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    pub fn parse<T: Scalar>(&self) -> Result<Problem<T>, InputError> {
        if self.mode != T::MODE {
            return Err(input(format!("file is in {} mode, requested {}", self.mode, T::MODE)));
        }
        let allowed: &[&str] = match self.kind {
            Kind::Single => &["A", "B", "C", "D", "M"],
            Kind::Multi => &["C", "D", "M", "terms"],
            Kind::Multiterm => &["D", "terms"],
            Kind::Lstsq => &["A", "B", "C", "M", "side"],
        };
        let present = [
            ("A", self.a.is_some()),
            ("B", self.b.is_some()),
            ("C", self.c.is_some()),
            ("D", self.d.is_some()),
            ("M", self.m.is_some()),
            ("terms", self.terms.is_some()),
            ("side", self.side.is_some()),
        ];
        for (name, here) in present {
            if here && !allowed.contains(&name) {
                return Err(input(format!("field {name} is not used by kind {}", self.kind.name())));
            }
        }
        let dims = |e: CoreError| input(e.to_string());
        Ok(match self.kind {
            Kind::Single => Problem::Single(
                QmvfProblem::new(
                    matrix(&self.a, "A")?,
                    matrix(&self.b, "B")?,
                    matrix(&self.c, "C")?,
                    hermitian(&self.d, "D")?,
                    hermitian(&self.m, "M")?,
                )
                .map_err(dims)?,
            ),
            Kind::Multi => {
                let terms = self.terms()?;
                let mut pairs = Vec::with_capacity(terms.len());
                for (i, t) in terms.iter().enumerate() {
                    if t.c.is_some() || t.m.is_some() {
                        return Err(input(format!("terms[{i}]: kind multi takes only A and B per term")));
                    }
                    pairs.push((
                        parse_matrix(&t.a, &format!("terms[{i}].A"))?,
                        parse_matrix(&t.b, &format!("terms[{i}].B"))?,
                    ));
                }
                Problem::Multi(
                    MultiProblem::new(pairs, matrix(&self.c, "C")?, hermitian(&self.m, "M")?, hermitian(&self.d, "D")?)
                        .map_err(dims)?,
                )
            }
            Kind::Multiterm => {
                let mut terms = Vec::new();
                for (i, t) in self.terms()?.iter().enumerate() {
                    terms.push(Term {
                        a: parse_matrix(&t.a, &format!("terms[{i}].A"))?,
                        b: parse_matrix(&t.b, &format!("terms[{i}].B"))?,
                        c: matrix(&t.c, &format!("terms[{i}].C"))?,
                        m: hermitian(&t.m, &format!("terms[{i}].M"))?,
                    });
                }
                Problem::MultiTerm(MultiTermProblem::new(terms, hermitian(&self.d, "D")?).map_err(dims)?)
            }
            Kind::Lstsq => {
                let (a, b, c) = (matrix(&self.a, "A")?, matrix(&self.b, "B")?, matrix(&self.c, "C")?);
                if a.rows() != c.rows() || b.cols() != c.cols() {
                    return Err(input(format!(
                        "dimension mismatch: A {}x{}, B {}x{}, C {}x{}",
                        a.rows(),
                        a.cols(),
                        b.rows(),
                        b.cols(),
                        c.rows(),
                        c.cols()
                    )));
                }
                let weight = match &self.m {
                    Some(raw) => Some(hermitian_from(raw, "M")?),
                    None => None,
                };
                Problem::Lstsq(LstsqSystem {
                    a,
                    b,
                    c,
                    weight,
                    side: self.side,
                })
            }
        })
    }

    fn terms(&self) -> Result<&[RawTerm], InputError> {
        match &self.terms {
            Some(t) if !t.is_empty() => Ok(t),
            Some(_) => Err(input("terms: at least one term is required")),
            None => Err(input(format!("missing field terms for kind {}", self.kind.name()))),
        }
    }

    pub fn from_problem<T: Scalar>(p: &Problem<T>) -> Self {
        let mut f = ProblemFile {
            mode: T::MODE,
            kind: p.kind(),
            a: None,
            b: None,
            c: None,
            d: None,
            m: None,
            terms: None,
            side: None,
        };
        match p {
            Problem::Single(s) => {
                f.a = Some(render(&s.a));
                f.b = Some(render(&s.b));
                f.c = Some(render(&s.c));
                f.d = Some(render(s.d.matrix()));
                f.m = Some(render(s.m.matrix()));
            }
            Problem::Multi(mp) => {
                f.c = Some(render(&mp.c));
                f.d = Some(render(mp.d.matrix()));
                f.m = Some(render(mp.m.matrix()));
                f.terms = Some(
                    mp.terms
                        .iter()
                        .map(|(a, b)| RawTerm {
                            a: render(a),
                            b: render(b),
                            c: None,
                            m: None,
                        })
                        .collect(),
                );
            }
            Problem::MultiTerm(mt) => {
                f.d = Some(render(mt.d.matrix()));
                f.terms = Some(
                    mt.terms
                        .iter()
                        .map(|t| RawTerm {
                            a: render(&t.a),
                            b: render(&t.b),
                            c: Some(render(&t.c)),
                            m: Some(render(t.m.matrix())),
                        })
                        .collect(),
                );
            }
            Problem::Lstsq(s) => {
                f.a = Some(render(&s.a));
                f.b = Some(render(&s.b));
                f.c = Some(render(&s.c));
                f.m = s.weight.as_ref().map(|w| render(w.matrix()));
                f.side = s.side;
            }
        }
        f
    }
}

fn matrix<T: Scalar>(raw: &Option<RawMatrix>, field: &str) -> Result<Matrix<T>, InputError> {
    match raw {
        Some(r) => parse_matrix(r, field),
        None => Err(input(format!("missing field {field}"))),
    }
}

fn hermitian<T: Scalar>(raw: &Option<RawMatrix>, field: &str) -> Result<HermitianMatrix<T>, InputError> {
    match raw {
        Some(r) => hermitian_from(r, field),
        None => Err(input(format!("missing field {field}"))),
    }
}

fn hermitian_from<T: Scalar>(raw: &RawMatrix, field: &str) -> Result<HermitianMatrix<T>, InputError> {
    HermitianMatrix::new(parse_matrix(raw, field)?).map_err(|e| input(format!("{field}: {e}")))
}

pub fn parse_matrix<T: Scalar>(raw: &RawMatrix, field: &str) -> Result<Matrix<T>, InputError> {
    let mut rows = Vec::with_capacity(raw.len());
    for (i, row) in raw.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, s) in row.iter().enumerate() {
            out.push(T::parse_literal(s).map_err(|e| input(format!("{field}[{i}][{j}]: {e}")))?);
        }
        rows.push(out);
    }
    Matrix::from_rows(rows).map_err(|e| input(format!("{field}: {e}")))
}

pub fn render<T: Scalar>(m: &Matrix<T>) -> RawMatrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(Scalar::to_literal).collect())
        .collect()
}
