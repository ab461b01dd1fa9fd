//! Regression corpus of printed U/T identities on basis elements.
//!
//! The bundled file `data/identities.txt` documents its own grammar in its
//! header. Lines that fail to parse are kept and reported as failures.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use super::{AlbertElement, BasisElement};
use crate::scalars::{FieldSpec, Scalar};

/// The bundled transcription.
pub const BUILTIN: &str = include_str!("../../data/identities.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("bad atom {0:?}")]
    Atom(String),
    #[error("bad coefficient {0:?}")]
    Coefficient(String),
    #[error("expected `lhs == rhs`")]
    MissingEquals,
    #[error("expected T(x,y,z) or U(x; y), got {0:?}")]
    Operator(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    Basis(BasisElement),
    One,
    Zero,
}

impl Atom {
    pub fn eval(self, field: &FieldSpec) -> AlbertElement<Scalar> {
        match self {
            Atom::Basis(b) => AlbertElement::basis(field, b),
            Atom::One => AlbertElement::one(field),
            Atom::Zero => AlbertElement::zero(field),
        }
    }
}

impl FromStr for Atom {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "ONE" => Ok(Atom::One),
            "ZERO" => Ok(Atom::Zero),
            t => t
                .parse()
                .map(Atom::Basis)
                .map_err(|_| CorpusError::Atom(t.to_string())),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Basis(b) => b.fmt(f),
            Atom::One => f.write_str("ONE"),
            Atom::Zero => f.write_str("ZERO"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lhs {
    T(Atom, Atom, Atom),
    U(Atom, Atom),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub lhs: Lhs,
    pub coef: i64,
    pub rhs: Atom,
}

impl Identity {
    pub fn holds(&self, field: &FieldSpec) -> bool {
        let left = match self.lhs {
            Lhs::T(x, y, z) => x.eval(field).triple(&y.eval(field), &z.eval(field)),
            Lhs::U(x, y) => x.eval(field).u_op(&y.eval(field)),
        };
        let right = self.rhs.eval(field).scale(&Scalar::from_i64(field, self.coef));
        left == right
    }
}

impl FromStr for Identity {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (l, r) = s.split_once("==").ok_or(CorpusError::MissingEquals)?;
        let (l, r) = (l.trim(), r.trim());
        let inner = |prefix: &str| {
            l.strip_prefix(prefix)
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| CorpusError::Operator(l.to_string()))
        };
        let lhs = if l.starts_with("T(") {
            let args: Vec<&str> = inner("T(")?.split(',').collect();
            match args[..] {
                [x, y, z] => Lhs::T(x.parse()?, y.parse()?, z.parse()?),
                _ => return Err(CorpusError::Operator(l.to_string())),
            }
        } else if l.starts_with("U(") {
            let (x, y) = inner("U(")?
                .split_once(';')
                .ok_or_else(|| CorpusError::Operator(l.to_string()))?;
            Lhs::U(x.parse()?, y.parse()?)
        } else {
            return Err(CorpusError::Operator(l.to_string()));
        };
        let (coef, rhs) = match r.split_once('*') {
            Some((c, a)) => (
                c.trim()
                    .parse()
                    .map_err(|_| CorpusError::Coefficient(c.to_string()))?,
                a.parse()?,
            ),
            None => (1, r.parse()?),
        };
        Ok(Identity { lhs, coef, rhs })
    }
}

/// One non-comment line of a corpus file.
#[derive(Debug, Clone)]
pub struct Line {
    pub number: usize,
    pub text: String,
    pub parsed: Result<Identity, CorpusError>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub lines: Vec<Line>,
}

impl Corpus {
    pub fn parse(text: &str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let t = raw.trim();
                if t.is_empty() || t.starts_with('#') {
                    return None;
                }
                Some(Line {
                    number: i + 1,
                    text: t.to_string(),
                    parsed: t.parse(),
                })
            })
            .collect();
        Corpus { lines }
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn evaluate(&self, field: &FieldSpec) -> CorpusReport {
        let entries = self
            .lines
            .iter()
            .map(|l| {
                let (passed, error) = match &l.parsed {
                    Ok(id) => (id.holds(field), None),
                    Err(e) => (false, Some(e.to_string())),
                };
                CorpusEntry {
                    line: l.number,
                    identity: l.text.clone(),
                    passed,
                    error,
                }
            })
            .collect();
        CorpusReport {
            field: field.clone(),
            entries,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusEntry {
    pub line: usize,
    pub identity: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub field: FieldSpec,
    pub entries: Vec<CorpusEntry>,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn passed(&self) -> usize {
        self.entries.iter().filter(|e| e.passed).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

/// Evaluates the bundled corpus over `field`.
pub fn paper_identity_corpus(field: &FieldSpec) -> CorpusReport {
    Corpus::builtin().evaluate(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        let id: Identity = "T(X1[e3],X1[e5],X1[e6]) == X1[e5]".parse().unwrap();
        assert_eq!(id.coef, 1);
        assert!(matches!(id.lhs, Lhs::T(..)));
        let id: Identity = "U(X1[e6]; X1[e3]) == -1*X1[e6]".parse().unwrap();
        assert_eq!(id.coef, -1);
        assert!(matches!(id.lhs, Lhs::U(Atom::Basis(_), Atom::Basis(_))));
        assert!("U(X1[e6] X1[e3]) == ZERO".parse::<Identity>().is_err());
        assert!("T(X9[e1],E1[1],E1[1]) == ZERO".parse::<Identity>().is_err());
        assert!("T(E1[1],E1[1],E1[1])".parse::<Identity>().is_err());
    }

    #[test]
    fn builtin_size() {
        let c = Corpus::builtin();
        assert!(c.len() >= 40);
        assert!(c.lines.iter().all(|l| l.parsed.is_ok()));
    }

    #[test]
    fn corrupted_line_fails() {
        let text = "U(E1[1]; ONE) == E1[1]\nU(E1[1]; ONE) == E2[1]\nnonsense\n";
        let r = Corpus::parse(text).evaluate(&FieldSpec::Rationals);
        let flags: Vec<bool> = r.entries.iter().map(|e| e.passed).collect();
        assert_eq!(flags, [true, false, false]);
        assert!(r.entries[2].error.is_some());
        assert_eq!(r.entries[1].line, 2);
    }
}
