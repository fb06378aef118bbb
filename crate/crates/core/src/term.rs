//! RDF terms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::iri::{Iri, NamespaceTable};

/// A ground term: what a store holds and what a binding maps a variable to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "lowercase")]
pub enum Term {
    Iri(Iri),
    Literal(String),
}

impl Term {
    pub fn iri(value: &str) -> Option<Term> {
        Iri::new(value).ok().map(Term::Iri)
    }

    pub fn literal(value: impl Into<String>) -> Term {
        Term::Literal(value.into())
    }

    /// `prefix:local` or `<iri>` for IRIs, quoted for literals.
    pub fn display_with(&self, prefixes: &NamespaceTable) -> String {
        match self {
            Term::Iri(iri) => prefixes.display(iri),
            Term::Literal(value) => quote_literal(value),
        }
    }
}

/// N-Triples form: `<iri>` or `"literal"`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Literal(value) => f.write_str(&quote_literal(value)),
        }
    }
}

/// A pattern position. Variable names are stored without the `?` sigil.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RdfTerm {
    Iri(Iri),
    Variable(String),
    Literal(String),
}

impl RdfTerm {
    pub fn variable(&self) -> Option<&str> {
        match self {
            RdfTerm::Variable(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_ground(&self) -> Option<Term> {
        match self {
            RdfTerm::Iri(iri) => Some(Term::Iri(iri.clone())),
            RdfTerm::Literal(l) => Some(Term::Literal(l.clone())),
            RdfTerm::Variable(_) => None,
        }
    }
}

impl From<Term> for RdfTerm {
    fn from(t: Term) -> Self {
        match t {
            Term::Iri(iri) => RdfTerm::Iri(iri),
            Term::Literal(l) => RdfTerm::Literal(l),
        }
    }
}

/// Double-quoted with `"`, `\` and control characters backslash-escaped.
pub fn quote_literal(value: &str) -> String {
    let mut out = String::with_capacity(value.len() + 2);
    out.push('"');
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
