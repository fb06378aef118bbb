//! SPARQL SELECT queries over a basic graph pattern: the intermediate form,
//! translation from query graphs, text serialization and parsing.

mod parse;
mod serialize;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::diagnostic::{has_errors, Diagnostic};
use crate::iri::{Iri, NamespaceTable};
use crate::ontology::Ontology;
use crate::query_graph::{NodeKind, QueryGraph};
use crate::term::RdfTerm;

pub use parse::{parse_sparql, ParseError};
pub use serialize::serialize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: RdfTerm,
    pub predicate: RdfTerm,
    pub object: RdfTerm,
}

impl TriplePattern {
    pub fn new(subject: RdfTerm, predicate: RdfTerm, object: RdfTerm) -> Self {
        TriplePattern { subject, predicate, object }
    }

    pub fn terms(&self) -> [&RdfTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms().into_iter().filter_map(RdfTerm::variable)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("WHERE clause has no patterns")]
    EmptyWhere,
    #[error("SELECT clause has no variables")]
    EmptySelect,
    #[error("selected variable ?{0} does not occur in the WHERE clause")]
    UnboundSelect(String),
    #[error("variable ?{0} selected twice")]
    DuplicateSelect(String),
    #[error("pattern {0} has a literal subject")]
    LiteralSubject(usize),
    #[error("pattern {0} has a literal predicate")]
    LiteralPredicate(usize),
    #[error("invalid variable name ?{0}")]
    BadVariable(String),
}

/// A SELECT query with an ordered projection and an ordered conjunctive pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparqlQuery {
    prefixes: NamespaceTable,
    select: Vec<String>,
    patterns: Vec<TriplePattern>,
}

pub(crate) fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SparqlQuery {
    pub fn new(
        prefixes: NamespaceTable,
        select: Vec<String>,
        patterns: Vec<TriplePattern>,
    ) -> Result<Self, QueryError> {
        if patterns.is_empty() {
            return Err(QueryError::EmptyWhere);
        }
        if select.is_empty() {
            return Err(QueryError::EmptySelect);
        }
        for (i, p) in patterns.iter().enumerate() {
            if matches!(p.subject, RdfTerm::Literal(_)) {
                return Err(QueryError::LiteralSubject(i));
            }
            if matches!(p.predicate, RdfTerm::Literal(_)) {
                return Err(QueryError::LiteralPredicate(i));
            }
            if let Some(bad) = p.variables().find(|v| !is_variable_name(v)) {
                return Err(QueryError::BadVariable(bad.to_string()));
            }
        }
        let bound: BTreeSet<&str> = patterns.iter().flat_map(TriplePattern::variables).collect();
        let mut seen = BTreeSet::new();
        for v in &select {
            if !seen.insert(v.as_str()) {
                return Err(QueryError::DuplicateSelect(v.clone()));
            }
            if !bound.contains(v.as_str()) {
                return Err(QueryError::UnboundSelect(v.clone()));
            }
        }
        Ok(SparqlQuery { prefixes, select, patterns })
    }

    pub fn prefixes(&self) -> &NamespaceTable {
        &self.prefixes
    }

    /// Projected variable names, without `?`.
    pub fn select(&self) -> &[String] {
        &self.select
    }

    pub fn patterns(&self) -> &[TriplePattern] {
        &self.patterns
    }

    /// Distinct variables in first-occurrence order.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.patterns.iter().flat_map(TriplePattern::variables).filter(|v| seen.insert(*v)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("query graph failed validation: {}", .0.iter().filter(|d| d.is_error()).map(|d| d.code.as_str()).collect::<Vec<_>>().join(", "))]
    ValidationFailed(Vec<Diagnostic>),
}

impl TranslateError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            TranslateError::ValidationFailed(d) => d,
        }
    }
}

/// Translates a graph that passes strict validation.
pub fn translate(graph: &QueryGraph, ontology: &Ontology) -> Result<SparqlQuery, TranslateError> {
    translate_with(graph, ontology, true)
}

/// One pattern per edge in edge order. Node payloads map to variables, IRIs
/// and literals; only prefixes that shorten an emitted IRI are kept.
pub fn translate_with(graph: &QueryGraph, ontology: &Ontology, strict: bool) -> Result<SparqlQuery, TranslateError> {
    let diagnostics = graph.validate(ontology, strict);
    if has_errors(&diagnostics) {
        return Err(TranslateError::ValidationFailed(diagnostics));
    }
    let fail = |code: &str, message: String| TranslateError::ValidationFailed(vec![Diagnostic::error(code, message)]);

    let node_term = |id| -> Result<RdfTerm, TranslateError> {
        let node = graph.node(id).ok_or_else(|| fail("UNKNOWN_NODE", format!("node {id} missing")))?;
        Ok(match node.kind {
            NodeKind::Variable => RdfTerm::Variable(node.payload.trim_start_matches('?').to_string()),
            NodeKind::Literal => RdfTerm::Literal(node.payload.clone()),
            NodeKind::ClassTerm => {
                RdfTerm::Iri(ontology.resolve(&node.payload).map_err(|e| fail(e.code(), e.to_string()))?)
            }
        })
    };

    let mut patterns = Vec::with_capacity(graph.edges().len());
    for edge in graph.edges() {
        let predicate = ontology.resolve(&edge.predicate).map_err(|e| fail(e.code(), e.to_string()))?;
        patterns.push(TriplePattern::new(node_term(edge.from)?, RdfTerm::Iri(predicate), node_term(edge.to)?));
    }

    let iris: Vec<&Iri> = patterns
        .iter()
        .flat_map(|p| p.terms())
        .filter_map(|t| match t {
            RdfTerm::Iri(iri) => Some(iri),
            _ => None,
        })
        .collect();
    let prefixes = ontology.namespaces().restricted_to(iris);
    let select = graph.selected().iter().map(|v| v.trim_start_matches('?').to_string()).collect();
    SparqlQuery::new(prefixes, select, patterns).map_err(|e| fail("INVALID_QUERY", e.to_string()))
}
