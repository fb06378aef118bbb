//! In-memory registry of ground triples and a basic-graph-pattern evaluator.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::iri::{Iri, NamespaceTable};
use crate::sparql::{SparqlQuery, TriplePattern};
use crate::term::{RdfTerm, Term};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundTriple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl GroundTriple {
    pub fn new(subject: Iri, predicate: Iri, object: Term) -> Self {
        GroundTriple { subject, predicate, object }
    }
}

/// N-Triples line without the newline.
impl fmt::Display for GroundTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> <{}> {} .", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct NTriplesError {
    pub line: usize,
    pub message: String,
}

/// Set of ground triples with subject, predicate and object indexes.
#[derive(Debug, Clone, Default)]
pub struct TripleStore {
    triples: BTreeSet<GroundTriple>,
    by_subject: HashMap<Iri, BTreeSet<GroundTriple>>,
    by_predicate: HashMap<Iri, BTreeSet<GroundTriple>>,
    by_object: HashMap<Term, BTreeSet<GroundTriple>>,
}

impl PartialEq for TripleStore {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for TripleStore {}

impl std::hash::Hash for TripleStore {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.triples.hash(state);
    }
}

impl FromIterator<GroundTriple> for TripleStore {
    fn from_iter<T: IntoIterator<Item = GroundTriple>>(iter: T) -> Self {
        let mut store = TripleStore::new();
        for t in iter {
            store.insert(t);
        }
        store
    }
}

impl TripleStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &GroundTriple) -> bool {
        self.triples.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroundTriple> {
        self.triples.iter()
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, t: GroundTriple) -> bool {
        if !self.triples.insert(t.clone()) {
            return false;
        }
        self.by_subject.entry(t.subject.clone()).or_default().insert(t.clone());
        self.by_predicate.entry(t.predicate.clone()).or_default().insert(t.clone());
        self.by_object.entry(t.object.clone()).or_default().insert(t);
        true
    }

    /// Returns false when the triple was absent.
    pub fn remove(&mut self, t: &GroundTriple) -> bool {
        if !self.triples.remove(t) {
            return false;
        }
        fn drop_from<K: std::hash::Hash + Eq>(
            index: &mut HashMap<K, BTreeSet<GroundTriple>>,
            key: &K,
            t: &GroundTriple,
        ) {
            if let Some(set) = index.get_mut(key) {
                set.remove(t);
                if set.is_empty() {
                    index.remove(key);
                }
            }
        }
        drop_from(&mut self.by_subject, &t.subject, t);
        drop_from(&mut self.by_predicate, &t.predicate, t);
        drop_from(&mut self.by_object, &t.object, t);
        true
    }

    /// Indexes agree with the triple set.
    pub fn indexes_consistent(&self) -> bool {
        let count = |idx: usize| idx == self.triples.len();
        count(self.by_subject.values().map(BTreeSet::len).sum())
            && count(self.by_predicate.values().map(BTreeSet::len).sum())
            && count(self.by_object.values().map(BTreeSet::len).sum())
            && self.triples.iter().all(|t| {
                self.by_subject.get(&t.subject).is_some_and(|s| s.contains(t))
                    && self.by_predicate.get(&t.predicate).is_some_and(|s| s.contains(t))
                    && self.by_object.get(&t.object).is_some_and(|s| s.contains(t))
            })
    }

    /// Every term occurring in any position.
    pub fn terms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        for t in &self.triples {
            out.insert(Term::Iri(t.subject.clone()));
            out.insert(Term::Iri(t.predicate.clone()));
            out.insert(t.object.clone());
        }
        out
    }

    /// Triples matching the fixed positions. Uses the smallest applicable index.
    pub fn matching<'a>(
        &'a self,
        subject: Option<&Term>,
        predicate: Option<&Term>,
        object: Option<&Term>,
    ) -> Box<dyn Iterator<Item = &'a GroundTriple> + 'a> {
        static EMPTY: BTreeSet<GroundTriple> = BTreeSet::new();
        let as_iri = |t: Option<&Term>| -> Option<Option<Iri>> {
            t.map(|t| match t {
                Term::Iri(i) => Some(i.clone()),
                Term::Literal(_) => None,
            })
        };
        let (s, p) = (as_iri(subject), as_iri(predicate));
        // A literal in subject or predicate position matches nothing.
        if matches!(s, Some(None)) || matches!(p, Some(None)) {
            return Box::new(std::iter::empty());
        }
        let (s, p) = (s.flatten(), p.flatten());

        let mut candidates: Option<&BTreeSet<GroundTriple>> = None;
        let mut consider = |set: Option<&'a BTreeSet<GroundTriple>>| {
            let set = set.unwrap_or(&EMPTY);
            if candidates.is_none_or(|c| set.len() < c.len()) {
                candidates = Some(set);
            }
        };
        if let Some(s) = &s {
            consider(self.by_subject.get(s));
        }
        if let Some(p) = &p {
            consider(self.by_predicate.get(p));
        }
        if let Some(o) = object {
            consider(self.by_object.get(o));
        }
        let base: Box<dyn Iterator<Item = &'a GroundTriple>> = match candidates {
            Some(set) => Box::new(set.iter()),
            None => Box::new(self.triples.iter()),
        };
        let object = object.cloned();
        Box::new(base.filter(move |t| {
            s.as_ref().is_none_or(|s| *s == t.subject)
                && p.as_ref().is_none_or(|p| *p == t.predicate)
                && object.as_ref().is_none_or(|o| *o == t.object)
        }))
    }

    /// Conjunctive evaluation of the query's pattern, projected to its select
    /// list, deduplicated and sorted by the N-Triples form of the row.
    pub fn evaluate(&self, query: &SparqlQuery) -> BindingTable {
        let mut partial: Vec<BTreeMap<String, Term>> = vec![BTreeMap::new()];
        for pattern in query.patterns() {
            let mut next = Vec::new();
            for binding in &partial {
                self.extend(pattern, binding, &mut next);
            }
            partial = next;
            if partial.is_empty() {
                break;
            }
        }
        let rows = partial.into_iter().map(|b| query.select().iter().map(|v| b[v].clone()).collect()).collect();
        BindingTable::new(query.select().to_vec(), rows)
    }

    fn extend(&self, pattern: &TriplePattern, binding: &BTreeMap<String, Term>, out: &mut Vec<BTreeMap<String, Term>>) {
        let fixed = |t: &RdfTerm| match t {
            RdfTerm::Variable(v) => binding.get(v).cloned(),
            other => other.as_ground(),
        };
        let (s, p, o) = (fixed(&pattern.subject), fixed(&pattern.predicate), fixed(&pattern.object));
        'triples: for t in self.matching(s.as_ref(), p.as_ref(), o.as_ref()) {
            let mut extended = binding.clone();
            let values = [Term::Iri(t.subject.clone()), Term::Iri(t.predicate.clone()), t.object.clone()];
            for (term, value) in pattern.terms().into_iter().zip(values) {
                if let RdfTerm::Variable(v) = term {
                    match extended.get(v) {
                        Some(bound) if *bound != value => continue 'triples,
                        Some(_) => {}
                        None => {
                            extended.insert(v.clone(), value);
                        }
                    }
                }
            }
            out.push(extended);
        }
    }
}

/// Solutions of a query: one column per selected variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingTable {
    vars: Vec<String>,
    rows: Vec<Vec<Term>>,
}

impl BindingTable {
    /// Deduplicates and sorts `rows`.
    pub fn new(vars: Vec<String>, rows: Vec<Vec<Term>>) -> Self {
        let mut keyed: Vec<(Vec<String>, Vec<Term>)> =
            rows.into_iter().map(|r| (r.iter().map(Term::to_string).collect(), r)).collect();
        keyed.sort();
        keyed.dedup_by(|a, b| a.0 == b.0);
        BindingTable { vars, rows: keyed.into_iter().map(|(_, r)| r).collect() }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &[Vec<Term>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Value of `var` in row `row`.
    pub fn get(&self, row: usize, var: &str) -> Option<&Term> {
        let col = self.vars.iter().position(|v| v == var)?;
        self.rows.get(row).map(|r| &r[col])
    }

    /// Tab-separated: a `?var` header line, then one line per row with IRIs
    /// compacted through `prefixes`.
    pub fn to_tsv(&self, prefixes: &NamespaceTable) -> String {
        let mut out = self.vars.iter().map(|v| format!("?{v}")).collect::<Vec<_>>().join("\t");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|t| t.display_with(prefixes)).collect::<Vec<_>>().join("\t"));
            out.push('\n');
        }
        out
    }
}

fn parse_iri_token(rest: &str, line: usize) -> Result<(Iri, &str), NTriplesError> {
    let err = |message: String| NTriplesError { line, message };
    let inner = rest.strip_prefix('<').ok_or_else(|| err(format!("expected `<iri>` at `{}`", preview(rest))))?;
    let end = inner.find('>').ok_or_else(|| err("unterminated IRI".into()))?;
    let iri = Iri::new(unescape(&inner[..end], line)?).map_err(|e| err(e.to_string()))?;
    Ok((iri, inner[end + 1..].trim_start()))
}

fn preview(s: &str) -> String {
    s.chars().take(20).collect()
}

fn unescape(s: &str, line: usize) -> Result<String, NTriplesError> {
    let err = |message: String| NTriplesError { line, message };
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('b') => out.push('\u{8}'),
            Some('f') => out.push('\u{c}'),
            Some('"') => out.push('"'),
            Some('\'') => out.push('\''),
            Some('\\') => out.push('\\'),
            Some(u @ ('u' | 'U')) => {
                let len = if u == 'u' { 4 } else { 8 };
                let hex: String = chars.by_ref().take(len).collect();
                let c = u32::from_str_radix(&hex, 16)
                    .ok()
                    .and_then(char::from_u32)
                    .ok_or_else(|| err(format!("bad unicode escape `\\{u}{hex}`")))?;
                out.push(c);
            }
            other => return Err(err(format!("bad escape `\\{}`", other.map(String::from).unwrap_or_default()))),
        }
    }
    Ok(out)
}

fn parse_line(line_text: &str, line: usize) -> Result<GroundTriple, NTriplesError> {
    let err = |message: &str| NTriplesError { line, message: message.to_string() };
    let rest = line_text.trim();
    if rest.starts_with("_:") {
        return Err(err("blank nodes are not supported"));
    }
    let (subject, rest) = parse_iri_token(rest, line)?;
    let (predicate, rest) = parse_iri_token(rest, line)?;
    let (object, rest) = if rest.starts_with('<') {
        let (iri, rest) = parse_iri_token(rest, line)?;
        (Term::Iri(iri), rest)
    } else if let Some(body) = rest.strip_prefix('"') {
        let mut end = None;
        let mut escaped = false;
        for (i, c) in body.char_indices() {
            match c {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => {
                    end = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let end = end.ok_or_else(|| err("unterminated literal"))?;
        let value = unescape(&body[..end], line)?;
        let after = &body[end + 1..];
        if after.starts_with("^^") {
            return Err(err("typed literals are not supported"));
        }
        if after.starts_with('@') {
            return Err(err("language-tagged literals are not supported"));
        }
        (Term::Literal(value), after.trim_start())
    } else if rest.starts_with("_:") {
        return Err(err("blank nodes are not supported"));
    } else {
        return Err(err("expected `<iri>` or a string literal as object"));
    };
    let tail = rest.strip_prefix('.').ok_or_else(|| err("missing terminating `.`"))?.trim();
    if !tail.is_empty() && !tail.starts_with('#') {
        return Err(err("unexpected text after `.`"));
    }
    Ok(GroundTriple::new(subject, predicate, object))
}

/// Loads the N-Triples subset: `<s> <p> <o> .` or `<s> <p> "literal" .`,
/// with `#` comment lines and blank lines ignored.
pub fn load_ntriples(document: &[u8]) -> Result<TripleStore, NTriplesError> {
    let text = std::str::from_utf8(document).map_err(|e| NTriplesError {
        line: document[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1,
        message: "file is not valid UTF-8".into(),
    })?;
    let mut store = TripleStore::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        store.insert(parse_line(trimmed, i + 1)?);
    }
    Ok(store)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::sparql::{parse_sparql, translate};

    fn tp(local: &str) -> Iri {
        Iri::new(format!("http://topps.example.org/sensor#{local}")).unwrap()
    }

    #[test]
    fn loads_fixture_registry() {
        let store = fixtures::registry();
        assert_eq!(store.len(), 9);
        assert!(store.indexes_consistent());
    }

    #[test]
    fn empty_and_comment_only() {
        assert!(load_ntriples(b"").unwrap().is_empty());
        assert!(load_ntriples(b"# nothing\n\n").unwrap().is_empty());
    }

    #[test]
    fn parse_errors_carry_line() {
        let doc = b"# c\n<http://a.org/s> <http://a.org/p> <http://a.org/o> .\n<http://a.org/s> <http://a.org/p> <http://a.org/o>\n";
        assert_eq!(load_ntriples(doc).unwrap_err().line, 3);
        assert!(load_ntriples(b"_:b <http://a.org/p> \"x\" .").is_err());
        assert!(load_ntriples(b"<http://a.org/s> <http://a.org/p> \"x\"@en .").is_err());
        assert!(load_ntriples(b"<http://a.org/s> <http://a.org/p> \"x .").is_err());
    }

    #[test]
    fn literal_escapes() {
        let s = load_ntriples(b"<http://a.org/s> <http://a.org/p> \"a\\\"b\\u0041\" . # trailing\n").unwrap();
        let t = s.iter().next().unwrap();
        assert_eq!(t.object, Term::literal("a\"bA"));
        assert_eq!(load_ntriples(t.to_string().as_bytes()).unwrap(), s);
    }

    #[test]
    fn set_semantics() {
        let mut s = TripleStore::new();
        let t = GroundTriple::new(tp("a"), tp("p"), Term::Iri(tp("b")));
        assert!(s.insert(t.clone()));
        assert!(!s.insert(t.clone()));
        assert_eq!(s.len(), 1);
        let absent = GroundTriple::new(tp("a"), tp("p"), Term::literal("x"));
        assert!(!s.remove(&absent));
        assert_eq!(s.len(), 1);
        let q = parse_sparql(
            "SELECT ?o WHERE { <http://topps.example.org/sensor#a> <http://topps.example.org/sensor#p> ?o }",
        )
        .unwrap();
        assert_eq!(s.evaluate(&q).len(), 1);
        assert!(s.remove(&t));
        assert!(s.is_empty());
        assert!(s.indexes_consistent());
    }

    #[test]
    fn experiment1_over_registry() {
        let q = translate(&fixtures::experiment1().graph, &fixtures::sensor_ontology()).unwrap();
        let result = fixtures::registry().evaluate(&q);
        assert_eq!(result.len(), 1);
        assert_eq!(result.get(0, "image"), Some(&Term::Iri(tp("img42"))));
        assert_eq!(result.to_tsv(q.prefixes()), "?image\ntp:img42\n");
    }

    #[test]
    fn alarm_over_registry() {
        let q = translate(&fixtures::alarm().graph, &fixtures::sensor_ontology()).unwrap();
        let mut store = fixtures::registry();
        let result = store.evaluate(&q);
        assert_eq!(result.rows(), [vec![Term::literal("http://registry.example/cam1/latest")]]);

        let on = GroundTriple::new(tp("motion1"), tp("get_detection"), Term::literal("true"));
        store.remove(&on);
        store.insert(GroundTriple::new(tp("motion1"), tp("get_detection"), Term::literal("false")));
        assert!(store.evaluate(&q).is_empty());
    }

    #[test]
    fn repeated_variable_in_one_pattern() {
        let store: TripleStore = [
            GroundTriple::new(tp("a"), tp("p"), Term::Iri(tp("a"))),
            GroundTriple::new(tp("a"), tp("p"), Term::Iri(tp("b"))),
        ]
        .into_iter()
        .collect();
        let q = parse_sparql("SELECT ?x WHERE { ?x <http://topps.example.org/sensor#p> ?x }").unwrap();
        assert_eq!(store.evaluate(&q).rows(), [vec![Term::Iri(tp("a"))]]);
    }

    #[test]
    fn rows_are_sorted_and_distinct() {
        let store: TripleStore = ["c", "a", "b"]
            .iter()
            .flat_map(|s| {
                [
                    GroundTriple::new(tp(s), tp("p"), Term::literal("1")),
                    GroundTriple::new(tp(s), tp("q"), Term::literal("1")),
                ]
            })
            .collect();
        let q = parse_sparql("SELECT ?v WHERE { ?s <http://topps.example.org/sensor#p> ?v }").unwrap();
        assert_eq!(store.evaluate(&q).len(), 1);
        let q = parse_sparql("SELECT ?s WHERE { ?s <http://topps.example.org/sensor#p> ?v }").unwrap();
        let locals: Vec<String> = store
            .evaluate(&q)
            .rows()
            .iter()
            .map(|r| match &r[0] {
                Term::Iri(i) => i.local_name().to_string(),
                Term::Literal(l) => l.clone(),
            })
            .collect();
        assert_eq!(locals, ["a", "b", "c"]);
    }
}
