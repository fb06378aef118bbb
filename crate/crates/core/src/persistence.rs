//! Query documents: the question, the graph and the SPARQL derived from it.
//!
//! Canonical `.oqb` layout, one field per line:
//!
//! ```text
//! oqb-query v1
//! question "Find the Image from the Camera Sensor"
//! ontology "sensor.owl"
//! node-cap 12
//! next-node-id 3
//! node 1 variable ?x
//! node 2 variable ?image
//! edge 1 2 tp:hasCameraResource
//! select ?image
//! sparql 6
//! <6 lines of SPARQL text>
//! end
//! ```
//!
//! Strings are JSON-quoted. `sparql 0` means no query was derivable at save
//! time. The legacy `.txt` export is a `# Question: ` line followed by the
//! SPARQL text and cannot be loaded back.

use std::io::{self, Write};

use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::ontology::Ontology;
use crate::query_graph::{GraphError, NodeId, NodeKind, QueryEdge, QueryGraph, QueryNode};
use crate::sparql::{serialize, translate};

pub const FORMAT_VERSION: u32 = 1;
const HEADER: &str = "oqb-query v";

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("line {line}: {message}")]
    FormatError { line: usize, message: String },
    #[error("unsupported document version {0}")]
    VersionUnsupported(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("i/o failure: {0}")]
    IoFailure(#[from] io::Error),
}

impl PersistError {
    pub fn code(&self) -> &'static str {
        match self {
            PersistError::FormatError { .. } => "FORMAT_ERROR",
            PersistError::VersionUnsupported(_) => "VERSION_UNSUPPORTED",
            PersistError::Graph(e) => e.code(),
            PersistError::IoFailure(_) => "IO_FAILURE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryDocument {
    pub version: u32,
    /// File name of the ontology the graph was built against.
    pub ontology_source: String,
    /// Carries the question annotation.
    pub graph: QueryGraph,
    /// SPARQL text derived at save time, if the graph translated.
    pub sparql: Option<String>,
}

impl QueryDocument {
    /// Bundles a graph with the SPARQL it currently translates to.
    pub fn new(graph: QueryGraph, ontology: &Ontology) -> Self {
        let sparql = translate(&graph, ontology).ok().map(|q| serialize(&q));
        QueryDocument { version: FORMAT_VERSION, ontology_source: ontology.source_name().to_string(), graph, sparql }
    }

    pub fn question(&self) -> &str {
        self.graph.question()
    }

    /// Re-derives the SPARQL against `ontology`; a warning if it differs from
    /// the stored text.
    pub fn check_sparql(&self, ontology: &Ontology) -> Option<Diagnostic> {
        let current = translate(&self.graph, ontology).ok().map(|q| serialize(&q));
        (current != self.sparql).then(|| {
            Diagnostic::warning(
                "SPARQL_MISMATCH",
                format!("stored SPARQL differs from a fresh translation against {}", ontology.source_name()),
            )
        })
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Canonical encoding. Equal documents give identical bytes.
pub fn to_canonical_string(doc: &QueryDocument) -> String {
    let g = &doc.graph;
    let mut out = format!("{HEADER}{}\n", doc.version);
    out.push_str(&format!("question {}\n", quote(g.question())));
    out.push_str(&format!("ontology {}\n", quote(&doc.ontology_source)));
    out.push_str(&format!("node-cap {}\n", g.node_cap()));
    out.push_str(&format!("next-node-id {}\n", g.next_id()));
    for n in g.nodes() {
        let payload = match n.kind {
            NodeKind::Literal => quote(&n.payload),
            _ => n.payload.clone(),
        };
        out.push_str(&format!("node {} {} {}\n", n.id, n.kind.as_str(), payload));
    }
    for e in g.edges() {
        out.push_str(&format!("edge {} {} {}\n", e.from, e.to, e.predicate));
    }
    out.push_str("select");
    for v in g.selected() {
        out.push(' ');
        out.push_str(v);
    }
    out.push('\n');
    match &doc.sparql {
        Some(text) => {
            let body = if text.ends_with('\n') { text.clone() } else { format!("{text}\n") };
            out.push_str(&format!("sparql {}\n{body}", body.lines().count()));
        }
        None => out.push_str("sparql 0\n"),
    }
    out.push_str("end\n");
    out
}

pub fn save_document(doc: &QueryDocument, sink: &mut impl Write) -> Result<(), PersistError> {
    sink.write_all(to_canonical_string(doc).as_bytes())?;
    sink.flush()?;
    Ok(())
}

/// Legacy flat export: the question line, then the SPARQL text.
pub fn export_plain(doc: &QueryDocument, sink: &mut impl Write) -> Result<(), PersistError> {
    let question = doc.question().replace(['\r', '\n'], " ");
    write!(sink, "# Question: {question}\n{}", doc.sparql.as_deref().unwrap_or(""))?;
    sink.flush()?;
    Ok(())
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self, expected: &str) -> Result<&'a str, PersistError> {
        match self.inner.next() {
            Some((i, l)) => {
                self.last = i + 1;
                Ok(l)
            }
            None => Err(PersistError::FormatError {
                line: self.last + 1,
                message: format!("unexpected end of document, expected {expected}"),
            }),
        }
    }

    fn error(&self, message: impl Into<String>) -> PersistError {
        PersistError::FormatError { line: self.last, message: message.into() }
    }

    fn field(&mut self, key: &str) -> Result<&'a str, PersistError> {
        let line = self.next_line(key)?;
        match line.strip_prefix(key) {
            Some(rest) if rest.is_empty() => Ok(rest),
            Some(rest) if rest.starts_with(' ') => Ok(&rest[1..]),
            _ => Err(self.error(format!("expected `{key}`"))),
        }
    }

    fn string(&self, text: &str) -> Result<String, PersistError> {
        serde_json::from_str::<String>(text).map_err(|e| self.error(format!("bad quoted string: {e}")))
    }

    fn number<T: std::str::FromStr>(&self, text: &str) -> Result<T, PersistError> {
        text.parse().map_err(|_| self.error(format!("expected a number, found `{text}`")))
    }
}

pub fn parse_document(text: &str) -> Result<QueryDocument, PersistError> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };

    let header = lines.next_line("header")?;
    let version = header.strip_prefix(HEADER).ok_or_else(|| lines.error("missing `oqb-query` header"))?;
    if version != FORMAT_VERSION.to_string() {
        return Err(PersistError::VersionUnsupported(version.to_string()));
    }

    let raw = lines.field("question")?;
    let question = lines.string(raw)?;
    let raw = lines.field("ontology")?;
    let ontology_source = lines.string(raw)?;
    let raw = lines.field("node-cap")?;
    let node_cap: usize = lines.number(raw)?;
    let raw = lines.field("next-node-id")?;
    let next_id: u32 = lines.number(raw)?;

    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut line = lines.next_line("node, edge or select")?;
    while let Some(rest) = line.strip_prefix("node ") {
        let mut parts = rest.splitn(3, ' ');
        let (Some(id), Some(kind), Some(payload)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(lines.error("expected `node <id> <kind> <payload>`"));
        };
        let id = NodeId(lines.number(id)?);
        let kind = NodeKind::parse(kind).ok_or_else(|| lines.error(format!("unknown node kind `{kind}`")))?;
        let payload = match kind {
            NodeKind::Literal => lines.string(payload)?,
            _ => payload.to_string(),
        };
        nodes.push(QueryNode { id, kind, payload });
        line = lines.next_line("node, edge or select")?;
    }
    while let Some(rest) = line.strip_prefix("edge ") {
        let parts: Vec<&str> = rest.split(' ').collect();
        let [from, to, predicate] = parts[..] else {
            return Err(lines.error("expected `edge <from> <to> <predicate>`"));
        };
        edges.push(QueryEdge {
            from: NodeId(lines.number(from)?),
            to: NodeId(lines.number(to)?),
            predicate: predicate.to_string(),
        });
        line = lines.next_line("edge or select")?;
    }
    let selected: Vec<String> = match line.strip_prefix("select") {
        Some("") => Vec::new(),
        Some(rest) if rest.starts_with(' ') => rest[1..].split(' ').map(str::to_string).collect(),
        _ => return Err(lines.error("expected `select`")),
    };

    let raw = lines.field("sparql")?;
    let count: usize = lines.number(raw)?;
    let sparql = if count == 0 {
        None
    } else {
        let mut text = String::new();
        for _ in 0..count {
            text.push_str(lines.next_line("SPARQL text")?);
            text.push('\n');
        }
        Some(text)
    };
    if lines.next_line("end")? != "end" {
        return Err(lines.error("expected `end`"));
    }
    if let Some((i, l)) = lines.inner.find(|(_, l)| !l.trim().is_empty()) {
        return Err(PersistError::FormatError { line: i + 1, message: format!("trailing content `{l}`") });
    }

    let graph = QueryGraph::from_parts(node_cap, next_id, nodes, edges, selected, question)?;
    Ok(QueryDocument { version: FORMAT_VERSION, ontology_source, graph, sparql })
}

pub fn load_document(source: &mut impl io::Read) -> Result<QueryDocument, PersistError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| PersistError::FormatError { line: 0, message: "document is not valid UTF-8".into() })?;
    parse_document(&text)
}
