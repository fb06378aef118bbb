//! Editable query graphs.
//!
//! Nodes are variables, ontology classes or literals; each directed edge is
//! one subject-predicate-object pattern. Edge order is insertion order and
//! drives the order of the emitted patterns. Every mutation either succeeds
//! or leaves the graph untouched.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostic::{Diagnostic, Location, Severity};
use crate::iri::{Iri, Name, NameError};
use crate::ontology::{Ontology, OntologyError, PropertyKind};

pub const DEFAULT_NODE_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Variable,
    #[serde(rename = "class")]
    ClassTerm,
    Literal,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Variable => "variable",
            NodeKind::ClassTerm => "class",
            NodeKind::Literal => "literal",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "variable" => Some(NodeKind::Variable),
            "class" => Some(NodeKind::ClassTerm),
            "literal" => Some(NodeKind::Literal),
            _ => None,
        }
    }
}

/// `payload` is `?name` for variables, a compact name or IRI for classes and
/// the lexical form for literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QueryNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub payload: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QueryEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub predicate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("node limit ({cap}) reached")]
    CapExceeded { cap: usize },
    #[error("invalid variable name `{0}`; expected `?` followed by a letter or `_`")]
    BadVariableName(String),
    #[error("invalid {kind} payload `{payload}`")]
    BadPayload { kind: &'static str, payload: String },
    #[error("invalid predicate `{0}`")]
    BadPredicate(String),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("edge from node {0} to itself")]
    SelfLoop(NodeId),
    #[error("literal node {0} cannot be the subject of an edge")]
    LiteralSubject(NodeId),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("variable `{0}` selected twice")]
    DuplicateSelection(String),
    #[error("node cap must be positive")]
    InvalidCap,
}

impl GraphError {
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::CapExceeded { .. } => "CAP_EXCEEDED",
            GraphError::BadVariableName(_) => "BAD_VARIABLE_NAME",
            GraphError::BadPayload { .. } => "BAD_PAYLOAD",
            GraphError::BadPredicate(_) => "BAD_PREDICATE",
            GraphError::UnknownNode(_) => "UNKNOWN_NODE",
            GraphError::SelfLoop(_) => "SELF_LOOP",
            GraphError::LiteralSubject(_) => "LITERAL_SUBJECT",
            GraphError::UnknownEdge(_) => "UNKNOWN_EDGE",
            GraphError::UnknownVariable(_) => "UNKNOWN_VARIABLE",
            GraphError::DuplicateNode(_) => "DUPLICATE_NODE",
            GraphError::DuplicateSelection(_) => "DUPLICATE_SELECTION",
            GraphError::InvalidCap => "INVALID_CAP",
        }
    }
}

/// `?` followed by `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_valid_variable(name: &str) -> bool {
    let Some(rest) = name.strip_prefix('?') else { return false };
    let mut chars = rest.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_payload(kind: NodeKind, payload: &str) -> Result<(), GraphError> {
    match kind {
        NodeKind::Variable if !is_valid_variable(payload) => Err(GraphError::BadVariableName(payload.to_string())),
        NodeKind::ClassTerm if Name::parse(payload).is_err() || payload.trim() != payload => {
            Err(GraphError::BadPayload { kind: "class", payload: payload.to_string() })
        }
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryGraph {
    nodes: BTreeMap<NodeId, QueryNode>,
    edges: Vec<QueryEdge>,
    selected: Vec<String>,
    question: String,
    node_cap: usize,
    next_id: u32,
}

impl Default for QueryGraph {
    fn default() -> Self {
        QueryGraph::new()
    }
}

impl QueryGraph {
    pub fn new() -> Self {
        Self::with_cap(DEFAULT_NODE_CAP).expect("default cap is positive")
    }

    pub fn with_cap(node_cap: usize) -> Result<Self, GraphError> {
        if node_cap == 0 {
            return Err(GraphError::InvalidCap);
        }
        Ok(QueryGraph {
            nodes: BTreeMap::new(),
            edges: Vec::new(),
            selected: Vec::new(),
            question: String::new(),
            node_cap,
            next_id: 1,
        })
    }

    /// Rebuilds a graph with its original node ids, e.g. from a saved document.
    pub fn from_parts(
        node_cap: usize,
        next_id: u32,
        nodes: Vec<QueryNode>,
        edges: Vec<QueryEdge>,
        selected: Vec<String>,
        question: String,
    ) -> Result<Self, GraphError> {
        let mut graph = QueryGraph::with_cap(node_cap)?;
        if nodes.len() > node_cap {
            return Err(GraphError::CapExceeded { cap: node_cap });
        }
        for node in nodes {
            check_payload(node.kind, &node.payload)?;
            if node.id.0 == 0 || node.id.0 >= next_id {
                return Err(GraphError::UnknownNode(node.id));
            }
            if graph.nodes.insert(node.id, node.clone()).is_some() {
                return Err(GraphError::DuplicateNode(node.id));
            }
        }
        graph.next_id = next_id.max(1);
        for edge in edges {
            graph.check_edge(edge.from, edge.to, &edge.predicate)?;
            graph.edges.push(edge);
        }
        graph.set_selected(selected)?;
        graph.question = question;
        Ok(graph)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &QueryNode> {
        self.nodes.values()
    }

    pub fn node(&self, id: NodeId) -> Option<&QueryNode> {
        self.nodes.get(&id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[QueryEdge] {
        &self.edges
    }

    pub fn selected(&self) -> &[String] {
        &self.selected
    }

    pub fn question(&self) -> &str {
        &self.question
    }

    pub fn node_cap(&self) -> usize {
        self.node_cap
    }

    /// The id the next inserted node will receive.
    pub fn next_id(&self) -> u32 {
        self.next_id
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    pub fn add_node(&mut self, kind: NodeKind, payload: impl Into<String>) -> Result<NodeId, GraphError> {
        let payload = payload.into();
        if self.nodes.len() >= self.node_cap {
            return Err(GraphError::CapExceeded { cap: self.node_cap });
        }
        check_payload(kind, &payload)?;
        let id = NodeId(self.next_id);
        self.next_id += 1;
        self.nodes.insert(id, QueryNode { id, kind, payload });
        Ok(id)
    }

    fn check_edge(&self, from: NodeId, to: NodeId, predicate: &str) -> Result<(), GraphError> {
        let subject = self.nodes.get(&from).ok_or(GraphError::UnknownNode(from))?;
        if !self.nodes.contains_key(&to) {
            return Err(GraphError::UnknownNode(to));
        }
        if from == to {
            return Err(GraphError::SelfLoop(from));
        }
        if subject.kind == NodeKind::Literal {
            return Err(GraphError::LiteralSubject(from));
        }
        if Name::parse(predicate).is_err() || predicate.trim() != predicate {
            return Err(GraphError::BadPredicate(predicate.to_string()));
        }
        Ok(())
    }

    /// Appends an edge and returns its index.
    pub fn add_edge(&mut self, from: NodeId, to: NodeId, predicate: impl Into<String>) -> Result<usize, GraphError> {
        let predicate = predicate.into();
        self.check_edge(from, to, &predicate)?;
        self.edges.push(QueryEdge { from, to, predicate });
        Ok(self.edges.len() - 1)
    }

    /// Removes the node, its incident edges and, if no other node carries the
    /// same variable, its entry in the selection.
    pub fn remove_node(&mut self, id: NodeId) -> Result<QueryNode, GraphError> {
        let node = self.nodes.remove(&id).ok_or(GraphError::UnknownNode(id))?;
        self.edges.retain(|e| e.from != id && e.to != id);
        if node.kind == NodeKind::Variable && !self.has_variable(&node.payload) {
            self.selected.retain(|v| *v != node.payload);
        }
        Ok(node)
    }

    pub fn remove_edge(&mut self, index: usize) -> Result<QueryEdge, GraphError> {
        if index >= self.edges.len() {
            return Err(GraphError::UnknownEdge(index));
        }
        Ok(self.edges.remove(index))
    }

    /// Empties the graph. The cap and the id counter are kept.
    pub fn clear(&mut self) {
        self.nodes.clear();
        self.edges.clear();
        self.selected.clear();
        self.question.clear();
    }

    pub fn set_selected(&mut self, vars: Vec<String>) -> Result<(), GraphError> {
        if let Some(missing) = vars.iter().find(|v| !self.has_variable(v)) {
            return Err(GraphError::UnknownVariable(missing.clone()));
        }
        if let Some((_, dup)) = vars.iter().enumerate().find(|(i, v)| vars[..*i].contains(v)) {
            return Err(GraphError::DuplicateSelection(dup.clone()));
        }
        self.selected = vars;
        Ok(())
    }

    pub fn set_question(&mut self, question: impl Into<String>) {
        self.question = question.into();
    }

    fn has_variable(&self, name: &str) -> bool {
        self.nodes.values().any(|n| n.kind == NodeKind::Variable && n.payload == name)
    }

    /// Referential integrity: edges point at live nodes and the selection
    /// names live variables.
    pub fn check_integrity(&self) -> bool {
        self.nodes.len() <= self.node_cap
            && self.nodes.keys().all(|id| id.0 < self.next_id)
            && self.edges.iter().all(|e| self.nodes.contains_key(&e.from) && self.nodes.contains_key(&e.to))
            && self.selected.iter().all(|v| self.has_variable(v))
    }

    /// Checks the graph against `ontology`. With `strict` unset, unknown
    /// properties and classes are reported as warnings instead of errors.
    pub fn validate(&self, ontology: &Ontology, strict: bool) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let lookup = |d: Diagnostic| if strict { d } else { Diagnostic { severity: Severity::Warning, ..d } };

        let mut class_of: BTreeMap<NodeId, Iri> = BTreeMap::new();
        let mut in_edge: BTreeSet<NodeId> = BTreeSet::new();
        for e in &self.edges {
            in_edge.insert(e.from);
            in_edge.insert(e.to);
        }

        for node in self.nodes.values() {
            match node.kind {
                NodeKind::ClassTerm => match ontology.resolve(&node.payload) {
                    Ok(iri) if ontology.class(&iri).is_some() => {
                        class_of.insert(node.id, iri);
                    }
                    Ok(iri) => out.push(
                        lookup(Diagnostic::error(
                            "UNKNOWN_CLASS",
                            format!("class {} ({iri}) is not in ontology {}", node.payload, ontology.source_name()),
                        ))
                        .at(Location::Node(node.id)),
                    ),
                    Err(e) => out.push(name_error(e, &node.payload).at(Location::Node(node.id))),
                },
                NodeKind::Variable if !in_edge.contains(&node.id) => out.push(
                    Diagnostic::error(
                        "ISOLATED_VARIABLE",
                        format!("variable {} is not used by any edge", node.payload),
                    )
                    .at(Location::Node(node.id)),
                ),
                _ => {}
            }
        }

        for (index, edge) in self.edges.iter().enumerate() {
            let property = match ontology.resolve(&edge.predicate) {
                Ok(iri) => match ontology.property(&iri) {
                    Some(p) => p,
                    None => {
                        out.push(
                            lookup(Diagnostic::error(
                                "UNKNOWN_PROPERTY",
                                format!("property {} is not in ontology {}", edge.predicate, ontology.source_name()),
                            ))
                            .at(Location::Edge(index)),
                        );
                        continue;
                    }
                },
                Err(e) => {
                    out.push(name_error(e, &edge.predicate).at(Location::Edge(index)));
                    continue;
                }
            };

            if let Some(subject_class) = class_of.get(&edge.from) {
                if !property.domains.is_empty()
                    && !property.domains.iter().any(|d| ontology.is_subclass_or_equal(subject_class, d))
                {
                    out.push(
                        Diagnostic::warning(
                            "DOMAIN_MISMATCH",
                            format!(
                                "{} is outside the domain of {}",
                                ontology.display_name(subject_class),
                                edge.predicate
                            ),
                        )
                        .at(Location::Edge(index)),
                    );
                }
            }

            let object = &self.nodes[&edge.to];
            let range_problem = match (property.kind, object.kind) {
                (PropertyKind::Object, NodeKind::Literal) => {
                    Some(format!("object property {} used with literal \"{}\"", edge.predicate, object.payload))
                }
                (PropertyKind::Datatype, NodeKind::ClassTerm) => {
                    Some(format!("datatype property {} used with class {}", edge.predicate, object.payload))
                }
                (PropertyKind::Object, NodeKind::ClassTerm) => class_of.get(&edge.to).and_then(|c| {
                    let ok = property.ranges.is_empty()
                        || property.ranges.iter().any(|r| ontology.is_subclass_or_equal(c, r));
                    (!ok).then(|| format!("{} is outside the range of {}", ontology.display_name(c), edge.predicate))
                }),
                _ => None,
            };
            if let Some(message) = range_problem {
                out.push(Diagnostic::warning("RANGE_MISMATCH", message).at(Location::Edge(index)));
            }
        }

        if self.edges.is_empty() {
            out.push(Diagnostic::error("EMPTY_GRAPH", "the query has no edges"));
        }
        if self.selected.is_empty() {
            out.push(Diagnostic::error("EMPTY_SELECTION", "no output variables selected"));
        }
        out
    }
}

fn name_error(e: OntologyError, name: &str) -> Diagnostic {
    match e {
        OntologyError::Name(NameError::UnknownPrefix(p)) => {
            Diagnostic::error("UNKNOWN_PREFIX", format!("prefix `{p}` of {name} is not declared"))
        }
        other => Diagnostic::error("BAD_NAME", format!("{name}: {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn experiment1() -> QueryGraph {
        let mut g = QueryGraph::new();
        let x = g.add_node(NodeKind::Variable, "?x").unwrap();
        let image = g.add_node(NodeKind::Variable, "?image").unwrap();
        g.add_edge(x, image, "tp:hasCameraResource").unwrap();
        g.set_selected(vec!["?image".into()]).unwrap();
        g
    }

    fn codes(d: &[Diagnostic]) -> Vec<&str> {
        d.iter().map(|d| d.code.as_str()).collect()
    }

    #[test]
    fn first_node_gets_id_one() {
        let mut g = QueryGraph::new();
        assert_eq!(g.add_node(NodeKind::Variable, "?x").unwrap(), NodeId(1));
    }

    #[test]
    fn cap_is_enforced_and_failure_is_transactional() {
        let mut g = QueryGraph::new();
        for i in 0..12 {
            g.add_node(NodeKind::Variable, format!("?v{i}")).unwrap();
        }
        let before = g.clone();
        assert_eq!(g.add_node(NodeKind::Variable, "?v12"), Err(GraphError::CapExceeded { cap: 12 }));
        assert_eq!(g, before);
        assert_eq!(g.node_count(), 12);
    }

    #[test]
    fn variable_names_are_checked() {
        let mut g = QueryGraph::new();
        assert_eq!(g.add_node(NodeKind::Variable, "image"), Err(GraphError::BadVariableName("image".into())));
        assert!(g.add_node(NodeKind::Variable, "?1x").is_err());
        assert!(g.add_node(NodeKind::ClassTerm, "not a name").is_err());
        assert!(g.is_empty());
        assert_eq!(g.next_id(), 1);
    }

    #[test]
    fn ids_are_not_reused() {
        let mut g = QueryGraph::new();
        let a = g.add_node(NodeKind::Variable, "?a").unwrap();
        g.remove_node(a).unwrap();
        assert_eq!(g.add_node(NodeKind::Variable, "?b").unwrap(), NodeId(2));
    }

    #[test]
    fn edges_append_in_order() {
        let mut g = experiment1();
        assert_eq!(g.edges().len(), 1);
        let loc = g.add_node(NodeKind::Variable, "?loc").unwrap();
        assert_eq!(g.add_edge(NodeId(1), loc, "tp:hasLocation").unwrap(), 1);
        assert_eq!(g.edges()[0].predicate, "tp:hasCameraResource");
        assert_eq!(g.edges()[1].predicate, "tp:hasLocation");
    }

    #[test]
    fn edge_errors() {
        let mut g = experiment1();
        g.remove_node(NodeId(2)).unwrap();
        let before = g.clone();
        assert_eq!(g.add_edge(NodeId(1), NodeId(2), "tp:p"), Err(GraphError::UnknownNode(NodeId(2))));
        assert_eq!(g.add_edge(NodeId(1), NodeId(1), "tp:p"), Err(GraphError::SelfLoop(NodeId(1))));
        let lit = g.add_node(NodeKind::Literal, "true").unwrap();
        let before_lit = g.clone();
        assert_eq!(g.add_edge(lit, NodeId(1), "tp:p"), Err(GraphError::LiteralSubject(lit)));
        assert_eq!(g, before_lit);
        g.remove_node(lit).unwrap();
        assert_eq!(g.nodes().count(), before.nodes().count());
    }

    #[test]
    fn removing_subject_cascades() {
        let mut g = experiment1();
        g.remove_node(NodeId(1)).unwrap();
        assert_eq!(g.node_count(), 1);
        assert!(g.edges().is_empty());
        assert_eq!(g.selected(), ["?image"]);

        let mut g = experiment1();
        g.remove_node(NodeId(2)).unwrap();
        assert!(g.selected().is_empty());
        assert!(g.check_integrity());
    }

    #[test]
    fn remove_edge_and_missing_targets() {
        let mut g = experiment1();
        g.remove_edge(0).unwrap();
        assert!(g.edges().is_empty());
        assert_eq!(g.remove_edge(0), Err(GraphError::UnknownEdge(0)));
        let mut empty = QueryGraph::new();
        assert_eq!(empty.remove_node(NodeId(1)), Err(GraphError::UnknownNode(NodeId(1))));
    }

    #[test]
    fn clear_keeps_cap() {
        let mut g = QueryGraph::with_cap(5).unwrap();
        g.add_node(NodeKind::Variable, "?x").unwrap();
        g.set_question("q");
        g.clear();
        assert!(g.is_empty());
        assert!(g.selected().is_empty());
        assert_eq!(g.question(), "");
        assert_eq!(g.node_cap(), 5);
        g.clear();
        assert!(g.is_empty());
    }

    #[test]
    fn selection_requires_known_variables() {
        let mut g = experiment1();
        assert_eq!(g.set_selected(vec!["?ghost".into()]), Err(GraphError::UnknownVariable("?ghost".into())));
        assert_eq!(g.selected(), ["?image"]);
    }

    #[test]
    fn experiment1_validates() {
        let o = fixtures::sensor_ontology();
        let g = experiment1();
        assert!(g.validate(&o, true).is_empty());
        assert_eq!(g.validate(&o, true), g.validate(&o, true));
    }

    #[test]
    fn unknown_property_and_class() {
        let o = fixtures::sensor_ontology();
        let mut g = experiment1();
        g.add_edge(NodeId(1), NodeId(2), "tp:hasWings").unwrap();
        let d = g.validate(&o, true);
        assert_eq!(codes(&d), ["UNKNOWN_PROPERTY"]);
        assert!(d[0].is_error());
        let lenient = g.validate(&o, false);
        assert!(lenient.iter().all(|d| !d.is_error()));

        let mut g = experiment1();
        let c = g.add_node(NodeKind::ClassTerm, "tp:Unicorn").unwrap();
        g.add_edge(NodeId(1), c, "tp:hasCameraResource").unwrap();
        assert_eq!(codes(&g.validate(&o, true)), ["UNKNOWN_CLASS"]);

        let mut g = experiment1();
        g.add_edge(NodeId(1), NodeId(2), "zz:p").unwrap();
        let d = g.validate(&o, false);
        assert_eq!(codes(&d), ["UNKNOWN_PREFIX"]);
        assert!(d[0].is_error());
    }

    #[test]
    fn structural_errors() {
        let o = fixtures::sensor_ontology();
        let mut g = experiment1();
        g.set_selected(vec![]).unwrap();
        assert_eq!(codes(&g.validate(&o, true)), ["EMPTY_SELECTION"]);

        let mut g = QueryGraph::new();
        g.add_node(NodeKind::Variable, "?x").unwrap();
        assert_eq!(codes(&g.validate(&o, true)), ["ISOLATED_VARIABLE", "EMPTY_GRAPH", "EMPTY_SELECTION"]);
    }

    #[test]
    fn domain_and_range_are_warnings() {
        let o = fixtures::sensor_ontology();
        let mut g = QueryGraph::new();
        let cam = g.add_node(NodeKind::ClassTerm, "tp:MotionDetector").unwrap();
        let img = g.add_node(NodeKind::ClassTerm, "tp:Room").unwrap();
        let v = g.add_node(NodeKind::Variable, "?v").unwrap();
        let lit = g.add_node(NodeKind::Literal, "x").unwrap();
        g.add_edge(cam, img, "tp:hasCameraResource").unwrap();
        g.add_edge(v, lit, "tp:hasLocation").unwrap();
        g.set_selected(vec!["?v".into()]).unwrap();
        let d = g.validate(&o, true);
        assert_eq!(codes(&d), ["DOMAIN_MISMATCH", "RANGE_MISMATCH", "RANGE_MISMATCH"]);
        assert!(d.iter().all(|d| !d.is_error()));

        // Subclass closure: CameraSensor is a Sensor, Room is a Location.
        let mut g = QueryGraph::new();
        let cam = g.add_node(NodeKind::ClassTerm, "tp:CameraSensor").unwrap();
        let room = g.add_node(NodeKind::ClassTerm, "tp:Room").unwrap();
        let v = g.add_node(NodeKind::Variable, "?v").unwrap();
        g.add_edge(cam, room, "tp:hasLocation").unwrap();
        g.add_edge(v, room, "tp:has_location").unwrap();
        g.set_selected(vec!["?v".into()]).unwrap();
        assert!(g.validate(&o, true).is_empty());
    }
}
