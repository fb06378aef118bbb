//! RDF/XML to triples.
//!
//! Covers the striped syntax used by ontology editors: typed node elements,
//! `rdf:about`/`rdf:ID`/`rdf:nodeID`, `rdf:resource`, property attributes,
//! `rdf:parseType` (`Resource`, `Collection`, `Literal`), `xml:base` and
//! `xml:lang` scoping and DTD entities. Reification via `rdf:ID` on property
//! elements is ignored.

use std::collections::HashMap;

use roxmltree::{Document, Node as XmlNode, ParsingOptions};
use url::Url;

use super::vocab::{RDF, RDF_FIRST, RDF_NIL, RDF_REST, XML};
use crate::diagnostic::{Diagnostic, Location};
use crate::iri::Iri;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum RdfNode {
    Iri(Iri),
    Blank(u32),
    Literal { value: String, lang: Option<String> },
}

impl RdfNode {
    pub(crate) fn as_iri(&self) -> Option<&Iri> {
        match self {
            RdfNode::Iri(iri) => Some(iri),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RdfTriple {
    pub subject: RdfNode,
    pub predicate: Iri,
    pub object: RdfNode,
}

#[derive(Debug)]
pub(crate) struct XmlError {
    pub message: String,
    pub line: u32,
    pub column: u32,
}

#[derive(Debug, Default)]
pub(crate) struct RdfXmlGraph {
    pub triples: Vec<RdfTriple>,
    /// `(prefix, namespace)` in document order; the default namespace has prefix "".
    pub namespaces: Vec<(String, String)>,
    pub base: Option<String>,
    pub diagnostics: Vec<Diagnostic>,
}

pub(crate) fn parse(text: &str) -> Result<RdfXmlGraph, XmlError> {
    let options = ParsingOptions { allow_dtd: true, ..ParsingOptions::default() };
    let doc = Document::parse_with_options(text, options).map_err(|e| {
        let pos = e.pos();
        XmlError { message: e.to_string(), line: pos.row, column: pos.col }
    })?;

    let mut parser = Parser { graph: RdfXmlGraph::default(), doc: &doc, blanks: HashMap::new(), next_blank: 0 };
    parser.collect_namespaces();

    let root = doc.root_element();
    let base = attr(root, XML, "base").map(str::to_string);
    parser.graph.base = base.clone();
    let lang = attr(root, XML, "lang").map(str::to_string);
    let scope = Scope { base, lang };
    if is_rdf(root, "RDF") {
        for child in root.children().filter(XmlNode::is_element) {
            let child_scope = scope.enter(child);
            parser.node_element(child, &child_scope);
        }
    } else {
        parser.node_element(root, &scope);
    }
    Ok(parser.graph)
}

fn attr<'a>(node: XmlNode<'a, '_>, ns: &str, name: &str) -> Option<&'a str> {
    node.attribute((ns, name))
}

fn is_rdf(node: XmlNode, local: &str) -> bool {
    node.tag_name().namespace() == Some(RDF) && node.tag_name().name() == local
}

fn line_of(node: XmlNode) -> u32 {
    node.document().text_pos_at(node.range().start).row
}

#[derive(Clone)]
struct Scope {
    base: Option<String>,
    lang: Option<String>,
}

impl Scope {
    fn enter(&self, node: XmlNode) -> Scope {
        let base = match attr(node, XML, "base") {
            Some(b) => resolve_reference(self.base.as_deref(), b).or_else(|| Some(b.to_string())),
            None => self.base.clone(),
        };
        let lang = match attr(node, XML, "lang") {
            Some("") => None,
            Some(l) => Some(l.to_string()),
            None => self.lang.clone(),
        };
        Scope { base, lang }
    }
}

fn resolve_reference(base: Option<&str>, reference: &str) -> Option<String> {
    if Iri::is_valid(reference) {
        return Some(reference.to_string());
    }
    let base = Url::parse(base?).ok()?;
    base.join(reference).ok().map(String::from)
}

struct Parser<'d, 'input> {
    graph: RdfXmlGraph,
    doc: &'d Document<'input>,
    blanks: HashMap<String, u32>,
    next_blank: u32,
}

impl Parser<'_, '_> {
    fn collect_namespaces(&mut self) {
        for node in self.doc.descendants().filter(XmlNode::is_element) {
            for ns in node.namespaces() {
                let prefix = ns.name().unwrap_or("").to_string();
                if prefix == "xml" {
                    continue;
                }
                let entry = (prefix, ns.uri().to_string());
                if !self.graph.namespaces.contains(&entry) {
                    self.graph.namespaces.push(entry);
                }
            }
        }
    }

    fn fresh_blank(&mut self) -> RdfNode {
        self.next_blank += 1;
        RdfNode::Blank(self.next_blank)
    }

    fn named_blank(&mut self, id: &str) -> RdfNode {
        if let Some(&n) = self.blanks.get(id) {
            return RdfNode::Blank(n);
        }
        self.next_blank += 1;
        self.blanks.insert(id.to_string(), self.next_blank);
        RdfNode::Blank(self.next_blank)
    }

    fn warn(&mut self, node: XmlNode, code: &str, message: String) {
        self.graph.diagnostics.push(Diagnostic::warning(code, message).at(Location::Line(line_of(node))));
    }

    fn resolve(&mut self, node: XmlNode, scope: &Scope, reference: &str) -> Option<Iri> {
        match resolve_reference(scope.base.as_deref(), reference).and_then(|s| Iri::new(s).ok()) {
            Some(iri) => Some(iri),
            None => {
                self.warn(node, "BAD_IRI", format!("cannot resolve IRI reference `{reference}`"));
                None
            }
        }
    }

    fn element_iri(&mut self, node: XmlNode) -> Option<Iri> {
        let name = node.tag_name();
        let Some(ns) = name.namespace() else {
            self.warn(node, "UNQUALIFIED_ELEMENT", format!("element `{}` has no namespace", name.name()));
            return None;
        };
        Iri::new(format!("{ns}{}", name.name())).ok()
    }

    fn emit(&mut self, subject: RdfNode, predicate: Iri, object: RdfNode) {
        self.graph.triples.push(RdfTriple { subject, predicate, object });
    }

    fn rdf(local: &str) -> Iri {
        Iri::new(format!("{RDF}{local}")).expect("rdf vocabulary IRI")
    }

    /// Returns the subject the node element denotes.
    fn node_element(&mut self, node: XmlNode, scope: &Scope) -> Option<RdfNode> {
        let subject = if let Some(about) = attr(node, RDF, "about") {
            RdfNode::Iri(self.resolve(node, scope, about)?)
        } else if let Some(id) = attr(node, RDF, "ID") {
            RdfNode::Iri(self.resolve(node, scope, &format!("#{id}"))?)
        } else if let Some(id) = attr(node, RDF, "nodeID") {
            self.named_blank(id)
        } else {
            self.fresh_blank()
        };

        if !is_rdf(node, "Description") {
            if let Some(ty) = self.element_iri(node) {
                self.emit(subject.clone(), Self::rdf("type"), RdfNode::Iri(ty));
            }
        }
        self.property_attributes(node, scope, &subject, &["about", "ID", "nodeID"]);

        let mut li = 0;
        for child in node.children().filter(XmlNode::is_element) {
            let child_scope = scope.enter(child);
            self.property_element(child, &child_scope, &subject, &mut li);
        }
        Some(subject)
    }

    fn property_attributes(&mut self, node: XmlNode, scope: &Scope, subject: &RdfNode, skip_rdf: &[&str]) -> bool {
        let mut any = false;
        for a in node.attributes() {
            let ns = a.namespace();
            if ns == Some(XML) {
                continue;
            }
            if ns == Some(RDF) && skip_rdf.contains(&a.name()) {
                continue;
            }
            let Some(ns) = ns else {
                self.warn(node, "UNQUALIFIED_ATTRIBUTE", format!("attribute `{}` has no namespace", a.name()));
                continue;
            };
            any = true;
            if ns == RDF && a.name() == "type" {
                if let Some(ty) = self.resolve(node, scope, a.value()) {
                    self.emit(subject.clone(), Self::rdf("type"), RdfNode::Iri(ty));
                }
                continue;
            }
            if let Ok(pred) = Iri::new(format!("{ns}{}", a.name())) {
                let object = RdfNode::Literal { value: a.value().to_string(), lang: scope.lang.clone() };
                self.emit(subject.clone(), pred, object);
            }
        }
        any
    }

    fn property_element(&mut self, node: XmlNode, scope: &Scope, subject: &RdfNode, li: &mut u32) {
        let predicate = if is_rdf(node, "li") {
            *li += 1;
            Self::rdf(&format!("_{li}"))
        } else {
            match self.element_iri(node) {
                Some(p) => p,
                None => return,
            }
        };

        match attr(node, RDF, "parseType") {
            Some("Resource") => {
                let object = self.fresh_blank();
                self.emit(subject.clone(), predicate, object.clone());
                let mut inner_li = 0;
                for child in node.children().filter(XmlNode::is_element) {
                    let child_scope = scope.enter(child);
                    self.property_element(child, &child_scope, &object, &mut inner_li);
                }
                return;
            }
            Some("Collection") => {
                let mut items = Vec::new();
                for child in node.children().filter(XmlNode::is_element) {
                    let child_scope = scope.enter(child);
                    if let Some(item) = self.node_element(child, &child_scope) {
                        items.push(item);
                    }
                }
                let mut tail = RdfNode::Iri(Iri::new(RDF_NIL).expect("rdf:nil"));
                for item in items.into_iter().rev() {
                    let cell = self.fresh_blank();
                    self.emit(cell.clone(), Iri::new(RDF_FIRST).expect("rdf:first"), item);
                    self.emit(cell.clone(), Iri::new(RDF_REST).expect("rdf:rest"), tail);
                    tail = cell;
                }
                self.emit(subject.clone(), predicate, tail);
                return;
            }
            Some(_) => {
                let value = node.descendants().filter(|n| n.is_text()).filter_map(|n| n.text()).collect();
                self.emit(subject.clone(), predicate, RdfNode::Literal { value, lang: None });
                return;
            }
            None => {}
        }

        let skip = ["resource", "nodeID", "datatype", "ID", "parseType"];
        if let Some(resource) = attr(node, RDF, "resource") {
            let Some(iri) = self.resolve(node, scope, resource) else {
                return;
            };
            let object = RdfNode::Iri(iri);
            self.emit(subject.clone(), predicate, object.clone());
            self.property_attributes(node, scope, &object, &skip);
            return;
        }
        if let Some(id) = attr(node, RDF, "nodeID") {
            let object = self.named_blank(id);
            self.emit(subject.clone(), predicate, object.clone());
            self.property_attributes(node, scope, &object, &skip);
            return;
        }

        let mut elements = node.children().filter(XmlNode::is_element);
        if let Some(first) = elements.next() {
            if elements.next().is_some() {
                self.warn(
                    node,
                    "EXTRA_NODE_ELEMENTS",
                    "property element has more than one node element; extra ignored".into(),
                );
            }
            let child_scope = scope.enter(first);
            if let Some(object) = self.node_element(first, &child_scope) {
                self.emit(subject.clone(), predicate, object);
            }
            return;
        }

        let has_attrs = node
            .attributes()
            .any(|a| a.namespace() != Some(XML) && !(a.namespace() == Some(RDF) && skip.contains(&a.name())));
        if has_attrs {
            let object = self.fresh_blank();
            self.emit(subject.clone(), predicate, object.clone());
            self.property_attributes(node, scope, &object, &skip);
            return;
        }

        let value = node.text().unwrap_or("").to_string();
        let lang = if attr(node, RDF, "datatype").is_some() { None } else { scope.lang.clone() };
        self.emit(subject.clone(), predicate, RdfNode::Literal { value, lang });
    }
}
