//! OWL ontology catalog loaded from RDF/XML.
//!
//! The catalog keeps named classes with their direct superclasses and the
//! object/datatype properties with their declared domains and ranges.
//! Anonymous class expressions and other constructs the editor cannot show
//! are skipped and reported as warnings on [`Ontology::diagnostics`].

mod rdfxml;
pub mod vocab;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostic::{Diagnostic, Location};
use crate::iri::{Curie, Iri, Name, NameError, NamespaceTable};
use rdfxml::{RdfNode, RdfTriple};
use vocab::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("malformed XML at {line}:{column}: {message}")]
    MalformedXml { message: String, line: u32, column: u32 },
    #[error("document declares no OWL classes or properties")]
    NotAnOntology,
    #[error("subclass cycle among {}", .members.iter().map(Iri::as_str).collect::<Vec<_>>().join(", "))]
    CyclicSubclass { members: Vec<Iri> },
    #[error("unknown class {0}")]
    UnknownClass(Iri),
    #[error(transparent)]
    Name(#[from] NameError),
}

impl OntologyError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            OntologyError::MalformedXml { .. } => "MALFORMED_XML",
            OntologyError::NotAnOntology => "NOT_AN_ONTOLOGY",
            OntologyError::CyclicSubclass { .. } => "CYCLIC_SUBCLASS",
            OntologyError::UnknownClass(_) => "UNKNOWN_CLASS",
            OntologyError::Name(NameError::UnknownPrefix(_)) => "UNKNOWN_PREFIX",
            OntologyError::Name(_) => "BAD_NAME",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassDef {
    pub iri: Iri,
    pub label: Option<String>,
    /// Direct superclasses.
    pub parents: BTreeSet<Iri>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyKind {
    Object,
    Datatype,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyDef {
    pub iri: Iri,
    pub kind: PropertyKind,
    pub label: Option<String>,
    pub domains: BTreeSet<Iri>,
    pub ranges: BTreeSet<Iri>,
}

/// Immutable catalog of one ontology document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    namespaces: NamespaceTable,
    classes: BTreeMap<Iri, ClassDef>,
    properties: BTreeMap<Iri, PropertyDef>,
    children: BTreeMap<Iri, BTreeSet<Iri>>,
    source_name: String,
    diagnostics: Vec<Diagnostic>,
}

/// Parses an RDF/XML OWL document.
pub fn parse_ontology(document: &[u8], source_name: &str) -> Result<Ontology, OntologyError> {
    let text = std::str::from_utf8(document).map_err(|e| {
        let prefix = &document[..e.valid_up_to()];
        let line = prefix.iter().filter(|&&b| b == b'\n').count() as u32 + 1;
        let column = (prefix.len() - prefix.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1)) as u32 + 1;
        OntologyError::MalformedXml { message: "document is not valid UTF-8".into(), line, column }
    })?;
    let graph = rdfxml::parse(text).map_err(|e| OntologyError::MalformedXml {
        message: e.message,
        line: e.line,
        column: e.column,
    })?;
    Builder::new(graph.diagnostics).build(graph.triples, graph.namespaces, graph.base, source_name)
}

impl Ontology {
    pub fn namespaces(&self) -> &NamespaceTable {
        &self.namespaces
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    /// Non-fatal findings from loading (skipped constructs, dangling references).
    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub fn class(&self, iri: &Iri) -> Option<&ClassDef> {
        self.classes.get(iri)
    }

    pub fn property(&self, iri: &Iri) -> Option<&PropertyDef> {
        self.properties.get(iri)
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn property_count(&self) -> usize {
        self.properties.len()
    }

    /// All classes ordered by IRI.
    pub fn list_classes(&self) -> Vec<&ClassDef> {
        self.classes.values().collect()
    }

    /// All properties ordered by IRI.
    pub fn list_properties(&self) -> Vec<&PropertyDef> {
        self.properties.values().collect()
    }

    /// Direct subclasses, or every descendant when `transitive` is set.
    pub fn subclasses_of(&self, class: &Iri, transitive: bool) -> Result<BTreeSet<Iri>, OntologyError> {
        if !self.classes.contains_key(class) {
            return Err(OntologyError::UnknownClass(class.clone()));
        }
        let direct = self.children.get(class).cloned().unwrap_or_default();
        if !transitive {
            return Ok(direct);
        }
        let mut seen = BTreeSet::new();
        let mut stack: Vec<Iri> = direct.into_iter().collect();
        while let Some(next) = stack.pop() {
            if seen.insert(next.clone()) {
                if let Some(kids) = self.children.get(&next) {
                    stack.extend(kids.iter().cloned());
                }
            }
        }
        Ok(seen)
    }

    /// True when `class` equals `ancestor` or lies below it.
    pub fn is_subclass_or_equal(&self, class: &Iri, ancestor: &Iri) -> bool {
        if class == ancestor {
            return true;
        }
        let mut stack = vec![class];
        let mut seen = BTreeSet::new();
        while let Some(c) = stack.pop() {
            if !seen.insert(c) {
                continue;
            }
            if let Some(def) = self.classes.get(c) {
                for parent in &def.parents {
                    if parent == ancestor {
                        return true;
                    }
                    stack.push(parent);
                }
            }
        }
        false
    }

    /// Classes without a declared superclass, ordered by IRI.
    pub fn root_classes(&self) -> Vec<&ClassDef> {
        self.classes.values().filter(|c| c.parents.is_empty()).collect()
    }

    /// Expands a compact name; a full IRI passes through unchanged.
    pub fn resolve(&self, name: &str) -> Result<Iri, OntologyError> {
        let name = Name::parse(name)?;
        Ok(self.namespaces.resolve(&name)?)
    }

    pub fn curie_of(&self, iri: &Iri) -> Option<Curie> {
        self.namespaces.compact(iri)
    }

    /// Compact form when a prefix covers the IRI, `<iri>` otherwise.
    pub fn display_name(&self, iri: &Iri) -> String {
        self.namespaces.display(iri)
    }
}

struct Builder {
    diagnostics: Vec<Diagnostic>,
}

impl Builder {
    fn new(diagnostics: Vec<Diagnostic>) -> Self {
        Builder { diagnostics }
    }

    fn warn(&mut self, code: &str, message: String, entity: Option<&Iri>) {
        let mut d = Diagnostic::warning(code, message);
        if let Some(e) = entity {
            d = d.at(Location::Entity(e.to_string()));
        }
        self.diagnostics.push(d);
    }

    fn build(
        mut self,
        triples: Vec<RdfTriple>,
        xml_namespaces: Vec<(String, String)>,
        base: Option<String>,
        source_name: &str,
    ) -> Result<Ontology, OntologyError> {
        let namespaces = self.namespace_table(xml_namespaces, base);

        let mut types: HashMap<&RdfNode, BTreeSet<&str>> = HashMap::new();
        let mut labels: HashMap<&Iri, Vec<(Option<&str>, &str)>> = HashMap::new();
        for t in &triples {
            match t.predicate.as_str() {
                RDF_TYPE => {
                    if let Some(ty) = t.object.as_iri() {
                        types.entry(&t.subject).or_default().insert(ty.as_str());
                    }
                }
                RDFS_LABEL => {
                    if let (RdfNode::Iri(s), RdfNode::Literal { value, lang }) = (&t.subject, &t.object) {
                        labels.entry(s).or_default().push((lang.as_deref(), value.as_str()));
                    }
                }
                _ => {}
            }
        }

        let mut classes: BTreeMap<Iri, ClassDef> = BTreeMap::new();
        let mut properties: BTreeMap<Iri, PropertyDef> = BTreeMap::new();
        let mut anonymous = 0usize;

        let mut typed: Vec<(&RdfNode, &BTreeSet<&str>)> = types.iter().map(|(k, v)| (*k, v)).collect();
        typed.sort();
        for (subject, tys) in typed {
            let is_class = tys.contains(OWL_CLASS) || tys.contains(RDFS_CLASS);
            let object = tys.contains(OWL_OBJECT_PROPERTY);
            let datatype = tys.contains(OWL_DATATYPE_PROPERTY);
            let plain = tys.contains(RDF_PROPERTY);
            let Some(iri) = subject.as_iri() else {
                if is_class || tys.contains(OWL_RESTRICTION) {
                    anonymous += 1;
                }
                continue;
            };
            if is_class {
                classes.insert(iri.clone(), ClassDef { iri: iri.clone(), label: None, parents: BTreeSet::new() });
                if object || datatype || plain {
                    self.warn(
                        "PUNNED_ENTITY",
                        format!("{iri} is declared as both class and property; kept as class"),
                        Some(iri),
                    );
                }
                continue;
            }
            let kind = match (object, datatype, plain) {
                (true, true, _) => {
                    self.warn(
                        "AMBIGUOUS_PROPERTY_KIND",
                        format!("{iri} is declared as both object and datatype property; treated as object property"),
                        Some(iri),
                    );
                    PropertyKind::Object
                }
                (true, false, _) => PropertyKind::Object,
                (false, true, _) => PropertyKind::Datatype,
                (false, false, true) => {
                    self.warn(
                        "RDF_PROPERTY_AS_OBJECT",
                        format!("rdf:Property {iri} ingested as an object property"),
                        Some(iri),
                    );
                    PropertyKind::Object
                }
                (false, false, false) => continue,
            };
            properties.insert(
                iri.clone(),
                PropertyDef { iri: iri.clone(), kind, label: None, domains: BTreeSet::new(), ranges: BTreeSet::new() },
            );
        }

        if classes.is_empty() && properties.is_empty() {
            return Err(OntologyError::NotAnOntology);
        }

        let mut skipped_subclass = 0usize;
        let mut undeclared: BTreeSet<Iri> = BTreeSet::new();
        for t in &triples {
            let Some(subject) = t.subject.as_iri() else { continue };
            match t.predicate.as_str() {
                RDFS_SUBCLASS_OF => {
                    let Some(parent) = t.object.as_iri() else {
                        skipped_subclass += 1;
                        continue;
                    };
                    if parent.as_str() == OWL_THING && !classes.contains_key(parent) {
                        continue;
                    }
                    for c in [subject, parent] {
                        if !classes.contains_key(c) && !properties.contains_key(c) {
                            undeclared.insert(c.clone());
                            classes
                                .insert(c.clone(), ClassDef { iri: c.clone(), label: None, parents: BTreeSet::new() });
                        }
                    }
                    if let Some(def) = classes.get_mut(subject) {
                        if properties.contains_key(parent) {
                            continue;
                        }
                        def.parents.insert(parent.clone());
                    }
                }
                RDFS_DOMAIN | RDFS_RANGE => {
                    let Some(def) = properties.get_mut(subject) else { continue };
                    let is_domain = t.predicate.as_str() == RDFS_DOMAIN;
                    match t.object.as_iri() {
                        Some(target) if is_domain => {
                            def.domains.insert(target.clone());
                        }
                        Some(target) => {
                            def.ranges.insert(target.clone());
                        }
                        None => {
                            let what = if is_domain { "domain" } else { "range" };
                            let iri = def.iri.clone();
                            self.warn(
                                "ANONYMOUS_CLASS_SKIPPED",
                                format!("anonymous {what} of {iri} skipped"),
                                Some(&iri),
                            );
                        }
                    }
                }
                _ => {}
            }
        }
        for c in &undeclared {
            self.warn("UNDECLARED_CLASS", format!("{c} used in a subclass axiom without a class declaration"), Some(c));
        }
        if anonymous + skipped_subclass > 0 {
            self.warn(
                "ANONYMOUS_CLASS_SKIPPED",
                format!(
                    "{anonymous} anonymous class expression(s) skipped, {skipped_subclass} subclass axiom(s) on them ignored"
                ),
                None,
            );
        }

        for (iri, entries) in labels {
            let label = pick_label(&entries);
            if let Some(c) = classes.get_mut(iri) {
                c.label = label;
            } else if let Some(p) = properties.get_mut(iri) {
                p.label = label;
            }
        }

        for def in properties.values() {
            for d in &def.domains {
                if !classes.contains_key(d) && d.as_str() != OWL_THING {
                    self.warn(
                        "DANGLING_REFERENCE",
                        format!("domain {d} of {} is not a declared class", def.iri),
                        Some(&def.iri),
                    );
                }
            }
            for r in &def.ranges {
                match def.kind {
                    PropertyKind::Object if is_datatype(r.as_str()) => self.warn(
                        "RANGE_KIND_MISMATCH",
                        format!("object property {} has datatype range {r}", def.iri),
                        Some(&def.iri),
                    ),
                    PropertyKind::Datatype if !is_datatype(r.as_str()) && !is_declared_datatype(&triples, r) => self
                        .warn(
                            "RANGE_KIND_MISMATCH",
                            format!("datatype property {} has non-datatype range {r}", def.iri),
                            Some(&def.iri),
                        ),
                    PropertyKind::Object if !classes.contains_key(r) && r.as_str() != OWL_THING => self.warn(
                        "DANGLING_REFERENCE",
                        format!("range {r} of {} is not a declared class", def.iri),
                        Some(&def.iri),
                    ),
                    _ => {}
                }
            }
        }

        if let Some(members) = find_cycle(&classes) {
            return Err(OntologyError::CyclicSubclass { members });
        }

        let mut children: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
        for def in classes.values() {
            for parent in &def.parents {
                children.entry(parent.clone()).or_default().insert(def.iri.clone());
            }
        }

        Ok(Ontology {
            namespaces,
            classes,
            properties,
            children,
            source_name: source_name.to_string(),
            diagnostics: self.diagnostics,
        })
    }

    fn namespace_table(&mut self, xml_namespaces: Vec<(String, String)>, base: Option<String>) -> NamespaceTable {
        let mut table = NamespaceTable::new();
        for (prefix, uri) in xml_namespaces {
            let bound = Iri::new(&uri).and_then(|ns| table.insert(prefix.clone(), ns));
            if let Err(e) = bound {
                self.warn("NAMESPACE_SKIPPED", format!("namespace prefix `{prefix}` skipped: {e}"), None);
            }
        }
        if let Some(base) = base {
            let ns = if base.ends_with(['#', '/']) { base } else { format!("{base}#") };
            if !table.contains_namespace(&ns) && table.get("").is_none() {
                if let Ok(iri) = Iri::new(&ns) {
                    let _ = table.insert("", iri);
                }
            }
        }
        table
    }
}

fn is_declared_datatype(triples: &[RdfTriple], iri: &Iri) -> bool {
    triples.iter().any(|t| {
        t.subject.as_iri() == Some(iri)
            && t.predicate.as_str() == RDF_TYPE
            && t.object.as_iri().map(Iri::as_str) == Some(RDFS_DATATYPE)
    })
}

/// Untagged label first, then English, then the smallest tagged one.
fn pick_label(entries: &[(Option<&str>, &str)]) -> Option<String> {
    let mut sorted: Vec<_> = entries.to_vec();
    sorted.sort();
    sorted
        .iter()
        .find(|(lang, _)| lang.is_none())
        .or_else(|| sorted.iter().find(|(lang, _)| lang.is_some_and(|l| l.eq_ignore_ascii_case("en"))))
        .or_else(|| sorted.first())
        .map(|(_, v)| v.to_string())
}

/// Returns the members of one subclass cycle, sorted, if any exists.
fn find_cycle(classes: &BTreeMap<Iri, ClassDef>) -> Option<Vec<Iri>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: HashMap<&Iri, Mark> = HashMap::new();
    for start in classes.keys() {
        if marks.contains_key(start) {
            continue;
        }
        // Iterative DFS: (node, next parent index) with the current path on the stack.
        let mut stack: Vec<(&Iri, Vec<&Iri>, usize)> = Vec::new();
        let parents_of = |c: &Iri| classes.get(c).map(|d| d.parents.iter().collect::<Vec<_>>()).unwrap_or_default();
        marks.insert(start, Mark::Open);
        stack.push((start, parents_of(start), 0));
        while let Some((node, parents, idx)) = stack.last_mut() {
            if *idx < parents.len() {
                let next = parents[*idx];
                *idx += 1;
                match marks.get(next) {
                    Some(Mark::Open) => {
                        let pos = stack.iter().position(|(n, _, _)| *n == next).unwrap_or(0);
                        let mut members: Vec<Iri> = stack[pos..].iter().map(|(n, _, _)| (*n).clone()).collect();
                        members.sort();
                        return Some(members);
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(next, Mark::Open);
                        let p = parents_of(next);
                        stack.push((next, p, 0));
                    }
                }
            } else {
                marks.insert(*node, Mark::Done);
                stack.pop();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sensor() -> Ontology {
        parse_ontology(fixtures::SENSOR_OWL.as_bytes(), "sensor.owl").unwrap()
    }

    fn tp(local: &str) -> Iri {
        Iri::new(format!("http://topps.example.org/sensor#{local}")).unwrap()
    }

    fn wrap(body: &str) -> String {
        format!(
            r#"<?xml version="1.0"?>
<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
         xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"
         xmlns:owl="http://www.w3.org/2002/07/owl#"
         xmlns:ex="http://ex.org/o#"
         xml:base="http://ex.org/o">
{body}
</rdf:RDF>"#
        )
    }

    #[test]
    fn sensor_catalog() {
        let o = sensor();
        let classes: Vec<&str> = o.list_classes().iter().map(|c| c.iri.local_name()).collect();
        for name in ["CameraSensor", "MotionDetector", "Image", "Audio", "Video", "Location"] {
            assert!(classes.contains(&name), "{name} missing");
        }
        let cam = classes.iter().position(|c| *c == "CameraSensor").unwrap();
        let motion = classes.iter().position(|c| *c == "MotionDetector").unwrap();
        assert!(cam < motion);
        let props: Vec<&str> = o.list_properties().iter().map(|p| p.iri.local_name()).collect();
        for name in ["hasCameraResource", "hasLocation", "has_uri", "get_detection"] {
            assert!(props.contains(&name), "{name} missing");
        }
        assert_eq!(o.property(&tp("get_detection")).unwrap().kind, PropertyKind::Datatype);
        assert!(o.diagnostics().iter().all(|d| !d.is_error()));
    }

    #[test]
    fn single_class_document() {
        let o = parse_ontology(wrap(r##"<owl:Class rdf:about="#C"/>"##).as_bytes(), "c.owl").unwrap();
        assert_eq!(o.class_count(), 1);
        assert_eq!(o.property_count(), 0);
        assert!(o.list_properties().is_empty());
        let c = Iri::new("http://ex.org/o#C").unwrap();
        assert!(o.class(&c).unwrap().parents.is_empty());
    }

    #[test]
    fn subclass_cycle_is_rejected() {
        let doc = wrap(
            r##"<owl:Class rdf:about="#A"><rdfs:subClassOf rdf:resource="#B"/></owl:Class>
<owl:Class rdf:about="#B"><rdfs:subClassOf rdf:resource="#A"/></owl:Class>"##,
        );
        let err = parse_ontology(doc.as_bytes(), "cycle.owl").unwrap_err();
        let OntologyError::CyclicSubclass { members } = err else { panic!("{err:?}") };
        let names: Vec<&str> = members.iter().map(Iri::local_name).collect();
        assert_eq!(names, ["A", "B"]);
    }

    #[test]
    fn not_an_ontology() {
        let doc = wrap(r##"<rdf:Description rdf:about="#x"><rdfs:label>x</rdfs:label></rdf:Description>"##);
        assert_eq!(parse_ontology(doc.as_bytes(), "x").unwrap_err(), OntologyError::NotAnOntology);
    }

    #[test]
    fn malformed_xml() {
        let err = parse_ontology(b"<rdf:RDF><owl:Class></rdf:RDF>", "bad").unwrap_err();
        assert_eq!(err.code(), "MALFORMED_XML");
        let err = parse_ontology(&[0x3c, 0xff, 0xfe], "bin").unwrap_err();
        assert_eq!(err.code(), "MALFORMED_XML");
    }

    #[test]
    fn subclasses_direct_and_transitive() {
        let o = sensor();
        let kids = o.subclasses_of(&tp("Sensor"), true).unwrap();
        assert_eq!(kids, BTreeSet::from([tp("CameraSensor"), tp("MotionDetector")]));
        assert_eq!(o.subclasses_of(&tp("Sensor"), false).unwrap(), kids);
        assert!(o.subclasses_of(&tp("Image"), true).unwrap().is_empty());
        assert!(o.subclasses_of(&tp("Image"), false).unwrap().is_empty());
        assert!(matches!(o.subclasses_of(&tp("Nonexistent"), false), Err(OntologyError::UnknownClass(_))));
    }

    #[test]
    fn transitive_closure_goes_deeper() {
        let doc = wrap(
            r##"<owl:Class rdf:about="#A"/>
<owl:Class rdf:about="#B"><rdfs:subClassOf rdf:resource="#A"/></owl:Class>
<owl:Class rdf:about="#C"><rdfs:subClassOf rdf:resource="#B"/></owl:Class>"##,
        );
        let o = parse_ontology(doc.as_bytes(), "abc").unwrap();
        let a = Iri::new("http://ex.org/o#A").unwrap();
        assert_eq!(o.subclasses_of(&a, false).unwrap().len(), 1);
        assert_eq!(o.subclasses_of(&a, true).unwrap().len(), 2);
        assert!(o.is_subclass_or_equal(&Iri::new("http://ex.org/o#C").unwrap(), &a));
    }

    #[test]
    fn resolve_names() {
        let o = sensor();
        assert_eq!(o.resolve("tp:Image").unwrap(), tp("Image"));
        assert_eq!(o.resolve(tp("Image").as_str()).unwrap(), tp("Image"));
        assert_eq!(o.resolve("zz:Image").unwrap_err().code(), "UNKNOWN_PREFIX");
        let curie = o.curie_of(&tp("Image")).unwrap();
        assert_eq!(o.resolve(&curie.to_string()).unwrap(), tp("Image"));
    }

    #[test]
    fn anonymous_classes_and_plain_properties_are_diagnosed() {
        let doc = wrap(
            r##"<owl:Class rdf:about="#A">
  <rdfs:subClassOf><owl:Restriction><owl:onProperty rdf:resource="#p"/></owl:Restriction></rdfs:subClassOf>
</owl:Class>
<rdf:Property rdf:about="#p"><rdfs:domain rdf:resource="#A"/><rdfs:range rdf:resource="#Z"/></rdf:Property>"##,
        );
        let o = parse_ontology(doc.as_bytes(), "x").unwrap();
        let codes: Vec<&str> = o.diagnostics().iter().map(|d| d.code.as_str()).collect();
        assert!(codes.contains(&"ANONYMOUS_CLASS_SKIPPED"), "{codes:?}");
        assert!(codes.contains(&"RDF_PROPERTY_AS_OBJECT"), "{codes:?}");
        assert!(codes.contains(&"DANGLING_REFERENCE"), "{codes:?}");
        let p = o.property(&Iri::new("http://ex.org/o#p").unwrap()).unwrap();
        assert_eq!(p.kind, PropertyKind::Object);
        assert!(o.class(&Iri::new("http://ex.org/o#A").unwrap()).unwrap().parents.is_empty());
    }

    #[test]
    fn labels_prefer_untagged_then_english() {
        let doc = wrap(
            r##"<owl:Class rdf:about="#A"><rdfs:label xml:lang="pt">Abc</rdfs:label><rdfs:label xml:lang="en">Aye</rdfs:label></owl:Class>"##,
        );
        let o = parse_ontology(doc.as_bytes(), "x").unwrap();
        assert_eq!(o.list_classes()[0].label.as_deref(), Some("Aye"));
    }

    #[test]
    fn namespaces_include_xml_prefixes_and_base() {
        let doc = r##"<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
  xmlns:owl="http://www.w3.org/2002/07/owl#" xml:base="http://ex.org/base">
  <owl:Class rdf:about="#A"/></rdf:RDF>"##;
        let o = parse_ontology(doc.as_bytes(), "x").unwrap();
        assert_eq!(o.namespaces().get("").unwrap().as_str(), "http://ex.org/base#");
        assert_eq!(o.namespaces().get("owl").unwrap().as_str(), OWL);
        assert_eq!(o.display_name(&Iri::new("http://ex.org/base#A").unwrap()), ":A");
    }
}
