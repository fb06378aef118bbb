//! Random generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use oqb_core::{
    GroundTriple, Iri, NamespaceTable, NodeId, NodeKind, QueryDocument, QueryGraph, RdfTerm, SparqlQuery, Term,
    TriplePattern, TripleStore,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

/// A runner with a fixed case count and a fixed seed.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub const SENSOR_CLASSES: [&str; 10] = [
    "tp:Sensor",
    "tp:CameraSensor",
    "tp:MotionDetector",
    "tp:Data",
    "tp:Image",
    "tp:Video",
    "tp:Audio",
    "tp:Location",
    "tp:Room",
    "tp:Binary",
];

pub const SENSOR_PROPERTIES: [&str; 7] = [
    "tp:hasCameraResource",
    "tp:hasResourceType",
    "tp:has_resource",
    "tp:hasLocation",
    "tp:has_location",
    "tp:has_uri",
    "tp:get_detection",
];

/// Literal text including quotes, backslashes, control and non-ASCII characters.
pub fn literal_text() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9 \"\\\\\t\n\r\u{1}éß中]{0,8}"
}

/// One step of graph construction: where the subject and object come from,
/// which property joins them and the literal text if the object is a literal.
type Step = (u8, u8, u8, usize, String);

fn build_graph(steps: &[Step], selection: u64) -> QueryGraph {
    let mut g = QueryGraph::new();
    let mut vars = 0u32;
    let mut new_var = |g: &mut QueryGraph| {
        vars += 1;
        g.add_node(NodeKind::Variable, format!("?v{vars}")).unwrap()
    };
    for (s, o, kind, prop, text) in steps {
        let subjects: Vec<NodeId> = g.nodes().filter(|n| n.kind != NodeKind::Literal).map(|n| n.id).collect();
        let subject = match s % 4 {
            0 | 1 if !subjects.is_empty() => subjects[*s as usize / 4 % subjects.len()],
            2 => g.add_node(NodeKind::ClassTerm, SENSOR_CLASSES[*s as usize % SENSOR_CLASSES.len()]).unwrap(),
            _ => new_var(&mut g),
        };
        let others: Vec<NodeId> = g.nodes().map(|n| n.id).filter(|id| *id != subject).collect();
        let object = match kind {
            0 => new_var(&mut g),
            1 => g.add_node(NodeKind::Literal, text.clone()).unwrap(),
            2 => g.add_node(NodeKind::ClassTerm, SENSOR_CLASSES[*o as usize % SENSOR_CLASSES.len()]).unwrap(),
            _ if !others.is_empty() => others[*o as usize % others.len()],
            _ => new_var(&mut g),
        };
        g.add_edge(subject, object, SENSOR_PROPERTIES[*prop]).unwrap();
    }
    let names: Vec<String> = g.nodes().filter(|n| n.kind == NodeKind::Variable).map(|n| n.payload.clone()).collect();
    let mut selected: Vec<String> =
        names.iter().enumerate().filter(|(i, _)| selection >> (i % 64) & 1 == 1).map(|(_, v)| v.clone()).collect();
    if selected.is_empty() {
        if let Some(first) = names.first() {
            selected.push(first.clone());
        }
    }
    g.set_selected(selected).unwrap();
    g
}

/// Graphs over the sensor ontology that pass strict validation whenever they
/// contain at least one variable. At most 6 edges and 12 nodes.
pub fn sensor_graph() -> impl Strategy<Value = QueryGraph> {
    let step = (any::<u8>(), any::<u8>(), 0u8..4, 0..SENSOR_PROPERTIES.len(), literal_text());
    (prop::collection::vec(step, 1..=6), any::<u64>())
        .prop_map(|(steps, selection)| build_graph(&steps, selection))
        .prop_filter("needs a variable", |g| !g.selected().is_empty())
}

fn question() -> impl Strategy<Value = String> {
    "[a-zA-Z ,?\"\\\\\n\r\té中]{0,40}"
}

fn sparql_text() -> impl Strategy<Value = Option<String>> {
    prop_oneof![
        Just(None),
        prop::collection::vec("[ -~é]{0,30}", 1..6)
            .prop_map(|lines| { Some(lines.iter().map(|l| format!("{l}\n")).collect()) }),
    ]
}

/// Documents whose graphs need not validate: node ids have gaps, caps vary
/// and names may be unknown to any ontology.
pub fn query_document() -> impl Strategy<Value = QueryDocument> {
    (
        sensor_graph(),
        prop::collection::vec(any::<u8>(), 0..3),
        question(),
        "[a-zA-Z0-9_ .\"-]{0,16}",
        sparql_text(),
        0usize..4,
        any::<bool>(),
    )
        .prop_map(|(mut graph, removals, question, source, sparql, extra_cap, odd_name)| {
            for r in removals {
                let ids: Vec<NodeId> = graph.nodes().map(|n| n.id).collect();
                if ids.len() > 1 {
                    graph.remove_node(ids[r as usize % ids.len()]).unwrap();
                }
            }
            if odd_name {
                let _ = graph.add_node(NodeKind::ClassTerm, "<http://elsewhere.example/Thing>");
            }
            graph.set_question(question);
            let nodes: Vec<_> = graph.nodes().cloned().collect();
            let cap = nodes.len().max(1) + extra_cap;
            let graph = QueryGraph::from_parts(
                cap,
                graph.next_id(),
                nodes,
                graph.edges().to_vec(),
                graph.selected().to_vec(),
                graph.question().to_string(),
            )
            .unwrap();
            QueryDocument { version: 1, ontology_source: source, graph, sparql }
        })
}

const NAMESPACES: [&str; 4] = ["http://ex.org/a#", "http://ex.org/b/", "http://xmlns.com/foaf/0.1/", "urn:x:y/"];
const PREFIXES: [&str; 4] = ["", "ex", "b", "foaf"];
const LOCALS: [&str; 8] = ["name", "a1", "_x", "knows-well", "", "1st", "has.dot", "Z"];

fn iri() -> impl Strategy<Value = Iri> {
    prop_oneof![
        (0..NAMESPACES.len(), 0..LOCALS.len())
            .prop_map(|(n, l)| Iri::new(format!("{}{}", NAMESPACES[n], LOCALS[l])).unwrap()),
        "[a-z]{1,6}".prop_map(|s| Iri::new(format!("http://other.example/{s}")).unwrap()),
    ]
}

fn variable() -> impl Strategy<Value = String> {
    "[a-zA-Z_][a-zA-Z0-9_]{0,3}"
}

fn pattern() -> impl Strategy<Value = TriplePattern> {
    let subject = prop_oneof![variable().prop_map(RdfTerm::Variable), iri().prop_map(RdfTerm::Iri)];
    let predicate = prop_oneof![1 => variable().prop_map(RdfTerm::Variable), 3 => iri().prop_map(RdfTerm::Iri)];
    let object = prop_oneof![
        variable().prop_map(RdfTerm::Variable),
        iri().prop_map(RdfTerm::Iri),
        literal_text().prop_map(RdfTerm::Literal),
    ];
    (subject, predicate, object).prop_map(|(s, p, o)| TriplePattern::new(s, p, o))
}

fn namespace_table() -> impl Strategy<Value = NamespaceTable> {
    prop::collection::btree_map(0..PREFIXES.len(), 0..NAMESPACES.len(), 0..4).prop_map(|m| {
        let mut t = NamespaceTable::new();
        for (p, n) in m {
            t.insert(PREFIXES[p], Iri::new(NAMESPACES[n]).unwrap()).unwrap();
        }
        t
    })
}

/// Arbitrary valid queries, including ones with no usable prefixes.
pub fn sparql_query() -> impl Strategy<Value = SparqlQuery> {
    (namespace_table(), prop::collection::vec(pattern(), 1..=6), any::<u64>()).prop_filter_map(
        "needs a variable",
        |(prefixes, patterns, selection)| {
            let mut vars: Vec<String> = Vec::new();
            for v in patterns.iter().flat_map(TriplePattern::variables) {
                if !vars.iter().any(|x| x == v) {
                    vars.push(v.to_string());
                }
            }
            let mut select: Vec<String> = vars
                .iter()
                .enumerate()
                .filter(|(i, _)| selection >> (i % 64) & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect();
            if select.is_empty() {
                select.push(vars.first()?.clone());
            }
            Some(SparqlQuery::new(prefixes, select, patterns).unwrap())
        },
    )
}

const E: &str = "http://ex.org/e#";

fn e(local: &str) -> Iri {
    Iri::new(format!("{E}{local}")).unwrap()
}

/// A small closed vocabulary so random stores and queries overlap often.
fn store_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => (0..4u8).prop_map(|i| Term::Iri(e(&format!("n{i}")))),
        1 => prop::sample::select(vec!["true", "42", "x y"]).prop_map(Term::literal),
    ]
}

pub fn triple_store() -> impl Strategy<Value = TripleStore> {
    let triple = ((0..4u8), (0..3u8), store_term())
        .prop_map(|(s, p, o)| GroundTriple::new(e(&format!("n{s}")), e(&format!("p{p}")), o));
    prop::collection::vec(triple, 0..=50).prop_map(|ts| ts.into_iter().collect())
}

/// Queries over the same vocabulary with at most 6 patterns and 4 variables.
pub fn store_query() -> impl Strategy<Value = SparqlQuery> {
    let var = (0..4u8).prop_map(|i| RdfTerm::Variable(format!("v{i}")));
    let node = prop_oneof![2 => var.clone(), 1 => (0..5u8).prop_map(|i| RdfTerm::Iri(e(&format!("n{i}"))))];
    let predicate = prop_oneof![1 => var.clone(), 3 => (0..3u8).prop_map(|i| RdfTerm::Iri(e(&format!("p{i}"))))];
    let object = prop_oneof![3 => node.clone(), 1 => store_term().prop_map(RdfTerm::from)];
    let pattern = (node, predicate, object).prop_map(|(s, p, o)| TriplePattern::new(s, p, o));
    (prop::collection::vec(pattern, 1..=6), any::<u64>()).prop_filter_map(
        "needs a variable",
        |(patterns, selection)| {
            let vars: BTreeSet<String> =
                patterns.iter().flat_map(TriplePattern::variables).map(str::to_string).collect();
            let mut select: Vec<String> =
                vars.iter().enumerate().filter(|(i, _)| selection >> i & 1 == 1).map(|(_, v)| v.clone()).collect();
            if select.is_empty() {
                select.push(vars.iter().next()?.clone());
            }
            Some(SparqlQuery::new(NamespaceTable::new(), select, patterns).unwrap())
        },
    )
}

/// Reference evaluation: every assignment of store terms to the query's
/// variables, kept when each instantiated pattern is a stored triple.
pub fn brute_force(store: &TripleStore, query: &SparqlQuery) -> BTreeSet<Vec<Term>> {
    let domain: Vec<Term> = store
        .iter()
        .flat_map(|t| [Term::Iri(t.subject.clone()), Term::Iri(t.predicate.clone()), t.object.clone()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let vars: Vec<&str> = query.variables();
    let mut rows = BTreeSet::new();
    let mut counter = vec![0usize; vars.len()];
    if domain.is_empty() {
        return rows;
    }
    loop {
        let binding: BTreeMap<&str, &Term> = vars.iter().copied().zip(counter.iter().map(|&i| &domain[i])).collect();
        let ground = |t: &RdfTerm| match t {
            RdfTerm::Variable(v) => binding[v.as_str()].clone(),
            RdfTerm::Iri(i) => Term::Iri(i.clone()),
            RdfTerm::Literal(l) => Term::Literal(l.clone()),
        };
        let all_match = query.patterns().iter().all(|p| {
            let (s, pr, o) = (ground(&p.subject), ground(&p.predicate), ground(&p.object));
            store
                .iter()
                .any(|t| s == Term::Iri(t.subject.clone()) && pr == Term::Iri(t.predicate.clone()) && o == t.object)
        });
        if all_match {
            rows.insert(query.select().iter().map(|v| binding[v.as_str()].clone()).collect());
        }
        // Odometer increment over the domain.
        let mut i = 0;
        loop {
            if i == counter.len() {
                return rows;
            }
            counter[i] += 1;
            if counter[i] < domain.len() {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}
