//! Request handlers and the JSON shapes they exchange. Field names are
//! documented in `docs/API.md`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, MutexGuard};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::Json;
use oqb_core::{
    has_errors, parse_document, parse_ontology, serialize, translate, Diagnostic, NodeId, NodeKind, Ontology,
    PropertyKind, QueryDocument, QueryEdge, QueryGraph, QueryNode, Term,
};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;
use crate::session::Session;
use crate::AppState;

type Shared = State<Arc<AppState>>;

fn lock(session: &Mutex<Session>) -> MutexGuard<'_, Session> {
    // A panic mid-request cannot leave a half-applied mutation behind, since
    // every graph operation is all-or-nothing.
    session.lock().unwrap_or_else(|p| p.into_inner())
}

fn parse_json<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(e.to_string()))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionCreated {
    pub session_id: String,
    pub node_cap: usize,
}

pub async fn create_session(State(state): Shared) -> impl IntoResponse {
    let graph = QueryGraph::with_cap(state.config.node_cap).expect("node cap validated at startup");
    let session_id = state.sessions.create(graph);
    tracing::debug!(%session_id, "session created");
    (StatusCode::CREATED, Json(SessionCreated { session_id, node_cap: state.config.node_cap }))
}

pub async fn delete_session(State(state): Shared, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    state.sessions.remove(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OntologySummary {
    pub source: String,
    pub class_count: usize,
    pub property_count: usize,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Deserialize)]
pub struct UploadParams {
    name: Option<String>,
}

pub async fn upload_ontology(
    State(state): Shared,
    Path(id): Path<String>,
    Query(params): Query<UploadParams>,
    body: Bytes,
) -> Result<Json<OntologySummary>, ApiError> {
    let session = state.sessions.get(&id)?;
    let name = params.name.unwrap_or_else(|| "uploaded.owl".into());
    let ontology = parse_ontology(&body, &name)?;
    let summary = OntologySummary {
        source: name,
        class_count: ontology.class_count(),
        property_count: ontology.property_count(),
        diagnostics: ontology.diagnostics().to_vec(),
    };
    lock(&session).ontology = Some(Arc::new(ontology));
    Ok(Json(summary))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassView {
    pub iri: String,
    pub name: String,
    pub label: Option<String>,
    pub parents: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PropertyView {
    pub iri: String,
    pub name: String,
    pub kind: PropertyKind,
    pub label: Option<String>,
    pub domains: Vec<String>,
    pub ranges: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub source: String,
    pub namespaces: BTreeMap<String, String>,
    pub classes: Vec<ClassView>,
    pub properties: Vec<PropertyView>,
}

fn catalog_of(o: &Ontology) -> Catalog {
    let names = |iris: &std::collections::BTreeSet<oqb_core::Iri>| iris.iter().map(|i| o.display_name(i)).collect();
    Catalog {
        source: o.source_name().to_string(),
        namespaces: o.namespaces().iter().map(|(p, ns)| (p.to_string(), ns.to_string())).collect(),
        classes: o
            .list_classes()
            .into_iter()
            .map(|c| ClassView {
                iri: c.iri.to_string(),
                name: o.display_name(&c.iri),
                label: c.label.clone(),
                parents: names(&c.parents),
            })
            .collect(),
        properties: o
            .list_properties()
            .into_iter()
            .map(|p| PropertyView {
                iri: p.iri.to_string(),
                name: o.display_name(&p.iri),
                kind: p.kind,
                label: p.label.clone(),
                domains: names(&p.domains),
                ranges: names(&p.ranges),
            })
            .collect(),
    }
}

pub async fn get_catalog(State(state): Shared, Path(id): Path<String>) -> Result<Json<Catalog>, ApiError> {
    let session = state.sessions.get(&id)?;
    let ontology = lock(&session).ontology.clone().ok_or(ApiError::OntologyMissing)?;
    Ok(Json(catalog_of(&ontology)))
}

/// The session graph plus what it currently means: diagnostics against the
/// bound ontology and, when there are no errors, the SPARQL text.
#[derive(Debug, Serialize, Deserialize)]
pub struct GraphView {
    pub nodes: Vec<QueryNode>,
    pub edges: Vec<QueryEdge>,
    pub selected: Vec<String>,
    pub question: String,
    pub node_cap: usize,
    pub diagnostics: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sparql: Option<String>,
    /// Id of the node created by an `add_node` operation.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub added_node: Option<NodeId>,
}

fn view(session: &Session) -> GraphView {
    let g = &session.graph;
    let (diagnostics, sparql) = match &session.ontology {
        Some(o) => {
            let diagnostics = g.validate(o, true);
            let sparql = if has_errors(&diagnostics) { None } else { translate(g, o).ok().map(|q| serialize(&q)) };
            (diagnostics, sparql)
        }
        None => (Vec::new(), None),
    };
    GraphView {
        nodes: g.nodes().cloned().collect(),
        edges: g.edges().to_vec(),
        selected: g.selected().to_vec(),
        question: g.question().to_string(),
        node_cap: g.node_cap(),
        diagnostics,
        sparql,
        added_node: None,
    }
}

pub async fn get_graph(State(state): Shared, Path(id): Path<String>) -> Result<Json<GraphView>, ApiError> {
    let session = state.sessions.get(&id)?;
    let view = view(&lock(&session));
    Ok(Json(view))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum GraphOp {
    AddNode { kind: NodeKind, payload: String },
    AddEdge { from: NodeId, to: NodeId, predicate: String },
    RemoveNode { id: NodeId },
    RemoveEdge { index: usize },
    Clear,
    SetSelected { variables: Vec<String> },
    SetQuestion { question: String },
}

pub async fn mutate_graph(
    State(state): Shared,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<GraphView>, ApiError> {
    let op: GraphOp = parse_json(&body)?;
    let session = state.sessions.get(&id)?;
    let mut session = lock(&session);
    let g = &mut session.graph;
    let mut added = None;
    match op {
        GraphOp::AddNode { kind, payload } => added = Some(g.add_node(kind, payload)?),
        GraphOp::AddEdge { from, to, predicate } => drop(g.add_edge(from, to, predicate)?),
        GraphOp::RemoveNode { id } => drop(g.remove_node(id)?),
        GraphOp::RemoveEdge { index } => drop(g.remove_edge(index)?),
        GraphOp::Clear => g.clear(),
        GraphOp::SetSelected { variables } => g.set_selected(variables)?,
        GraphOp::SetQuestion { question } => g.set_question(question),
    }
    let mut view = view(&session);
    view.added_node = added;
    Ok(Json(view))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SparqlView {
    pub sparql: String,
    pub diagnostics: Vec<Diagnostic>,
}

fn translated(session: &Session) -> Result<(oqb_core::SparqlQuery, Vec<Diagnostic>), ApiError> {
    let o = session.ontology.as_ref().ok_or(ApiError::OntologyMissing)?;
    let query = translate(&session.graph, o)?;
    Ok((query, session.graph.validate(o, true)))
}

pub async fn get_sparql(State(state): Shared, Path(id): Path<String>) -> Result<Json<SparqlView>, ApiError> {
    let session = state.sessions.get(&id)?;
    let (query, diagnostics) = translated(&lock(&session))?;
    Ok(Json(SparqlView { sparql: serialize(&query), diagnostics }))
}

/// One bound value in the SPARQL JSON results layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundValue {
    #[serde(rename = "type")]
    pub kind: String,
    pub value: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Head {
    pub vars: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Bindings {
    pub bindings: Vec<BTreeMap<String, BoundValue>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ResultSet {
    pub head: Head,
    pub results: Bindings,
    pub sparql: String,
}

pub async fn execute(State(state): Shared, Path(id): Path<String>) -> Result<Json<ResultSet>, ApiError> {
    let session = state.sessions.get(&id)?;
    let (query, _) = translated(&lock(&session))?;
    let table = state.registry.evaluate(&query);
    let bindings = table
        .rows()
        .iter()
        .map(|row| {
            table
                .vars()
                .iter()
                .zip(row)
                .map(|(var, term)| {
                    let value = match term {
                        Term::Iri(iri) => BoundValue { kind: "uri".into(), value: iri.to_string() },
                        Term::Literal(text) => BoundValue { kind: "literal".into(), value: text.clone() },
                    };
                    (var.clone(), value)
                })
                .collect()
        })
        .collect();
    Ok(Json(ResultSet {
        head: Head { vars: table.vars().to_vec() },
        results: Bindings { bindings },
        sparql: serialize(&query),
    }))
}

fn document_of(session: &Session) -> Result<QueryDocument, ApiError> {
    if session.graph.is_empty() {
        return Err(ApiError::EmptyGraph);
    }
    Ok(match &session.ontology {
        Some(o) => QueryDocument::new(session.graph.clone(), o),
        None => QueryDocument {
            version: oqb_core::persistence::FORMAT_VERSION,
            ontology_source: String::new(),
            graph: session.graph.clone(),
            sparql: None,
        },
    })
}

const TEXT: [(header::HeaderName, &str); 1] = [(header::CONTENT_TYPE, "text/plain; charset=utf-8")];

pub async fn save_document(State(state): Shared, Path(id): Path<String>) -> Result<impl IntoResponse, ApiError> {
    let session = state.sessions.get(&id)?;
    let doc = document_of(&lock(&session))?;
    Ok((TEXT, oqb_core::persistence::to_canonical_string(&doc)))
}

pub async fn export(State(state): Shared, Path(id): Path<String>) -> Result<impl IntoResponse, ApiError> {
    let session = state.sessions.get(&id)?;
    let doc = document_of(&lock(&session))?;
    let mut out = Vec::new();
    oqb_core::export_plain(&doc, &mut out)?;
    Ok((TEXT, out))
}

pub async fn load_document(
    State(state): Shared,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<GraphView>, ApiError> {
    let text = std::str::from_utf8(&body).map_err(|_| ApiError::BadRequest("document is not UTF-8".into()))?;
    let doc = parse_document(text)?;
    let session = state.sessions.get(&id)?;
    let mut session = lock(&session);
    // The loaded graph adopts this session's node cap.
    let g = doc.graph.clone();
    let graph = QueryGraph::from_parts(
        session.graph.node_cap(),
        g.next_id(),
        g.nodes().cloned().collect(),
        g.edges().to_vec(),
        g.selected().to_vec(),
        g.question().to_string(),
    )?;
    session.graph = graph;
    let mut view = view(&session);
    if let Some(warning) = session.ontology.as_ref().and_then(|o| doc.check_sparql(o)) {
        view.diagnostics.push(warning);
    }
    Ok(Json(view))
}
