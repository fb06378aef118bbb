//! Ontology-driven query building.
//!
//! Load an OWL catalog from RDF/XML, assemble a [`QueryGraph`] of variables,
//! class terms and literals joined by ontology properties, translate it to a
//! SPARQL SELECT query and run it against an in-memory [`TripleStore`].
//!
//! ```
//! use oqb_core::{fixtures, serialize, translate};
//!
//! let ontology = fixtures::sensor_ontology();
//! let doc = fixtures::experiment1();
//! let query = translate(&doc.graph, &ontology).unwrap();
//! assert!(serialize(&query).contains("?x tp:hasCameraResource ?image ."));
//! let rows = fixtures::registry().evaluate(&query);
//! assert_eq!(rows.len(), 1);
//! ```

pub mod diagnostic;
pub mod fixtures;
pub mod iri;
pub mod ontology;
pub mod persistence;
pub mod query_graph;
pub mod sparql;
pub mod store;
pub mod term;

pub use diagnostic::{has_errors, Diagnostic, Location, Severity};
pub use iri::{Curie, Iri, Name, NameError, NamespaceTable};
pub use ontology::{parse_ontology, ClassDef, Ontology, OntologyError, PropertyDef, PropertyKind};
pub use persistence::{export_plain, load_document, parse_document, save_document, PersistError, QueryDocument};
pub use query_graph::{GraphError, NodeId, NodeKind, QueryEdge, QueryGraph, QueryNode, DEFAULT_NODE_CAP};
pub use sparql::{
    parse_sparql, serialize, translate, translate_with, ParseError, SparqlQuery, TranslateError, TriplePattern,
};
pub use store::{load_ntriples, BindingTable, GroundTriple, NTriplesError, TripleStore};
pub use term::{RdfTerm, Term};
