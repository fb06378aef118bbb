//! The bundled sensor corpus: ontology, registry data, the three experiment
//! documents and their golden outputs.
//!
//! The files live in `crates/core/fixtures/` and are embedded at compile time.
//! [`verify`] re-checks the corpus invariants against a directory on disk.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::diagnostic::has_errors;
use crate::ontology::{parse_ontology, Ontology};
use crate::persistence::{parse_document, QueryDocument};
use crate::sparql::{parse_sparql, serialize, translate};
use crate::store::{load_ntriples, TripleStore};

pub const SENSOR_OWL: &str = include_str!("../fixtures/sensor.owl");
pub const REGISTRY_NT: &str = include_str!("../fixtures/registry.nt");
pub const EXPERIMENT1_OQB: &str = include_str!("../fixtures/experiment1.oqb");
pub const EXPERIMENT2_OQB: &str = include_str!("../fixtures/experiment2.oqb");
pub const ALARM_OQB: &str = include_str!("../fixtures/alarm.oqb");
pub const GOLDEN_EXPERIMENT1_RQ: &str = include_str!("../fixtures/golden/experiment1.rq");
pub const GOLDEN_EXPERIMENT2_RQ: &str = include_str!("../fixtures/golden/experiment2.rq");
pub const GOLDEN_ALARM_RQ: &str = include_str!("../fixtures/golden/alarm.rq");
pub const GOLDEN_EXPERIMENT1_TSV: &str = include_str!("../fixtures/golden/experiment1.tsv");
pub const GOLDEN_EXPERIMENT2_TSV: &str = include_str!("../fixtures/golden/experiment2.tsv");
pub const GOLDEN_ALARM_TSV: &str = include_str!("../fixtures/golden/alarm.tsv");

/// Experiment names, in the order the corpus lists them.
pub const EXPERIMENTS: [&str; 3] = ["experiment1", "experiment2", "alarm"];

pub fn sensor_ontology() -> Ontology {
    parse_ontology(SENSOR_OWL.as_bytes(), "sensor.owl").expect("bundled ontology parses")
}

pub fn registry() -> TripleStore {
    load_ntriples(REGISTRY_NT.as_bytes()).expect("bundled registry parses")
}

pub fn experiment1() -> QueryDocument {
    parse_document(EXPERIMENT1_OQB).expect("bundled document parses")
}

pub fn experiment2() -> QueryDocument {
    parse_document(EXPERIMENT2_OQB).expect("bundled document parses")
}

pub fn alarm() -> QueryDocument {
    parse_document(ALARM_OQB).expect("bundled document parses")
}

/// Directory holding the fixture files in a source checkout.
pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// One broken corpus invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub file: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.file, self.message)
    }
}

/// Checks the corpus in `dir`: the ontology loads without errors, every
/// document validates strictly and translates to its golden `.rq`, every
/// golden `.rq` parses, and execution reproduces every golden `.tsv`.
pub fn verify(dir: &Path) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut fail = |file: &str, message: String| out.push(Violation { file: file.to_string(), message });
    let read = |name: &str| fs::read_to_string(dir.join(name)).map_err(|e| format!("cannot read: {e}"));

    let ontology =
        match read("sensor.owl").and_then(|t| parse_ontology(t.as_bytes(), "sensor.owl").map_err(|e| e.to_string())) {
            Ok(o) => o,
            Err(e) => {
                fail("sensor.owl", e);
                return out;
            }
        };
    if has_errors(ontology.diagnostics()) {
        fail("sensor.owl", "error diagnostics while loading".into());
    }
    let store = match read("registry.nt").and_then(|t| load_ntriples(t.as_bytes()).map_err(|e| e.to_string())) {
        Ok(s) => s,
        Err(e) => {
            fail("registry.nt", e);
            return out;
        }
    };

    for name in EXPERIMENTS {
        let oqb = format!("{name}.oqb");
        let rq = format!("golden/{name}.rq");
        let tsv = format!("golden/{name}.tsv");

        match read(&rq).map(|t| parse_sparql(&t).map(|_| ()).map_err(|e| e.to_string())) {
            Ok(Ok(())) => {}
            Ok(Err(e)) | Err(e) => fail(&rq, e),
        }

        let doc = match read(&oqb).and_then(|t| parse_document(&t).map_err(|e| e.to_string())) {
            Ok(d) => d,
            Err(e) => {
                fail(&oqb, e);
                continue;
            }
        };
        let errors: Vec<_> = doc.graph.validate(&ontology, true).into_iter().filter(|d| d.is_error()).collect();
        if !errors.is_empty() {
            let codes: Vec<_> = errors.iter().map(|d| d.code.as_str()).collect();
            fail(&oqb, format!("strict validation failed: {}", codes.join(", ")));
            continue;
        }
        let Ok(query) = translate(&doc.graph, &ontology) else {
            fail(&oqb, "translation failed".into());
            continue;
        };
        let text = serialize(&query);
        if doc.sparql.as_deref() != Some(text.as_str()) {
            fail(&oqb, "stored SPARQL differs from the translation".into());
        }
        match read(&rq) {
            Ok(golden) if golden == text => {}
            Ok(_) => fail(&rq, format!("differs from the translation of {oqb}")),
            Err(_) => {}
        }
        let table = store.evaluate(&query).to_tsv(query.prefixes());
        match read(&tsv) {
            Ok(golden) if golden == table => {}
            Ok(_) => fail(&tsv, format!("differs from executing {oqb}")),
            Err(e) => fail(&tsv, e),
        }
    }
    out
}
