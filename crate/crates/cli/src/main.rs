//! `oqb`: inspect ontologies, translate and run saved queries, and host the
//! query-building service.
//!
//! Exit status is 0 on success, 1 when an input is rejected (parse or
//! validation failure) and 2 for usage errors and unreadable files.

use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use oqb_core::{
    has_errors, load_ntriples, parse_document, parse_ontology, parse_sparql, serialize, translate, Diagnostic,
    Ontology, QueryDocument, SparqlQuery, TripleStore, DEFAULT_NODE_CAP,
};
use oqb_service::{AppState, Config};

#[derive(Debug, Parser)]
#[command(name = "oqb", version, about = "Ontology-driven SPARQL query builder")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the classes and properties of an OWL (RDF/XML) ontology.
    Inspect(InspectArgs),
    /// Translate a saved query document to SPARQL.
    Translate(TranslateArgs),
    /// Run a query document or a `.rq` file against an N-Triples registry.
    Run(RunArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct InspectArgs {
    ontology: PathBuf,
    #[arg(long, group = "view")]
    classes: bool,
    #[arg(long, group = "view")]
    properties: bool,
    /// Indented subclass hierarchy.
    #[arg(long, group = "view")]
    tree: bool,
}

#[derive(Debug, Args)]
struct TranslateArgs {
    document: PathBuf,
    /// Defaults to the ontology named in the document, next to it.
    #[arg(long)]
    ontology: Option<PathBuf>,
    /// Write here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// A `.oqb` query document or a `.rq` SPARQL file.
    query: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Only used for query documents.
    #[arg(long)]
    ontology: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, env = "OQB_HOST", default_value = "127.0.0.1")]
    host: String,
    #[arg(long, env = "OQB_PORT", default_value_t = 8080)]
    port: u16,
    /// N-Triples registry queried by `execute`. Empty when omitted.
    #[arg(long, env = "OQB_REGISTRY")]
    registry: Option<PathBuf>,
    /// Static files served under `/`.
    #[arg(long, env = "OQB_ASSETS")]
    assets: Option<PathBuf>,
    /// Idle seconds before a session is dropped.
    #[arg(long, env = "OQB_SESSION_TTL", default_value_t = 3600)]
    session_ttl: u64,
    #[arg(long, env = "OQB_NODE_CAP", default_value_t = DEFAULT_NODE_CAP)]
    node_cap: usize,
}

#[derive(Debug)]
enum Failure {
    /// Bad invocation or unreadable input; exit 2.
    Usage(String),
    /// Input was read but rejected; exit 1.
    Rejected(String),
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn report(diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        eprintln!("{d}");
    }
}

fn load_ontology(path: &Path) -> Result<Ontology, Failure> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    parse_ontology(&read(path)?, &name).map_err(|e| Failure::Rejected(format!("{}: {} {e}", path.display(), e.code())))
}

fn load_query_document(path: &Path) -> Result<QueryDocument, Failure> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes).map_err(|_| Failure::Rejected(format!("{}: not UTF-8", path.display())))?;
    parse_document(&text).map_err(|e| Failure::Rejected(format!("{}: {} {e}", path.display(), e.code())))
}

fn document_ontology(doc_path: &Path, doc: &QueryDocument, given: Option<&Path>) -> Result<Ontology, Failure> {
    match given {
        Some(path) => load_ontology(path),
        None if doc.ontology_source.is_empty() => {
            Err(Failure::Usage("the document names no ontology; pass --ontology".into()))
        }
        None => load_ontology(&doc_path.parent().unwrap_or(Path::new(".")).join(&doc.ontology_source)),
    }
}

/// Validates and translates, printing diagnostics to stderr.
fn translate_document(doc: &QueryDocument, ontology: &Ontology) -> Result<SparqlQuery, Failure> {
    let diagnostics = doc.graph.validate(ontology, true);
    report(&diagnostics);
    if has_errors(&diagnostics) {
        return Err(Failure::Rejected("query graph failed validation".into()));
    }
    if let Some(w) = doc.check_sparql(ontology) {
        report(&[w]);
    }
    translate(&doc.graph, ontology).map_err(|e| Failure::Rejected(e.to_string()))
}

fn inspect(args: InspectArgs) -> CmdResult {
    let o = load_ontology(&args.ontology)?;
    report(o.diagnostics());
    let mut out = String::new();
    let all = !(args.classes || args.properties || args.tree);
    if args.classes || all {
        for c in o.list_classes() {
            out.push_str(&o.display_name(&c.iri));
            if let Some(label) = &c.label {
                out.push_str(&format!("\t{label}"));
            }
            out.push('\n');
        }
    }
    if args.properties || all {
        for p in o.list_properties() {
            let names = |set: &std::collections::BTreeSet<oqb_core::Iri>| {
                if set.is_empty() {
                    "-".to_string()
                } else {
                    set.iter().map(|i| o.display_name(i)).collect::<Vec<_>>().join(",")
                }
            };
            let kind = match p.kind {
                oqb_core::PropertyKind::Object => "object",
                oqb_core::PropertyKind::Datatype => "datatype",
            };
            out.push_str(&format!(
                "{}\t{kind}\t{} -> {}\n",
                o.display_name(&p.iri),
                names(&p.domains),
                names(&p.ranges)
            ));
        }
    }
    if args.tree {
        fn walk(o: &Ontology, iri: &oqb_core::Iri, depth: usize, out: &mut String) {
            out.push_str(&format!("{}{}\n", "  ".repeat(depth), o.display_name(iri)));
            for child in o.subclasses_of(iri, false).unwrap_or_default() {
                walk(o, &child, depth + 1, out);
            }
        }
        for root in o.root_classes() {
            walk(&o, &root.iri, 0, &mut out);
        }
    }
    print!("{out}");
    Ok(())
}

fn translate_cmd(args: TranslateArgs) -> CmdResult {
    let doc = load_query_document(&args.document)?;
    let ontology = document_ontology(&args.document, &doc, args.ontology.as_deref())?;
    let text = serialize(&translate_document(&doc, &ontology)?);
    match args.output {
        Some(path) => {
            fs::write(&path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: RunArgs) -> CmdResult {
    let query = if args.query.extension().is_some_and(|e| e == "rq") {
        let bytes = read(&args.query)?;
        let text = String::from_utf8(bytes).map_err(|_| Failure::Rejected("query is not UTF-8".into()))?;
        parse_sparql(&text).map_err(|e| Failure::Rejected(format!("{}: {} {e}", args.query.display(), e.code())))?
    } else {
        let doc = load_query_document(&args.query)?;
        let ontology = document_ontology(&args.query, &doc, args.ontology.as_deref())?;
        translate_document(&doc, &ontology)?
    };
    let store = load_store(&args.data)?;
    print!("{}", store.evaluate(&query).to_tsv(query.prefixes()));
    Ok(())
}

fn load_store(path: &Path) -> Result<TripleStore, Failure> {
    load_ntriples(&read(path)?).map_err(|e| Failure::Rejected(format!("{}: {e}", path.display())))
}

fn serve(args: ServeArgs) -> CmdResult {
    // Startup failures before binding, including a missing registry, are
    // rejected inputs rather than usage errors.
    let registry = match &args.registry {
        Some(path) => load_store(path).map_err(|f| match f {
            Failure::Usage(m) | Failure::Rejected(m) => Failure::Rejected(m),
        })?,
        None => TripleStore::new(),
    };
    let config = Config {
        node_cap: args.node_cap,
        session_ttl: Duration::from_secs(args.session_ttl),
        assets: args.assets.clone(),
    };
    let state = AppState::new(config, registry).map_err(|e| Failure::Usage(e.to_string()))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Rejected(e.to_string()))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind((args.host.as_str(), args.port))
            .await
            .map_err(|e| Failure::Rejected(format!("cannot bind {}:{}: {e}", args.host, args.port)))?;
        let addr: SocketAddr = listener.local_addr().map_err(|e| Failure::Rejected(e.to_string()))?;
        println!("listening on http://{addr}");
        let _ = std::io::stdout().flush();
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        oqb_service::serve(listener, Arc::new(state), shutdown).await.map_err(|e| Failure::Rejected(e.to_string()))
    })
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_env("OQB_LOG"))
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Inspect(a) => inspect(a),
        Command::Translate(a) => translate_cmd(a),
        Command::Run(a) => run(a),
        Command::Serve(a) => serve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
