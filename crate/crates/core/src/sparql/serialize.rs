use std::fmt::Write;

use super::SparqlQuery;
use crate::iri::NamespaceTable;
use crate::term::{quote_literal, RdfTerm};

fn term(t: &RdfTerm, prefixes: &NamespaceTable) -> String {
    match t {
        RdfTerm::Iri(iri) => prefixes.display(iri),
        RdfTerm::Variable(v) => format!("?{v}"),
        RdfTerm::Literal(l) => quote_literal(l),
    }
}

/// Canonical text form.
///
/// PREFIX lines sorted by prefix, a blank line, the SELECT line and a WHERE
/// block with one pattern per line. Consecutive patterns sharing a subject
/// are chained with ` ;` and continuation lines indented by four spaces.
pub fn serialize(query: &SparqlQuery) -> String {
    let prefixes = query.prefixes();
    let mut out = String::new();
    for (prefix, ns) in prefixes.iter() {
        let _ = writeln!(out, "PREFIX {prefix}: <{ns}>");
    }
    if !prefixes.is_empty() {
        out.push('\n');
    }

    out.push_str("SELECT");
    for v in query.select() {
        let _ = write!(out, " ?{v}");
    }
    out.push_str("\nWHERE {\n");

    let patterns = query.patterns();
    for (i, p) in patterns.iter().enumerate() {
        let continues_group = i > 0 && patterns[i - 1].subject == p.subject;
        if continues_group {
            out.push_str("    ");
        } else {
            let _ = write!(out, "  {} ", term(&p.subject, prefixes));
        }
        let _ = write!(out, "{} {}", term(&p.predicate, prefixes), term(&p.object, prefixes));
        let group_goes_on = patterns.get(i + 1).is_some_and(|next| next.subject == p.subject);
        out.push_str(if group_goes_on { " ;\n" } else { " .\n" });
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::iri::Iri;
    use crate::sparql::{translate, TriplePattern};

    #[test]
    fn experiment1_text() {
        let q = translate(&fixtures::experiment1().graph, &fixtures::sensor_ontology()).unwrap();
        assert_eq!(
            serialize(&q),
            "PREFIX tp: <http://topps.example.org/sensor#>\n\nSELECT ?image\nWHERE {\n  ?x tp:hasCameraResource ?image .\n}\n"
        );
    }

    #[test]
    fn experiment2_groups_by_subject() {
        let q = translate(&fixtures::experiment2().graph, &fixtures::sensor_ontology()).unwrap();
        let text = serialize(&q);
        let body: Vec<&str> = text.lines().skip_while(|l| *l != "WHERE {").skip(1).take_while(|l| *l != "}").collect();
        assert_eq!(
            body,
            ["  ?x tp:hasLocation ?Location ;", "    tp:hasResourceType ?Image ;", "    tp:hasResourceType ?Video .",]
        );
        assert_eq!(body.iter().filter(|l| l.ends_with(" .")).count(), 1);
    }

    #[test]
    fn no_prefixes_means_full_iris() {
        let p = TriplePattern::new(
            RdfTerm::Variable("s".into()),
            RdfTerm::Iri(Iri::new("http://ex.org/p").unwrap()),
            RdfTerm::Literal("a \"b\"".into()),
        );
        let q = SparqlQuery::new(NamespaceTable::new(), vec!["s".into()], vec![p]).unwrap();
        assert_eq!(serialize(&q), "SELECT ?s\nWHERE {\n  ?s <http://ex.org/p> \"a \\\"b\\\"\" .\n}\n");
    }
}
