//! Parser for the SELECT / basic-graph-pattern subset.
//!
//! Accepts PREFIX declarations, `SELECT` with an explicit variable list, and a
//! WHERE group of triples using IRIs, prefixed names, `?`/`$` variables,
//! `a`, and plain string literals in double or single quotes. Triples may be
//! chained with `;` and `,`. Anything else SPARQL has is reported as an
//! unsupported construct.

use thiserror::Error;

use super::{is_variable_name, SparqlQuery, TriplePattern};
use crate::iri::{Curie, Iri, NamespaceTable};
use crate::ontology::vocab::RDF_TYPE;
use crate::term::RdfTerm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    SyntaxError { line: u32, column: u32, message: String },
    #[error("unsupported construct {construct} at {line}:{column}")]
    UnsupportedConstruct { construct: String, line: u32, column: u32 },
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::SyntaxError { .. } => "SYNTAX_ERROR",
            ParseError::UnsupportedConstruct { .. } => "UNSUPPORTED_CONSTRUCT",
        }
    }
}

const UNSUPPORTED_KEYWORDS: &[&str] = &[
    "OPTIONAL",
    "FILTER",
    "UNION",
    "MINUS",
    "GRAPH",
    "SERVICE",
    "BIND",
    "VALUES",
    "ORDER",
    "LIMIT",
    "OFFSET",
    "GROUP",
    "HAVING",
    "DISTINCT",
    "REDUCED",
    "CONSTRUCT",
    "ASK",
    "DESCRIBE",
    "FROM",
    "BASE",
    "INSERT",
    "DELETE",
    "LOAD",
    "CLEAR",
    "DROP",
    "CREATE",
    "WITH",
    "EXISTS",
    "NOT",
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Iri(String),
    PName { prefix: String, local: String },
    Var(String),
    Str(String),
    Word(String),
    Punct(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    column: u32,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, column: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn syntax(&self, line: u32, column: u32, message: impl Into<String>) -> ParseError {
        ParseError::SyntaxError { line, column, message: message.into() }
    }

    fn unsupported(line: u32, column: u32, construct: &str) -> ParseError {
        ParseError::UnsupportedConstruct { construct: construct.to_string(), line, column }
    }

    fn take_name(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if !is_name_char(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn tokens(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '#' {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                } else {
                    break;
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(&c) = self.chars.peek() else {
                out.push(Token { tok: Tok::Eof, line, column });
                return Ok(out);
            };
            let tok = match c {
                '<' => {
                    self.bump();
                    let mut iri = String::new();
                    loop {
                        match self.bump() {
                            Some('>') => break,
                            Some(c) if c.is_whitespace() => {
                                return Err(self.syntax(line, column, "whitespace inside IRI"))
                            }
                            Some(c) => iri.push(c),
                            None => return Err(self.syntax(line, column, "unterminated IRI")),
                        }
                    }
                    Tok::Iri(iri)
                }
                '?' | '$' => {
                    self.bump();
                    let name = self.take_name();
                    if !is_variable_name(&name) {
                        return Err(self.syntax(line, column, format!("invalid variable name `{c}{name}`")));
                    }
                    Tok::Var(name)
                }
                '"' | '\'' => {
                    self.bump();
                    let value = self.string_body(c, line, column)?;
                    match self.chars.peek() {
                        Some('@') => return Err(Self::unsupported(self.line, self.column, "language tag")),
                        Some('^') => return Err(Self::unsupported(self.line, self.column, "typed literal")),
                        _ => {}
                    }
                    Tok::Str(value)
                }
                '{' | '}' | '.' | ';' | ',' | '(' | ')' => {
                    self.bump();
                    Tok::Punct(c)
                }
                '*' => {
                    self.bump();
                    Tok::Punct('*')
                }
                '[' => return Err(Self::unsupported(line, column, "blank node")),
                '^' | '/' | '|' | '+' => return Err(Self::unsupported(line, column, "property path")),
                ':' => {
                    self.bump();
                    Tok::PName { prefix: String::new(), local: self.take_name() }
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let word = self.take_name();
                    if self.chars.peek() == Some(&':') {
                        self.bump();
                        if word == "_" {
                            return Err(Self::unsupported(line, column, "blank node"));
                        }
                        Tok::PName { prefix: word, local: self.take_name() }
                    } else {
                        Tok::Word(word)
                    }
                }
                other => return Err(self.syntax(line, column, format!("unexpected character `{other}`"))),
            };
            out.push(Token { tok, line, column });
        }
    }

    fn string_body(&mut self, quote: char, line: u32, column: u32) -> Result<String, ParseError> {
        let mut value = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(self.syntax(line, column, "unterminated string literal")),
                Some(c) if c == quote => return Ok(value),
                Some('\\') => {
                    let escaped = match self.bump() {
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some(u @ ('u' | 'U')) => {
                            let len = if u == 'u' { 4 } else { 8 };
                            let hex: String = (0..len).filter_map(|_| self.bump()).collect();
                            u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32).ok_or_else(|| {
                                self.syntax(self.line, self.column, format!("bad unicode escape `\\{u}{hex}`"))
                            })?
                        }
                        other => {
                            return Err(self.syntax(
                                self.line,
                                self.column,
                                format!("bad escape `\\{}`", other.map(String::from).unwrap_or_default()),
                            ))
                        }
                    };
                    value.push(escaped);
                }
                Some(c) => value.push(c),
            }
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: NamespaceTable,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, message: impl Into<String>) -> ParseError {
        ParseError::SyntaxError { line: t.line, column: t.column, message: message.into() }
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Iri(i) => format!("<{i}>"),
            Tok::PName { prefix, local } => format!("{prefix}:{local}"),
            Tok::Var(v) => format!("?{v}"),
            Tok::Str(_) => "string literal".into(),
            Tok::Word(w) => format!("`{w}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn unexpected(t: &Token, expected: &str) -> ParseError {
        if let Tok::Word(w) = &t.tok {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED_KEYWORDS.contains(&upper.as_str()) {
                return ParseError::UnsupportedConstruct { construct: upper, line: t.line, column: t.column };
            }
        }
        Self::error_at(t, format!("expected {expected}, found {}", Self::describe(&t.tok)))
    }

    fn is_keyword(t: &Token, kw: &str) -> bool {
        matches!(&t.tok, Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }

    fn expect_punct(&mut self, c: char) -> Result<Token, ParseError> {
        let t = self.next();
        if t.tok == Tok::Punct(c) {
            Ok(t)
        } else {
            Err(Self::unexpected(&t, &format!("`{c}`")))
        }
    }

    fn query(&mut self) -> Result<SparqlQuery, ParseError> {
        while Self::is_keyword(self.peek(), "PREFIX") {
            self.next();
            let name = self.next();
            let Tok::PName { prefix, local } = &name.tok else {
                return Err(Self::unexpected(&name, "a prefix name like `ex:`"));
            };
            if !local.is_empty() {
                return Err(Self::error_at(&name, "prefix declaration must end with `:`"));
            }
            let iri_tok = self.next();
            let Tok::Iri(ns) = &iri_tok.tok else {
                return Err(Self::unexpected(&iri_tok, "a namespace IRI"));
            };
            let ns = Iri::new(ns).map_err(|e| Self::error_at(&iri_tok, e.to_string()))?;
            self.prefixes.insert(prefix.clone(), ns).map_err(|e| Self::error_at(&iri_tok, e.to_string()))?;
        }

        let select_tok = self.next();
        if !Self::is_keyword(&select_tok, "SELECT") {
            return Err(Self::unexpected(&select_tok, "PREFIX or SELECT"));
        }
        let mut select = Vec::new();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Var(v) => {
                    select.push(v.clone());
                    self.next();
                }
                Tok::Punct('*') => {
                    return Err(ParseError::UnsupportedConstruct {
                        construct: "SELECT *".into(),
                        line: t.line,
                        column: t.column,
                    })
                }
                _ if select.is_empty() => return Err(Self::unexpected(&t, "a variable")),
                _ => break,
            }
        }

        if Self::is_keyword(self.peek(), "WHERE") {
            self.next();
        }
        let open = self.expect_punct('{')?;
        let patterns = self.triples()?;
        self.expect_punct('}')?;
        let end = self.next();
        if end.tok != Tok::Eof {
            return Err(Self::unexpected(&end, "end of query"));
        }

        SparqlQuery::new(self.prefixes.clone(), select, patterns).map_err(|e| match e {
            super::QueryError::UnboundSelect(_) | super::QueryError::DuplicateSelect(_) => {
                Self::error_at(&select_tok, e.to_string())
            }
            _ => Self::error_at(&open, e.to_string()),
        })
    }

    fn triples(&mut self) -> Result<Vec<TriplePattern>, ParseError> {
        let mut out = Vec::new();
        loop {
            if self.peek().tok == Tok::Punct('}') {
                return Ok(out);
            }
            if self.peek().tok == Tok::Punct('{') {
                let t = self.peek();
                return Err(ParseError::UnsupportedConstruct {
                    construct: "nested group".into(),
                    line: t.line,
                    column: t.column,
                });
            }
            let subject = self.subject()?;
            loop {
                let predicate = self.verb()?;
                loop {
                    let object = self.object()?;
                    out.push(TriplePattern::new(subject.clone(), predicate.clone(), object));
                    if self.peek().tok == Tok::Punct(',') {
                        self.next();
                    } else {
                        break;
                    }
                }
                // `;` may repeat and may dangle before `.` or `}`.
                let mut saw_semicolon = false;
                while self.peek().tok == Tok::Punct(';') {
                    self.next();
                    saw_semicolon = true;
                }
                let t = self.peek();
                if !saw_semicolon || matches!(t.tok, Tok::Punct('.') | Tok::Punct('}')) {
                    break;
                }
            }
            match self.peek().tok {
                Tok::Punct('.') => {
                    self.next();
                }
                Tok::Punct('}') => {}
                _ => {
                    let t = self.peek().clone();
                    return Err(Self::unexpected(&t, "`.`, `;` or `}`"));
                }
            }
        }
    }

    fn iri_of(&self, t: &Token) -> Result<Option<RdfTerm>, ParseError> {
        match &t.tok {
            Tok::Iri(i) => Iri::new(i).map(|iri| Some(RdfTerm::Iri(iri))).map_err(|e| Self::error_at(t, e.to_string())),
            Tok::PName { prefix, local } => {
                let curie = Curie::new(prefix.clone(), local.clone()).map_err(|e| Self::error_at(t, e.to_string()))?;
                self.prefixes
                    .expand(&curie)
                    .map(|iri| Some(RdfTerm::Iri(iri)))
                    .map_err(|e| Self::error_at(t, e.to_string()))
            }
            Tok::Var(v) => Ok(Some(RdfTerm::Variable(v.clone()))),
            _ => Ok(None),
        }
    }

    fn subject(&mut self) -> Result<RdfTerm, ParseError> {
        let t = self.next();
        if let Tok::Str(_) = t.tok {
            return Err(Self::error_at(&t, "a literal cannot be a subject"));
        }
        self.iri_of(&t)?.ok_or_else(|| Self::unexpected(&t, "a subject"))
    }

    fn verb(&mut self) -> Result<RdfTerm, ParseError> {
        let t = self.next();
        if matches!(&t.tok, Tok::Word(w) if w == "a") {
            return Ok(RdfTerm::Iri(Iri::new(RDF_TYPE).expect("rdf:type")));
        }
        self.iri_of(&t)?.ok_or_else(|| Self::unexpected(&t, "a predicate"))
    }

    fn object(&mut self) -> Result<RdfTerm, ParseError> {
        let t = self.next();
        if let Tok::Str(s) = &t.tok {
            return Ok(RdfTerm::Literal(s.clone()));
        }
        self.iri_of(&t)?.ok_or_else(|| Self::unexpected(&t, "an object"))
    }
}

/// Parses query text in the supported subset.
pub fn parse_sparql(text: &str) -> Result<SparqlQuery, ParseError> {
    let tokens = Lexer::new(text).tokens()?;
    let mut parser = Parser { tokens, pos: 0, prefixes: NamespaceTable::new() };
    parser.query()
}
