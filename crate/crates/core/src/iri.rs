//! IRIs, compact names and prefix tables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("invalid IRI `{0}`")]
    InvalidIri(String),
    #[error("invalid compact name `{0}`")]
    InvalidCurie(String),
    #[error("unknown prefix `{0}`")]
    UnknownPrefix(String),
    #[error("invalid prefix `{0}`")]
    InvalidPrefix(String),
    #[error("namespace `{0}` must end in '#' or '/'")]
    BadNamespace(String),
    #[error("prefix `{prefix}` already bound to <{existing}>")]
    PrefixConflict { prefix: String, existing: String },
}

/// An absolute IRI. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Result<Self, NameError> {
        let value = value.as_ref();
        if Self::is_valid(value) {
            Ok(Iri(Arc::from(value)))
        } else {
            Err(NameError::InvalidIri(value.to_string()))
        }
    }

    /// Absolute (`scheme://...`) or a URN, with no whitespace or delimiter characters.
    pub fn is_valid(value: &str) -> bool {
        !value.is_empty()
            && !value.chars().any(|c| {
                c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '\\' | '^' | '`')
            })
            && (value.contains("://") || value.starts_with("urn:"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part after the last `#` or `/`, or the whole IRI when there is none.
    pub fn local_name(&self) -> &str {
        let s = self.as_str();
        match s.rfind(['#', '/']) {
            Some(i) if i + 1 < s.len() => &s[i + 1..],
            _ => s,
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl TryFrom<String> for Iri {
    type Error = NameError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(value)
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> Self {
        iri.0.to_string()
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        self.as_str()
    }
}

/// Prefix names: empty, or a letter followed by letters, digits, `_` or `-`.
pub fn is_valid_prefix(prefix: &str) -> bool {
    let mut chars = prefix.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'),
        Some(_) => false,
    }
}

/// Local parts: a letter, digit or `_` followed by letters, digits, `_` or `-`.
pub fn is_valid_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        }
        _ => false,
    }
}

/// A prefixed name such as `tp:Image`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Curie {
    prefix: String,
    local: String,
}

impl Curie {
    pub fn new(prefix: impl Into<String>, local: impl Into<String>) -> Result<Self, NameError> {
        let (prefix, local) = (prefix.into(), local.into());
        if !is_valid_prefix(&prefix) || !is_valid_local(&local) {
            return Err(NameError::InvalidCurie(format!("{prefix}:{local}")));
        }
        Ok(Curie { prefix, local })
    }

    pub fn parse(text: &str) -> Result<Self, NameError> {
        let (prefix, local) = text.split_once(':').ok_or_else(|| NameError::InvalidCurie(text.to_string()))?;
        Curie::new(prefix, local)
    }

    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    pub fn local(&self) -> &str {
        &self.local
    }
}

impl fmt::Display for Curie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.prefix, self.local)
    }
}

/// Either form accepted wherever the user names an ontology entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Name {
    Iri(Iri),
    Curie(Curie),
}

impl Name {
    /// Accepts `<iri>`, a bare absolute IRI or `prefix:local`.
    pub fn parse(text: &str) -> Result<Self, NameError> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
            return Iri::new(inner).map(Name::Iri);
        }
        if text.contains("://") || text.starts_with("urn:") {
            return Iri::new(text).map(Name::Iri);
        }
        Curie::parse(text).map(Name::Curie)
    }
}

/// Prefix → namespace map. Iteration is ordered by prefix.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NamespaceTable {
    entries: BTreeMap<String, Iri>,
}

impl NamespaceTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `prefix`. Rebinding a prefix to the same namespace is a no-op.
    pub fn insert(&mut self, prefix: impl Into<String>, namespace: Iri) -> Result<(), NameError> {
        let prefix = prefix.into();
        if !is_valid_prefix(&prefix) {
            return Err(NameError::InvalidPrefix(prefix));
        }
        if !namespace.as_str().ends_with(['#', '/']) {
            return Err(NameError::BadNamespace(namespace.to_string()));
        }
        match self.entries.get(&prefix) {
            Some(existing) if *existing != namespace => {
                Err(NameError::PrefixConflict { prefix, existing: existing.to_string() })
            }
            Some(_) => Ok(()),
            None => {
                self.entries.insert(prefix, namespace);
                Ok(())
            }
        }
    }

    pub fn get(&self, prefix: &str) -> Option<&Iri> {
        self.entries.get(prefix)
    }

    pub fn contains_namespace(&self, namespace: &str) -> bool {
        self.entries.values().any(|ns| ns.as_str() == namespace)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.entries.iter().map(|(p, ns)| (p.as_str(), ns))
    }

    pub fn expand(&self, curie: &Curie) -> Result<Iri, NameError> {
        let ns =
            self.entries.get(curie.prefix()).ok_or_else(|| NameError::UnknownPrefix(curie.prefix().to_string()))?;
        Iri::new(format!("{}{}", ns, curie.local()))
    }

    pub fn resolve(&self, name: &Name) -> Result<Iri, NameError> {
        match name {
            Name::Iri(iri) => Ok(iri.clone()),
            Name::Curie(curie) => self.expand(curie),
        }
    }

    /// Shortest compact form: the longest matching namespace wins; on a tie a
    /// named prefix beats the empty one, then the smallest prefix wins.
    pub fn compact(&self, iri: &Iri) -> Option<Curie> {
        self.compacting_prefix(iri).map(|(prefix, ns)| Curie {
            prefix: prefix.to_string(),
            local: iri.as_str()[ns.as_str().len()..].to_string(),
        })
    }

    pub(crate) fn compacting_prefix(&self, iri: &Iri) -> Option<(&str, &Iri)> {
        let mut best: Option<(&str, &Iri)> = None;
        for (prefix, ns) in self.iter() {
            let Some(local) = iri.as_str().strip_prefix(ns.as_str()) else {
                continue;
            };
            if !is_valid_local(local) {
                continue;
            }
            let better = match best {
                None => true,
                Some((bp, b)) => {
                    ns.as_str().len() > b.as_str().len()
                        || (ns.as_str().len() == b.as_str().len() && bp.is_empty() && !prefix.is_empty())
                }
            };
            if better {
                best = Some((prefix, ns));
            }
        }
        best
    }

    /// Restricts the table to the prefixes that compact at least one of `iris`.
    pub fn restricted_to<'a>(&self, iris: impl IntoIterator<Item = &'a Iri>) -> NamespaceTable {
        let mut used = NamespaceTable::new();
        for iri in iris {
            if let Some((prefix, ns)) = self.compacting_prefix(iri) {
                used.entries.insert(prefix.to_string(), ns.clone());
            }
        }
        used
    }

    /// `prefix:local` when a prefix covers the IRI, `<iri>` otherwise.
    pub fn display(&self, iri: &Iri) -> String {
        match self.compact(iri) {
            Some(curie) => curie.to_string(),
            None => format!("<{iri}>"),
        }
    }
}

impl FromIterator<(String, Iri)> for NamespaceTable {
    fn from_iter<T: IntoIterator<Item = (String, Iri)>>(iter: T) -> Self {
        let mut table = NamespaceTable::new();
        for (prefix, ns) in iter {
            let _ = table.insert(prefix, ns);
        }
        table
    }
}
