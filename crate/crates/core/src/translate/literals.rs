use std::collections::HashSet;

use indexmap::IndexMap;

use crate::fol::mangle::unique_spelling;
use crate::owl::{Literal, XSD_INTEGER};

const MAX_LEXICAL_CHARS: usize = 32;

/// Collision-free constant names for literals, in first-use order.
/// `"3"^^xsd:integer` becomes `lit_3`, other datatypes add their local name
/// (`lit_string_abc`). Equal literals share one constant.
#[derive(Clone, Debug, Default)]
pub struct LiteralTable {
    names: IndexMap<Literal, String>,
    used: HashSet<String>,
}

fn sanitize(lexical: &str) -> String {
    lexical
        .chars()
        .take(MAX_LEXICAL_CHARS)
        .map(|c| match c {
            c if c.is_ascii_alphanumeric() => c,
            '-' => 'm',
            '+' => 'p',
            _ => '_',
        })
        .collect()
}

impl LiteralTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, lit: &Literal) -> String {
        if let Some(name) = self.names.get(lit) {
            return name.clone();
        }
        let dt = lit.effective_datatype();
        let base = if dt == XSD_INTEGER {
            format!("lit_{}", sanitize(&lit.lexical))
        } else {
            let local = dt.rsplit(['#', '/']).next().unwrap_or("lit");
            let mut base = format!("lit_{}_{}", sanitize(local), sanitize(&lit.lexical));
            if let Some(lang) = &lit.lang {
                base.push('_');
                base.push_str(&sanitize(lang));
            }
            base
        };
        let name = unique_spelling(&base, |s| self.used.contains(s));
        self.used.insert(name.clone());
        self.names.insert(lit.clone(), name.clone());
        name
    }

    pub fn get(&self, lit: &Literal) -> Option<&str> {
        self.names.get(lit).map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &Literal)> {
        self.names.iter().map(|(l, n)| (n.as_str(), l))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}
