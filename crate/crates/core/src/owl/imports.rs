use std::collections::HashSet;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use thiserror::Error;

use super::{parse_ontology, Iri, OntologyDocument, OwlError, ParseMode};

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("no catalog entry for import <{0}>")]
    Unresolvable(Iri),
    #[error("cannot read <{iri}> from {path}: {source}")]
    Io { iri: Iri, path: PathBuf, source: std::io::Error },
    #[error("in imported ontology <{iri}>: {source}")]
    Parse { iri: Iri, source: OwlError },
    #[error("prefix `{prefix}:` maps to <{first}> and <{second}>")]
    PrefixConflict { prefix: String, first: String, second: String },
    #[error("<{iri}> is used as both {first} and {second} across the import closure")]
    Punning { iri: Iri, first: super::EntityKind, second: super::EntityKind },
    #[error("catalog line {line}: {message}")]
    Catalog { line: usize, message: String },
}

/// Source of ontology text for an import IRI.
pub trait OntologyLoader {
    fn load(&self, iri: &Iri) -> Result<String, ImportError>;
}

impl<F> OntologyLoader for F
where
    F: Fn(&Iri) -> Result<String, ImportError>,
{
    fn load(&self, iri: &Iri) -> Result<String, ImportError> {
        self(iri)
    }
}

/// IRI→file mapping, one `<iri> <path>` (or `iri path`) pair per line.
/// Blank lines and `#` comments are ignored; relative paths resolve against
/// the catalog file's directory.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: IndexMap<Iri, PathBuf>,
}

impl Catalog {
    pub fn parse(text: &str, base: &Path) -> Result<Self, ImportError> {
        let mut entries = IndexMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: &str| ImportError::Catalog { line: n + 1, message: message.to_string() };
            let (iri, rest) = if let Some(inner) = line.strip_prefix('<') {
                inner.split_once('>').ok_or_else(|| bad("unterminated `<iri>`"))?
            } else {
                line.split_once(char::is_whitespace).ok_or_else(|| bad("expected `<iri> <path>`"))?
            };
            let path = rest.trim();
            let path = path.strip_prefix('<').and_then(|p| p.strip_suffix('>')).unwrap_or(path);
            if path.is_empty() {
                return Err(bad("missing path"));
            }
            let iri = Iri::new(iri).map_err(|e| bad(&e.to_string()))?;
            entries.insert(iri, base.join(path));
        }
        Ok(Catalog { entries })
    }

    pub fn from_file(path: &Path) -> Result<Self, std::io::Error> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Catalog::parse(&text, base).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))
    }

    pub fn insert(&mut self, iri: Iri, path: PathBuf) {
        self.entries.insert(iri, path);
    }

    pub fn path(&self, iri: &Iri) -> Option<&Path> {
        self.entries.get(iri).map(PathBuf::as_path)
    }
}

impl OntologyLoader for Catalog {
    fn load(&self, iri: &Iri) -> Result<String, ImportError> {
        let path = self.path(iri).ok_or_else(|| ImportError::Unresolvable(iri.clone()))?;
        std::fs::read_to_string(path).map_err(|source| ImportError::Io {
            iri: iri.clone(),
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Merges the import closure of `doc`, parsing imported files leniently.
pub fn resolve_imports(doc: &OntologyDocument, loader: &dyn OntologyLoader) -> Result<OntologyDocument, ImportError> {
    resolve_imports_with(doc, loader, ParseMode::Lenient)
}

/// Depth-first merge: the root's axioms come first, then each import's
/// closure in import order. Every IRI is loaded once, so cycles terminate,
/// and repeated axioms keep only their first occurrence.
pub fn resolve_imports_with(
    doc: &OntologyDocument,
    loader: &dyn OntologyLoader,
    mode: ParseMode,
) -> Result<OntologyDocument, ImportError> {
    let mut merged = OntologyDocument {
        ontology_iri: doc.ontology_iri.clone(),
        version_iri: doc.version_iri.clone(),
        imports: doc.imports.clone(),
        ..Default::default()
    };
    let mut visited: HashSet<Iri> = doc.ontology_iri.iter().cloned().collect();
    let mut seen_axioms = HashSet::new();
    absorb(&mut merged, doc, &mut seen_axioms)?;
    visit(&mut merged, &doc.imports, loader, mode, &mut visited, &mut seen_axioms)?;
    Ok(merged)
}

fn visit(
    merged: &mut OntologyDocument,
    imports: &[Iri],
    loader: &dyn OntologyLoader,
    mode: ParseMode,
    visited: &mut HashSet<Iri>,
    seen: &mut HashSet<super::Axiom>,
) -> Result<(), ImportError> {
    for iri in imports {
        if !visited.insert(iri.clone()) {
            continue;
        }
        let text = loader.load(iri)?;
        let child = parse_ontology(&text, mode).map_err(|source| ImportError::Parse { iri: iri.clone(), source })?;
        if let Some(own) = &child.ontology_iri {
            visited.insert(own.clone());
        }
        absorb(merged, &child, seen)?;
        visit(merged, &child.imports, loader, mode, visited, seen)?;
    }
    Ok(())
}

fn absorb(
    merged: &mut OntologyDocument,
    doc: &OntologyDocument,
    seen: &mut HashSet<super::Axiom>,
) -> Result<(), ImportError> {
    for (prefix, iri) in &doc.prefixes {
        match merged.prefixes.get(prefix) {
            Some(existing) if existing != iri => {
                return Err(ImportError::PrefixConflict {
                    prefix: prefix.clone(),
                    first: existing.clone(),
                    second: iri.clone(),
                })
            }
            Some(_) => {}
            None => {
                merged.prefixes.insert(prefix.clone(), iri.clone());
            }
        }
    }
    for (iri, kind) in &doc.entities {
        match merged.entities.get(iri) {
            Some(first) if first != kind => {
                return Err(ImportError::Punning { iri: iri.clone(), first: *first, second: *kind })
            }
            Some(_) => {}
            None => {
                merged.entities.insert(iri.clone(), *kind);
            }
        }
    }
    for ax in &doc.axioms {
        if seen.insert(ax.clone()) {
            merged.axioms.push(ax.clone());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;

    fn loader(files: HashMap<&'static str, &'static str>) -> impl Fn(&Iri) -> Result<String, ImportError> {
        move |iri: &Iri| {
            files.get(iri.as_str()).map(|s| s.to_string()).ok_or_else(|| ImportError::Unresolvable(iri.clone()))
        }
    }

    fn parse(s: &str) -> OntologyDocument {
        parse_ontology(s, ParseMode::Lenient).unwrap()
    }

    #[test]
    fn imported_axioms_are_added() {
        let root = parse("Prefix(:=<http://x.org/>) Ontology(<http://x.org/root> Import(<http://x.org/b>) SubClassOf(:A :B))");
        let files = HashMap::from([(
            "http://x.org/b",
            "Prefix(:=<http://x.org/>) Ontology(<http://x.org/b> SubClassOf(:B :C) SubClassOf(:C :D))",
        )]);
        let merged = resolve_imports(&root, &loader(files)).unwrap();
        assert_eq!(merged.axioms.len(), 3);
        assert_eq!(merged.imports, root.imports);
    }

    #[test]
    fn self_import_is_idempotent() {
        let src = "Prefix(:=<http://x.org/>) Ontology(<http://x.org/root> Import(<http://x.org/root>) SubClassOf(:A :B))";
        let root = parse(src);
        let files = HashMap::from([("http://x.org/root", src)]);
        assert_eq!(resolve_imports(&root, &loader(files)).unwrap(), root);
    }

    #[test]
    fn diamond_loads_shared_import_once() {
        let root = parse(
            "Prefix(:=<http://x.org/>) Ontology(<http://x.org/a> Import(<http://x.org/b>) Import(<http://x.org/c>))",
        );
        let files = HashMap::from([
            ("http://x.org/b", "Prefix(:=<http://x.org/>) Ontology(<http://x.org/b> Import(<http://x.org/d>) SubClassOf(:B :X))"),
            ("http://x.org/c", "Prefix(:=<http://x.org/>) Ontology(<http://x.org/c> Import(<http://x.org/d>) SubClassOf(:C :X))"),
            ("http://x.org/d", "Prefix(:=<http://x.org/>) Ontology(<http://x.org/d> SubClassOf(:D :X) SubClassOf(:D :Y))"),
        ]);
        let merged = resolve_imports(&root, &loader(files)).unwrap();
        assert_eq!(merged.axioms.len(), 4);
    }

    #[test]
    fn duplicate_axioms_collapse() {
        let root = parse("Prefix(:=<http://x.org/>) Ontology(Import(<http://x.org/b>) SubClassOf(:A :B))");
        let files = HashMap::from([("http://x.org/b", "Prefix(:=<http://x.org/>) Ontology(SubClassOf(:A :B))")]);
        assert_eq!(resolve_imports(&root, &loader(files)).unwrap().axioms.len(), 1);
    }

    #[test]
    fn errors() {
        let root = parse("Prefix(p:=<http://x.org/>) Ontology(Import(<http://x.org/b>))");
        assert!(matches!(
            resolve_imports(&root, &loader(HashMap::new())),
            Err(ImportError::Unresolvable(_))
        ));
        let files = HashMap::from([("http://x.org/b", "Prefix(p:=<http://y.org/>) Ontology()")]);
        assert!(matches!(
            resolve_imports(&root, &loader(files)),
            Err(ImportError::PrefixConflict { .. })
        ));
    }

    #[test]
    fn catalog_lines() {
        let cat = Catalog::parse(
            "# comment\n<http://x.org/b> b.ofn\nhttp://x.org/c   sub/c.ofn\n\n",
            Path::new("/data"),
        )
        .unwrap();
        assert_eq!(cat.path(&Iri::new("http://x.org/b").unwrap()), Some(Path::new("/data/b.ofn")));
        assert_eq!(cat.path(&Iri::new("http://x.org/c").unwrap()), Some(Path::new("/data/sub/c.ofn")));
        assert!(Catalog::parse("lonely", Path::new(".")).is_err());
    }
}
