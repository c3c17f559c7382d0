//! Matching annotation symbols to ontology entities by edit distance over
//! normalized labels and IRI local names.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::{self, Write as _};

use crate::fol::mangle::{mangle_base, unique_spelling};
use crate::fol::{Formula, Symbol, SymbolRole};
use crate::owl::{
    Entity, EntityKind, OWL_BOTTOM_OBJECT_PROPERTY, OWL_NOTHING, OWL_THING, OWL_TOP_OBJECT_PROPERTY,
};
use crate::translate::{iri_symbol, is_reserved_symbol, symbol_iri, BOTTOM_OP, NOTHING, THING, TOP_OP};

/// Lowercases, turns every run of `_`, `-` and whitespace into one space,
/// and strips surrounding quotes.
pub fn normalize(name: &str) -> String {
    let trimmed = name.trim().trim_matches(|c| c == '\'' || c == '"');
    let mut out = String::with_capacity(trimmed.len());
    let mut gap = false;
    for c in trimmed.chars() {
        if c == '_' || c == '-' || c.is_whitespace() {
            gap = true;
            continue;
        }
        if gap && !out.is_empty() {
            out.push(' ');
        }
        gap = false;
        out.extend(c.to_lowercase());
    }
    out
}

/// Unit-cost edit distance over chars.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatchKind {
    Label,
    IriSuffix,
    /// The symbol already spelled the entity as `<iri>`.
    Iri,
    None,
}

impl fmt::Display for MatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchKind::Label => "label",
            MatchKind::IriSuffix => "iri-suffix",
            MatchKind::Iri => "iri",
            MatchKind::None => "none",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub entity: Option<Entity>,
    pub kind: MatchKind,
    pub distance: usize,
}

impl Match {
    fn none() -> Self {
        Match { entity: None, kind: MatchKind::None, distance: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlignConfig {
    pub ratio: f64,
    pub min_threshold: usize,
    pub threads: Option<usize>,
}

impl Default for AlignConfig {
    fn default() -> Self {
        AlignConfig { ratio: 0.2, min_threshold: 1, threads: None }
    }
}

impl AlignConfig {
    pub fn threshold(&self, normalized: &str) -> usize {
        let len = normalized.chars().count() as f64;
        self.min_threshold.max((self.ratio * len - 1e-9).ceil() as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Iri,
    Readable,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignatureMap {
    pub entries: BTreeMap<Symbol, Match>,
    /// Readable name for every entity of the signature; injective.
    pub reverse: BTreeMap<Entity, String>,
    by_iri: BTreeMap<String, Entity>,
}

fn compatible(role: SymbolRole, arity: usize, kind: EntityKind) -> bool {
    match (role, arity) {
        (SymbolRole::Predicate, 1) => matches!(kind, EntityKind::Class | EntityKind::Datatype),
        (SymbolRole::Predicate, 2) => matches!(kind, EntityKind::ObjectProperty | EntityKind::DataProperty),
        (SymbolRole::Constant, _) => kind == EntityKind::NamedIndividual,
        _ => false,
    }
}

/// FOL symbol the translation uses for an entity under the IRI target.
pub fn entity_symbol(e: &Entity) -> String {
    match e.iri.as_str() {
        OWL_THING => THING.into(),
        OWL_NOTHING => NOTHING.into(),
        OWL_TOP_OBJECT_PROPERTY => TOP_OP.into(),
        OWL_BOTTOM_OBJECT_PROPERTY => BOTTOM_OP.into(),
        _ => iri_symbol(&e.iri),
    }
}

struct Candidate<'a> {
    entity: &'a Entity,
    labels: Vec<String>,
    suffix: String,
}

fn best_match(sym: &Symbol, candidates: &[Candidate<'_>], config: &AlignConfig) -> Match {
    if let Some(iri) = symbol_iri(&sym.name) {
        return candidates
            .iter()
            .find(|c| c.entity.iri.as_str() == iri && compatible(sym.role, sym.arity, c.entity.kind))
            .map(|c| Match { entity: Some(c.entity.clone()), kind: MatchKind::Iri, distance: 0 })
            .unwrap_or_else(Match::none);
    }
    let norm = normalize(&sym.name);
    let limit = config.threshold(&norm);
    let mut best: Option<(usize, MatchKind, &Entity)> = None;
    for c in candidates.iter().filter(|c| compatible(sym.role, sym.arity, c.entity.kind)) {
        let texts = c.labels.iter().map(|l| (l, MatchKind::Label)).chain([(&c.suffix, MatchKind::IriSuffix)]);
        for (text, kind) in texts {
            // Cheap lower bound before the quadratic distance.
            if text.chars().count().abs_diff(norm.chars().count()) > limit {
                continue;
            }
            let d = levenshtein(&norm, text);
            if d > limit {
                continue;
            }
            let key = (d, kind, &c.entity.iri);
            if best.map_or(true, |(bd, bk, be)| key < (bd, bk, &be.iri)) {
                best = Some((d, kind, c.entity));
            }
        }
    }
    match best {
        Some((distance, kind, e)) => Match { entity: Some(e.clone()), kind, distance },
        None => Match::none(),
    }
}

/// Matches every symbol against the signature. The result does not depend
/// on the order of `signature`.
pub fn build_signature_map(
    symbols: &BTreeSet<Symbol>,
    signature: &[(Entity, Vec<String>)],
    config: &AlignConfig,
) -> SignatureMap {
    let mut merged: BTreeMap<&Entity, Vec<String>> = BTreeMap::new();
    for (e, labels) in signature {
        let slot = merged.entry(e).or_default();
        for l in labels {
            if !slot.contains(l) {
                slot.push(l.clone());
            }
        }
    }
    let candidates: Vec<Candidate<'_>> = merged
        .iter()
        .filter(|(e, _)| e.kind != EntityKind::AnnotationProperty)
        .map(|(e, labels)| Candidate {
            entity: e,
            labels: labels.iter().map(|l| normalize(l)).collect(),
            suffix: normalize(e.iri.local_name()),
        })
        .collect();

    let symbol_list: Vec<&Symbol> = symbols.iter().collect();
    let matches = crate::par::map_ordered(&symbol_list, config.threads, |s| best_match(s, &candidates, config));
    let entries: BTreeMap<Symbol, Match> =
        symbol_list.into_iter().cloned().zip(matches).collect();

    // Readable names, assigned in entity order. A name may coincide with a
    // FOL symbol only when that symbol maps to the same entity, which keeps
    // rewriting idempotent.
    let mut owner: BTreeMap<&str, Option<&Entity>> = BTreeMap::new();
    for (s, m) in &entries {
        let slot = owner.entry(s.name.as_str()).or_insert(m.entity.as_ref());
        if *slot != m.entity.as_ref() {
            *slot = None;
        }
    }
    let mut used: HashSet<String> = HashSet::new();
    let mut reverse = BTreeMap::new();
    for (e, labels) in &merged {
        if e.kind == EntityKind::AnnotationProperty {
            continue;
        }
        let base = match e.iri.as_str() {
            OWL_THING | OWL_NOTHING | OWL_TOP_OBJECT_PROPERTY | OWL_BOTTOM_OBJECT_PROPERTY => {
                reverse.insert((*e).clone(), entity_symbol(e));
                continue;
            }
            _ => mangle_base(labels.first().map(String::as_str).unwrap_or(e.iri.local_name())),
        };
        let name = unique_spelling(&base, |s| {
            used.contains(s)
                || is_reserved_symbol(s)
                || s.starts_with("bg_")
                || owner.get(s).is_some_and(|o| *o != Some(*e))
        });
        used.insert(name.clone());
        reverse.insert((*e).clone(), name);
    }
    let by_iri = merged.keys().map(|e| (e.iri.as_str().to_string(), (*e).clone())).collect();
    SignatureMap { entries, reverse, by_iri }
}

impl SignatureMap {
    pub fn lookup(&self, name: &str, role: SymbolRole, arity: usize) -> Option<&Match> {
        self.entries.get(&Symbol { name: name.to_string(), role, arity })
    }

    fn spell(&self, e: &Entity, target: Target) -> String {
        match target {
            Target::Iri => entity_symbol(e),
            Target::Readable => self.reverse.get(e).cloned().unwrap_or_else(|| entity_symbol(e)),
        }
    }

    /// Replaces matched symbols by their entity. Symbols spelled `<iri>`
    /// for a known entity are also respelled, so translated OWL axioms and
    /// annotations end up in one signature.
    pub fn rewrite_formula(&self, f: &Formula, target: Target) -> Formula {
        f.map_symbols(&mut |name, role, arity| {
            if let Some(Match { entity: Some(e), .. }) = self.lookup(name, role, arity) {
                return self.spell(e, target);
            }
            if let Some(e) = symbol_iri(name).and_then(|i| self.by_iri.get(i)) {
                if compatible(role, arity, e.kind) {
                    return self.spell(e, target);
                }
            }
            name.to_string()
        })
    }

    /// Two-column text table: symbol, then entity IRI with kind and distance.
    pub fn report(&self) -> String {
        let rows: Vec<(String, String)> = self
            .entries
            .iter()
            .map(|(s, m)| {
                let left = format!("{}/{}", s.name, s.arity);
                let right = match &m.entity {
                    Some(e) => format!("{}  ({}, distance {})", e.iri, m.kind, m.distance),
                    None => "-  (unmatched, used as-is)".to_string(),
                };
                (left, right)
            })
            .collect();
        let width = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0).max(6);
        let mut out = format!("{:<width$}  entity\n", "symbol");
        for (l, r) in rows {
            let _ = writeln!(out, "{l:<width$}  {r}");
        }
        out
    }
}
