use indexmap::IndexMap;

use super::{AnnotationValue, Axiom, Entity, Iri, OntologyDocument, RDFS_LABEL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FolSyntax {
    Clif,
    Tptp,
}

impl FolSyntax {
    pub fn name(self) -> &'static str {
        match self {
            FolSyntax::Clif => "CLIF",
            FolSyntax::Tptp => "TPTP",
        }
    }
}

/// Which annotation properties carry FOL text, and in which syntax.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum AnnotationSelection {
    /// Any property whose IRI ends in `/tptp`, `#tptp`, `/clif` or `#clif`,
    /// compared case-insensitively.
    #[default]
    BySuffix,
    Explicit(IndexMap<Iri, FolSyntax>),
}

impl AnnotationSelection {
    pub fn syntax_of(&self, property: &Iri) -> Option<FolSyntax> {
        match self {
            AnnotationSelection::Explicit(map) => map.get(property).copied(),
            AnnotationSelection::BySuffix => {
                let lower = property.as_str().to_ascii_lowercase();
                if lower.ends_with("/tptp") || lower.ends_with("#tptp") {
                    Some(FolSyntax::Tptp)
                } else if lower.ends_with("/clif") || lower.ends_with("#clif") {
                    Some(FolSyntax::Clif)
                } else {
                    None
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolAnnotation {
    pub subject: Iri,
    pub property: Iri,
    pub syntax: FolSyntax,
    pub text: String,
}

/// Literal values of the selected annotation properties, in document order.
pub fn extract_fol_annotations(doc: &OntologyDocument, selection: &AnnotationSelection) -> Vec<FolAnnotation> {
    doc.axioms
        .iter()
        .filter_map(|ax| match ax {
            Axiom::AnnotationAssertion(a) => {
                let AnnotationValue::Literal(lit) = &a.value else { return None };
                let syntax = selection.syntax_of(&a.property)?;
                Some(FolAnnotation {
                    subject: a.subject.clone(),
                    property: a.property.clone(),
                    syntax,
                    text: lit.lexical.clone(),
                })
            }
            _ => None,
        })
        .collect()
}

/// Every entity with its `rdfs:label` values in source order.
pub fn signature_with_labels(doc: &OntologyDocument) -> Vec<(Entity, Vec<String>)> {
    let mut labels: IndexMap<&Iri, Vec<String>> = IndexMap::new();
    for ax in &doc.axioms {
        if let Axiom::AnnotationAssertion(a) = ax {
            if a.property.as_str() == RDFS_LABEL {
                if let AnnotationValue::Literal(lit) = &a.value {
                    labels.entry(&a.subject).or_default().push(lit.lexical.clone());
                }
            }
        }
    }
    doc.entity_list()
        .into_iter()
        .map(|e| {
            let l = labels.get(&e.iri).cloned().unwrap_or_default();
            (e, l)
        })
        .collect()
}
