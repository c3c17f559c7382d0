//! OWL 2 functional-style syntax: the axiom model, a parser, a printer,
//! import resolution and access to annotation-embedded FOL text.

mod annotations;
mod imports;
mod lexer;
mod parser;
mod printer;

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

pub use annotations::{extract_fol_annotations, signature_with_labels, AnnotationSelection, FolAnnotation, FolSyntax};
pub use imports::{resolve_imports, resolve_imports_with, Catalog, ImportError, OntologyLoader};
pub use parser::{parse_ontology, ParseMode};
pub use printer::{axiom_to_string, print_ontology};

pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const XML: &str = "http://www.w3.org/XML/1998/namespace";

pub const OWL_THING: &str = "http://www.w3.org/2002/07/owl#Thing";
pub const OWL_NOTHING: &str = "http://www.w3.org/2002/07/owl#Nothing";
pub const OWL_TOP_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#topObjectProperty";
pub const OWL_BOTTOM_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#bottomObjectProperty";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const RDFS_LITERAL: &str = "http://www.w3.org/2000/01/rdf-schema#Literal";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid IRI `{0}`: must be non-empty and free of whitespace")]
pub struct InvalidIri(pub String);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, InvalidIri> {
        let value = value.into();
        if value.is_empty() || value.chars().any(char::is_whitespace) {
            return Err(InvalidIri(value));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Text after the last `#` or `/`; the whole IRI when neither occurs
    /// or the separator is the final character.
    pub fn local_name(&self) -> &str {
        match self.0.rfind(['#', '/']) {
            Some(i) if i + 1 < self.0.len() => &self.0[i + 1..],
            _ => &self.0,
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    DataProperty,
    NamedIndividual,
    AnnotationProperty,
    Datatype,
}

impl EntityKind {
    pub fn keyword(self) -> &'static str {
        match self {
            EntityKind::Class => "Class",
            EntityKind::ObjectProperty => "ObjectProperty",
            EntityKind::DataProperty => "DataProperty",
            EntityKind::NamedIndividual => "NamedIndividual",
            EntityKind::AnnotationProperty => "AnnotationProperty",
            EntityKind::Datatype => "Datatype",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "Class" => EntityKind::Class,
            "ObjectProperty" => EntityKind::ObjectProperty,
            "DataProperty" => EntityKind::DataProperty,
            "NamedIndividual" => EntityKind::NamedIndividual,
            "AnnotationProperty" => EntityKind::AnnotationProperty,
            "Datatype" => EntityKind::Datatype,
            _ => return None,
        })
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entity {
    pub kind: EntityKind,
    pub iri: Iri,
}

impl Entity {
    pub fn new(kind: EntityKind, iri: Iri) -> Self {
        Entity { kind, iri }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub lexical: String,
    pub datatype: Option<Iri>,
    pub lang: Option<String>,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), datatype: None, lang: None }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal { lexical: lexical.into(), datatype: Some(datatype), lang: None }
    }

    /// The datatype IRI a literal belongs to, with untyped literals read as
    /// `xsd:string` (language-tagged ones as `rdf:langString`).
    pub fn effective_datatype(&self) -> String {
        match (&self.datatype, &self.lang) {
            (Some(d), _) => d.as_str().to_string(),
            (None, Some(_)) => format!("{RDF}langString"),
            (None, None) => XSD_STRING.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectPropertyExpression {
    Named(Iri),
    Inverse(Iri),
}

impl ObjectPropertyExpression {
    pub fn iri(&self) -> &Iri {
        match self {
            ObjectPropertyExpression::Named(i) | ObjectPropertyExpression::Inverse(i) => i,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DataRange {
    Datatype(Iri),
    OneOf(Vec<Literal>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpression {
    Class(Iri),
    IntersectionOf(Vec<ClassExpression>),
    UnionOf(Vec<ClassExpression>),
    ComplementOf(Box<ClassExpression>),
    OneOf(Vec<Iri>),
    SomeValuesFrom(ObjectPropertyExpression, Box<ClassExpression>),
    AllValuesFrom(ObjectPropertyExpression, Box<ClassExpression>),
    HasValue(ObjectPropertyExpression, Iri),
    HasSelf(ObjectPropertyExpression),
    MinCardinality(u32, ObjectPropertyExpression, Option<Box<ClassExpression>>),
    MaxCardinality(u32, ObjectPropertyExpression, Option<Box<ClassExpression>>),
    ExactCardinality(u32, ObjectPropertyExpression, Option<Box<ClassExpression>>),
    DataSomeValuesFrom(Iri, DataRange),
    DataAllValuesFrom(Iri, DataRange),
    DataHasValue(Iri, Literal),
}

impl ClassExpression {
    pub fn class(iri: Iri) -> Self {
        ClassExpression::Class(iri)
    }
}

/// Left-hand side of `SubObjectPropertyOf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubObjectProperty {
    Expression(ObjectPropertyExpression),
    Chain(Vec<ObjectPropertyExpression>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnnotationValue {
    Literal(Literal),
    Iri(Iri),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnotationAssertion {
    pub property: Iri,
    pub subject: Iri,
    pub value: AnnotationValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Declaration(Entity),
    SubClassOf(ClassExpression, ClassExpression),
    EquivalentClasses(Vec<ClassExpression>),
    DisjointClasses(Vec<ClassExpression>),
    DisjointUnion(Iri, Vec<ClassExpression>),
    SubObjectPropertyOf(SubObjectProperty, ObjectPropertyExpression),
    EquivalentObjectProperties(Vec<ObjectPropertyExpression>),
    DisjointObjectProperties(Vec<ObjectPropertyExpression>),
    InverseObjectProperties(ObjectPropertyExpression, ObjectPropertyExpression),
    ObjectPropertyDomain(ObjectPropertyExpression, ClassExpression),
    ObjectPropertyRange(ObjectPropertyExpression, ClassExpression),
    FunctionalObjectProperty(ObjectPropertyExpression),
    InverseFunctionalObjectProperty(ObjectPropertyExpression),
    ReflexiveObjectProperty(ObjectPropertyExpression),
    IrreflexiveObjectProperty(ObjectPropertyExpression),
    SymmetricObjectProperty(ObjectPropertyExpression),
    AsymmetricObjectProperty(ObjectPropertyExpression),
    TransitiveObjectProperty(ObjectPropertyExpression),
    SubDataPropertyOf(Iri, Iri),
    DataPropertyDomain(Iri, ClassExpression),
    DataPropertyRange(Iri, DataRange),
    FunctionalDataProperty(Iri),
    ClassAssertion(ClassExpression, Iri),
    ObjectPropertyAssertion(ObjectPropertyExpression, Iri, Iri),
    NegativeObjectPropertyAssertion(ObjectPropertyExpression, Iri, Iri),
    DataPropertyAssertion(Iri, Iri, Literal),
    SameIndividual(Vec<Iri>),
    DifferentIndividuals(Vec<Iri>),
    AnnotationAssertion(AnnotationAssertion),
}

impl Axiom {
    /// The functional-syntax keyword of this axiom.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Axiom::Declaration(_) => "Declaration",
            Axiom::SubClassOf(..) => "SubClassOf",
            Axiom::EquivalentClasses(_) => "EquivalentClasses",
            Axiom::DisjointClasses(_) => "DisjointClasses",
            Axiom::DisjointUnion(..) => "DisjointUnion",
            Axiom::SubObjectPropertyOf(..) => "SubObjectPropertyOf",
            Axiom::EquivalentObjectProperties(_) => "EquivalentObjectProperties",
            Axiom::DisjointObjectProperties(_) => "DisjointObjectProperties",
            Axiom::InverseObjectProperties(..) => "InverseObjectProperties",
            Axiom::ObjectPropertyDomain(..) => "ObjectPropertyDomain",
            Axiom::ObjectPropertyRange(..) => "ObjectPropertyRange",
            Axiom::FunctionalObjectProperty(_) => "FunctionalObjectProperty",
            Axiom::InverseFunctionalObjectProperty(_) => "InverseFunctionalObjectProperty",
            Axiom::ReflexiveObjectProperty(_) => "ReflexiveObjectProperty",
            Axiom::IrreflexiveObjectProperty(_) => "IrreflexiveObjectProperty",
            Axiom::SymmetricObjectProperty(_) => "SymmetricObjectProperty",
            Axiom::AsymmetricObjectProperty(_) => "AsymmetricObjectProperty",
            Axiom::TransitiveObjectProperty(_) => "TransitiveObjectProperty",
            Axiom::SubDataPropertyOf(..) => "SubDataPropertyOf",
            Axiom::DataPropertyDomain(..) => "DataPropertyDomain",
            Axiom::DataPropertyRange(..) => "DataPropertyRange",
            Axiom::FunctionalDataProperty(_) => "FunctionalDataProperty",
            Axiom::ClassAssertion(..) => "ClassAssertion",
            Axiom::ObjectPropertyAssertion(..) => "ObjectPropertyAssertion",
            Axiom::NegativeObjectPropertyAssertion(..) => "NegativeObjectPropertyAssertion",
            Axiom::DataPropertyAssertion(..) => "DataPropertyAssertion",
            Axiom::SameIndividual(_) => "SameIndividual",
            Axiom::DifferentIndividuals(_) => "DifferentIndividuals",
            Axiom::AnnotationAssertion(_) => "AnnotationAssertion",
        }
    }

    /// Everything except declarations and annotation assertions.
    pub fn is_logical(&self) -> bool {
        !matches!(self, Axiom::Declaration(_) | Axiom::AnnotationAssertion(_))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OntologyDocument {
    pub ontology_iri: Option<Iri>,
    pub version_iri: Option<Iri>,
    pub imports: Vec<Iri>,
    /// Prefixes declared in the source, without the standard ones.
    pub prefixes: IndexMap<String, String>,
    pub axioms: Vec<Axiom>,
    /// Declared and inferred entities, in order of first appearance.
    /// Built-in vocabulary such as `owl:Thing` is not listed.
    pub entities: IndexMap<Iri, EntityKind>,
}

impl OntologyDocument {
    pub fn logical_axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter().filter(|a| a.is_logical())
    }

    pub fn entity_list(&self) -> Vec<Entity> {
        self.entities.iter().map(|(iri, kind)| Entity::new(*kind, iri.clone())).collect()
    }

    pub fn kind_of(&self, iri: &Iri) -> Option<EntityKind> {
        self.entities.get(iri).copied().or_else(|| builtin_kind(iri.as_str()))
    }
}

/// Kind of a built-in IRI that may be used without declaration.
pub fn builtin_kind(iri: &str) -> Option<EntityKind> {
    match iri {
        OWL_THING | OWL_NOTHING => Some(EntityKind::Class),
        OWL_TOP_OBJECT_PROPERTY | OWL_BOTTOM_OBJECT_PROPERTY => Some(EntityKind::ObjectProperty),
        "http://www.w3.org/2002/07/owl#topDataProperty" | "http://www.w3.org/2002/07/owl#bottomDataProperty" => {
            Some(EntityKind::DataProperty)
        }
        RDFS_LABEL
        | "http://www.w3.org/2000/01/rdf-schema#comment"
        | "http://www.w3.org/2000/01/rdf-schema#seeAlso"
        | "http://www.w3.org/2000/01/rdf-schema#isDefinedBy"
        | "http://www.w3.org/2002/07/owl#deprecated"
        | "http://www.w3.org/2002/07/owl#versionInfo"
        | "http://www.w3.org/2002/07/owl#priorVersion"
        | "http://www.w3.org/2002/07/owl#backwardCompatibleWith"
        | "http://www.w3.org/2002/07/owl#incompatibleWith" => Some(EntityKind::AnnotationProperty),
        RDFS_LITERAL
        | "http://www.w3.org/1999/02/22-rdf-syntax-ns#PlainLiteral"
        | "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"
        | "http://www.w3.org/1999/02/22-rdf-syntax-ns#XMLLiteral"
        | "http://www.w3.org/2002/07/owl#real"
        | "http://www.w3.org/2002/07/owl#rational" => Some(EntityKind::Datatype),
        _ if iri.starts_with(XSD) => Some(EntityKind::Datatype),
        _ => None,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OwlError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown construct `{name}` at {line}:{column}")]
    UnknownConstruct { name: String, line: usize, column: usize },
    #[error("unknown prefix `{prefix}:` at {line}:{column}")]
    UnknownPrefix { prefix: String, line: usize, column: usize },
    #[error("<{iri}> is used as both {first} and {second} (punning is not supported)")]
    Punning { iri: String, first: EntityKind, second: EntityKind },
    #[error("<{iri}> is used as {kind} at {line}:{column} but never declared (strict mode)")]
    Undeclared { iri: String, kind: EntityKind, line: usize, column: usize },
    #[error("built-in <{iri}> cannot be used as {kind}")]
    BuiltinMisuse { iri: String, kind: EntityKind },
    #[error("unsupported input format: {0}; only OWL 2 functional-style syntax is accepted")]
    UnsupportedFormat(String),
}
