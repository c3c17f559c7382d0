use std::collections::HashSet;

use indexmap::IndexMap;

use super::lexer::{tokenize, Tok, Token};
use super::{
    builtin_kind, AnnotationAssertion, AnnotationValue, Axiom, ClassExpression, DataRange, Entity, EntityKind,
    Iri, Literal, ObjectPropertyExpression, OntologyDocument, OwlError, SubObjectProperty, OWL, RDF, RDFS, XML,
    XSD,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParseMode {
    /// Every IRI used in a logical axiom must be declared.
    Strict,
    /// Undeclared IRIs are declared with the kind implied by their position.
    #[default]
    Lenient,
}

const STANDARD_PREFIXES: [(&str, &str); 5] = [("owl", OWL), ("rdf", RDF), ("rdfs", RDFS), ("xsd", XSD), ("xml", XML)];

/// Parses a functional-style syntax document. Imports are recorded, not followed.
pub fn parse_ontology(source: &str, mode: ParseMode) -> Result<OntologyDocument, OwlError> {
    reject_other_formats(source)?;
    let mut p = Parser {
        toks: tokenize(source)?,
        pos: 0,
        mode,
        prefixes: IndexMap::new(),
        entities: IndexMap::new(),
        declared: HashSet::new(),
        uses: Vec::new(),
        logical: false,
    };
    let doc = p.document()?;
    if mode == ParseMode::Strict {
        for (iri, kind, line, column) in &p.uses {
            if !p.declared.contains(iri) {
                return Err(OwlError::Undeclared { iri: iri.to_string(), kind: *kind, line: *line, column: *column });
            }
        }
    }
    Ok(doc)
}

fn reject_other_formats(source: &str) -> Result<(), OwlError> {
    let head = source.trim_start_matches('\u{feff}').trim_start();
    let format = if head.starts_with("<?xml") || head.starts_with("<rdf:RDF") {
        "RDF/XML"
    } else if head.starts_with("@prefix") || head.starts_with("@base") || head.starts_with("PREFIX ") {
        "Turtle"
    } else if head.starts_with("Prefix:") || head.starts_with("Ontology:") {
        "Manchester syntax"
    } else {
        return Ok(());
    };
    Err(OwlError::UnsupportedFormat(format.to_string()))
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    mode: ParseMode,
    prefixes: IndexMap<String, String>,
    entities: IndexMap<Iri, EntityKind>,
    declared: HashSet<Iri>,
    uses: Vec<(Iri, EntityKind, usize, usize)>,
    /// Whether the axiom being parsed is a logical one (strict checks apply).
    logical: bool,
}

type Pos = (usize, usize);

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> Pos {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, (line, column): Pos, message: impl Into<String>) -> OwlError {
        OwlError::Syntax { line, column, message: message.into() }
    }

    fn error(&self, message: impl Into<String>) -> OwlError {
        self.error_at(self.here(), message)
    }

    fn found(&self) -> String {
        match self.peek() {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Carets => "`^^`".into(),
            Tok::FullIri(i) => format!("<{i}>"),
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Lang(l) => format!("language tag @{l}"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), OwlError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", self.found())))
        }
    }

    fn open(&mut self) -> Result<(), OwlError> {
        self.expect(Tok::LParen, "`(`")
    }

    fn close(&mut self) -> Result<(), OwlError> {
        self.expect(Tok::RParen, "`)`")
    }

    fn keyword(&mut self) -> Result<(String, Pos), OwlError> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Word(w) if !w.contains(':') => {
                self.next();
                Ok((w, at))
            }
            _ => Err(self.error(format!("expected a keyword, found {}", self.found()))),
        }
    }

    fn at_iri(&self) -> bool {
        match self.peek() {
            Tok::FullIri(_) => true,
            Tok::Word(w) => w.contains(':'),
            _ => false,
        }
    }

    fn at_construct(&self) -> bool {
        matches!(self.peek(), Tok::Word(w) if !w.contains(':')) && *self.peek2() == Tok::LParen
    }

    fn iri(&mut self) -> Result<(Iri, Pos), OwlError> {
        let at = self.here();
        let text = match self.peek().clone() {
            Tok::FullIri(i) => i,
            Tok::Word(w) if w.starts_with("_:") => {
                return Err(OwlError::UnknownConstruct { name: "anonymous individual".into(), line: at.0, column: at.1 })
            }
            Tok::Word(w) if w.contains(':') => {
                let (prefix, local) = w.split_once(':').unwrap();
                let base = self
                    .prefixes
                    .get(prefix)
                    .map(String::as_str)
                    .or_else(|| STANDARD_PREFIXES.iter().find(|(p, _)| *p == prefix).map(|(_, v)| *v))
                    .ok_or_else(|| OwlError::UnknownPrefix { prefix: prefix.to_string(), line: at.0, column: at.1 })?;
                format!("{base}{local}")
            }
            _ => return Err(self.error(format!("expected an IRI, found {}", self.found()))),
        };
        self.next();
        let iri = Iri::new(text).map_err(|e| self.error_at(at, e.to_string()))?;
        Ok((iri, at))
    }

    fn entity(&mut self, kind: EntityKind) -> Result<Iri, OwlError> {
        let (iri, at) = self.iri()?;
        self.use_entity(&iri, kind, at, false)?;
        Ok(iri)
    }

    fn use_entity(&mut self, iri: &Iri, kind: EntityKind, at: Pos, declaring: bool) -> Result<(), OwlError> {
        if let Some(builtin) = builtin_kind(iri.as_str()) {
            if builtin != kind {
                return Err(OwlError::BuiltinMisuse { iri: iri.to_string(), kind });
            }
            return Ok(());
        }
        match self.entities.get(iri) {
            Some(&first) if first != kind => {
                return Err(OwlError::Punning { iri: iri.to_string(), first, second: kind });
            }
            Some(_) => {}
            None => {
                self.entities.insert(iri.clone(), kind);
            }
        }
        if declaring {
            self.declared.insert(iri.clone());
        } else if self.logical && self.mode == ParseMode::Strict {
            self.uses.push((iri.clone(), kind, at.0, at.1));
        }
        Ok(())
    }

    fn document(&mut self) -> Result<OntologyDocument, OwlError> {
        while matches!(self.peek(), Tok::Word(w) if w == "Prefix") {
            self.next();
            self.open()?;
            let at = self.here();
            let name = match self.next() {
                Tok::Word(w) if w.ends_with(':') && w.matches(':').count() == 1 => w[..w.len() - 1].to_string(),
                _ => return Err(self.error_at(at, "expected a prefix name ending in `:`")),
            };
            self.expect(Tok::Equals, "`=`")?;
            let at = self.here();
            let Tok::FullIri(iri) = self.next() else {
                return Err(self.error_at(at, "expected a full IRI in prefix declaration"));
            };
            self.close()?;
            self.prefixes.insert(name, iri);
        }
        let (kw, at) = self.keyword()?;
        if kw != "Ontology" {
            return Err(self.error_at(at, format!("expected `Ontology`, found `{kw}`")));
        }
        self.open()?;
        let mut doc = OntologyDocument::default();
        if self.at_iri() {
            doc.ontology_iri = Some(self.iri()?.0);
            if self.at_iri() {
                doc.version_iri = Some(self.iri()?.0);
            }
        }
        while matches!(self.peek(), Tok::Word(w) if w == "Import") {
            self.next();
            self.open()?;
            doc.imports.push(self.iri()?.0);
            self.close()?;
        }
        while matches!(self.peek(), Tok::Word(w) if w == "Annotation") {
            self.annotation()?;
        }
        while *self.peek() != Tok::RParen {
            if *self.peek() == Tok::Eof {
                return Err(self.error("unclosed `Ontology(`"));
            }
            if let Some(ax) = self.axiom()? {
                doc.axioms.push(ax);
            }
        }
        self.close()?;
        if *self.peek() != Tok::Eof {
            return Err(self.error(format!("unexpected {} after the ontology", self.found())));
        }
        doc.prefixes = std::mem::take(&mut self.prefixes);
        doc.entities = std::mem::take(&mut self.entities);
        Ok(doc)
    }

    /// `Annotation(annotations* property value)`, parsed and discarded.
    fn annotation(&mut self) -> Result<(), OwlError> {
        self.next();
        self.open()?;
        self.skip_annotations()?;
        self.iri()?;
        self.annotation_value()?;
        self.close()
    }

    fn skip_annotations(&mut self) -> Result<(), OwlError> {
        while matches!(self.peek(), Tok::Word(w) if w == "Annotation") && *self.peek2() == Tok::LParen {
            self.annotation()?;
        }
        Ok(())
    }

    fn annotation_value(&mut self) -> Result<AnnotationValue, OwlError> {
        if matches!(self.peek(), Tok::Str(_)) {
            Ok(AnnotationValue::Literal(self.literal()?))
        } else {
            Ok(AnnotationValue::Iri(self.iri()?.0))
        }
    }

    fn literal(&mut self) -> Result<Literal, OwlError> {
        let at = self.here();
        let Tok::Str(lexical) = self.next() else {
            return Err(self.error_at(at, "expected a literal"));
        };
        match self.peek() {
            Tok::Carets => {
                self.next();
                let dt = self.entity(EntityKind::Datatype)?;
                Ok(Literal { lexical, datatype: Some(dt), lang: None })
            }
            Tok::Lang(_) => {
                let Tok::Lang(lang) = self.next() else { unreachable!() };
                Ok(Literal { lexical, datatype: None, lang: Some(lang) })
            }
            _ => Ok(Literal::plain(lexical)),
        }
    }

    fn count(&mut self) -> Result<u32, OwlError> {
        let at = self.here();
        match self.next() {
            Tok::Word(w) if w.chars().all(|c| c.is_ascii_digit()) => {
                w.parse().map_err(|_| self.error_at(at, format!("cardinality `{w}` out of range")))
            }
            _ => Err(self.error_at(at, "expected a non-negative integer")),
        }
    }

    fn individual(&mut self) -> Result<Iri, OwlError> {
        self.entity(EntityKind::NamedIndividual)
    }

    fn ope(&mut self) -> Result<ObjectPropertyExpression, OwlError> {
        if self.at_construct() {
            let (kw, at) = self.keyword()?;
            if kw != "ObjectInverseOf" {
                return Err(OwlError::UnknownConstruct { name: kw, line: at.0, column: at.1 });
            }
            self.open()?;
            let p = self.entity(EntityKind::ObjectProperty)?;
            self.close()?;
            return Ok(ObjectPropertyExpression::Inverse(p));
        }
        Ok(ObjectPropertyExpression::Named(self.entity(EntityKind::ObjectProperty)?))
    }

    fn data_property(&mut self) -> Result<Iri, OwlError> {
        self.entity(EntityKind::DataProperty)
    }

    fn data_range(&mut self) -> Result<DataRange, OwlError> {
        if self.at_construct() {
            let (kw, at) = self.keyword()?;
            if kw != "DataOneOf" {
                return Err(OwlError::UnknownConstruct { name: kw, line: at.0, column: at.1 });
            }
            self.open()?;
            let mut lits = vec![self.literal()?];
            while *self.peek() != Tok::RParen {
                lits.push(self.literal()?);
            }
            self.close()?;
            return Ok(DataRange::OneOf(lits));
        }
        Ok(DataRange::Datatype(self.entity(EntityKind::Datatype)?))
    }

    fn class_expressions(&mut self, min: usize, what: &str) -> Result<Vec<ClassExpression>, OwlError> {
        let at = self.here();
        let mut items = Vec::new();
        while *self.peek() != Tok::RParen {
            items.push(self.class_expression()?);
        }
        if items.len() < min {
            return Err(self.error_at(at, format!("{what} needs at least {min} class expressions")));
        }
        Ok(items)
    }

    fn individuals(&mut self, min: usize, what: &str) -> Result<Vec<Iri>, OwlError> {
        let at = self.here();
        let mut items = Vec::new();
        while *self.peek() != Tok::RParen {
            items.push(self.individual()?);
        }
        if items.len() < min {
            return Err(self.error_at(at, format!("{what} needs at least {min} individuals")));
        }
        Ok(items)
    }

    fn opes(&mut self, min: usize, what: &str) -> Result<Vec<ObjectPropertyExpression>, OwlError> {
        let at = self.here();
        let mut items = Vec::new();
        while *self.peek() != Tok::RParen {
            items.push(self.ope()?);
        }
        if items.len() < min {
            return Err(self.error_at(at, format!("{what} needs at least {min} property expressions")));
        }
        Ok(items)
    }

    fn class_expression(&mut self) -> Result<ClassExpression, OwlError> {
        if !self.at_construct() {
            return Ok(ClassExpression::Class(self.entity(EntityKind::Class)?));
        }
        let (kw, at) = self.keyword()?;
        self.open()?;
        let ce = match kw.as_str() {
            "ObjectIntersectionOf" => ClassExpression::IntersectionOf(self.class_expressions(2, &kw)?),
            "ObjectUnionOf" => ClassExpression::UnionOf(self.class_expressions(2, &kw)?),
            "ObjectComplementOf" => ClassExpression::ComplementOf(Box::new(self.class_expression()?)),
            "ObjectOneOf" => ClassExpression::OneOf(self.individuals(1, &kw)?),
            "ObjectSomeValuesFrom" => {
                let p = self.ope()?;
                ClassExpression::SomeValuesFrom(p, Box::new(self.class_expression()?))
            }
            "ObjectAllValuesFrom" => {
                let p = self.ope()?;
                ClassExpression::AllValuesFrom(p, Box::new(self.class_expression()?))
            }
            "ObjectHasValue" => {
                let p = self.ope()?;
                ClassExpression::HasValue(p, self.individual()?)
            }
            "ObjectHasSelf" => ClassExpression::HasSelf(self.ope()?),
            "ObjectMinCardinality" | "ObjectMaxCardinality" | "ObjectExactCardinality" => {
                let n = self.count()?;
                let p = self.ope()?;
                let filler =
                    if *self.peek() == Tok::RParen { None } else { Some(Box::new(self.class_expression()?)) };
                match kw.as_str() {
                    "ObjectMinCardinality" => ClassExpression::MinCardinality(n, p, filler),
                    "ObjectMaxCardinality" => ClassExpression::MaxCardinality(n, p, filler),
                    _ => ClassExpression::ExactCardinality(n, p, filler),
                }
            }
            "DataSomeValuesFrom" | "DataAllValuesFrom" => {
                let dp = self.data_property()?;
                if self.at_iri() && !matches!(self.peek2(), Tok::RParen) {
                    return Err(OwlError::UnknownConstruct {
                        name: format!("{kw} over several data properties"),
                        line: at.0,
                        column: at.1,
                    });
                }
                let range = self.data_range()?;
                if kw == "DataSomeValuesFrom" {
                    ClassExpression::DataSomeValuesFrom(dp, range)
                } else {
                    ClassExpression::DataAllValuesFrom(dp, range)
                }
            }
            "DataHasValue" => {
                let dp = self.data_property()?;
                ClassExpression::DataHasValue(dp, self.literal()?)
            }
            _ => return Err(OwlError::UnknownConstruct { name: kw, line: at.0, column: at.1 }),
        };
        self.close()?;
        Ok(ce)
    }

    fn axiom(&mut self) -> Result<Option<Axiom>, OwlError> {
        let (kw, at) = self.keyword()?;
        self.open()?;
        self.skip_annotations()?;
        self.logical = !matches!(kw.as_str(), "Declaration" | "AnnotationAssertion");
        let ax = match kw.as_str() {
            "Declaration" => {
                let (kind_word, kat) = self.keyword()?;
                let kind = EntityKind::from_keyword(&kind_word).ok_or(OwlError::UnknownConstruct {
                    name: kind_word,
                    line: kat.0,
                    column: kat.1,
                })?;
                self.open()?;
                let (iri, iat) = self.iri()?;
                self.use_entity(&iri, kind, iat, true)?;
                self.close()?;
                Axiom::Declaration(Entity::new(kind, iri))
            }
            "SubClassOf" => {
                let sub = self.class_expression()?;
                Axiom::SubClassOf(sub, self.class_expression()?)
            }
            "EquivalentClasses" => Axiom::EquivalentClasses(self.class_expressions(2, &kw)?),
            "DisjointClasses" => Axiom::DisjointClasses(self.class_expressions(2, &kw)?),
            "DisjointUnion" => {
                let c = self.entity(EntityKind::Class)?;
                Axiom::DisjointUnion(c, self.class_expressions(2, &kw)?)
            }
            "SubObjectPropertyOf" => {
                let sub = if matches!(self.peek(), Tok::Word(w) if w == "ObjectPropertyChain") {
                    self.next();
                    self.open()?;
                    let chain = self.opes(2, "ObjectPropertyChain")?;
                    self.close()?;
                    SubObjectProperty::Chain(chain)
                } else {
                    SubObjectProperty::Expression(self.ope()?)
                };
                Axiom::SubObjectPropertyOf(sub, self.ope()?)
            }
            "EquivalentObjectProperties" => Axiom::EquivalentObjectProperties(self.opes(2, &kw)?),
            "DisjointObjectProperties" => Axiom::DisjointObjectProperties(self.opes(2, &kw)?),
            "InverseObjectProperties" => {
                let p = self.ope()?;
                Axiom::InverseObjectProperties(p, self.ope()?)
            }
            "ObjectPropertyDomain" => {
                let p = self.ope()?;
                Axiom::ObjectPropertyDomain(p, self.class_expression()?)
            }
            "ObjectPropertyRange" => {
                let p = self.ope()?;
                Axiom::ObjectPropertyRange(p, self.class_expression()?)
            }
            "FunctionalObjectProperty" => Axiom::FunctionalObjectProperty(self.ope()?),
            "InverseFunctionalObjectProperty" => Axiom::InverseFunctionalObjectProperty(self.ope()?),
            "ReflexiveObjectProperty" => Axiom::ReflexiveObjectProperty(self.ope()?),
            "IrreflexiveObjectProperty" => Axiom::IrreflexiveObjectProperty(self.ope()?),
            "SymmetricObjectProperty" => Axiom::SymmetricObjectProperty(self.ope()?),
            "AsymmetricObjectProperty" => Axiom::AsymmetricObjectProperty(self.ope()?),
            "TransitiveObjectProperty" => Axiom::TransitiveObjectProperty(self.ope()?),
            "SubDataPropertyOf" => {
                let p = self.data_property()?;
                Axiom::SubDataPropertyOf(p, self.data_property()?)
            }
            "DataPropertyDomain" => {
                let p = self.data_property()?;
                Axiom::DataPropertyDomain(p, self.class_expression()?)
            }
            "DataPropertyRange" => {
                let p = self.data_property()?;
                Axiom::DataPropertyRange(p, self.data_range()?)
            }
            "FunctionalDataProperty" => Axiom::FunctionalDataProperty(self.data_property()?),
            "ClassAssertion" => {
                let c = self.class_expression()?;
                Axiom::ClassAssertion(c, self.individual()?)
            }
            "ObjectPropertyAssertion" | "NegativeObjectPropertyAssertion" => {
                let p = self.ope()?;
                let a = self.individual()?;
                let b = self.individual()?;
                if kw == "ObjectPropertyAssertion" {
                    Axiom::ObjectPropertyAssertion(p, a, b)
                } else {
                    Axiom::NegativeObjectPropertyAssertion(p, a, b)
                }
            }
            "DataPropertyAssertion" => {
                let p = self.data_property()?;
                let a = self.individual()?;
                Axiom::DataPropertyAssertion(p, a, self.literal()?)
            }
            "SameIndividual" => Axiom::SameIndividual(self.individuals(2, &kw)?),
            "DifferentIndividuals" => Axiom::DifferentIndividuals(self.individuals(2, &kw)?),
            "AnnotationAssertion" => {
                let property = self.entity(EntityKind::AnnotationProperty)?;
                let subject = self.iri()?.0;
                let value = self.annotation_value()?;
                Axiom::AnnotationAssertion(AnnotationAssertion { property, subject, value })
            }
            // Annotation-property axioms carry no logical content and are dropped.
            "SubAnnotationPropertyOf" | "AnnotationPropertyDomain" | "AnnotationPropertyRange" => {
                self.iri()?;
                self.iri()?;
                self.close()?;
                return Ok(None);
            }
            _ => return Err(OwlError::UnknownConstruct { name: kw, line: at.0, column: at.1 }),
        };
        self.close()?;
        Ok(Some(ax))
    }
}
