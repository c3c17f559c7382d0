use std::fmt::Write as _;

use super::{
    AnnotationValue, Axiom, ClassExpression, DataRange, Iri, Literal, ObjectPropertyExpression, OntologyDocument,
    SubObjectProperty,
};

/// Renders a document in functional-style syntax with full IRIs throughout.
/// Declared prefixes are kept so a reparse reproduces the prefix map.
pub fn print_ontology(doc: &OntologyDocument) -> String {
    let mut out = String::new();
    for (name, iri) in &doc.prefixes {
        let _ = writeln!(out, "Prefix({name}:=<{iri}>)");
    }
    out.push_str("Ontology(");
    if let Some(iri) = &doc.ontology_iri {
        let _ = write!(out, "<{iri}>");
        if let Some(v) = &doc.version_iri {
            let _ = write!(out, " <{v}>");
        }
    }
    out.push('\n');
    for imp in &doc.imports {
        let _ = writeln!(out, "Import(<{imp}>)");
    }
    for ax in &doc.axioms {
        out.push_str("    ");
        axiom(&mut out, ax);
        out.push('\n');
    }
    out.push_str(")\n");
    out
}

fn iri(out: &mut String, i: &Iri) {
    out.push('<');
    out.push_str(i.as_str());
    out.push('>');
}

fn iris(out: &mut String, items: &[Iri]) {
    for (n, i) in items.iter().enumerate() {
        if n > 0 {
            out.push(' ');
        }
        iri(out, i);
    }
}

pub(crate) fn literal(out: &mut String, lit: &Literal) {
    out.push('"');
    for c in lit.lexical.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    if let Some(dt) = &lit.datatype {
        out.push_str("^^");
        iri(out, dt);
    } else if let Some(lang) = &lit.lang {
        out.push('@');
        out.push_str(lang);
    }
}

fn ope(out: &mut String, p: &ObjectPropertyExpression) {
    match p {
        ObjectPropertyExpression::Named(i) => iri(out, i),
        ObjectPropertyExpression::Inverse(i) => {
            out.push_str("ObjectInverseOf(");
            iri(out, i);
            out.push(')');
        }
    }
}

fn opes(out: &mut String, items: &[ObjectPropertyExpression]) {
    for (n, p) in items.iter().enumerate() {
        if n > 0 {
            out.push(' ');
        }
        ope(out, p);
    }
}

fn data_range(out: &mut String, r: &DataRange) {
    match r {
        DataRange::Datatype(i) => iri(out, i),
        DataRange::OneOf(lits) => {
            out.push_str("DataOneOf(");
            for (n, l) in lits.iter().enumerate() {
                if n > 0 {
                    out.push(' ');
                }
                literal(out, l);
            }
            out.push(')');
        }
    }
}

fn ces(out: &mut String, items: &[ClassExpression]) {
    for (n, c) in items.iter().enumerate() {
        if n > 0 {
            out.push(' ');
        }
        class_expression(out, c);
    }
}

pub(crate) fn class_expression(out: &mut String, ce: &ClassExpression) {
    let wrap = |out: &mut String, kw: &str, body: &dyn Fn(&mut String)| {
        out.push_str(kw);
        out.push('(');
        body(out);
        out.push(')');
    };
    match ce {
        ClassExpression::Class(i) => iri(out, i),
        ClassExpression::IntersectionOf(items) => wrap(out, "ObjectIntersectionOf", &|o| ces(o, items)),
        ClassExpression::UnionOf(items) => wrap(out, "ObjectUnionOf", &|o| ces(o, items)),
        ClassExpression::ComplementOf(c) => wrap(out, "ObjectComplementOf", &|o| class_expression(o, c)),
        ClassExpression::OneOf(items) => wrap(out, "ObjectOneOf", &|o| iris(o, items)),
        ClassExpression::SomeValuesFrom(p, c) | ClassExpression::AllValuesFrom(p, c) => {
            let kw = if matches!(ce, ClassExpression::SomeValuesFrom(..)) {
                "ObjectSomeValuesFrom"
            } else {
                "ObjectAllValuesFrom"
            };
            wrap(out, kw, &|o| {
                ope(o, p);
                o.push(' ');
                class_expression(o, c);
            })
        }
        ClassExpression::HasValue(p, a) => wrap(out, "ObjectHasValue", &|o| {
            ope(o, p);
            o.push(' ');
            iri(o, a);
        }),
        ClassExpression::HasSelf(p) => wrap(out, "ObjectHasSelf", &|o| ope(o, p)),
        ClassExpression::MinCardinality(n, p, f)
        | ClassExpression::MaxCardinality(n, p, f)
        | ClassExpression::ExactCardinality(n, p, f) => {
            let kw = match ce {
                ClassExpression::MinCardinality(..) => "ObjectMinCardinality",
                ClassExpression::MaxCardinality(..) => "ObjectMaxCardinality",
                _ => "ObjectExactCardinality",
            };
            wrap(out, kw, &|o| {
                let _ = write!(o, "{n} ");
                ope(o, p);
                if let Some(f) = f {
                    o.push(' ');
                    class_expression(o, f);
                }
            })
        }
        ClassExpression::DataSomeValuesFrom(p, r) | ClassExpression::DataAllValuesFrom(p, r) => {
            let kw = if matches!(ce, ClassExpression::DataSomeValuesFrom(..)) {
                "DataSomeValuesFrom"
            } else {
                "DataAllValuesFrom"
            };
            wrap(out, kw, &|o| {
                iri(o, p);
                o.push(' ');
                data_range(o, r);
            })
        }
        ClassExpression::DataHasValue(p, l) => wrap(out, "DataHasValue", &|o| {
            iri(o, p);
            o.push(' ');
            literal(o, l);
        }),
    }
}

pub(crate) fn axiom(out: &mut String, ax: &Axiom) {
    out.push_str(ax.kind_name());
    out.push('(');
    match ax {
        Axiom::Declaration(e) => {
            let _ = write!(out, "{}(<{}>)", e.kind.keyword(), e.iri);
        }
        Axiom::SubClassOf(a, b) => {
            class_expression(out, a);
            out.push(' ');
            class_expression(out, b);
        }
        Axiom::EquivalentClasses(items) | Axiom::DisjointClasses(items) => ces(out, items),
        Axiom::DisjointUnion(c, items) => {
            iri(out, c);
            out.push(' ');
            ces(out, items);
        }
        Axiom::SubObjectPropertyOf(sub, sup) => {
            match sub {
                SubObjectProperty::Expression(p) => ope(out, p),
                SubObjectProperty::Chain(chain) => {
                    out.push_str("ObjectPropertyChain(");
                    opes(out, chain);
                    out.push(')');
                }
            }
            out.push(' ');
            ope(out, sup);
        }
        Axiom::EquivalentObjectProperties(items) | Axiom::DisjointObjectProperties(items) => opes(out, items),
        Axiom::InverseObjectProperties(p, q) => {
            ope(out, p);
            out.push(' ');
            ope(out, q);
        }
        Axiom::ObjectPropertyDomain(p, c) | Axiom::ObjectPropertyRange(p, c) => {
            ope(out, p);
            out.push(' ');
            class_expression(out, c);
        }
        Axiom::FunctionalObjectProperty(p)
        | Axiom::InverseFunctionalObjectProperty(p)
        | Axiom::ReflexiveObjectProperty(p)
        | Axiom::IrreflexiveObjectProperty(p)
        | Axiom::SymmetricObjectProperty(p)
        | Axiom::AsymmetricObjectProperty(p)
        | Axiom::TransitiveObjectProperty(p) => ope(out, p),
        Axiom::SubDataPropertyOf(p, q) => {
            iri(out, p);
            out.push(' ');
            iri(out, q);
        }
        Axiom::DataPropertyDomain(p, c) => {
            iri(out, p);
            out.push(' ');
            class_expression(out, c);
        }
        Axiom::DataPropertyRange(p, r) => {
            iri(out, p);
            out.push(' ');
            data_range(out, r);
        }
        Axiom::FunctionalDataProperty(p) => iri(out, p),
        Axiom::ClassAssertion(c, a) => {
            class_expression(out, c);
            out.push(' ');
            iri(out, a);
        }
        Axiom::ObjectPropertyAssertion(p, a, b) | Axiom::NegativeObjectPropertyAssertion(p, a, b) => {
            ope(out, p);
            out.push(' ');
            iri(out, a);
            out.push(' ');
            iri(out, b);
        }
        Axiom::DataPropertyAssertion(p, a, l) => {
            iri(out, p);
            out.push(' ');
            iri(out, a);
            out.push(' ');
            literal(out, l);
        }
        Axiom::SameIndividual(items) | Axiom::DifferentIndividuals(items) => iris(out, items),
        Axiom::AnnotationAssertion(a) => {
            iri(out, &a.property);
            out.push(' ');
            iri(out, &a.subject);
            out.push(' ');
            match &a.value {
                AnnotationValue::Literal(l) => literal(out, l),
                AnnotationValue::Iri(i) => iri(out, i),
            }
        }
    }
    out.push(')');
}

/// One-line functional-syntax rendering of an axiom, for reports.
pub fn axiom_to_string(ax: &Axiom) -> String {
    let mut s = String::new();
    axiom(&mut s, ax);
    s
}
