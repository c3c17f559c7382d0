use std::collections::{BTreeMap, HashSet};

use proptest::prelude::*;

use super::*;
use crate::fol::finite::{find_model, Model};
use crate::fol::UnitRole;
use crate::owl::{parse_ontology, ParseMode, XSD_INTEGER};

const NS: &str = "http://x.org/";

fn iri(local: &str) -> Iri {
    Iri::new(format!("{NS}{local}")).unwrap()
}

fn sym(local: &str) -> String {
    format!("<{NS}{local}>")
}

fn class(local: &str) -> ClassExpression {
    ClassExpression::Class(iri(local))
}

fn role(local: &str) -> ObjectPropertyExpression {
    ObjectPropertyExpression::Named(iri(local))
}

fn doc(body: &str) -> OntologyDocument {
    parse_ontology(&format!("Prefix(:=<{NS}>) Ontology({body})"), ParseMode::Lenient).unwrap()
}

fn translated_units(problem: &TptpProblem) -> Vec<&TptpUnit> {
    problem.units.iter().filter(|u| u.name.starts_with("ax_")).collect()
}

#[test]
fn fish_is_an_animal() {
    let d = doc("SubClassOf(:Fish :Animal)");
    let f = translate_axiom(&d.axioms[0]).unwrap();
    let x = Term::var("X");
    let expected = Formula::forall(
        vec!["X".into()],
        Formula::implies(Formula::pred(sym("Fish"), vec![x.clone()]), Formula::pred(sym("Animal"), vec![x])),
    );
    assert_eq!(f, vec![expected]);

    let p = translate_ontology(&d).unwrap();
    let units = translated_units(&p);
    assert_eq!(units.len(), 1);
    assert_eq!(units[0].name, "ax_0_sub_class_of");
    assert!(p.units.iter().filter(|u| !u.name.starts_with("ax_")).all(|u| u.name.starts_with("bg_")));
}

#[test]
fn named_class_at_a_term() {
    let f = translate_class_expression(&class("Fish"), &Term::var("x"), &mut TranslationContext::new()).unwrap();
    assert_eq!(f, Formula::pred(sym("Fish"), vec![Term::var("x")]));
}

#[test]
fn self_intersection() {
    let ce = ClassExpression::IntersectionOf(vec![class("A"), class("A")]);
    let f = translate_class_expression(&ce, &Term::var("x"), &mut TranslationContext::new()).unwrap();
    let a = Formula::pred(sym("A"), vec![Term::var("x")]);
    assert_eq!(f, Formula::And(vec![a.clone(), a]));
}

#[test]
fn empty_document_is_background_only() {
    let p = translate_ontology(&doc("")).unwrap();
    assert!(!p.is_empty());
    assert!(p.units.iter().all(|u| u.name.starts_with("bg_")));
}

#[test]
fn declarations_translate_to_nothing() {
    let d = doc("Declaration(Class(:A)) AnnotationAssertion(rdfs:label :A \"a\")");
    for ax in &d.axioms {
        assert!(translate_axiom(ax).unwrap().is_empty());
    }
}

#[test]
fn property_axiom_shapes() {
    let d = doc(
        "TransitiveObjectProperty(:r) IrreflexiveObjectProperty(:r) AsymmetricObjectProperty(:r) \
         SubObjectPropertyOf(ObjectPropertyChain(:r :s) :t) DifferentIndividuals(:a :b :c)",
    );
    let fs: Vec<String> = d
        .axioms
        .iter()
        .flat_map(|a| translate_axiom(a).unwrap())
        .map(|f| crate::fol::tptp::display_formula(&f))
        .collect();
    let r = format!("'{}'", sym("r"));
    assert!(fs[0].contains(&format!("(({r}(X,Y) & {r}(Y,Z)) => {r}(X,Z))")), "{}", fs[0]);
    assert_eq!(fs[1], format!("! [X] : ~ {r}(X,X)"));
    assert!(fs[2].contains(&format!("({r}(X,Y) => ~ {r}(Y,X))")), "{}", fs[2]);
    assert!(fs[3].contains(&format!("'{}'(X,Z)", sym("t"))), "{}", fs[3]);
    assert_eq!(fs[4].matches("!=").count(), 3);
}

#[test]
fn other_owl_vocabulary_is_rejected() {
    let ax = Axiom::SubClassOf(class("A"), ClassExpression::Class(Iri::new(format!("{OWL}Restriction")).unwrap()));
    assert!(matches!(translate_axiom(&ax), Err(TranslateError::ReservedVocabulary(_))));
}

#[test]
fn reserved_classes_use_reserved_symbols() {
    let d = doc("SubClassOf(:A owl:Thing) SubClassOf(owl:Nothing :A) SubObjectPropertyOf(:r owl:topObjectProperty)");
    let p = translate_ontology(&d).unwrap();
    let names: HashSet<String> = p.symbols().into_iter().map(|s| s.name).collect();
    for s in [THING, NOTHING, TOP_OP] {
        assert!(names.contains(s), "{s}");
    }
    assert!(p.units.iter().any(|u| u.name == "bg_top_op"));
}

#[test]
fn integer_literals_are_distinct() {
    let d = doc(
        "DataPropertyAssertion(:age :a \"1\"^^xsd:integer) DataPropertyAssertion(:age :b \"2\"^^xsd:integer) \
         DataPropertyAssertion(:age :c \"1\"^^xsd:decimal)",
    );
    let p = translate_ontology(&d).unwrap();
    let distinct: Vec<&Formula> =
        p.units.iter().filter(|u| u.name.starts_with("bg_distinct_")).map(|u| &u.formula).collect();
    assert_eq!(distinct, vec![&Formula::neq(Term::constant("lit_1"), Term::constant("lit_2"))]);
    // Every literal constant is typed with its datatype.
    let integer = format!("<{XSD_INTEGER}>");
    assert!(p.units.iter().any(|u| u.formula == Formula::pred(&integer, vec![Term::constant("lit_1")])));
    assert!(p.units.iter().any(|u| u.name == "bg_domains_disjoint"));
}

#[test]
fn object_only_background_has_no_data_axioms() {
    let p = background_theory(&BackgroundInputs::new(false));
    assert!(p.units.iter().all(|u| !u.formula.symbols().iter().any(|s| s.name == IDATA)));
}

#[test]
fn nothing_assertion_has_no_model() {
    let p = translate_ontology(&doc("ClassAssertion(owl:Nothing :a)")).unwrap();
    let fs: Vec<Formula> = p.units.iter().map(|u| u.formula.clone()).collect();
    assert_eq!(find_model(&fs, 3).unwrap(), None);
    let p = translate_ontology(&doc("ClassAssertion(owl:Thing :a)")).unwrap();
    let fs: Vec<Formula> = p.units.iter().map(|u| u.formula.clone()).collect();
    assert!(find_model(&fs, 3).unwrap().is_some());
}

#[test]
fn n_axioms_give_n_units() {
    let d = doc(
        "Declaration(Class(:A)) SubClassOf(:A :B) EquivalentClasses(:A :B :C) DisjointClasses(:A :C) \
         ClassAssertion(:A :a) ObjectPropertyAssertion(:r :a :b) SameIndividual(:a :c) \
         FunctionalObjectProperty(:r) ObjectPropertyRange(:r ObjectUnionOf(:A :B))",
    );
    let n = d.logical_axioms().count();
    assert_eq!(n, 8);
    let p = translate_ontology(&d).unwrap();
    let units = translated_units(&p);
    assert_eq!(units.len(), n);
    assert!(p.units.iter().all(|u| u.role == UnitRole::Axiom));
    assert!(p.duplicate_name().is_none());
    assert_eq!(units[7].name, "ax_7_object_property_range");
}

#[test]
fn min_cardinality_shape() {
    let ce = ClassExpression::MinCardinality(2, role("R"), Some(Box::new(class("C"))));
    let f = translate_class_expression(&ce, &Term::var("x"), &mut TranslationContext::new()).unwrap();
    let x = Term::var("x");
    let (y0, y1) = (Term::var("X0"), Term::var("X1"));
    let expected = Formula::Exists(
        vec!["X0".into(), "X1".into()],
        Box::new(Formula::And(vec![
            Formula::pred(sym("R"), vec![x.clone(), y0.clone()]),
            Formula::pred(sym("C"), vec![y0.clone()]),
            Formula::pred(sym("R"), vec![x, y1.clone()]),
            Formula::pred(sym("C"), vec![y1.clone()]),
            Formula::neq(y0, y1),
        ])),
    );
    assert_eq!(f, expected);
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|i| m & (1 << i) != 0).collect())
}

#[test]
fn min_cardinality_counts_successors() {
    let ce = ClassExpression::MinCardinality(2, role("R"), Some(Box::new(class("C"))));
    let f = translate_class_expression(&ce, &Term::constant("x"), &mut TranslationContext::new()).unwrap();
    let check = |size: usize, x: usize, c_ext: &[usize], r: &[(usize, usize)]| {
        let mut m = Model { size, ..Default::default() };
        m.constants.insert("x".into(), x);
        m.relations.insert(sym("C"), c_ext.iter().map(|&d| vec![d]).collect());
        m.relations.insert(sym("R"), r.iter().map(|&(a, b)| vec![a, b]).collect());
        let successors = r.iter().filter(|(a, b)| *a == x && c_ext.contains(b)).count();
        assert_eq!(m.satisfies(&f).unwrap(), successors >= 2, "size {size} C {c_ext:?} R {r:?}");
    };
    for size in 1..=3 {
        let pairs: Vec<(usize, usize)> = (0..size).flat_map(|a| (0..size).map(move |b| (a, b))).collect();
        for x in 0..size {
            for c in subsets(size) {
                for r in subsets(pairs.len()) {
                    let r: Vec<_> = r.into_iter().map(|i| pairs[i]).collect();
                    check(size, x, &c, &r);
                }
            }
        }
    }
    // Only x's own R-row can affect the formula, so size 4 enumerates rows.
    for c in subsets(4) {
        for row in subsets(4) {
            let r: Vec<_> = row.into_iter().map(|b| (0, b)).collect();
            check(4, 0, &c, &r);
        }
    }
}

fn alpha_unique(f: &Formula, seen: &mut Vec<String>) -> bool {
    match f {
        Formula::Forall(vs, b) | Formula::Exists(vs, b) => {
            for v in vs {
                if seen.contains(v) {
                    return false;
                }
                seen.push(v.clone());
            }
            alpha_unique(b, seen)
        }
        Formula::Not(g) => alpha_unique(g, seen),
        Formula::And(items) | Formula::Or(items) => items.iter().all(|g| alpha_unique(g, seen)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => alpha_unique(a, seen) && alpha_unique(b, seen),
        _ => true,
    }
}

// Independent evaluator for the Direct Semantics on small interpretations.
#[derive(Debug, Clone)]
struct Interp {
    size: usize,
    classes: BTreeMap<&'static str, Vec<bool>>,
    roles: BTreeMap<&'static str, Vec<(usize, usize)>>,
    individuals: BTreeMap<&'static str, usize>,
}

impl Interp {
    fn role(&self, p: &ObjectPropertyExpression, a: usize, b: usize) -> bool {
        let (name, a, b) = match p {
            ObjectPropertyExpression::Named(i) => (i.local_name(), a, b),
            ObjectPropertyExpression::Inverse(i) => (i.local_name(), b, a),
        };
        self.roles.get(name).is_some_and(|r| r.contains(&(a, b)))
    }

    fn member(&self, ce: &ClassExpression, d: usize) -> bool {
        match ce {
            ClassExpression::Class(i) => self.classes.get(i.local_name()).is_some_and(|e| e[d]),
            ClassExpression::IntersectionOf(items) => items.iter().all(|c| self.member(c, d)),
            ClassExpression::UnionOf(items) => items.iter().any(|c| self.member(c, d)),
            ClassExpression::ComplementOf(c) => !self.member(c, d),
            ClassExpression::OneOf(items) => items.iter().any(|i| self.individuals[i.local_name()] == d),
            ClassExpression::SomeValuesFrom(p, c) => (0..self.size).any(|e| self.role(p, d, e) && self.member(c, e)),
            ClassExpression::AllValuesFrom(p, c) => (0..self.size).all(|e| !self.role(p, d, e) || self.member(c, e)),
            ClassExpression::HasValue(p, a) => self.role(p, d, self.individuals[a.local_name()]),
            ClassExpression::HasSelf(p) => self.role(p, d, d),
            ClassExpression::MinCardinality(n, p, f)
            | ClassExpression::MaxCardinality(n, p, f)
            | ClassExpression::ExactCardinality(n, p, f) => {
                let count = (0..self.size)
                    .filter(|&e| self.role(p, d, e) && f.as_deref().map_or(true, |c| self.member(c, e)))
                    .count();
                let n = *n as usize;
                match ce {
                    ClassExpression::MinCardinality(..) => count >= n,
                    ClassExpression::MaxCardinality(..) => count <= n,
                    _ => count == n,
                }
            }
            _ => unreachable!("object fragment only"),
        }
    }

    fn model(&self) -> Model {
        let mut m = Model { size: self.size, ..Default::default() };
        for (c, ext) in &self.classes {
            m.relations.insert(sym(c), (0..self.size).filter(|&d| ext[d]).map(|d| vec![d]).collect());
        }
        for (r, pairs) in &self.roles {
            m.relations.insert(sym(r), pairs.iter().map(|&(a, b)| vec![a, b]).collect());
        }
        for (i, d) in &self.individuals {
            m.constants.insert(sym(i), *d);
        }
        m.relations.insert(THING.into(), (0..self.size).map(|d| vec![d]).collect());
        m.relations.insert(IOBJ.into(), (0..self.size).map(|d| vec![d]).collect());
        m
    }
}

fn arb_class_expression() -> impl Strategy<Value = ClassExpression> {
    let leaf = prop_oneof![
        Just(class("A")),
        Just(class("B")),
        prop::sample::subsequence(vec!["a", "b"], 1..=2)
            .prop_map(|v| ClassExpression::OneOf(v.into_iter().map(iri).collect())),
        prop_oneof![Just(role("R")), Just(role("S"))].prop_map(ClassExpression::HasSelf),
        prop_oneof![Just("a"), Just("b")].prop_map(|a| ClassExpression::HasValue(role("R"), iri(a))),
    ];
    let ope = prop_oneof![
        Just(role("R")),
        Just(role("S")),
        Just(ObjectPropertyExpression::Inverse(iri("R")))
    ];
    leaf.prop_recursive(3, 16, 3, move |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..3).prop_map(ClassExpression::IntersectionOf),
            prop::collection::vec(inner.clone(), 1..3).prop_map(ClassExpression::UnionOf),
            inner.clone().prop_map(|c| ClassExpression::ComplementOf(Box::new(c))),
            (ope.clone(), inner.clone()).prop_map(|(p, c)| ClassExpression::SomeValuesFrom(p, Box::new(c))),
            (ope.clone(), inner.clone()).prop_map(|(p, c)| ClassExpression::AllValuesFrom(p, Box::new(c))),
            (0u32..3, ope.clone(), prop::option::of(inner.clone()), 0..3usize).prop_map(|(n, p, f, k)| {
                let f = f.map(Box::new);
                match k {
                    0 => ClassExpression::MinCardinality(n, p, f),
                    1 => ClassExpression::MaxCardinality(n, p, f),
                    _ => ClassExpression::ExactCardinality(n, p, f),
                }
            }),
        ]
    })
}

fn arb_interp() -> impl Strategy<Value = Interp> {
    (1usize..=3).prop_flat_map(|size| {
        let ext = prop::collection::vec(any::<bool>(), size);
        let pairs = prop::collection::vec((0..size, 0..size), 0..=size * size);
        (ext.clone(), ext, pairs.clone(), pairs, 0..size, 0..size, 0..size).prop_map(
            move |(a, b, r, s, ia, ib, d)| {
                let mut i = Interp {
                    size,
                    classes: BTreeMap::from([("A", a), ("B", b)]),
                    roles: BTreeMap::from([("R", r), ("S", s)]),
                    individuals: BTreeMap::from([("a", ia), ("b", ib)]),
                };
                // Stash the evaluation point as individual `x`.
                i.individuals.insert("x", d);
                i
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn class_membership_agrees_with_direct_semantics(ce in arb_class_expression(), i in arb_interp()) {
        let x = Term::constant(sym("x"));
        let f = translate_class_expression(&ce, &x, &mut TranslationContext::new()).unwrap();
        prop_assert!(f.is_closed());
        prop_assert!(alpha_unique(&f, &mut Vec::new()));
        let d = i.individuals["x"];
        prop_assert_eq!(i.model().satisfies(&f).unwrap(), i.member(&ce, d));
    }

    #[test]
    fn axioms_are_closed_and_alpha_unique(c in arb_class_expression(), d in arb_class_expression(), k in 0..6usize) {
        let ax = match k {
            0 => Axiom::SubClassOf(c, d),
            1 => Axiom::EquivalentClasses(vec![c, d, class("A")]),
            2 => Axiom::DisjointClasses(vec![c, d]),
            3 => Axiom::ClassAssertion(c, iri("a")),
            4 => Axiom::ObjectPropertyDomain(role("R"), c),
            _ => Axiom::DisjointUnion(iri("A"), vec![c, d]),
        };
        for f in translate_axiom(&ax).unwrap() {
            prop_assert!(f.is_closed());
            prop_assert!(alpha_unique(&f, &mut Vec::new()));
        }
    }

    #[test]
    fn data_mode_translations_are_closed(c in arb_class_expression()) {
        let mut tr = Translator::new(true);
        let ax = Axiom::SubClassOf(c, ClassExpression::DataHasValue(iri("age"), Literal::plain("5")));
        let f = tr.axiom(&ax).unwrap().unwrap();
        prop_assert!(f.is_closed());
        for u in tr.background().units {
            prop_assert!(u.formula.is_closed());
        }
    }
}

// Candidate axioms of the finite fragment: named classes A and B,
// individuals a and b, one property R.
fn fragment_pool() -> Vec<Axiom> {
    let a = || class("A");
    let b = || class("B");
    vec![
        Axiom::SubClassOf(a(), b()),
        Axiom::SubClassOf(b(), a()),
        Axiom::DisjointClasses(vec![a(), b()]),
        Axiom::ClassAssertion(a(), iri("a")),
        Axiom::ClassAssertion(b(), iri("a")),
        Axiom::ClassAssertion(a(), iri("b")),
        Axiom::ClassAssertion(b(), iri("b")),
        Axiom::ObjectPropertyAssertion(role("R"), iri("a"), iri("b")),
        Axiom::ObjectPropertyAssertion(role("R"), iri("b"), iri("a")),
        Axiom::SubClassOf(a(), ClassExpression::ComplementOf(Box::new(a()))),
        Axiom::DisjointClasses(vec![a(), a()]),
    ]
}

fn named(c: &ClassExpression) -> &str {
    match c {
        ClassExpression::Class(i) => i.local_name(),
        ClassExpression::ComplementOf(_) => "~",
        _ => unreachable!(),
    }
}

/// Direct-Semantics satisfiability of a fragment ontology by enumerating
/// every interpretation with at most three elements, bit-packed.
fn fragment_satisfiable(axioms: &[&Axiom]) -> bool {
    for size in 1..=3usize {
        let full = (1u32 << size) - 1;
        for ia in 0..size {
            for ib in 0..size {
                for ea in 0..=full {
                    for eb in 0..=full {
                        for r in 0u32..1 << (size * size) {
                            let ext = |c: &str| if c == "A" { ea } else { eb };
                            let holds = |ax: &&Axiom| match ax {
                                Axiom::SubClassOf(c, ClassExpression::ComplementOf(d)) => {
                                    ext(named(c)) & ext(named(d)) == 0
                                }
                                Axiom::SubClassOf(c, d) => ext(named(c)) & !ext(named(d)) & full == 0,
                                Axiom::DisjointClasses(cs) => ext(named(&cs[0])) & ext(named(&cs[1])) == 0,
                                Axiom::ClassAssertion(c, i) => {
                                    let d = if i.local_name() == "a" { ia } else { ib };
                                    ext(named(c)) & (1 << d) != 0
                                }
                                Axiom::ObjectPropertyAssertion(_, s, o) => {
                                    let d = |i: &Iri| if i.local_name() == "a" { ia } else { ib };
                                    r & (1 << (d(s) * size + d(o))) != 0
                                }
                                _ => unreachable!(),
                            };
                            if axioms.iter().all(holds) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
    false
}

#[test]
fn fragment_models_agree_exhaustively() {
    let pool = fragment_pool();
    let mut checked = 0;
    let mut unsat = 0;
    for mask in 0u32..1 << pool.len() {
        if mask.count_ones() > 4 {
            continue;
        }
        let axioms: Vec<&Axiom> = (0..pool.len()).filter(|i| mask & (1 << i) != 0).map(|i| &pool[i]).collect();
        let mut tr = Translator::new(false);
        let mut fs: Vec<Formula> = axioms.iter().map(|a| tr.axiom(a).unwrap().unwrap()).collect();
        fs.extend(tr.background().units.into_iter().map(|u| u.formula));
        let expected = fragment_satisfiable(&axioms);
        let found = find_model(&fs, 3).unwrap();
        assert_eq!(found.is_some(), expected, "{axioms:?}");
        if let Some(m) = found {
            for f in &fs {
                assert!(m.satisfies(f).unwrap());
            }
        }
        checked += 1;
        unsat += usize::from(!expected);
    }
    assert_eq!(checked, 1 + 11 + 55 + 165 + 330);
    assert!(unsat > 50, "pool should produce a fair share of inconsistent ontologies ({unsat})");
}
