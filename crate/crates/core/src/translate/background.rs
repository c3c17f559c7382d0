use crate::fol::{Formula, Term, TptpUnit};
use crate::owl::Literal;

use super::{BOTTOM_OP, IDATA, IOBJ, NOTHING, THING, TOP_OP};

/// What the background theory has to mention. Symbols are FOL spellings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BackgroundInputs {
    pub uses_data_domain: bool,
    pub individuals: Vec<String>,
    /// Literal constants with the literal they denote.
    pub literals: Vec<(String, Literal)>,
    /// Datatype predicates (excluding `rdfs:Literal`, which is `idata`).
    pub datatypes: Vec<String>,
    pub classes: Vec<String>,
    pub object_properties: Vec<String>,
    pub data_properties: Vec<String>,
    pub top_op: bool,
    pub bottom_op: bool,
}

impl BackgroundInputs {
    pub fn new(uses_data_domain: bool) -> Self {
        BackgroundInputs { uses_data_domain, ..Default::default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BackgroundTheory {
    pub units: Vec<TptpUnit>,
}

fn x() -> Term {
    Term::var("X")
}

fn y() -> Term {
    Term::var("Y")
}

fn p1(name: &str, t: Term) -> Formula {
    Formula::pred(name, vec![t])
}

fn all_x(body: Formula) -> Formula {
    Formula::forall(vec!["X".into()], body)
}

fn all_xy(body: Formula) -> Formula {
    Formula::forall(vec!["X".into(), "Y".into()], body)
}

/// Axioms fixing the reserved vocabulary and the object/data domain split.
/// Every unit name starts with `bg_`.
pub fn background_theory(inputs: &BackgroundInputs) -> BackgroundTheory {
    let mut units = Vec::new();
    let mut push = |name: String, f: Formula| units.push(TptpUnit::axiom(name, f));

    push("bg_nothing".into(), all_x(Formula::not(p1(NOTHING, x()))));
    push("bg_thing".into(), all_x(Formula::iff(p1(THING, x()), p1(IOBJ, x()))));
    if !inputs.uses_data_domain {
        push("bg_object_domain".into(), all_x(p1(IOBJ, x())));
    } else {
        push(
            "bg_domains_disjoint".into(),
            all_x(Formula::not(Formula::And(vec![p1(IOBJ, x()), p1(IDATA, x())]))),
        );
        push("bg_domains_cover".into(), all_x(Formula::Or(vec![p1(IOBJ, x()), p1(IDATA, x())])));
        for (i, ind) in inputs.individuals.iter().enumerate() {
            push(format!("bg_individual_{i}"), p1(IOBJ, Term::constant(ind)));
        }
        for (i, (sym, _)) in inputs.literals.iter().enumerate() {
            push(format!("bg_literal_{i}"), p1(IDATA, Term::constant(sym)));
        }
        for (i, (sym, lit)) in inputs.literals.iter().enumerate() {
            let dt = super::iri_symbol(&crate::owl::Iri::new(lit.effective_datatype()).expect("valid datatype"));
            push(format!("bg_literal_type_{i}"), p1(&dt, Term::constant(sym)));
        }
        let mut k = 0;
        for (i, (a, la)) in inputs.literals.iter().enumerate() {
            for (b, lb) in &inputs.literals[i + 1..] {
                if la.effective_datatype() == lb.effective_datatype() && la.lexical != lb.lexical {
                    push(format!("bg_distinct_{k}"), Formula::neq(Term::constant(a), Term::constant(b)));
                    k += 1;
                }
            }
        }
        for (i, dt) in inputs.datatypes.iter().enumerate() {
            push(format!("bg_datatype_{i}"), all_x(Formula::implies(p1(dt, x()), p1(IDATA, x()))));
        }
        for (i, c) in inputs.classes.iter().enumerate() {
            push(format!("bg_class_{i}"), all_x(Formula::implies(p1(c, x()), p1(IOBJ, x()))));
        }
        for (i, r) in inputs.object_properties.iter().enumerate() {
            push(
                format!("bg_object_property_{i}"),
                all_xy(Formula::implies(
                    Formula::pred(r, vec![x(), y()]),
                    Formula::And(vec![p1(IOBJ, x()), p1(IOBJ, y())]),
                )),
            );
        }
        for (i, r) in inputs.data_properties.iter().enumerate() {
            push(
                format!("bg_data_property_{i}"),
                all_xy(Formula::implies(
                    Formula::pred(r, vec![x(), y()]),
                    Formula::And(vec![p1(IOBJ, x()), p1(IDATA, y())]),
                )),
            );
        }
    }
    if inputs.top_op {
        push(
            "bg_top_op".into(),
            all_xy(Formula::iff(
                Formula::pred(TOP_OP, vec![x(), y()]),
                Formula::And(vec![p1(IOBJ, x()), p1(IOBJ, y())]),
            )),
        );
    }
    if inputs.bottom_op {
        push("bg_bottom_op".into(), all_xy(Formula::not(Formula::pred(BOTTOM_OP, vec![x(), y()]))));
    }
    BackgroundTheory { units }
}
