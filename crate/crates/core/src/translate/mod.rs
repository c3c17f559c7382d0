//! OWL axioms to first-order formulas, following the Direct Semantics.
//!
//! Entities become predicates and constants spelled `<iri>`. The reserved
//! vocabulary maps to `thing`, `nothing`, `top_op` and `bottom_op`; the
//! object/data domain split uses `iobj` and `idata`; literals become
//! `lit_*` constants.

mod background;
mod literals;

use indexmap::IndexSet;
use thiserror::Error;

use crate::fol::{Formula, Term, TptpProblem, TptpUnit};
use crate::owl::{
    Axiom, ClassExpression, DataRange, Iri, Literal, ObjectPropertyExpression, OntologyDocument, SubObjectProperty,
    OWL, OWL_BOTTOM_OBJECT_PROPERTY, OWL_NOTHING, OWL_THING, OWL_TOP_OBJECT_PROPERTY, RDFS_LITERAL,
};

pub use background::{background_theory, BackgroundInputs, BackgroundTheory};
pub use literals::LiteralTable;

pub const THING: &str = "thing";
pub const NOTHING: &str = "nothing";
pub const TOP_OP: &str = "top_op";
pub const BOTTOM_OP: &str = "bottom_op";
pub const IOBJ: &str = "iobj";
pub const IDATA: &str = "idata";

/// Symbols the translation owns. Readable-name generation must avoid them.
pub fn is_reserved_symbol(name: &str) -> bool {
    matches!(name, THING | NOTHING | TOP_OP | BOTTOM_OP | IOBJ | IDATA) || name.starts_with("lit_")
}

/// FOL spelling of an entity IRI.
pub fn iri_symbol(iri: &Iri) -> String {
    format!("<{}>", iri.as_str())
}

/// The IRI inside a `<iri>` symbol.
pub fn symbol_iri(symbol: &str) -> Option<&str> {
    symbol.strip_prefix('<')?.strip_suffix('>').filter(|s| !s.is_empty())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslateError {
    #[error("unsupported construct: {0}")]
    Unsupported(String),
    #[error("reserved vocabulary <{0}> has no translation")]
    ReservedVocabulary(String),
}

/// Fresh-variable supply for one axiom.
#[derive(Clone, Debug, Default)]
pub struct TranslationContext {
    counter: usize,
}

impl TranslationContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> String {
        let v = format!("X{}", self.counter);
        self.counter += 1;
        v
    }
}

/// Translation state shared by every axiom of one problem: the literal
/// table and the record of symbols the background theory must cover.
#[derive(Clone, Debug, Default)]
pub struct Translator {
    data_domain: bool,
    literals: LiteralTable,
    individuals: IndexSet<String>,
    datatypes: IndexSet<String>,
    classes: IndexSet<String>,
    object_properties: IndexSet<String>,
    data_properties: IndexSet<String>,
    top_op: bool,
    bottom_op: bool,
}

/// Whether any logical axiom touches data properties, datatypes or literals.
pub fn uses_data_domain(doc: &OntologyDocument) -> bool {
    fn ce_uses(ce: &ClassExpression) -> bool {
        match ce {
            ClassExpression::DataSomeValuesFrom(..)
            | ClassExpression::DataAllValuesFrom(..)
            | ClassExpression::DataHasValue(..) => true,
            ClassExpression::IntersectionOf(items) | ClassExpression::UnionOf(items) => items.iter().any(ce_uses),
            ClassExpression::ComplementOf(c)
            | ClassExpression::SomeValuesFrom(_, c)
            | ClassExpression::AllValuesFrom(_, c) => ce_uses(c),
            ClassExpression::MinCardinality(_, _, f)
            | ClassExpression::MaxCardinality(_, _, f)
            | ClassExpression::ExactCardinality(_, _, f) => f.as_deref().is_some_and(ce_uses),
            ClassExpression::Class(_)
            | ClassExpression::OneOf(_)
            | ClassExpression::HasValue(..)
            | ClassExpression::HasSelf(_) => false,
        }
    }
    doc.logical_axioms().any(|ax| match ax {
        Axiom::SubDataPropertyOf(..)
        | Axiom::DataPropertyDomain(..)
        | Axiom::DataPropertyRange(..)
        | Axiom::FunctionalDataProperty(_)
        | Axiom::DataPropertyAssertion(..) => true,
        Axiom::SubClassOf(a, b) => ce_uses(a) || ce_uses(b),
        Axiom::EquivalentClasses(items) | Axiom::DisjointClasses(items) | Axiom::DisjointUnion(_, items) => {
            items.iter().any(ce_uses)
        }
        Axiom::ObjectPropertyDomain(_, c) | Axiom::ObjectPropertyRange(_, c) | Axiom::ClassAssertion(c, _) => {
            ce_uses(c)
        }
        _ => false,
    })
}

fn snake_case(kind: &str) -> String {
    let mut out = String::new();
    for (i, c) in kind.chars().enumerate() {
        if c.is_ascii_uppercase() {
            if i > 0 {
                out.push('_');
            }
            out.push(c.to_ascii_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}

/// Unit name of the `n`-th translated axiom.
pub fn axiom_unit_name(n: usize, ax: &Axiom) -> String {
    format!("ax_{n}_{}", snake_case(ax.kind_name()))
}

fn top_vars(k: usize) -> Vec<String> {
    if k <= 3 {
        ["X", "Y", "Z"][..k].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=k).map(|i| format!("V{i}")).collect()
    }
}

fn pairs<T>(items: &[T]) -> impl Iterator<Item = (&T, &T)> {
    items.iter().enumerate().flat_map(move |(i, a)| items[i + 1..].iter().map(move |b| (a, b)))
}

impl Translator {
    pub fn new(data_domain: bool) -> Self {
        Translator { data_domain, ..Default::default() }
    }

    /// A translator whose domain mode suits every document given.
    pub fn for_documents(docs: &[&OntologyDocument]) -> Self {
        Translator::new(docs.iter().any(|d| uses_data_domain(d)))
    }

    pub fn data_domain(&self) -> bool {
        self.data_domain
    }

    pub fn literals(&self) -> &LiteralTable {
        &self.literals
    }

    fn check_reserved(iri: &Iri) -> Result<(), TranslateError> {
        let s = iri.as_str();
        if s.starts_with(OWL)
            && !matches!(s, OWL_THING | OWL_NOTHING | OWL_TOP_OBJECT_PROPERTY | OWL_BOTTOM_OBJECT_PROPERTY)
        {
            return Err(TranslateError::ReservedVocabulary(s.to_string()));
        }
        Ok(())
    }

    fn individual(&mut self, iri: &Iri) -> Result<Term, TranslateError> {
        Self::check_reserved(iri)?;
        let name = iri_symbol(iri);
        self.individuals.insert(name.clone());
        Ok(Term::Constant(name))
    }

    fn literal(&mut self, lit: &Literal) -> Term {
        let dt = lit.effective_datatype();
        self.datatypes.insert(iri_symbol(&Iri::new(dt).expect("datatype IRIs are valid")));
        Term::Constant(self.literals.intern(lit))
    }

    fn class_atom(&mut self, iri: &Iri, t: Term) -> Result<Formula, TranslateError> {
        Self::check_reserved(iri)?;
        Ok(match iri.as_str() {
            OWL_THING => Formula::pred(THING, vec![t]),
            OWL_NOTHING => Formula::pred(NOTHING, vec![t]),
            _ => {
                let name = iri_symbol(iri);
                self.classes.insert(name.clone());
                Formula::Predicate(name, vec![t])
            }
        })
    }

    fn role_atom(&mut self, p: &ObjectPropertyExpression, a: Term, b: Term) -> Result<Formula, TranslateError> {
        let (iri, a, b) = match p {
            ObjectPropertyExpression::Named(i) => (i, a, b),
            ObjectPropertyExpression::Inverse(i) => (i, b, a),
        };
        Self::check_reserved(iri)?;
        let name = match iri.as_str() {
            OWL_TOP_OBJECT_PROPERTY => {
                self.top_op = true;
                TOP_OP.to_string()
            }
            OWL_BOTTOM_OBJECT_PROPERTY => {
                self.bottom_op = true;
                BOTTOM_OP.to_string()
            }
            _ => {
                let name = iri_symbol(iri);
                self.object_properties.insert(name.clone());
                name
            }
        };
        Ok(Formula::Predicate(name, vec![a, b]))
    }

    fn data_atom(&mut self, p: &Iri, a: Term, b: Term) -> Result<Formula, TranslateError> {
        Self::check_reserved(p)?;
        let name = iri_symbol(p);
        self.data_properties.insert(name.clone());
        Ok(Formula::Predicate(name, vec![a, b]))
    }

    fn data_range(&mut self, r: &DataRange, t: Term) -> Result<Formula, TranslateError> {
        Ok(match r {
            DataRange::Datatype(dt) if dt.as_str() == RDFS_LITERAL => Formula::pred(IDATA, vec![t]),
            DataRange::Datatype(dt) => {
                Self::check_reserved(dt)?;
                let name = iri_symbol(dt);
                self.datatypes.insert(name.clone());
                Formula::Predicate(name, vec![t])
            }
            DataRange::OneOf(lits) => {
                let eqs = lits.iter().map(|l| Formula::eq(t.clone(), self.literal(l))).collect();
                Formula::or(eqs)
            }
        })
    }

    /// `[ce]^t`: a formula whose free variables are those of `t`.
    pub fn class_expression(
        &mut self,
        ce: &ClassExpression,
        t: &Term,
        ctx: &mut TranslationContext,
    ) -> Result<Formula, TranslateError> {
        Ok(match ce {
            ClassExpression::Class(iri) => self.class_atom(iri, t.clone())?,
            ClassExpression::IntersectionOf(items) => Formula::and(
                items.iter().map(|c| self.class_expression(c, t, ctx)).collect::<Result<Vec<_>, _>>()?,
            ),
            ClassExpression::UnionOf(items) => Formula::or(
                items.iter().map(|c| self.class_expression(c, t, ctx)).collect::<Result<Vec<_>, _>>()?,
            ),
            ClassExpression::ComplementOf(c) => {
                let inner = Formula::not(self.class_expression(c, t, ctx)?);
                if self.data_domain {
                    Formula::and(vec![Formula::pred(THING, vec![t.clone()]), inner])
                } else {
                    inner
                }
            }
            ClassExpression::OneOf(items) => {
                let eqs = items
                    .iter()
                    .map(|a| Ok(Formula::eq(t.clone(), self.individual(a)?)))
                    .collect::<Result<Vec<_>, TranslateError>>()?;
                Formula::or(eqs)
            }
            ClassExpression::SomeValuesFrom(p, c) => {
                let y = ctx.fresh();
                let yt = Term::Variable(y.clone());
                let r = self.role_atom(p, t.clone(), yt.clone())?;
                let filler = self.class_expression(c, &yt, ctx)?;
                Formula::Exists(vec![y], Box::new(Formula::and(vec![r, filler])))
            }
            ClassExpression::AllValuesFrom(p, c) => {
                let y = ctx.fresh();
                let yt = Term::Variable(y.clone());
                let r = self.role_atom(p, t.clone(), yt.clone())?;
                let filler = self.class_expression(c, &yt, ctx)?;
                Formula::Forall(vec![y], Box::new(Formula::implies(r, filler)))
            }
            ClassExpression::HasValue(p, a) => {
                let a = self.individual(a)?;
                self.role_atom(p, t.clone(), a)?
            }
            ClassExpression::HasSelf(p) => self.role_atom(p, t.clone(), t.clone())?,
            ClassExpression::MinCardinality(n, p, f) => self.min_cardinality(*n, p, f.as_deref(), t, ctx)?,
            ClassExpression::MaxCardinality(n, p, f) => self.max_cardinality(*n, p, f.as_deref(), t, ctx)?,
            ClassExpression::ExactCardinality(n, p, f) => {
                let max = self.max_cardinality(*n, p, f.as_deref(), t, ctx)?;
                if *n == 0 {
                    max
                } else {
                    let min = self.min_cardinality(*n, p, f.as_deref(), t, ctx)?;
                    Formula::and(vec![min, max])
                }
            }
            ClassExpression::DataSomeValuesFrom(dp, r) => {
                let y = ctx.fresh();
                let yt = Term::Variable(y.clone());
                let atom = self.data_atom(dp, t.clone(), yt.clone())?;
                let range = self.data_range(r, yt)?;
                Formula::Exists(vec![y], Box::new(Formula::and(vec![atom, range])))
            }
            ClassExpression::DataAllValuesFrom(dp, r) => {
                let y = ctx.fresh();
                let yt = Term::Variable(y.clone());
                let atom = self.data_atom(dp, t.clone(), yt.clone())?;
                let range = self.data_range(r, yt)?;
                Formula::Forall(vec![y], Box::new(Formula::implies(atom, range)))
            }
            ClassExpression::DataHasValue(dp, lit) => {
                let l = self.literal(lit);
                self.data_atom(dp, t.clone(), l)?
            }
        })
    }

    /// Conjuncts `R(t, y) ∧ [C]^y` for one successor variable.
    fn successor(
        &mut self,
        p: &ObjectPropertyExpression,
        filler: Option<&ClassExpression>,
        t: &Term,
        y: &str,
        ctx: &mut TranslationContext,
    ) -> Result<Vec<Formula>, TranslateError> {
        let yt = Term::var(y);
        let mut out = vec![self.role_atom(p, t.clone(), yt.clone())?];
        if let Some(c) = filler {
            out.push(self.class_expression(c, &yt, ctx)?);
        }
        Ok(out)
    }

    fn min_cardinality(
        &mut self,
        n: u32,
        p: &ObjectPropertyExpression,
        filler: Option<&ClassExpression>,
        t: &Term,
        ctx: &mut TranslationContext,
    ) -> Result<Formula, TranslateError> {
        if n == 0 {
            return Ok(Formula::True);
        }
        let ys: Vec<String> = (0..n).map(|_| ctx.fresh()).collect();
        let mut parts = Vec::new();
        for y in &ys {
            parts.extend(self.successor(p, filler, t, y, ctx)?);
        }
        for (a, b) in pairs(&ys) {
            parts.push(Formula::neq(Term::var(a), Term::var(b)));
        }
        Ok(Formula::Exists(ys, Box::new(Formula::and(parts))))
    }

    fn max_cardinality(
        &mut self,
        n: u32,
        p: &ObjectPropertyExpression,
        filler: Option<&ClassExpression>,
        t: &Term,
        ctx: &mut TranslationContext,
    ) -> Result<Formula, TranslateError> {
        let ys: Vec<String> = (0..=n).map(|_| ctx.fresh()).collect();
        let mut parts = Vec::new();
        for y in &ys {
            parts.extend(self.successor(p, filler, t, y, ctx)?);
        }
        let body = if n == 0 {
            Formula::not(Formula::and(parts))
        } else {
            let eqs = pairs(&ys).map(|(a, b)| Formula::eq(Term::var(a), Term::var(b))).collect();
            Formula::implies(Formula::and(parts), Formula::or(eqs))
        };
        Ok(Formula::Forall(ys, Box::new(body)))
    }

    /// The formula for one logical axiom, `None` for declarations and
    /// annotation assertions. n-ary axioms become one conjunction.
    pub fn axiom(&mut self, ax: &Axiom) -> Result<Option<Formula>, TranslateError> {
        let mut ctx = TranslationContext::new();
        let ctx = &mut ctx;
        let forall = |vars: Vec<String>, body: Formula| Formula::forall(vars, body);
        let f = match ax {
            Axiom::Declaration(_) | Axiom::AnnotationAssertion(_) => return Ok(None),
            Axiom::SubClassOf(c, d) => {
                let (vs, x) = self.one_var();
                let a = self.class_expression(c, &x, ctx)?;
                let b = self.class_expression(d, &x, ctx)?;
                forall(vs, Formula::implies(a, b))
            }
            Axiom::EquivalentClasses(items) => {
                let (vs, x) = self.one_var();
                let mut parts = Vec::new();
                for (c, d) in pairs(items) {
                    let a = self.class_expression(c, &x, ctx)?;
                    let b = self.class_expression(d, &x, ctx)?;
                    parts.push(Formula::iff(a, b));
                }
                forall(vs, Formula::and(parts))
            }
            Axiom::DisjointClasses(items) => {
                let (vs, x) = self.one_var();
                let parts = self.pairwise_disjoint(items, &x, ctx)?;
                forall(vs, Formula::and(parts))
            }
            Axiom::DisjointUnion(c, items) => {
                let (vs, x) = self.one_var();
                let head = self.class_atom(c, x.clone())?;
                let union = Formula::or(
                    items.iter().map(|d| self.class_expression(d, &x, ctx)).collect::<Result<Vec<_>, _>>()?,
                );
                let mut parts = vec![Formula::iff(head, union)];
                parts.extend(self.pairwise_disjoint(items, &x, ctx)?);
                forall(vs, Formula::and(parts))
            }
            Axiom::SubObjectPropertyOf(SubObjectProperty::Expression(p), q) => {
                let vs = top_vars(2);
                let (x, y) = (Term::var(&vs[0]), Term::var(&vs[1]));
                let a = self.role_atom(p, x.clone(), y.clone())?;
                let b = self.role_atom(q, x, y)?;
                forall(vs, Formula::implies(a, b))
            }
            Axiom::SubObjectPropertyOf(SubObjectProperty::Chain(chain), q) => {
                let vs = top_vars(chain.len() + 1);
                let terms: Vec<Term> = vs.iter().map(Term::var).collect();
                let links = chain
                    .iter()
                    .enumerate()
                    .map(|(i, p)| self.role_atom(p, terms[i].clone(), terms[i + 1].clone()))
                    .collect::<Result<Vec<_>, _>>()?;
                let head = self.role_atom(q, terms[0].clone(), terms[chain.len()].clone())?;
                forall(vs, Formula::implies(Formula::and(links), head))
            }
            Axiom::EquivalentObjectProperties(items) => {
                let (vs, x, y) = self.two_vars();
                let mut parts = Vec::new();
                for (p, q) in pairs(items) {
                    let a = self.role_atom(p, x.clone(), y.clone())?;
                    let b = self.role_atom(q, x.clone(), y.clone())?;
                    parts.push(Formula::iff(a, b));
                }
                forall(vs, Formula::and(parts))
            }
            Axiom::DisjointObjectProperties(items) => {
                let (vs, x, y) = self.two_vars();
                let mut parts = Vec::new();
                for (p, q) in pairs(items) {
                    let a = self.role_atom(p, x.clone(), y.clone())?;
                    let b = self.role_atom(q, x.clone(), y.clone())?;
                    parts.push(Formula::not(Formula::And(vec![a, b])));
                }
                forall(vs, Formula::and(parts))
            }
            Axiom::InverseObjectProperties(p, q) => {
                let (vs, x, y) = self.two_vars();
                let a = self.role_atom(p, x.clone(), y.clone())?;
                let b = self.role_atom(q, y, x)?;
                forall(vs, Formula::iff(a, b))
            }
            Axiom::ObjectPropertyDomain(p, c) => {
                let (vs, x, y) = self.two_vars();
                let a = self.role_atom(p, x.clone(), y)?;
                let b = self.class_expression(c, &x, ctx)?;
                forall(vs, Formula::implies(a, b))
            }
            Axiom::ObjectPropertyRange(p, c) => {
                let (vs, x, y) = self.two_vars();
                let a = self.role_atom(p, x, y.clone())?;
                let b = self.class_expression(c, &y, ctx)?;
                forall(vs, Formula::implies(a, b))
            }
            Axiom::FunctionalObjectProperty(p) => {
                let vs = top_vars(3);
                let [x, y, z] = [0, 1, 2].map(|i| Term::var(&vs[i]));
                let a = self.role_atom(p, x.clone(), y.clone())?;
                let b = self.role_atom(p, x, z.clone())?;
                forall(vs, Formula::implies(Formula::And(vec![a, b]), Formula::eq(y, z)))
            }
            Axiom::InverseFunctionalObjectProperty(p) => {
                let vs = top_vars(3);
                let [x, y, z] = [0, 1, 2].map(|i| Term::var(&vs[i]));
                let a = self.role_atom(p, x.clone(), z.clone())?;
                let b = self.role_atom(p, y.clone(), z)?;
                forall(vs, Formula::implies(Formula::And(vec![a, b]), Formula::eq(x, y)))
            }
            Axiom::ReflexiveObjectProperty(p) => {
                let (vs, x) = self.one_var();
                let r = self.role_atom(p, x.clone(), x.clone())?;
                let body =
                    if self.data_domain { Formula::implies(Formula::pred(THING, vec![x]), r) } else { r };
                forall(vs, body)
            }
            Axiom::IrreflexiveObjectProperty(p) => {
                let (vs, x) = self.one_var();
                forall(vs, Formula::not(self.role_atom(p, x.clone(), x)?))
            }
            Axiom::SymmetricObjectProperty(p) => {
                let (vs, x, y) = self.two_vars();
                let a = self.role_atom(p, x.clone(), y.clone())?;
                let b = self.role_atom(p, y, x)?;
                forall(vs, Formula::implies(a, b))
            }
            Axiom::AsymmetricObjectProperty(p) => {
                let (vs, x, y) = self.two_vars();
                let a = self.role_atom(p, x.clone(), y.clone())?;
                let b = self.role_atom(p, y, x)?;
                forall(vs, Formula::implies(a, Formula::not(b)))
            }
            Axiom::TransitiveObjectProperty(p) => {
                let vs = top_vars(3);
                let [x, y, z] = [0, 1, 2].map(|i| Term::var(&vs[i]));
                let a = self.role_atom(p, x.clone(), y.clone())?;
                let b = self.role_atom(p, y, z.clone())?;
                let c = self.role_atom(p, x, z)?;
                forall(vs, Formula::implies(Formula::And(vec![a, b]), c))
            }
            Axiom::SubDataPropertyOf(p, q) => {
                let (vs, x, y) = self.two_vars();
                let a = self.data_atom(p, x.clone(), y.clone())?;
                let b = self.data_atom(q, x, y)?;
                forall(vs, Formula::implies(a, b))
            }
            Axiom::DataPropertyDomain(p, c) => {
                let (vs, x, y) = self.two_vars();
                let a = self.data_atom(p, x.clone(), y)?;
                let b = self.class_expression(c, &x, ctx)?;
                forall(vs, Formula::implies(a, b))
            }
            Axiom::DataPropertyRange(p, r) => {
                let (vs, x, y) = self.two_vars();
                let a = self.data_atom(p, x, y.clone())?;
                let b = self.data_range(r, y)?;
                forall(vs, Formula::implies(a, b))
            }
            Axiom::FunctionalDataProperty(p) => {
                let vs = top_vars(3);
                let [x, y, z] = [0, 1, 2].map(|i| Term::var(&vs[i]));
                let a = self.data_atom(p, x.clone(), y.clone())?;
                let b = self.data_atom(p, x, z.clone())?;
                forall(vs, Formula::implies(Formula::And(vec![a, b]), Formula::eq(y, z)))
            }
            Axiom::ClassAssertion(c, a) => {
                let a = self.individual(a)?;
                self.class_expression(c, &a, ctx)?
            }
            Axiom::ObjectPropertyAssertion(p, a, b) => {
                let (a, b) = (self.individual(a)?, self.individual(b)?);
                self.role_atom(p, a, b)?
            }
            Axiom::NegativeObjectPropertyAssertion(p, a, b) => {
                let (a, b) = (self.individual(a)?, self.individual(b)?);
                Formula::not(self.role_atom(p, a, b)?)
            }
            Axiom::DataPropertyAssertion(p, a, lit) => {
                let a = self.individual(a)?;
                let l = self.literal(lit);
                self.data_atom(p, a, l)?
            }
            Axiom::SameIndividual(items) | Axiom::DifferentIndividuals(items) => {
                let terms = items.iter().map(|i| self.individual(i)).collect::<Result<Vec<_>, _>>()?;
                let same = matches!(ax, Axiom::SameIndividual(_));
                Formula::and(
                    pairs(&terms)
                        .map(|(a, b)| {
                            if same {
                                Formula::eq(a.clone(), b.clone())
                            } else {
                                Formula::neq(a.clone(), b.clone())
                            }
                        })
                        .collect(),
                )
            }
        };
        Ok(Some(f))
    }

    fn one_var(&self) -> (Vec<String>, Term) {
        let vs = top_vars(1);
        let x = Term::var(&vs[0]);
        (vs, x)
    }

    fn two_vars(&self) -> (Vec<String>, Term, Term) {
        let vs = top_vars(2);
        let (x, y) = (Term::var(&vs[0]), Term::var(&vs[1]));
        (vs, x, y)
    }

    fn pairwise_disjoint(
        &mut self,
        items: &[ClassExpression],
        x: &Term,
        ctx: &mut TranslationContext,
    ) -> Result<Vec<Formula>, TranslateError> {
        let mut parts = Vec::new();
        for (c, d) in pairs(items) {
            let a = self.class_expression(c, x, ctx)?;
            let b = self.class_expression(d, x, ctx)?;
            parts.push(Formula::not(Formula::And(vec![a, b])));
        }
        Ok(parts)
    }

    /// Translated units for the logical axioms of `doc`, in document order.
    pub fn document_units(&mut self, doc: &OntologyDocument) -> Result<Vec<TptpUnit>, TranslateError> {
        self.observe(doc);
        let mut units = Vec::new();
        for ax in doc.logical_axioms() {
            if let Some(f) = self.axiom(ax)? {
                units.push(TptpUnit::axiom(axiom_unit_name(units.len(), ax), f));
            }
        }
        Ok(units)
    }

    /// Records the declared individuals of `doc` for the background theory,
    /// so that even unused individuals are typed.
    pub fn observe(&mut self, doc: &OntologyDocument) {
        for (iri, kind) in &doc.entities {
            if *kind == crate::owl::EntityKind::NamedIndividual && Self::check_reserved(iri).is_ok() {
                self.individuals.insert(iri_symbol(iri));
            }
        }
    }

    pub fn background_inputs(&self) -> BackgroundInputs {
        BackgroundInputs {
            uses_data_domain: self.data_domain,
            individuals: self.individuals.iter().cloned().collect(),
            literals: self.literals.entries().map(|(sym, lit)| (sym.to_string(), lit.clone())).collect(),
            datatypes: self.datatypes.iter().cloned().collect(),
            classes: self.classes.iter().cloned().collect(),
            object_properties: self.object_properties.iter().cloned().collect(),
            data_properties: self.data_properties.iter().cloned().collect(),
            top_op: self.top_op,
            bottom_op: self.bottom_op,
        }
    }

    pub fn background(&self) -> BackgroundTheory {
        background_theory(&self.background_inputs())
    }
}

/// `[ce]^t` with a translator of its own (object domain only).
pub fn translate_class_expression(
    ce: &ClassExpression,
    t: &Term,
    ctx: &mut TranslationContext,
) -> Result<Formula, TranslateError> {
    Translator::new(false).class_expression(ce, t, ctx)
}

/// Formulas for one axiom: one for logical axioms, none otherwise.
pub fn translate_axiom(ax: &Axiom) -> Result<Vec<Formula>, TranslateError> {
    Ok(Translator::new(false).axiom(ax)?.into_iter().collect())
}

/// Background units followed by one unit per logical axiom.
pub fn translate_ontology(doc: &OntologyDocument) -> Result<TptpProblem, TranslateError> {
    let mut tr = Translator::for_documents(&[doc]);
    let units = tr.document_units(doc)?;
    let mut problem = TptpProblem::new(tr.background().units);
    problem.units.extend(units);
    Ok(problem)
}

#[cfg(test)]
mod tests;
