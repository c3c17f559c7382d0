//! First-order logic shared by every surface syntax in the crate.
//!
//! CLIF annotations, TPTP annotations, TPTP files and the OWL translation all
//! produce [`Formula`] values; the aligner and the emitter only ever see this
//! AST.

pub mod clif;
pub mod finite;
pub mod mangle;
pub mod tptp;

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Variable(String),
    Constant(String),
    Function(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Constant(name.into())
    }

    pub fn function(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::Function(name.into(), args)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Predicate(String, Vec<Term>),
    Equality(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

/// Where a non-logical symbol occurs. Predicates, functions and constants
/// live in separate namespaces even when they share a name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolRole {
    Predicate,
    Function,
    Constant,
}

impl fmt::Display for SymbolRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolRole::Predicate => "predicate",
            SymbolRole::Function => "function",
            SymbolRole::Constant => "constant",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub role: SymbolRole,
    pub arity: usize,
}

impl Formula {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Predicate(name.into(), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Equality(lhs, rhs)
    }

    pub fn neq(lhs: Term, rhs: Term) -> Self {
        Formula::not(Formula::Equality(lhs, rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Self {
        Formula::Iff(Box::new(lhs), Box::new(rhs))
    }

    /// Conjunction that keeps the `And` arity invariant: an empty list is
    /// `True` and a singleton collapses to its element.
    pub fn and(mut items: Vec<Formula>) -> Self {
        match items.len() {
            0 => Formula::True,
            1 => items.pop().unwrap(),
            _ => Formula::And(items),
        }
    }

    /// Disjunction with the same collapsing rules as [`Formula::and`].
    pub fn or(mut items: Vec<Formula>) -> Self {
        match items.len() {
            0 => Formula::False,
            1 => items.pop().unwrap(),
            _ => Formula::Or(items),
        }
    }

    /// Universal closure over `vars`; an empty list returns the body.
    pub fn forall(vars: Vec<String>, body: Formula) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    pub fn exists(vars: Vec<String>, body: Formula) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn is_closed(&self) -> bool {
        free_variables(self).is_empty()
    }

    /// Every predicate, function and constant symbol, in first-occurrence order.
    pub fn symbols(&self) -> IndexSet<Symbol> {
        let mut out = IndexSet::new();
        collect_formula_symbols(self, &mut out);
        out
    }

    /// Rewrites every non-logical symbol name; variables are untouched.
    pub fn map_symbols(&self, f: &mut impl FnMut(&str, SymbolRole, usize) -> String) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Predicate(name, args) => Formula::Predicate(
                f(name, SymbolRole::Predicate, args.len()),
                args.iter().map(|t| map_term_symbols(t, f)).collect(),
            ),
            Formula::Equality(a, b) => {
                Formula::Equality(map_term_symbols(a, f), map_term_symbols(b, f))
            }
            Formula::Not(g) => Formula::not(g.map_symbols(f)),
            Formula::And(items) => Formula::And(items.iter().map(|g| g.map_symbols(f)).collect()),
            Formula::Or(items) => Formula::Or(items.iter().map(|g| g.map_symbols(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_symbols(f), b.map_symbols(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_symbols(f), b.map_symbols(f)),
            Formula::Forall(vars, body) => {
                Formula::Forall(vars.clone(), Box::new(body.map_symbols(f)))
            }
            Formula::Exists(vars, body) => {
                Formula::Exists(vars.clone(), Box::new(body.map_symbols(f)))
            }
        }
    }

    /// Renames variables (bound and free) through `f`.
    pub fn map_variables(&self, f: &mut impl FnMut(&str) -> String) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Predicate(name, args) => Formula::Predicate(
                name.clone(),
                args.iter().map(|t| map_term_variables(t, f)).collect(),
            ),
            Formula::Equality(a, b) => {
                Formula::Equality(map_term_variables(a, f), map_term_variables(b, f))
            }
            Formula::Not(g) => Formula::not(g.map_variables(f)),
            Formula::And(items) => {
                Formula::And(items.iter().map(|g| g.map_variables(f)).collect())
            }
            Formula::Or(items) => Formula::Or(items.iter().map(|g| g.map_variables(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_variables(f), b.map_variables(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_variables(f), b.map_variables(f)),
            Formula::Forall(vars, body) => Formula::Forall(
                vars.iter().map(|v| f(v)).collect(),
                Box::new(body.map_variables(f)),
            ),
            Formula::Exists(vars, body) => Formula::Exists(
                vars.iter().map(|v| f(v)).collect(),
                Box::new(body.map_variables(f)),
            ),
        }
    }

    /// All variable names, bound or free, in first-occurrence order.
    pub fn variable_names(&self) -> IndexSet<String> {
        let mut out = IndexSet::new();
        let mut record = |v: &str| {
            out.insert(v.to_string());
            v.to_string()
        };
        self.map_variables(&mut record);
        out
    }
}

fn map_term_symbols(t: &Term, f: &mut impl FnMut(&str, SymbolRole, usize) -> String) -> Term {
    match t {
        Term::Variable(v) => Term::Variable(v.clone()),
        Term::Constant(c) => Term::Constant(f(c, SymbolRole::Constant, 0)),
        Term::Function(name, args) => Term::Function(
            f(name, SymbolRole::Function, args.len()),
            args.iter().map(|a| map_term_symbols(a, f)).collect(),
        ),
    }
}

fn map_term_variables(t: &Term, f: &mut impl FnMut(&str) -> String) -> Term {
    match t {
        Term::Variable(v) => Term::Variable(f(v)),
        Term::Constant(c) => Term::Constant(c.clone()),
        Term::Function(name, args) => Term::Function(
            name.clone(),
            args.iter().map(|a| map_term_variables(a, f)).collect(),
        ),
    }
}

fn collect_term_symbols(t: &Term, out: &mut IndexSet<Symbol>) {
    match t {
        Term::Variable(_) => {}
        Term::Constant(c) => {
            out.insert(Symbol { name: c.clone(), role: SymbolRole::Constant, arity: 0 });
        }
        Term::Function(name, args) => {
            out.insert(Symbol { name: name.clone(), role: SymbolRole::Function, arity: args.len() });
            for a in args {
                collect_term_symbols(a, out);
            }
        }
    }
}

fn collect_formula_symbols(f: &Formula, out: &mut IndexSet<Symbol>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Predicate(name, args) => {
            out.insert(Symbol { name: name.clone(), role: SymbolRole::Predicate, arity: args.len() });
            for a in args {
                collect_term_symbols(a, out);
            }
        }
        Formula::Equality(a, b) => {
            collect_term_symbols(a, out);
            collect_term_symbols(b, out);
        }
        Formula::Not(g) => collect_formula_symbols(g, out),
        Formula::And(items) | Formula::Or(items) => {
            for g in items {
                collect_formula_symbols(g, out);
            }
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_formula_symbols(a, out);
            collect_formula_symbols(b, out);
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => collect_formula_symbols(body, out),
    }
}

pub fn term_free_variables(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Variable(v) => {
            out.insert(v.clone());
        }
        Term::Constant(_) => {}
        Term::Function(_, args) => {
            for a in args {
                term_free_variables(a, out);
            }
        }
    }
}

/// Variables occurring in `f` outside the scope of any quantifier binding them.
pub fn free_variables(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    match f {
        Formula::True | Formula::False => {}
        Formula::Predicate(_, args) => {
            for a in args {
                term_free_variables(a, &mut out);
            }
        }
        Formula::Equality(a, b) => {
            term_free_variables(a, &mut out);
            term_free_variables(b, &mut out);
        }
        Formula::Not(g) => out = free_variables(g),
        Formula::And(items) | Formula::Or(items) => {
            for g in items {
                out.extend(free_variables(g));
            }
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            out = free_variables(a);
            out.extend(free_variables(b));
        }
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            out = free_variables(body);
            for v in vars {
                out.remove(v);
            }
        }
    }
    out
}

/// Role of a TPTP unit. Only the two roles the pipeline produces are accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitRole {
    Axiom,
    Conjecture,
}

impl UnitRole {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitRole::Axiom => "axiom",
            UnitRole::Conjecture => "conjecture",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TptpUnit {
    pub name: String,
    pub role: UnitRole,
    pub formula: Formula,
}

impl TptpUnit {
    pub fn axiom(name: impl Into<String>, formula: Formula) -> Self {
        TptpUnit { name: name.into(), role: UnitRole::Axiom, formula }
    }

    pub fn conjecture(name: impl Into<String>, formula: Formula) -> Self {
        TptpUnit { name: name.into(), role: UnitRole::Conjecture, formula }
    }
}

/// An ordered list of named units; serialization follows list order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TptpProblem {
    pub units: Vec<TptpUnit>,
}

impl TptpProblem {
    pub fn new(units: Vec<TptpUnit>) -> Self {
        TptpProblem { units }
    }

    pub fn push(&mut self, unit: TptpUnit) {
        self.units.push(unit);
    }

    pub fn extend(&mut self, other: TptpProblem) {
        self.units.extend(other.units);
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn conjectures(&self) -> impl Iterator<Item = &TptpUnit> {
        self.units.iter().filter(|u| u.role == UnitRole::Conjecture)
    }

    pub fn axioms(&self) -> impl Iterator<Item = &TptpUnit> {
        self.units.iter().filter(|u| u.role == UnitRole::Axiom)
    }

    pub fn symbols(&self) -> IndexSet<Symbol> {
        let mut out = IndexSet::new();
        for unit in &self.units {
            collect_formula_symbols(&unit.formula, &mut out);
        }
        out
    }

    /// Returns the first unit name that occurs twice, if any.
    pub fn duplicate_name(&self) -> Option<&str> {
        let mut seen = std::collections::HashSet::new();
        self.units
            .iter()
            .find(|u| !seen.insert(u.name.as_str()))
            .map(|u| u.name.as_str())
    }
}
