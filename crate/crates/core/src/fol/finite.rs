//! Finite interpretations: evaluation and exhaustive model search over
//! small domains. This is an oracle for tests and cross-checks, not a
//! prover: it only ever answers "model found" or "none up to this size".

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::{Formula, Symbol, SymbolRole, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiniteError {
    #[error("function symbol `{0}` is outside the function-free fragment")]
    FunctionSymbol(String),
    #[error("formula has free variable `{0}`")]
    FreeVariable(String),
}

/// Interpretation over `{0, .., size-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub size: usize,
    pub constants: BTreeMap<String, usize>,
    /// True atoms: predicate name → set of argument tuples.
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
}

impl Model {
    pub fn holds(&self, pred: &str, args: &[usize]) -> bool {
        self.relations.get(pred).is_some_and(|tuples| tuples.iter().any(|t| t == args))
    }

    /// Truth of a closed, function-free formula.
    pub fn satisfies(&self, f: &Formula) -> Result<bool, FiniteError> {
        self.eval(f, &mut HashMap::new())
    }

    fn term(&self, t: &Term, env: &HashMap<String, usize>) -> Result<usize, FiniteError> {
        match t {
            Term::Variable(v) => env.get(v).copied().ok_or_else(|| FiniteError::FreeVariable(v.clone())),
            // Constants the model does not mention denote element 0.
            Term::Constant(c) => Ok(self.constants.get(c).copied().unwrap_or(0)),
            Term::Function(f, _) => Err(FiniteError::FunctionSymbol(f.clone())),
        }
    }

    fn eval(&self, f: &Formula, env: &mut HashMap<String, usize>) -> Result<bool, FiniteError> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Predicate(p, args) => {
                let args = args.iter().map(|a| self.term(a, env)).collect::<Result<Vec<_>, _>>()?;
                self.holds(p, &args)
            }
            Formula::Equality(a, b) => self.term(a, env)? == self.term(b, env)?,
            Formula::Not(g) => !self.eval(g, env)?,
            Formula::And(items) => {
                for g in items {
                    if !self.eval(g, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(items) => {
                for g in items {
                    if self.eval(g, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.eval(a, env)? || self.eval(b, env)?,
            Formula::Iff(a, b) => self.eval(a, env)? == self.eval(b, env)?,
            Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
                let universal = matches!(f, Formula::Forall(..));
                self.quantify(vs, body, universal, env)?
            }
        })
    }

    fn quantify(
        &self,
        vs: &[String],
        body: &Formula,
        universal: bool,
        env: &mut HashMap<String, usize>,
    ) -> Result<bool, FiniteError> {
        let Some((v, rest)) = vs.split_first() else {
            return self.eval(body, env);
        };
        let saved = env.get(v).copied();
        let mut result = universal;
        for d in 0..self.size.max(1) {
            env.insert(v.clone(), d);
            let r = self.quantify(rest, body, universal, env)?;
            if r != universal {
                result = r;
                break;
            }
        }
        match saved {
            Some(s) => env.insert(v.clone(), s),
            None => env.remove(v),
        };
        Ok(result)
    }
}

#[derive(Clone, Debug)]
enum Ground {
    Const(bool),
    Atom(usize),
    Not(Box<Ground>),
    And(Vec<Ground>),
    Or(Vec<Ground>),
}

impl Ground {
    fn not(g: Ground) -> Ground {
        match g {
            Ground::Const(b) => Ground::Const(!b),
            Ground::Not(inner) => *inner,
            g => Ground::Not(Box::new(g)),
        }
    }

    fn and(items: Vec<Ground>) -> Ground {
        let mut out = Vec::new();
        for g in items {
            match g {
                Ground::Const(true) => {}
                Ground::Const(false) => return Ground::Const(false),
                g => out.push(g),
            }
        }
        if out.is_empty() {
            Ground::Const(true)
        } else if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Ground::And(out)
        }
    }

    fn or(items: Vec<Ground>) -> Ground {
        let mut out = Vec::new();
        for g in items {
            match g {
                Ground::Const(false) => {}
                Ground::Const(true) => return Ground::Const(true),
                g => out.push(g),
            }
        }
        if out.is_empty() {
            Ground::Const(false)
        } else if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Ground::Or(out)
        }
    }

    /// Three-valued evaluation under a partial assignment.
    fn value(&self, assignment: &[Option<bool>]) -> Option<bool> {
        match self {
            Ground::Const(b) => Some(*b),
            Ground::Atom(i) => assignment[*i],
            Ground::Not(g) => g.value(assignment).map(|b| !b),
            Ground::And(items) => {
                let mut unknown = false;
                for g in items {
                    match g.value(assignment) {
                        Some(false) => return Some(false),
                        None => unknown = true,
                        Some(true) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(true)
                }
            }
            Ground::Or(items) => {
                let mut unknown = false;
                for g in items {
                    match g.value(assignment) {
                        Some(true) => return Some(true),
                        None => unknown = true,
                        Some(false) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(false)
                }
            }
        }
    }
}

struct Grounder<'a> {
    constants: &'a HashMap<String, usize>,
    size: usize,
    atoms: HashMap<(String, Vec<usize>), usize>,
    atom_list: Vec<(String, Vec<usize>)>,
}

impl Grounder<'_> {
    fn term(&self, t: &Term, env: &HashMap<String, usize>) -> Result<usize, FiniteError> {
        match t {
            Term::Variable(v) => env.get(v).copied().ok_or_else(|| FiniteError::FreeVariable(v.clone())),
            Term::Constant(c) => Ok(self.constants[c]),
            Term::Function(f, _) => Err(FiniteError::FunctionSymbol(f.clone())),
        }
    }

    fn atom(&mut self, pred: &str, args: Vec<usize>) -> usize {
        let key = (pred.to_string(), args);
        if let Some(&i) = self.atoms.get(&key) {
            return i;
        }
        let i = self.atom_list.len();
        self.atom_list.push(key.clone());
        self.atoms.insert(key, i);
        i
    }

    fn ground(&mut self, f: &Formula, env: &mut HashMap<String, usize>) -> Result<Ground, FiniteError> {
        Ok(match f {
            Formula::True => Ground::Const(true),
            Formula::False => Ground::Const(false),
            Formula::Predicate(p, args) => {
                let args = args.iter().map(|a| self.term(a, env)).collect::<Result<Vec<_>, _>>()?;
                Ground::Atom(self.atom(p, args))
            }
            Formula::Equality(a, b) => Ground::Const(self.term(a, env)? == self.term(b, env)?),
            Formula::Not(g) => Ground::not(self.ground(g, env)?),
            Formula::And(items) => {
                Ground::and(items.iter().map(|g| self.ground(g, env)).collect::<Result<Vec<_>, _>>()?)
            }
            Formula::Or(items) => {
                Ground::or(items.iter().map(|g| self.ground(g, env)).collect::<Result<Vec<_>, _>>()?)
            }
            Formula::Implies(a, b) => {
                let a = self.ground(a, env)?;
                Ground::or(vec![Ground::not(a), self.ground(b, env)?])
            }
            Formula::Iff(a, b) => {
                let a = self.ground(a, env)?;
                let b = self.ground(b, env)?;
                Ground::or(vec![
                    Ground::and(vec![a.clone(), b.clone()]),
                    Ground::and(vec![Ground::not(a), Ground::not(b)]),
                ])
            }
            Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let mut parts = Vec::new();
                self.expand(vs, body, env, &mut parts)?;
                if universal {
                    Ground::and(parts)
                } else {
                    Ground::or(parts)
                }
            }
        })
    }

    fn expand(
        &mut self,
        vs: &[String],
        body: &Formula,
        env: &mut HashMap<String, usize>,
        out: &mut Vec<Ground>,
    ) -> Result<(), FiniteError> {
        let Some((v, rest)) = vs.split_first() else {
            out.push(self.ground(body, env)?);
            return Ok(());
        };
        let saved = env.get(v).copied();
        for d in 0..self.size {
            env.insert(v.clone(), d);
            self.expand(rest, body, env, out)?;
        }
        match saved {
            Some(s) => env.insert(v.clone(), s),
            None => env.remove(v),
        };
        Ok(())
    }
}

fn search(formulas: &[Ground], n_atoms: usize, assignment: &mut Vec<Option<bool>>, next: usize) -> bool {
    let mut all_true = true;
    for g in formulas {
        match g.value(assignment) {
            Some(false) => return false,
            None => all_true = false,
            Some(true) => {}
        }
    }
    if all_true {
        return true;
    }
    if next == n_atoms {
        return false;
    }
    for b in [false, true] {
        assignment[next] = Some(b);
        if search(formulas, n_atoms, assignment, next + 1) {
            return true;
        }
    }
    assignment[next] = None;
    false
}

/// Canonical constant assignments: each constant maps to an element at most
/// one above the largest used so far, which removes renamings of the domain.
fn constant_maps(names: &[String], size: usize) -> Vec<HashMap<String, usize>> {
    fn go(
        names: &[String],
        size: usize,
        i: usize,
        used: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<HashMap<String, usize>>,
    ) {
        if i == names.len() {
            out.push(names.iter().cloned().zip(cur.iter().copied()).collect());
            return;
        }
        for d in 0..size.min(used + 1) {
            cur.push(d);
            go(names, size, i + 1, used.max(d + 1), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(names, size, 0, 0, &mut Vec::new(), &mut out);
    out
}

/// Searches domains of size 1..=`max_size` for a model of all `formulas`.
/// Formulas must be closed and function-free.
pub fn find_model(formulas: &[Formula], max_size: usize) -> Result<Option<Model>, FiniteError> {
    let mut constants: Vec<String> = Vec::new();
    for f in formulas {
        for Symbol { name, role, .. } in f.symbols() {
            match role {
                SymbolRole::Function => return Err(FiniteError::FunctionSymbol(name)),
                SymbolRole::Constant if !constants.contains(&name) => constants.push(name),
                _ => {}
            }
        }
        if let Some(v) = super::free_variables(f).into_iter().next() {
            return Err(FiniteError::FreeVariable(v));
        }
    }
    for size in 1..=max_size {
        for cmap in constant_maps(&constants, size) {
            let mut g = Grounder { constants: &cmap, size, atoms: HashMap::new(), atom_list: Vec::new() };
            let ground = formulas
                .iter()
                .map(|f| g.ground(f, &mut HashMap::new()))
                .collect::<Result<Vec<_>, _>>()?;
            let n = g.atom_list.len();
            let mut assignment = vec![None; n];
            if search(&ground, n, &mut assignment, 0) {
                let mut relations: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
                for (i, (p, args)) in g.atom_list.iter().enumerate() {
                    if assignment[i] == Some(true) {
                        relations.entry(p.clone()).or_default().push(args.clone());
                    }
                }
                return Ok(Some(Model { size, constants: cmap.into_iter().collect(), relations }));
            }
        }
    }
    Ok(None)
}
