//! Clausal normal form: NNF, inner Skolemization, then distribution with
//! definitional naming once a disjunction would blow up.

use std::collections::{BTreeSet, HashMap};

use fowl_core::fol::{Formula, Term as FolTerm};

use crate::clause::Lit;
use crate::term::{Signature, Term, Var};

/// Upper bound on clauses produced by distributing one disjunction before a
/// subformula gets a name instead.
const DISTRIBUTION_LIMIT: usize = 16;

#[derive(Clone, Debug)]
enum Nnf {
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    All(Vec<Var>, Box<Nnf>),
    Ex(Vec<Var>, Box<Nnf>),
    True,
    False,
}

pub struct Clausifier<'a> {
    pub sig: &'a mut Signature,
    next_var: Var,
}

impl<'a> Clausifier<'a> {
    pub fn new(sig: &'a mut Signature) -> Self {
        Clausifier { sig, next_var: 0 }
    }

    fn fresh_var(&mut self) -> Var {
        self.next_var += 1;
        self.next_var - 1
    }

    /// Clauses of a closed formula; free variables count as universal.
    pub fn clausify(&mut self, f: &Formula) -> Vec<Vec<Lit>> {
        let mut scope = HashMap::new();
        let nnf = self.nnf(f, true, &mut scope);
        let sk = self.skolemize(nnf, &mut HashMap::new());
        let mut defs = Vec::new();
        let mut out = self.cnf(sk, &mut defs);
        out.extend(defs);
        out
    }

    fn term(&mut self, t: &FolTerm, scope: &mut HashMap<String, Vec<Var>>) -> Term {
        match t {
            FolTerm::Variable(v) => match scope.get(v).and_then(|s| s.last()) {
                Some(&id) => Term::Var(id),
                None => {
                    let id = self.fresh_var();
                    scope.entry(v.clone()).or_default().push(id);
                    Term::Var(id)
                }
            },
            FolTerm::Constant(c) => Term::constant(self.sig.intern(c, 0, false)),
            FolTerm::Function(f, args) => {
                let s = self.sig.intern(f, args.len(), false);
                Term::App(s, args.iter().map(|a| self.term(a, scope)).collect())
            }
        }
    }

    fn bind(&mut self, vars: &[String], scope: &mut HashMap<String, Vec<Var>>) -> Vec<Var> {
        vars.iter()
            .map(|v| {
                let id = self.fresh_var();
                scope.entry(v.clone()).or_default().push(id);
                id
            })
            .collect()
    }

    fn unbind(vars: &[String], scope: &mut HashMap<String, Vec<Var>>) {
        for v in vars {
            scope.get_mut(v).and_then(Vec::pop);
        }
    }

    fn nnf(&mut self, f: &Formula, pol: bool, scope: &mut HashMap<String, Vec<Var>>) -> Nnf {
        match f {
            Formula::True => {
                if pol {
                    Nnf::True
                } else {
                    Nnf::False
                }
            }
            Formula::False => {
                if pol {
                    Nnf::False
                } else {
                    Nnf::True
                }
            }
            Formula::Predicate(p, args) => {
                let s = self.sig.intern(p, args.len(), true);
                let atom = Term::App(s, args.iter().map(|a| self.term(a, scope)).collect());
                Nnf::Lit(Lit::atom(pol, atom))
            }
            Formula::Equality(a, b) => {
                let (a, b) = (self.term(a, scope), self.term(b, scope));
                Nnf::Lit(Lit::new(pol, a, b))
            }
            Formula::Not(g) => self.nnf(g, !pol, scope),
            Formula::And(items) | Formula::Or(items) => {
                let parts = items.iter().map(|g| self.nnf(g, pol, scope)).collect();
                if matches!(f, Formula::And(_)) == pol {
                    Nnf::And(parts)
                } else {
                    Nnf::Or(parts)
                }
            }
            Formula::Implies(a, b) => {
                let (na, nb) = (self.nnf(a, !pol, scope), self.nnf(b, pol, scope));
                if pol {
                    Nnf::Or(vec![na, nb])
                } else {
                    Nnf::And(vec![na, nb])
                }
            }
            Formula::Iff(a, b) => {
                if pol {
                    // (~a | b) & (a | ~b)
                    let l = Nnf::Or(vec![self.nnf(a, false, scope), self.nnf(b, true, scope)]);
                    let r = Nnf::Or(vec![self.nnf(a, true, scope), self.nnf(b, false, scope)]);
                    Nnf::And(vec![l, r])
                } else {
                    // (a & ~b) | (~a & b)
                    let l = Nnf::And(vec![self.nnf(a, true, scope), self.nnf(b, false, scope)]);
                    let r = Nnf::And(vec![self.nnf(a, false, scope), self.nnf(b, true, scope)]);
                    Nnf::Or(vec![l, r])
                }
            }
            Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
                let ids = self.bind(vars, scope);
                let inner = self.nnf(body, pol, scope);
                Self::unbind(vars, scope);
                if matches!(f, Formula::Forall(..)) == pol {
                    Nnf::All(ids, Box::new(inner))
                } else {
                    Nnf::Ex(ids, Box::new(inner))
                }
            }
        }
    }

    /// Replaces each existential variable by a Skolem term over the free
    /// variables of its own subformula.
    fn skolemize(&mut self, f: Nnf, subst: &mut HashMap<Var, Term>) -> Nnf {
        match f {
            Nnf::Lit(l) => Nnf::Lit(Lit::new(l.pos, replace(&l.l, subst), replace(&l.r, subst))),
            Nnf::And(items) => simplify_and(items.into_iter().map(|g| self.skolemize(g, subst)).collect()),
            Nnf::Or(items) => simplify_or(items.into_iter().map(|g| self.skolemize(g, subst)).collect()),
            Nnf::All(_, body) => self.skolemize(*body, subst),
            Nnf::Ex(vars, body) => {
                let mut free = BTreeSet::new();
                free_vars(&body, &mut free);
                for v in &vars {
                    free.remove(v);
                }
                // Free variables already substituted stand for their images.
                let mut args: BTreeSet<Var> = BTreeSet::new();
                for v in free {
                    match subst.get(&v) {
                        Some(t) => t.for_each_var(&mut |w| {
                            args.insert(w);
                        }),
                        None => {
                            args.insert(v);
                        }
                    }
                }
                let args: Vec<Term> = args.into_iter().map(Term::Var).collect();
                for v in vars {
                    let sk = self.sig.fresh("sk", args.len(), false);
                    subst.insert(v, Term::App(sk, args.clone()));
                }
                self.skolemize(*body, subst)
            }
            t => t,
        }
    }

    fn cnf(&mut self, f: Nnf, defs: &mut Vec<Vec<Lit>>) -> Vec<Vec<Lit>> {
        match f {
            Nnf::True => Vec::new(),
            Nnf::False => vec![Vec::new()],
            Nnf::Lit(l) => vec![vec![l]],
            Nnf::And(items) => items.into_iter().flat_map(|g| self.cnf(g, defs)).collect(),
            Nnf::Or(items) => {
                let mut parts: Vec<Vec<Vec<Lit>>> = items.into_iter().map(|g| self.cnf(g, defs)).collect();
                loop {
                    let product: usize = parts.iter().map(Vec::len).fold(1, |a, b| a.saturating_mul(b));
                    if product <= DISTRIBUTION_LIMIT {
                        break;
                    }
                    let (i, _) = parts.iter().enumerate().max_by_key(|(_, p)| p.len()).expect("nonempty");
                    let named = std::mem::take(&mut parts[i]);
                    parts[i] = vec![vec![self.define(named, defs)]];
                }
                let mut acc: Vec<Vec<Lit>> = vec![Vec::new()];
                for p in parts {
                    let mut next = Vec::with_capacity(acc.len() * p.len());
                    for a in &acc {
                        for c in &p {
                            let mut merged = a.clone();
                            merged.extend(c.iter().cloned());
                            next.push(merged);
                        }
                    }
                    acc = next;
                }
                acc
            }
            Nnf::All(..) | Nnf::Ex(..) => unreachable!("quantifiers removed before distribution"),
        }
    }

    /// New atom `d(vars)` with `d(vars) => clauses`; the atom stands in for
    /// the conjunction in positive position.
    fn define(&mut self, clauses: Vec<Vec<Lit>>, defs: &mut Vec<Vec<Lit>>) -> Lit {
        let mut vars = BTreeSet::new();
        for c in &clauses {
            for l in c {
                l.l.for_each_var(&mut |v| {
                    vars.insert(v);
                });
                l.r.for_each_var(&mut |v| {
                    vars.insert(v);
                });
            }
        }
        let d = self.sig.fresh("def", vars.len(), true);
        let atom = Term::App(d, vars.into_iter().map(Term::Var).collect());
        for mut c in clauses {
            c.push(Lit::atom(false, atom.clone()));
            defs.push(c);
        }
        Lit::atom(true, atom)
    }
}

fn replace(t: &Term, subst: &HashMap<Var, Term>) -> Term {
    match t {
        Term::Var(v) => subst.get(v).cloned().unwrap_or(Term::Var(*v)),
        Term::App(f, args) => Term::App(*f, args.iter().map(|a| replace(a, subst)).collect()),
    }
}

fn free_vars(f: &Nnf, out: &mut BTreeSet<Var>) {
    match f {
        Nnf::Lit(l) => {
            l.l.for_each_var(&mut |v| {
                out.insert(v);
            });
            l.r.for_each_var(&mut |v| {
                out.insert(v);
            });
        }
        Nnf::And(items) | Nnf::Or(items) => items.iter().for_each(|g| free_vars(g, out)),
        Nnf::All(vars, body) | Nnf::Ex(vars, body) => {
            let mut inner = BTreeSet::new();
            free_vars(body, &mut inner);
            for v in vars {
                inner.remove(v);
            }
            out.extend(inner);
        }
        Nnf::True | Nnf::False => {}
    }
}

fn simplify_and(items: Vec<Nnf>) -> Nnf {
    let mut out = Vec::new();
    for g in items {
        match g {
            Nnf::True => {}
            Nnf::False => return Nnf::False,
            Nnf::And(inner) => out.extend(inner),
            g => out.push(g),
        }
    }
    match out.len() {
        0 => Nnf::True,
        1 => out.pop().expect("one item"),
        _ => Nnf::And(out),
    }
}

fn simplify_or(items: Vec<Nnf>) -> Nnf {
    let mut out = Vec::new();
    for g in items {
        match g {
            Nnf::False => {}
            Nnf::True => return Nnf::True,
            Nnf::Or(inner) => out.extend(inner),
            g => out.push(g),
        }
    }
    match out.len() {
        0 => Nnf::False,
        1 => out.pop().expect("one item"),
        _ => Nnf::Or(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fowl_core::fol::tptp::parse_tptp_formula;

    fn clauses(text: &str) -> (Signature, Vec<Vec<Lit>>) {
        let mut sig = Signature::new();
        let f = parse_tptp_formula(text).unwrap();
        let cs = Clausifier::new(&mut sig).clausify(&f);
        (sig, cs)
    }

    #[test]
    fn implication_is_one_clause() {
        let (_, cs) = clauses("![X]: (p(X) => q(X))");
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].len(), 2);
        assert!(!cs[0][0].pos && cs[0][1].pos);
    }

    #[test]
    fn existential_under_universal_gets_a_function() {
        let (sig, cs) = clauses("![X]: ?[Y]: r(X, Y)");
        assert_eq!(cs.len(), 1);
        let Term::App(_, args) = &cs[0][0].l else { panic!() };
        let Term::App(sk, sargs) = &args[1] else { panic!("{:?}", args) };
        assert!(sig.info(*sk).skolem);
        assert_eq!(sargs.len(), 1);
    }

    #[test]
    fn inner_skolemization_drops_unused_universals() {
        let (sig, cs) = clauses("![X]: (p(X) | ?[Y]: q(Y))");
        let q = cs[0].iter().find(|l| sig.show(&l.l).starts_with('q')).unwrap();
        assert!(q.l.is_ground(), "{}", sig.show(&q.l));
    }

    #[test]
    fn inner_universals_are_not_skolem_arguments() {
        let (sig, cs) = clauses("![X]: ?[Z]: ![W]: (o(W, Z) <=> o(W, X))");
        let sk = (0..sig.len() as u32).find(|&s| sig.info(s).skolem).unwrap();
        assert_eq!(sig.info(sk).arity, 1);
        assert_eq!(cs.len(), 2);
    }

    #[test]
    fn iff_gives_both_directions() {
        let (_, cs) = clauses("p <=> q");
        assert_eq!(cs.len(), 2);
        let (_, cs) = clauses("~(p <=> q)");
        assert_eq!(cs.len(), 4);
    }

    #[test]
    fn truth_constants_fold() {
        assert!(clauses("$true | p").1.is_empty());
        assert_eq!(clauses("$false").1, vec![Vec::new()]);
    }

    #[test]
    fn large_disjunctions_are_named() {
        let (_, cs) = clauses("(a1 & a2 & a3) | (b1 & b2 & b3) | (c1 & c2 & c3)");
        // 27 clauses by distribution; naming keeps it small.
        assert!(cs.len() < 27, "{}", cs.len());
    }
}
