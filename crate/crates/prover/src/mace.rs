//! Finite model search by flattening and grounding to SAT, one domain size
//! at a time.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use varisat::{ExtendFormula, Lit as SatLit, Solver};

use crate::clause::Clause;
use crate::term::{Signature, Sym, Term, TRUE};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Flat {
    Pred { pos: bool, p: Sym, args: Vec<usize> },
    Fun { pos: bool, f: Sym, args: Vec<usize>, val: usize },
    Eq { pos: bool, a: usize, b: usize },
}

#[derive(Clone, Debug)]
struct FlatClause {
    lits: Vec<Flat>,
    nvars: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Search {
    /// A model of this many elements exists.
    Model(usize),
    /// No model at all: the problem is function-free and every size up to
    /// its number of constants failed.
    NoModel,
    /// Stopped, out of budget or out of sizes.
    Unknown,
}

pub struct Config<'a> {
    pub max_size: usize,
    /// Ground literals allowed per domain size.
    pub budget: usize,
    pub deadline: Option<Instant>,
    pub stop: Option<&'a AtomicBool>,
}

fn flatten(c: &Clause) -> Option<FlatClause> {
    struct Namer {
        next: usize,
        defs: HashMap<Term, usize>,
        extra: Vec<Flat>,
    }
    impl Namer {
        fn name(&mut self, t: &Term) -> usize {
            match t {
                Term::Var(v) => *v as usize,
                Term::App(f, args) => {
                    if let Some(&v) = self.defs.get(t) {
                        return v;
                    }
                    let args = args.iter().map(|a| self.name(a)).collect();
                    let v = self.next;
                    self.next += 1;
                    self.defs.insert(t.clone(), v);
                    self.extra.push(Flat::Fun { pos: false, f: *f, args, val: v });
                    v
                }
            }
        }
    }
    let mut n = Namer { next: c.nvars as usize, defs: HashMap::new(), extra: Vec::new() };
    let mut lits = Vec::new();
    for l in &c.lits {
        if l.is_predicate() {
            let Term::App(p, args) = &l.l else { unreachable!("atoms are applications") };
            let args = args.iter().map(|a| n.name(a)).collect();
            lits.push(Flat::Pred { pos: l.pos, p: *p, args });
            continue;
        }
        match (&l.l, &l.r) {
            (Term::Var(a), Term::Var(b)) => lits.push(Flat::Eq { pos: l.pos, a: *a as usize, b: *b as usize }),
            (Term::Var(x), Term::App(f, args)) | (Term::App(f, args), Term::Var(x)) => {
                let args = args.iter().map(|a| n.name(a)).collect();
                lits.push(Flat::Fun { pos: l.pos, f: *f, args, val: *x as usize });
            }
            (s, Term::App(f, args)) => {
                let v = n.name(s);
                let args = args.iter().map(|a| n.name(a)).collect();
                lits.push(Flat::Fun { pos: l.pos, f: *f, args, val: v });
            }
        }
    }
    lits.extend(n.extra);
    // x != y: identify the two variables.
    let mut rep: Vec<usize> = (0..n.next).collect();
    fn find(rep: &mut Vec<usize>, x: usize) -> usize {
        if rep[x] != x {
            let r = find(rep, rep[x]);
            rep[x] = r;
        }
        rep[x]
    }
    for l in &lits {
        if let Flat::Eq { pos: false, a, b } = l {
            let (ra, rb) = (find(&mut rep, *a), find(&mut rep, *b));
            rep[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut dense: HashMap<usize, usize> = HashMap::new();
    let mut map = |v: usize, rep: &mut Vec<usize>| {
        let r = find(rep, v);
        let k = dense.len();
        *dense.entry(r).or_insert(k)
    };
    let mut out = Vec::new();
    for l in lits {
        let l = match l {
            Flat::Eq { pos: false, .. } => continue,
            Flat::Eq { pos: true, a, b } => {
                let (a, b) = (map(a, &mut rep), map(b, &mut rep));
                if a == b {
                    return None;
                }
                Flat::Eq { pos: true, a, b }
            }
            Flat::Pred { pos, p, args } => Flat::Pred { pos, p, args: args.into_iter().map(|a| map(a, &mut rep)).collect() },
            Flat::Fun { pos, f, args, val } => {
                let args = args.into_iter().map(|a| map(a, &mut rep)).collect();
                Flat::Fun { pos, f, args, val: map(val, &mut rep) }
            }
        };
        if !out.contains(&l) {
            out.push(l);
        }
    }
    Some(FlatClause { nvars: dense.len(), lits: out })
}

struct Layout {
    base: Vec<usize>,
    size: usize,
    total: usize,
}

impl Layout {
    fn new(sig: &Signature, n: usize) -> Layout {
        let mut base = vec![0; sig.len()];
        let mut total = 0;
        for s in 0..sig.len() {
            if s as Sym == TRUE {
                continue;
            }
            let info = sig.info(s as Sym);
            base[s] = total;
            let cells = n.pow(info.arity as u32);
            total += if info.predicate { cells } else { cells * n };
        }
        Layout { base, size: n, total }
    }

    fn index(&self, args: impl Iterator<Item = usize>) -> usize {
        args.fold(0, |acc, a| acc * self.size + a)
    }

    fn pred(&self, p: Sym, args: impl Iterator<Item = usize>, pos: bool) -> SatLit {
        SatLit::from_index(self.base[p as usize] + self.index(args), pos)
    }

    fn fun(&self, f: Sym, args: impl Iterator<Item = usize>, val: usize, pos: bool) -> SatLit {
        SatLit::from_index(self.base[f as usize] + self.index(args) * self.size + val, pos)
    }
}

fn stopped(cfg: &Config) -> bool {
    cfg.stop.is_some_and(|s| s.load(Ordering::Relaxed)) || cfg.deadline.is_some_and(|d| Instant::now() >= d)
}

/// Ground literal count for one size, saturating.
fn estimate(clauses: &[FlatClause], sig: &Signature, n: usize) -> usize {
    let mut total: usize = 0;
    for c in clauses {
        let inst = n.checked_pow(c.nvars as u32).unwrap_or(usize::MAX);
        total = total.saturating_add(inst.saturating_mul(c.lits.len()));
    }
    for s in 1..sig.len() {
        let info = sig.info(s as Sym);
        if !info.predicate {
            let cells = n.checked_pow(info.arity as u32).unwrap_or(usize::MAX);
            total = total.saturating_add(cells.saturating_mul(n * n));
        }
    }
    total
}

enum SizeResult {
    Sat,
    Unsat,
    Skipped,
}

fn try_size(clauses: &[FlatClause], sig: &Signature, constants: &[Sym], n: usize, cfg: &Config) -> SizeResult {
    let layout = Layout::new(sig, n);
    let mut solver = Solver::new();
    let mut buf: Vec<SatLit> = Vec::new();
    for s in 1..sig.len() {
        let info = sig.info(s as Sym);
        if info.predicate {
            continue;
        }
        let cells = n.pow(info.arity as u32);
        for cell in 0..cells {
            let lit = |d: usize, pos| SatLit::from_index(layout.base[s] + cell * n + d, pos);
            buf.clear();
            buf.extend((0..n).map(|d| lit(d, true)));
            solver.add_clause(&buf);
            for d in 0..n {
                for e in d + 1..n {
                    solver.add_clause(&[lit(d, false), lit(e, false)]);
                }
            }
        }
    }
    // Constants name elements in order of first use.
    for (i, &c) in constants.iter().enumerate() {
        for d in 1..n {
            buf.clear();
            buf.push(layout.fun(c, std::iter::empty(), d, false));
            buf.extend(constants[..i].iter().map(|&cj| layout.fun(cj, std::iter::empty(), d - 1, true)));
            solver.add_clause(&buf);
        }
    }
    let mut assign: Vec<usize> = Vec::new();
    let mut counter = 0usize;
    for c in clauses {
        assign.clear();
        assign.resize(c.nvars, 0);
        'instances: loop {
            counter += 1;
            if counter % 65536 == 0 && stopped(cfg) {
                return SizeResult::Skipped;
            }
            buf.clear();
            let mut satisfied = false;
            for l in &c.lits {
                match l {
                    Flat::Eq { pos, a, b } => {
                        if (assign[*a] == assign[*b]) == *pos {
                            satisfied = true;
                            break;
                        }
                    }
                    Flat::Pred { pos, p, args } => buf.push(layout.pred(*p, args.iter().map(|&a| assign[a]), *pos)),
                    Flat::Fun { pos, f, args, val } => {
                        buf.push(layout.fun(*f, args.iter().map(|&a| assign[a]), assign[*val], *pos))
                    }
                }
            }
            if !satisfied {
                solver.add_clause(&buf);
            }
            // Next assignment.
            let mut k = 0;
            loop {
                if k == c.nvars {
                    break 'instances;
                }
                assign[k] += 1;
                if assign[k] < n {
                    break;
                }
                assign[k] = 0;
                k += 1;
            }
        }
    }
    // Keep every table variable known to the solver.
    if layout.total > 0 {
        let top = SatLit::from_index(layout.total - 1, true);
        solver.add_clause(&[top, !top]);
    }
    match solver.solve() {
        Ok(true) => SizeResult::Sat,
        Ok(false) => SizeResult::Unsat,
        Err(_) => SizeResult::Skipped,
    }
}

/// Searches sizes `1..=max_size` for a model of `clauses`.
pub fn find_model(clauses: &[Clause], sig: &Signature, cfg: &Config) -> Search {
    let flat: Vec<FlatClause> = clauses.iter().filter_map(flatten).collect();
    if flat.iter().any(|c| c.lits.is_empty()) {
        return Search::NoModel;
    }
    let mut constants = Vec::new();
    let mut function_free = true;
    for c in clauses {
        for l in &c.lits {
            collect(&l.l, sig, &mut constants, &mut function_free);
            collect(&l.r, sig, &mut constants, &mut function_free);
        }
    }
    let herbrand_bound = if function_free { Some(constants.len().max(1)) } else { None };
    let top = herbrand_bound.map_or(cfg.max_size, |b| b.min(cfg.max_size));
    let mut complete = true;
    for n in 1..=top {
        if stopped(cfg) {
            return Search::Unknown;
        }
        if estimate(&flat, sig, n) > cfg.budget {
            complete = false;
            break;
        }
        match try_size(&flat, sig, &constants, n, cfg) {
            SizeResult::Sat => return Search::Model(n),
            SizeResult::Unsat => {}
            SizeResult::Skipped => return Search::Unknown,
        }
    }
    match herbrand_bound {
        Some(b) if complete && b <= cfg.max_size => Search::NoModel,
        _ => Search::Unknown,
    }
}

fn collect(t: &Term, sig: &Signature, constants: &mut Vec<Sym>, function_free: &mut bool) {
    if let Term::App(f, args) = t {
        if !sig.is_predicate(*f) {
            if args.is_empty() {
                if !constants.contains(f) {
                    constants.push(*f);
                }
            } else {
                *function_free = false;
            }
        }
        for a in args {
            collect(a, sig, constants, function_free);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Clausifier;
    use fowl_core::fol::tptp::parse_tptp_formula;

    fn search(axioms: &[&str], max_size: usize) -> Search {
        let mut sig = Signature::new();
        let mut clauses = Vec::new();
        {
            let mut cl = Clausifier::new(&mut sig);
            for a in axioms {
                clauses.extend(cl.clausify(&parse_tptp_formula(a).unwrap()).into_iter().filter_map(Clause::new));
            }
        }
        find_model(&clauses, &sig, &Config { max_size, budget: 5_000_000, deadline: None, stop: None })
    }

    #[test]
    fn sizes_follow_distinctness() {
        assert_eq!(search(&["p(a)"], 5), Search::Model(1));
        assert_eq!(search(&["a != b", "b != c", "a != c"], 5), Search::Model(3));
    }

    #[test]
    fn function_free_contradictions_are_decided() {
        assert_eq!(search(&["p(a)", "~p(b)", "a = b"], 5), Search::NoModel);
        assert_eq!(search(&["![X]: p(X)", "~p(a)"], 5), Search::NoModel);
    }

    #[test]
    fn functions_need_finite_cycles() {
        // f injective without fixed point on a three-cycle.
        let r = search(&["![X]: f(X) != X", "![X]: f(f(f(X))) = X"], 6);
        assert_eq!(r, Search::Model(3));
        // Injective, not surjective: only infinite models.
        let r = search(&["![X, Y]: (f(X) = f(Y) => X = Y)", "![X]: f(X) != c"], 4);
        assert_eq!(r, Search::Unknown);
    }

    #[test]
    fn nested_terms_flatten() {
        assert_eq!(search(&["p(f(g(a)))", "![X]: (p(X) => X = a)", "g(a) != a"], 4), Search::Model(2));
    }
}
