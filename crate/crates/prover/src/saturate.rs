//! Given-clause saturation with the superposition calculus.
//!
//! Inferences: superposition into both literal signs, equality resolution,
//! equality factoring. Redundancy: tautologies, multiset subsumption,
//! demodulation by oriented unit equations, and unit-literal deletion.
//! One negative literal per clause may be selected. A saturated set is
//! satisfiable.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use crate::clause::{is_maximal, Clause, Lit};
use crate::kbo::{Cmp, Kbo};
use crate::term::{Signature, Subst, Term, TRUE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Refutation,
    Saturated,
    Stopped,
}

pub struct Limits<'a> {
    pub deadline: Option<Instant>,
    pub stop: Option<&'a AtomicBool>,
}

/// Picks by age once in this many selections, by weight otherwise.
const AGE_RATIO: usize = 5;

pub struct Saturation<'a> {
    sig: &'a Signature,
    kbo: Kbo,
    store: Vec<Clause>,
    selected: Vec<Option<usize>>,
    active: Vec<bool>,
    passive: Vec<bool>,
    by_weight: BinaryHeap<Reverse<(usize, usize)>>,
    by_age: BinaryHeap<Reverse<usize>>,
    active_ids: Vec<usize>,
    picks: usize,
    pub given_count: usize,
}

impl<'a> Saturation<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Saturation {
            sig,
            kbo: Kbo::new(sig),
            store: Vec::new(),
            selected: Vec::new(),
            active: Vec::new(),
            passive: Vec::new(),
            by_weight: BinaryHeap::new(),
            by_age: BinaryHeap::new(),
            active_ids: Vec::new(),
            picks: 0,
            given_count: 0,
        }
    }

    /// Adds an input clause. Returns `false` if it is the empty clause.
    pub fn add(&mut self, lits: Vec<Lit>) -> bool {
        match Clause::new(lits) {
            Some(c) if c.is_empty() => false,
            Some(c) => {
                self.push_passive(c);
                true
            }
            None => true,
        }
    }

    fn push_passive(&mut self, mut c: Clause) {
        let id = self.store.len();
        c.id = id;
        // Long clauses wait a little longer than their symbol count says.
        let w = c.weight + c.lits.len();
        self.by_weight.push(Reverse((w, id)));
        self.by_age.push(Reverse(id));
        self.store.push(c);
        self.selected.push(None);
        self.active.push(false);
        self.passive.push(true);
    }

    fn pop_passive(&mut self) -> Option<usize> {
        self.picks += 1;
        let by_age = self.picks % AGE_RATIO == 0;
        loop {
            let id = if by_age {
                self.by_age.pop().map(|Reverse(id)| id).or_else(|| self.by_weight.pop().map(|Reverse((_, id))| id))?
            } else {
                self.by_weight.pop().map(|Reverse((_, id))| id).or_else(|| self.by_age.pop().map(|Reverse(id)| id))?
            };
            if self.passive[id] {
                self.passive[id] = false;
                return Some(id);
            }
        }
    }

    pub fn run(&mut self, limits: &Limits) -> Outcome {
        loop {
            if self.given_count % 32 == 0 {
                if limits.stop.is_some_and(|s| s.load(Ordering::Relaxed)) {
                    return Outcome::Stopped;
                }
                if limits.deadline.is_some_and(|d| Instant::now() >= d) {
                    return Outcome::Stopped;
                }
            }
            let Some(id) = self.pop_passive() else {
                return Outcome::Saturated;
            };
            self.given_count += 1;
            let Some(given) = self.simplify(&self.store[id].clone()) else {
                continue;
            };
            if given.is_empty() {
                return Outcome::Refutation;
            }
            if self.active_ids.iter().any(|&a| subsumes(&self.store[a], &given)) {
                continue;
            }
            let gid = self.store.len();
            self.push_passive(given);
            self.passive[gid] = false;
            if self.activate(gid) {
                return Outcome::Refutation;
            }
        }
    }

    /// Moves `gid` into the active set and performs all inferences with it.
    /// `true` on deriving the empty clause.
    fn activate(&mut self, gid: usize) -> bool {
        self.backward_simplify(gid);
        self.selected[gid] = select(&self.store[gid]);
        self.active[gid] = true;
        self.active_ids.push(gid);
        let mut out = Vec::new();
        let given = self.store[gid].clone();
        let gsel = self.selected[gid];
        equality_resolution(&given, gsel, &self.kbo, self.sig, &mut out);
        equality_factoring(&given, gsel, &self.kbo, self.sig, &mut out);
        for &other in &self.active_ids {
            let c = &self.store[other];
            let csel = self.selected[other];
            superpose(&given, gsel, c, csel, &self.kbo, self.sig, &mut out);
            if other != gid {
                superpose(c, csel, &given, gsel, &self.kbo, self.sig, &mut out);
            }
        }
        for lits in out {
            let Some(c) = Clause::new(lits) else { continue };
            let Some(c) = self.simplify(&c) else { continue };
            if c.is_empty() {
                return true;
            }
            self.push_passive(c);
        }
        false
    }

    fn active_units(&self) -> impl Iterator<Item = &Clause> {
        self.active_ids.iter().map(|&i| &self.store[i]).filter(|c| c.is_unit())
    }

    /// Demodulation and unit deletion against the active set, to a fixpoint.
    fn simplify(&self, c: &Clause) -> Option<Clause> {
        let mut lits = c.lits.clone();
        let mut changed = true;
        let mut rounds = 0;
        while changed && rounds < 64 {
            changed = false;
            rounds += 1;
            let units: Vec<&Clause> = self.active_units().collect();
            let rules: Vec<&Lit> =
                units.iter().map(|u| &u.lits[0]).filter(|l| l.pos && !l.is_predicate()).collect();
            if !rules.is_empty() {
                for i in 0..lits.len() {
                    if let Some(new) = rewrite_literal(&lits[i], &rules, &self.kbo) {
                        lits[i] = new;
                        changed = true;
                    }
                }
            }
            let before = lits.len();
            lits.retain(|l| !units.iter().any(|u| cuts(&u.lits[0], l)));
            changed |= lits.len() != before;
            if changed {
                let c = Clause::new(lits)?;
                lits = c.lits;
            }
        }
        Clause::new(lits)
    }

    /// Removes active clauses made redundant by `gid`; simplifiable ones go
    /// back to passive in simplified form.
    fn backward_simplify(&mut self, gid: usize) {
        let g = self.store[gid].clone();
        let rule = (g.is_unit() && g.lits[0].pos && !g.lits[0].is_predicate()).then(|| g.lits[0].clone());
        let mut requeue = Vec::new();
        let mut keep = Vec::with_capacity(self.active_ids.len());
        for &a in &self.active_ids {
            let c = &self.store[a];
            if subsumes(&g, c) {
                self.active[a] = false;
                continue;
            }
            let mut simplified = None;
            if g.is_unit() {
                let mut lits = c.lits.clone();
                let mut hit = false;
                if let Some(rule) = &rule {
                    for l in lits.iter_mut() {
                        if let Some(new) = rewrite_literal(l, &[rule], &self.kbo) {
                            *l = new;
                            hit = true;
                        }
                    }
                }
                let before = lits.len();
                lits.retain(|l| !cuts(&g.lits[0], l));
                hit |= lits.len() != before;
                if hit {
                    simplified = Some(Clause::new(lits));
                }
            }
            match simplified {
                Some(new) => {
                    self.active[a] = false;
                    if let Some(new) = new {
                        requeue.push(new);
                    }
                }
                None => keep.push(a),
            }
        }
        self.active_ids = keep;
        for c in requeue {
            self.push_passive(c);
        }
    }
}

/// The heaviest negative literal, if any.
fn select(c: &Clause) -> Option<usize> {
    c.lits
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.pos)
        .max_by_key(|(i, l)| (l.weight(), Reverse(*i)))
        .map(|(i, _)| i)
}

/// Orientations `(s, t)` of a literal with `s` possibly maximal.
fn sides<'l>(l: &'l Lit, kbo: &Kbo) -> Vec<(&'l Term, &'l Term)> {
    if l.is_predicate() {
        return vec![(&l.l, &l.r)];
    }
    match kbo.compare(&l.l, &l.r) {
        Cmp::Greater => vec![(&l.l, &l.r)],
        Cmp::Less => vec![(&l.r, &l.l)],
        _ => vec![(&l.l, &l.r), (&l.r, &l.l)],
    }
}

fn not_smaller(s: &Term, t: &Term, kbo: &Kbo) -> bool {
    matches!(kbo.compare(s, t), Cmp::Greater | Cmp::Incomparable)
}

fn apply_all(lits: &[Lit], s: &Subst) -> Vec<Lit> {
    lits.iter().map(|l| l.apply(s)).collect()
}

fn superpose(
    from: &Clause,
    from_sel: Option<usize>,
    into: &Clause,
    into_sel: Option<usize>,
    kbo: &Kbo,
    sig: &Signature,
    out: &mut Vec<Vec<Lit>>,
) {
    if from_sel.is_some() {
        return;
    }
    let shift = from.nvars;
    let into_lits: Vec<Lit> = into.lits.iter().map(|l| l.offset(shift)).collect();
    let nvars = (from.nvars + into.nvars) as usize;
    for (i, fl) in from.lits.iter().enumerate() {
        if !fl.pos || !is_maximal(&from.lits, i, false, kbo) {
            continue;
        }
        for (l, r) in sides(fl, kbo) {
            for (j, dl) in into_lits.iter().enumerate() {
                match into_sel {
                    Some(k) if k != j => continue,
                    None if !is_maximal(&into_lits, j, false, kbo) => continue,
                    _ => {}
                }
                if fl.is_predicate() && (dl.pos || !dl.is_predicate()) {
                    continue;
                }
                for (s, t) in sides(dl, kbo) {
                    let mut positions = Vec::new();
                    s.positions(&mut positions);
                    for p in positions {
                        let u = s.at(&p);
                        match l {
                            Term::App(f, _) if u.head() != Some(*f) => continue,
                            Term::Var(_) if u.head().is_some_and(|h| sig.is_predicate(h) || h == TRUE) => continue,
                            _ => {}
                        }
                        let mut sub = Subst::new(nvars);
                        if !sub.unify(l, u, sig) {
                            continue;
                        }
                        let (l_s, r_s) = (sub.apply(l), sub.apply(r));
                        if !not_smaller(&l_s, &r_s, kbo) {
                            continue;
                        }
                        let f_s = apply_all(&from.lits, &sub);
                        if !is_maximal(&f_s, i, true, kbo) {
                            continue;
                        }
                        let (s_s, t_s) = (sub.apply(s), sub.apply(t));
                        if !not_smaller(&s_s, &t_s, kbo) {
                            continue;
                        }
                        let d_s = apply_all(&into_lits, &sub);
                        if into_sel.is_none() && !is_maximal(&d_s, j, dl.pos, kbo) {
                            continue;
                        }
                        let mut lits = Vec::with_capacity(f_s.len() + d_s.len() - 1);
                        lits.push(Lit::new(dl.pos, s_s.replace_at(&p, &r_s), t_s));
                        lits.extend(d_s.into_iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| l));
                        lits.extend(f_s.into_iter().enumerate().filter(|(k, _)| *k != i).map(|(_, l)| l));
                        out.push(lits);
                    }
                }
            }
        }
    }
}

fn equality_resolution(c: &Clause, sel: Option<usize>, kbo: &Kbo, sig: &Signature, out: &mut Vec<Vec<Lit>>) {
    for (j, l) in c.lits.iter().enumerate() {
        if l.pos || l.is_predicate() {
            continue;
        }
        match sel {
            Some(k) if k != j => continue,
            None if !is_maximal(&c.lits, j, false, kbo) => continue,
            _ => {}
        }
        let mut sub = Subst::new(c.nvars as usize);
        if !sub.unify(&l.l, &l.r, sig) {
            continue;
        }
        let lits = apply_all(&c.lits, &sub);
        if sel.is_none() && !is_maximal(&lits, j, false, kbo) {
            continue;
        }
        out.push(lits.into_iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| l).collect());
    }
}

fn equality_factoring(c: &Clause, sel: Option<usize>, kbo: &Kbo, sig: &Signature, out: &mut Vec<Vec<Lit>>) {
    if sel.is_some() {
        return;
    }
    for (i, a) in c.lits.iter().enumerate() {
        if !a.pos || !is_maximal(&c.lits, i, false, kbo) {
            continue;
        }
        for (s, t) in sides(a, kbo) {
            for (k, b) in c.lits.iter().enumerate() {
                if k == i || !b.pos || a.is_predicate() != b.is_predicate() {
                    continue;
                }
                let orients: Vec<(&Term, &Term)> =
                    if b.is_predicate() { vec![(&b.l, &b.r)] } else { vec![(&b.l, &b.r), (&b.r, &b.l)] };
                for (s2, t2) in orients {
                    let mut sub = Subst::new(c.nvars as usize);
                    if !sub.unify(s, s2, sig) {
                        continue;
                    }
                    let (s_s, t_s) = (sub.apply(s), sub.apply(t));
                    if !not_smaller(&s_s, &t_s, kbo) {
                        continue;
                    }
                    let lits = apply_all(&c.lits, &sub);
                    if !is_maximal(&lits, i, false, kbo) {
                        continue;
                    }
                    let mut res = vec![Lit::new(false, t_s, sub.apply(t2))];
                    res.extend(lits.into_iter().enumerate().filter(|(m, _)| *m != i).map(|(_, l)| l));
                    out.push(res);
                }
            }
        }
    }
}

/// One rewrite step somewhere in `t`, innermost first.
fn rewrite_once(t: &Term, rules: &[&Lit], kbo: &Kbo) -> Option<Term> {
    if let Term::App(f, args) = t {
        for (i, a) in args.iter().enumerate() {
            if let Some(new) = rewrite_once(a, rules, kbo) {
                let mut args = args.clone();
                args[i] = new;
                return Some(Term::App(*f, args));
            }
        }
        for rule in rules {
            for (l, r) in [(&rule.l, &rule.r), (&rule.r, &rule.l)] {
                if l.is_var() {
                    continue;
                }
                let mut m = Subst::default();
                if m.matches(l, t) {
                    let r_s = m.instantiate(r);
                    if kbo.greater(t, &r_s) {
                        return Some(r_s);
                    }
                }
            }
        }
    }
    None
}

fn normalize(t: &Term, rules: &[&Lit], kbo: &Kbo, root_bound: Option<&Term>) -> Option<Term> {
    let mut cur = t.clone();
    let mut changed = false;
    for _ in 0..256 {
        let next = match rewrite_once(&cur, rules, kbo) {
            Some(n) => n,
            None => break,
        };
        // A root step on the larger side of a positive literal is only
        // redundant if the rule instance is smaller than the literal.
        if let (Some(other), Some(_)) = (root_bound, cur.head()) {
            if is_root_step(&cur, &next) && !kbo.greater(other, &next) {
                break;
            }
        }
        cur = next;
        changed = true;
    }
    changed.then_some(cur)
}

fn is_root_step(before: &Term, after: &Term) -> bool {
    match (before, after) {
        (Term::App(f, xs), Term::App(g, ys)) => f != g || xs.len() != ys.len(),
        _ => true,
    }
}

fn rewrite_literal(l: &Lit, rules: &[&Lit], kbo: &Kbo) -> Option<Lit> {
    if l.is_predicate() {
        let Term::App(p, args) = &l.l else { return None };
        let mut changed = false;
        let args: Vec<Term> = args
            .iter()
            .map(|a| match normalize(a, rules, kbo, None) {
                Some(n) => {
                    changed = true;
                    n
                }
                None => a.clone(),
            })
            .collect();
        return changed.then(|| Lit::atom(l.pos, Term::App(*p, args)));
    }
    let (nl, nr) = if l.pos {
        (normalize(&l.l, rules, kbo, Some(&l.r)), normalize(&l.r, rules, kbo, Some(&l.l)))
    } else {
        (normalize(&l.l, rules, kbo, None), normalize(&l.r, rules, kbo, None))
    };
    if nl.is_none() && nr.is_none() {
        return None;
    }
    Some(Lit::new(l.pos, nl.unwrap_or_else(|| l.l.clone()), nr.unwrap_or_else(|| l.r.clone())))
}

/// Unit `u` contradicts an instance of `l`, so `l` can go.
fn cuts(u: &Lit, l: &Lit) -> bool {
    if u.pos == l.pos || u.is_predicate() != l.is_predicate() {
        return false;
    }
    let mut m = Subst::default();
    if u.is_predicate() {
        return m.matches(&u.l, &l.l);
    }
    for (a, b) in [(&l.l, &l.r), (&l.r, &l.l)] {
        let mut m = Subst::default();
        if m.matches(&u.l, a) && m.matches(&u.r, b) {
            return true;
        }
    }
    false
}

fn lit_matches(a: &Lit, b: &Lit, sub: &Subst) -> Vec<Subst> {
    if a.pos != b.pos || a.is_predicate() != b.is_predicate() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let orients: &[(bool, bool)] = if a.is_predicate() { &[(false, false)] } else { &[(false, false), (true, true)] };
    for &(flip, _) in orients {
        let (bl, br) = if flip { (&b.r, &b.l) } else { (&b.l, &b.r) };
        let mut m = sub.clone();
        if m.matches(&a.l, bl) && m.matches(&a.r, br) {
            out.push(m);
        }
    }
    out
}

fn feature(l: &Lit) -> (bool, u32) {
    match (&l.l, l.is_predicate()) {
        (Term::App(p, _), true) => (l.pos, *p),
        _ => (l.pos, u32::MAX),
    }
}

/// Some instance of `a` is a sub-multiset of `b`.
pub fn subsumes(a: &Clause, b: &Clause) -> bool {
    if a.lits.len() > b.lits.len() {
        return false;
    }
    let mut fb: Vec<(bool, u32)> = b.lits.iter().map(feature).collect();
    for l in &a.lits {
        match fb.iter().position(|f| *f == feature(l)) {
            Some(i) => {
                fb.swap_remove(i);
            }
            None => return false,
        }
    }
    fn go(a: &[Lit], b: &[Lit], used: &mut Vec<bool>, sub: &Subst) -> bool {
        let Some((first, rest)) = a.split_first() else { return true };
        for (j, bl) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            for m in lit_matches(first, bl, sub) {
                used[j] = true;
                if go(rest, b, used, &m) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(&a.lits, &b.lits, &mut vec![false; b.lits.len()], &Subst::default())
}
