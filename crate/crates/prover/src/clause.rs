use std::collections::HashMap;

use crate::kbo::{Cmp, Kbo};
use crate::term::{Signature, Subst, Term, Var, TRUE};

/// `l = r` or `l != r`. Predicate atoms sit on the left with `$true` on the
/// right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub pos: bool,
    pub l: Term,
    pub r: Term,
}

impl Lit {
    pub fn new(pos: bool, l: Term, r: Term) -> Lit {
        // Canonical side order, keeping atoms left of `$true`.
        if r.head() != Some(TRUE) && (l.head() == Some(TRUE) || l > r) {
            Lit { pos, l: r, r: l }
        } else {
            Lit { pos, l, r }
        }
    }

    pub fn atom(pos: bool, atom: Term) -> Lit {
        Lit { pos, l: atom, r: Term::truth() }
    }

    pub fn is_predicate(&self) -> bool {
        self.r.head() == Some(TRUE) && self.l.head() != Some(TRUE)
    }

    pub fn negate(&self) -> Lit {
        Lit { pos: !self.pos, ..self.clone() }
    }

    pub fn apply(&self, s: &Subst) -> Lit {
        Lit::new(self.pos, s.apply(&self.l), s.apply(&self.r))
    }

    pub fn offset(&self, by: Var) -> Lit {
        Lit { pos: self.pos, l: self.l.offset(by), r: self.r.offset(by) }
    }

    pub fn weight(&self) -> usize {
        self.l.size() + if self.is_predicate() { 0 } else { self.r.size() }
    }

    /// The literal as a multiset of terms for the literal ordering.
    fn multiset(&self) -> Vec<&Term> {
        if self.pos {
            vec![&self.l, &self.r]
        } else {
            vec![&self.l, &self.l, &self.r, &self.r]
        }
    }

    pub fn compare(&self, other: &Lit, kbo: &Kbo) -> Cmp {
        kbo.compare_multisets(&self.multiset(), &other.multiset())
    }

    pub fn show(&self, sig: &Signature) -> String {
        if self.is_predicate() {
            format!("{}{}", if self.pos { "" } else { "~" }, sig.show(&self.l))
        } else {
            format!("{} {} {}", sig.show(&self.l), if self.pos { "=" } else { "!=" }, sig.show(&self.r))
        }
    }
}

#[derive(Clone, Debug)]
pub struct Clause {
    pub lits: Vec<Lit>,
    pub nvars: Var,
    pub weight: usize,
    pub id: usize,
}

impl Clause {
    /// Renames variables densely, drops `t != t` and duplicate literals.
    /// `None` for tautologies.
    pub fn new(lits: Vec<Lit>) -> Option<Clause> {
        let mut out: Vec<Lit> = Vec::with_capacity(lits.len());
        for l in lits {
            if l.l == l.r {
                if l.pos {
                    return None;
                }
                continue;
            }
            if out.contains(&l) {
                continue;
            }
            if out.iter().any(|o| o.pos != l.pos && o.l == l.l && o.r == l.r) {
                return None;
            }
            out.push(l);
        }
        let mut map = HashMap::new();
        let mut next = 0;
        let lits: Vec<Lit> = out
            .into_iter()
            .map(|l| Lit::new(l.pos, l.l.rename(&mut map, &mut next), l.r.rename(&mut map, &mut next)))
            .collect();
        let weight = lits.iter().map(Lit::weight).sum();
        Some(Clause { lits, nvars: next, weight, id: 0 })
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.lits.len() == 1
    }

    pub fn is_ground(&self) -> bool {
        self.nvars == 0
    }

    pub fn show(&self, sig: &Signature) -> String {
        if self.lits.is_empty() {
            return "$false".into();
        }
        self.lits.iter().map(|l| l.show(sig)).collect::<Vec<_>>().join(" | ")
    }
}

/// `lits[i]` is not smaller than any other literal (`strict`: nor equal).
pub fn is_maximal(lits: &[Lit], i: usize, strict: bool, kbo: &Kbo) -> bool {
    lits.iter().enumerate().all(|(j, other)| {
        if j == i {
            return true;
        }
        match other.compare(&lits[i], kbo) {
            Cmp::Greater => false,
            Cmp::Equal => !strict,
            _ => true,
        }
    })
}
