//! Knuth-Bendix ordering with unit weights.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::term::{Signature, Sym, Term, Var, TRUE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl Cmp {
    pub fn flip(self) -> Cmp {
        match self {
            Cmp::Greater => Cmp::Less,
            Cmp::Less => Cmp::Greater,
            c => c,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Kbo {
    prec: Vec<u32>,
}

impl Kbo {
    /// `$true` lowest, then functions by arity, then predicates; ties by
    /// introduction order, so Skolem symbols rank above input symbols.
    pub fn new(sig: &Signature) -> Self {
        let mut syms: Vec<Sym> = (0..sig.len() as Sym).collect();
        syms.sort_by_key(|&s| {
            let i = sig.info(s);
            (s != TRUE, i.predicate, i.arity, s)
        });
        let mut prec = vec![0; sig.len()];
        for (rank, s) in syms.into_iter().enumerate() {
            prec[s as usize] = rank as u32;
        }
        Kbo { prec }
    }

    fn rank(&self, s: Sym) -> u32 {
        // Symbols added after construction (definitions) rank highest.
        self.prec.get(s as usize).copied().unwrap_or(u32::MAX - 1_000_000 + s)
    }

    pub fn compare(&self, s: &Term, t: &Term) -> Cmp {
        if s == t {
            return Cmp::Equal;
        }
        let mut balance: HashMap<Var, i64> = HashMap::new();
        let mut weight = 0i64;
        count(s, 1, &mut balance, &mut weight);
        count(t, -1, &mut balance, &mut weight);
        let s_covers = balance.values().all(|&n| n >= 0);
        let t_covers = balance.values().all(|&n| n <= 0);
        let gt = if s_covers { Cmp::Greater } else { Cmp::Incomparable };
        let lt = if t_covers { Cmp::Less } else { Cmp::Incomparable };
        match weight.cmp(&0) {
            Ordering::Greater => gt,
            Ordering::Less => lt,
            Ordering::Equal => match (s, t) {
                (Term::App(f, xs), Term::App(g, ys)) => match self.rank(*f).cmp(&self.rank(*g)) {
                    Ordering::Greater => gt,
                    Ordering::Less => lt,
                    Ordering::Equal => {
                        for (x, y) in xs.iter().zip(ys) {
                            match self.compare(x, y) {
                                Cmp::Equal => continue,
                                Cmp::Greater => return gt,
                                Cmp::Less => return lt,
                                Cmp::Incomparable => return Cmp::Incomparable,
                            }
                        }
                        Cmp::Equal
                    }
                },
                _ => Cmp::Incomparable,
            },
        }
    }

    pub fn greater(&self, s: &Term, t: &Term) -> bool {
        self.compare(s, t) == Cmp::Greater
    }

    /// Multiset extension: `m` against `n`.
    pub fn compare_multisets(&self, m: &[&Term], n: &[&Term]) -> Cmp {
        let mut m: Vec<&Term> = m.to_vec();
        let mut n: Vec<&Term> = n.to_vec();
        let mut i = 0;
        while i < m.len() {
            if let Some(j) = n.iter().position(|t| *t == m[i]) {
                m.swap_remove(i);
                n.swap_remove(j);
            } else {
                i += 1;
            }
        }
        if m.is_empty() && n.is_empty() {
            return Cmp::Equal;
        }
        let dominates = |a: &[&Term], b: &[&Term]| b.iter().all(|y| a.iter().any(|x| self.greater(x, y)));
        if dominates(&m, &n) {
            Cmp::Greater
        } else if dominates(&n, &m) {
            Cmp::Less
        } else {
            Cmp::Incomparable
        }
    }
}

fn count(t: &Term, sign: i64, balance: &mut HashMap<Var, i64>, weight: &mut i64) {
    *weight += sign;
    match t {
        Term::Var(v) => *balance.entry(*v).or_insert(0) += sign,
        Term::App(_, args) => args.iter().for_each(|a| count(a, sign, balance, weight)),
    }
}
