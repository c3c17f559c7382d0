use std::collections::HashMap;

pub type Sym = u32;
pub type Var = u32;

/// The constant `$true`; predicate atoms are encoded as `p(..) = $true`.
pub const TRUE: Sym = 0;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Sym, Vec<Term>),
}

impl Term {
    pub fn constant(s: Sym) -> Term {
        Term::App(s, Vec::new())
    }

    pub fn truth() -> Term {
        Term::App(TRUE, Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn head(&self) -> Option<Sym> {
        match self {
            Term::App(f, _) => Some(*f),
            Term::Var(_) => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn occurs(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(Var)) {
        match self {
            Term::Var(v) => f(*v),
            Term::App(_, args) => args.iter().for_each(|a| a.for_each_var(f)),
        }
    }

    pub fn max_var(&self) -> Option<Var> {
        let mut m = None;
        self.for_each_var(&mut |v| m = Some(m.map_or(v, |x: Var| x.max(v))));
        m
    }

    pub fn offset(&self, by: Var) -> Term {
        match self {
            Term::Var(v) => Term::Var(v + by),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.offset(by)).collect()),
        }
    }

    pub fn rename(&self, map: &mut HashMap<Var, Var>, next: &mut Var) -> Term {
        match self {
            Term::Var(v) => Term::Var(*map.entry(*v).or_insert_with(|| {
                *next += 1;
                *next - 1
            })),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.rename(map, next)).collect()),
        }
    }

    /// Subterm at `path`.
    pub fn at(&self, path: &[usize]) -> &Term {
        let mut t = self;
        for &i in path {
            match t {
                Term::App(_, args) => t = &args[i],
                Term::Var(_) => unreachable!("path leads through a variable"),
            }
        }
        t
    }

    pub fn replace_at(&self, path: &[usize], with: &Term) -> Term {
        match path.split_first() {
            None => with.clone(),
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, with);
                    Term::App(*f, args)
                }
                Term::Var(_) => unreachable!("path leads through a variable"),
            },
        }
    }

    /// Paths of all non-variable subterms, pre-order.
    pub fn positions(&self, out: &mut Vec<Vec<usize>>) {
        fn go(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if let Term::App(_, args) = t {
                out.push(path.clone());
                for (i, a) in args.iter().enumerate() {
                    path.push(i);
                    go(a, path, out);
                    path.pop();
                }
            }
        }
        go(self, &mut Vec::new(), out);
    }
}

#[derive(Clone, Debug)]
pub struct SymInfo {
    pub name: String,
    pub arity: usize,
    pub predicate: bool,
    pub skolem: bool,
}

#[derive(Clone, Debug)]
pub struct Signature {
    pub syms: Vec<SymInfo>,
    index: HashMap<(String, usize, bool), Sym>,
    fresh: usize,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    pub fn new() -> Self {
        let truth = SymInfo { name: "$true".into(), arity: 0, predicate: true, skolem: false };
        Signature { syms: vec![truth], index: HashMap::new(), fresh: 0 }
    }

    pub fn intern(&mut self, name: &str, arity: usize, predicate: bool) -> Sym {
        if let Some(&s) = self.index.get(&(name.to_string(), arity, predicate)) {
            return s;
        }
        let s = self.syms.len() as Sym;
        self.syms.push(SymInfo { name: name.to_string(), arity, predicate, skolem: false });
        self.index.insert((name.to_string(), arity, predicate), s);
        s
    }

    /// A symbol that cannot clash with any input name.
    pub fn fresh(&mut self, prefix: &str, arity: usize, predicate: bool) -> Sym {
        self.fresh += 1;
        let s = self.syms.len() as Sym;
        self.syms.push(SymInfo { name: format!("${prefix}{}", self.fresh), arity, predicate, skolem: true });
        s
    }

    pub fn info(&self, s: Sym) -> &SymInfo {
        &self.syms[s as usize]
    }

    pub fn is_predicate(&self, s: Sym) -> bool {
        self.syms[s as usize].predicate
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn show(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => format!("X{v}"),
            Term::App(f, args) if args.is_empty() => self.info(*f).name.clone(),
            Term::App(f, args) => {
                let args: Vec<String> = args.iter().map(|a| self.show(a)).collect();
                format!("{}({})", self.info(*f).name, args.join(","))
            }
        }
    }
}

/// Triangular substitution over a dense variable range.
#[derive(Clone, Debug, Default)]
pub struct Subst {
    bind: Vec<Option<Term>>,
}

impl Subst {
    pub fn new(vars: usize) -> Self {
        Subst { bind: vec![None; vars] }
    }

    fn get(&self, v: Var) -> Option<&Term> {
        self.bind.get(v as usize).and_then(Option::as_ref)
    }

    fn set(&mut self, v: Var, t: Term) {
        let i = v as usize;
        if i >= self.bind.len() {
            self.bind.resize(i + 1, None);
        }
        self.bind[i] = Some(t);
    }

    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.get(*v) {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    pub fn apply(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Var(v) => Term::Var(*v),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    /// Replaces bound variables once, without looking into their images;
    /// the counterpart of [`Subst::matches`].
    pub fn instantiate(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.get(*v).cloned().unwrap_or(Term::Var(*v)),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| self.instantiate(a)).collect()),
        }
    }

    fn occurs(&self, v: Var, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    /// Most general unifier, extending `self`. Variables range over
    /// individuals only, so they never bind to predicate atoms.
    pub fn unify(&mut self, a: &Term, b: &Term, sig: &Signature) -> bool {
        let a = self.walk(a).clone();
        let b = self.walk(b).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if let Term::App(f, _) = t {
                    if sig.is_predicate(*f) {
                        return false;
                    }
                }
                if self.occurs(*x, t) {
                    return false;
                }
                self.set(*x, t.clone());
                true
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y, sig))
            }
        }
    }

    /// One-way matching: binds variables of `pattern` only; `target` is
    /// taken literally, its variables included.
    pub fn matches(&mut self, pattern: &Term, target: &Term) -> bool {
        match pattern {
            Term::Var(x) => match self.get(*x) {
                Some(b) => b == target,
                None => {
                    self.set(*x, target.clone());
                    true
                }
            },
            Term::App(f, xs) => match target {
                Term::App(g, ys) => f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.matches(x, y)),
                Term::Var(_) => false,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> (Signature, Sym, Sym, Sym) {
        let mut s = Signature::new();
        let f = s.intern("f", 1, false);
        let a = s.intern("a", 0, false);
        let p = s.intern("p", 1, true);
        (s, f, a, p)
    }

    #[test]
    fn unify_and_occurs_check() {
        let (s, f, a, _) = sig();
        let x = Term::Var(0);
        let fx = Term::App(f, vec![x.clone()]);
        let mut u = Subst::new(2);
        assert!(!u.unify(&x, &fx, &s));
        let mut u = Subst::new(2);
        let fa = Term::App(f, vec![Term::constant(a)]);
        assert!(u.unify(&fx, &Term::App(f, vec![Term::Var(1)]), &s));
        assert!(u.unify(&Term::Var(1), &Term::constant(a), &s));
        assert_eq!(u.apply(&fx), fa);
    }

    #[test]
    fn variables_do_not_bind_atoms() {
        let (s, _, a, p) = sig();
        let mut u = Subst::new(1);
        assert!(!u.unify(&Term::Var(0), &Term::App(p, vec![Term::constant(a)]), &s));
    }

    #[test]
    fn matching_is_one_way() {
        let (_, f, a, _) = sig();
        let mut m = Subst::new(2);
        assert!(!m.matches(&Term::App(f, vec![Term::constant(a)]), &Term::App(f, vec![Term::Var(0)])));
        let mut m = Subst::new(2);
        assert!(m.matches(&Term::App(f, vec![Term::Var(0)]), &Term::App(f, vec![Term::Var(0)])));
    }

    #[test]
    fn positions_and_replacement() {
        let (_, f, a, _) = sig();
        let t = Term::App(f, vec![Term::App(f, vec![Term::Var(0)])]);
        let mut ps = Vec::new();
        t.positions(&mut ps);
        assert_eq!(ps, vec![vec![], vec![0]]);
        assert_eq!(t.replace_at(&[0], &Term::constant(a)), Term::App(f, vec![Term::constant(a)]));
    }
}
