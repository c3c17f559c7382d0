use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
}

impl BondOrder {
    pub const ALL: [BondOrder; 3] = [BondOrder::Single, BondOrder::Double, BondOrder::Triple];

    pub fn word(self) -> &'static str {
        match self {
            BondOrder::Single => "single",
            BondOrder::Double => "double",
            BondOrder::Triple => "triple",
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BondOrder::Single => "",
            BondOrder::Double => "=",
            BondOrder::Triple => "#",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    /// Element symbol as written (`C`, `Cl`, `H`); `None` for `*`.
    pub element: Option<String>,
    pub charge: i32,
}

impl Atom {
    pub fn is_wildcard(&self) -> bool {
        self.element.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub order: BondOrder,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MolecularGraph {
    pub atoms: Vec<Atom>,
    /// Sorted, `i < j`, at most one per pair.
    pub bonds: Vec<Bond>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SmilesError {
    #[error("empty SMILES string")]
    Empty,
    #[error("unexpected `{found}` at position {pos}")]
    Unexpected { found: char, pos: usize },
    #[error("unbalanced branch at position {pos}")]
    UnbalancedBranch { pos: usize },
    #[error("ring closure {label} is never closed")]
    UnmatchedRing { label: u32 },
    #[error("bond at position {pos} has no atom on one side")]
    DanglingBond { pos: usize },
    #[error("atoms {i} and {j} are bonded twice")]
    DuplicateBond { i: usize, j: usize },
    #[error("ring closure {label} bonds an atom to itself")]
    SelfBond { label: u32 },
    #[error("aromatic atom `{atom}` at position {pos} is not supported")]
    Aromatic { atom: String, pos: usize },
    #[error("stereo marker `{marker}` at position {pos} is not supported")]
    Stereo { marker: char, pos: usize },
    #[error("isotope label at position {pos} is not supported")]
    Isotope { pos: usize },
    #[error("bond `{bond}` at position {pos} is not supported")]
    UnsupportedBond { bond: char, pos: usize },
    #[error("unknown element `{element}` at position {pos}")]
    UnknownElement { element: String, pos: usize },
    #[error("unterminated bracket atom at position {pos}")]
    UnterminatedBracket { pos: usize },
}

const ORGANIC: [&str; 10] = ["Cl", "Br", "B", "C", "N", "O", "P", "S", "F", "I"];

const ELEMENTS: &str = "H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe Co Ni Cu Zn Ga Ge \
     As Se Br Kr Rb Sr Y Zr Nb Mo Tc Ru Rh Pd Ag Cd In Sn Sb Te I Xe Cs Ba La Ce Pr Nd Pm Sm Eu Gd Tb Dy Ho Er \
     Tm Yb Lu Hf Ta W Re Os Ir Pt Au Hg Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf Es Fm Md No Lr";

fn is_element(s: &str) -> bool {
    ELEMENTS.split_whitespace().any(|e| e == s)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    graph: MolecularGraph,
    pairs: BTreeMap<(usize, usize), BondOrder>,
    rings: BTreeMap<u32, (usize, Option<BondOrder>)>,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn add_atom(&mut self, element: Option<String>, charge: i32) -> usize {
        self.graph.atoms.push(Atom { element, charge });
        self.graph.atoms.len() - 1
    }

    fn add_bond(&mut self, a: usize, b: usize, order: BondOrder) -> Result<(), SmilesError> {
        let key = (a.min(b), a.max(b));
        if self.pairs.insert(key, order).is_some() {
            return Err(SmilesError::DuplicateBond { i: key.0, j: key.1 });
        }
        Ok(())
    }

    fn bracket(&mut self) -> Result<usize, SmilesError> {
        let start = self.pos;
        self.pos += 1;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err(SmilesError::Isotope { pos: self.pos });
        }
        let element = match self.peek() {
            Some('*') => {
                self.pos += 1;
                None
            }
            Some(c) if c.is_ascii_uppercase() => {
                let mut sym = c.to_string();
                if let Some(n) = self.chars.get(self.pos + 1).filter(|n| n.is_ascii_lowercase()) {
                    let two = format!("{c}{n}");
                    if is_element(&two) {
                        sym = two;
                    }
                }
                if !is_element(&sym) {
                    return Err(SmilesError::UnknownElement { element: sym, pos: self.pos });
                }
                self.pos += sym.len();
                Some(sym)
            }
            Some(c) if c.is_ascii_lowercase() => {
                return Err(SmilesError::Aromatic { atom: c.to_string(), pos: self.pos });
            }
            Some(c) => return Err(SmilesError::Unexpected { found: c, pos: self.pos }),
            None => return Err(SmilesError::UnterminatedBracket { pos: start }),
        };
        if let Some(c @ '@') = self.peek() {
            return Err(SmilesError::Stereo { marker: c, pos: self.pos });
        }
        let mut hydrogens = 0;
        if self.peek() == Some('H') {
            self.pos += 1;
            hydrogens = self.number().unwrap_or(1);
        }
        let mut charge = 0i32;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let sign = if c == '+' { 1 } else { -1 };
            match self.number() {
                Some(n) => charge += sign * n as i32,
                None => charge += sign,
            }
        }
        match self.peek() {
            Some(']') => self.pos += 1,
            Some(':') => return Err(SmilesError::Unexpected { found: ':', pos: self.pos }),
            Some(c) => return Err(SmilesError::Unexpected { found: c, pos: self.pos }),
            None => return Err(SmilesError::UnterminatedBracket { pos: start }),
        }
        let atom = self.add_atom(element, charge);
        for _ in 0..hydrogens {
            let h = self.add_atom(Some("H".into()), 0);
            self.add_bond(atom, h, BondOrder::Single)?;
        }
        Ok(atom)
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn organic(&mut self) -> Result<usize, SmilesError> {
        let rest: String = self.chars[self.pos..].iter().take(2).collect();
        for sym in ORGANIC {
            if rest.starts_with(sym) {
                self.pos += sym.len();
                return Ok(self.add_atom(Some(sym.to_string()), 0));
            }
        }
        let c = self.chars[self.pos];
        if matches!(c, 'b' | 'c' | 'n' | 'o' | 'p' | 's') {
            return Err(SmilesError::Aromatic { atom: c.to_string(), pos: self.pos });
        }
        let mut sym = c.to_string();
        if let Some(n) = self.chars.get(self.pos + 1).filter(|n| n.is_ascii_lowercase()) {
            sym.push(*n);
        }
        Err(SmilesError::UnknownElement { element: sym, pos: self.pos })
    }

    fn parse(mut self) -> Result<MolecularGraph, SmilesError> {
        if self.chars.is_empty() {
            return Err(SmilesError::Empty);
        }
        let mut stack: Vec<(Option<usize>, usize)> = Vec::new();
        let mut prev: Option<usize> = None;
        let mut pending: Option<(BondOrder, usize)> = None;
        while let Some(c) = self.peek() {
            let at = self.pos;
            match c {
                '(' => {
                    if prev.is_none() {
                        return Err(SmilesError::UnbalancedBranch { pos: at });
                    }
                    stack.push((prev, at));
                    self.pos += 1;
                }
                ')' => {
                    if pending.is_some() {
                        return Err(SmilesError::DanglingBond { pos: at });
                    }
                    prev = stack.pop().ok_or(SmilesError::UnbalancedBranch { pos: at })?.0;
                    self.pos += 1;
                }
                '-' | '=' | '#' => {
                    if prev.is_none() || pending.is_some() {
                        return Err(SmilesError::DanglingBond { pos: at });
                    }
                    let order = match c {
                        '-' => BondOrder::Single,
                        '=' => BondOrder::Double,
                        _ => BondOrder::Triple,
                    };
                    pending = Some((order, at));
                    self.pos += 1;
                }
                ':' | '$' => return Err(SmilesError::UnsupportedBond { bond: c, pos: at }),
                '/' | '\\' | '@' => return Err(SmilesError::Stereo { marker: c, pos: at }),
                '.' => {
                    if pending.is_some() || prev.is_none() {
                        return Err(SmilesError::DanglingBond { pos: at });
                    }
                    prev = None;
                    self.pos += 1;
                }
                '0'..='9' | '%' => {
                    let Some(p) = prev else {
                        return Err(SmilesError::Unexpected { found: c, pos: at });
                    };
                    self.pos += 1;
                    let label = if c == '%' {
                        let d: String = self.chars[self.pos..].iter().take(2).collect();
                        if d.len() != 2 || !d.chars().all(|c| c.is_ascii_digit()) {
                            return Err(SmilesError::Unexpected { found: '%', pos: at });
                        }
                        self.pos += 2;
                        d.parse().unwrap()
                    } else {
                        c.to_digit(10).unwrap()
                    };
                    let order = pending.take().map(|(o, _)| o);
                    match self.rings.remove(&label) {
                        None => {
                            self.rings.insert(label, (p, order));
                        }
                        Some((q, open_order)) => {
                            if q == p {
                                return Err(SmilesError::SelfBond { label });
                            }
                            let order = order.or(open_order).unwrap_or(BondOrder::Single);
                            self.add_bond(q, p, order)?;
                        }
                    }
                }
                '[' | '*' | 'A'..='Z' | 'a'..='z' => {
                    let atom = match c {
                        '[' => self.bracket()?,
                        '*' => {
                            self.pos += 1;
                            self.add_atom(None, 0)
                        }
                        _ => self.organic()?,
                    };
                    if let Some(p) = prev {
                        let order = pending.take().map_or(BondOrder::Single, |(o, _)| o);
                        self.add_bond(p, atom, order)?;
                    } else if let Some((_, pos)) = pending {
                        return Err(SmilesError::DanglingBond { pos });
                    }
                    prev = Some(atom);
                }
                _ => return Err(SmilesError::Unexpected { found: c, pos: at }),
            }
        }
        if let Some((_, pos)) = stack.pop() {
            return Err(SmilesError::UnbalancedBranch { pos });
        }
        if let Some((_, pos)) = pending {
            return Err(SmilesError::DanglingBond { pos });
        }
        if let Some((&label, _)) = self.rings.iter().next() {
            return Err(SmilesError::UnmatchedRing { label });
        }
        self.graph.bonds = self.pairs.iter().map(|(&(i, j), &order)| Bond { i, j, order }).collect();
        Ok(self.graph)
    }
}

pub fn parse_smiles(s: &str) -> Result<MolecularGraph, SmilesError> {
    Parser {
        chars: s.trim().chars().collect(),
        pos: 0,
        graph: MolecularGraph::default(),
        pairs: BTreeMap::new(),
        rings: BTreeMap::new(),
    }
    .parse()
}

impl MolecularGraph {
    pub fn has_wildcard(&self) -> bool {
        self.atoms.iter().any(Atom::is_wildcard)
    }

    pub fn bond(&self, a: usize, b: usize) -> Option<BondOrder> {
        let (i, j) = (a.min(b), a.max(b));
        self.bonds.iter().find(|x| x.i == i && x.j == j).map(|x| x.order)
    }

    pub fn neighbours(&self, a: usize) -> impl Iterator<Item = (usize, BondOrder)> + '_ {
        self.bonds.iter().filter_map(move |b| {
            if b.i == a {
                Some((b.j, b.order))
            } else if b.j == a {
                Some((b.i, b.order))
            } else {
                None
            }
        })
    }

    /// Adds a bond keeping the sorted, one-per-pair invariant. Returns
    /// false when the pair is already bonded or `a == b`.
    pub fn add_bond(&mut self, a: usize, b: usize, order: BondOrder) -> bool {
        if a == b || self.bond(a, b).is_some() {
            return false;
        }
        self.bonds.push(Bond { i: a.min(b), j: a.max(b), order });
        self.bonds.sort();
        true
    }
}

fn atom_text(a: &Atom) -> String {
    match &a.element {
        None => "*".to_string(),
        Some(e) if a.charge == 0 && ORGANIC.contains(&e.as_str()) => e.clone(),
        Some(e) => {
            let mut s = format!("[{e}");
            match a.charge {
                0 => {}
                1 => s.push('+'),
                -1 => s.push('-'),
                c if c > 0 => {
                    let _ = write!(s, "+{c}");
                }
                c => {
                    let _ = write!(s, "-{}", -c);
                }
            }
            s.push(']');
            s
        }
    }
}

fn ring_label(n: u32) -> String {
    if n < 10 {
        n.to_string()
    } else {
        format!("%{n:02}")
    }
}

/// A SMILES string for `g` in the supported subset. Explicit hydrogens
/// stay separate atoms, so `parse_smiles` returns an isomorphic graph.
pub fn to_smiles(g: &MolecularGraph) -> String {
    let n = g.atoms.len();
    let mut visited = vec![false; n];
    let mut tree_children: Vec<Vec<(usize, BondOrder)>> = vec![Vec::new(); n];
    let mut ring_edges: Vec<(usize, usize, BondOrder)> = Vec::new();
    // Classify edges by an iterative DFS.
    for root in 0..n {
        if visited[root] {
            continue;
        }
        let mut stack = vec![(root, usize::MAX)];
        while let Some((a, parent)) = stack.pop() {
            if visited[a] {
                continue;
            }
            visited[a] = true;
            if parent != usize::MAX {
                let order = g.bond(parent, a).unwrap();
                tree_children[parent].push((a, order));
            }
            let mut next: Vec<(usize, BondOrder)> = g.neighbours(a).filter(|(b, _)| !visited[*b]).collect();
            next.sort();
            for (b, _) in next.into_iter().rev() {
                stack.push((b, a));
            }
        }
    }
    for b in &g.bonds {
        let tree = tree_children[b.i].iter().any(|(c, _)| *c == b.j) || tree_children[b.j].iter().any(|(c, _)| *c == b.i);
        if !tree {
            ring_edges.push((b.i, b.j, b.order));
        }
    }
    let mut rings_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, (i, j, _)) in ring_edges.iter().enumerate() {
        rings_at[*i].push(k);
        rings_at[*j].push(k);
    }

    let mut e = Emitter {
        g,
        out: String::new(),
        open: BTreeMap::new(),
        free: Vec::new(),
        next_label: 1,
        emitted: vec![false; n],
        children: tree_children,
        rings_at,
        ring_edges,
    };
    for root in 0..n {
        if e.emitted[root] {
            continue;
        }
        if !e.out.is_empty() {
            e.out.push('.');
        }
        e.emit(root);
    }
    e.out
}

struct Emitter<'a> {
    g: &'a MolecularGraph,
    out: String,
    /// Ring edge index → label while the ring is open.
    open: BTreeMap<usize, u32>,
    free: Vec<u32>,
    next_label: u32,
    emitted: Vec<bool>,
    children: Vec<Vec<(usize, BondOrder)>>,
    rings_at: Vec<Vec<usize>>,
    ring_edges: Vec<(usize, usize, BondOrder)>,
}

impl Emitter<'_> {
    fn label(&mut self) -> u32 {
        // Reuse the smallest free label.
        if let Some(pos) = self.free.iter().enumerate().min_by_key(|(_, l)| **l).map(|(i, _)| i) {
            return self.free.swap_remove(pos);
        }
        self.next_label += 1;
        self.next_label - 1
    }

    fn emit(&mut self, a: usize) {
        self.emitted[a] = true;
        self.out.push_str(&atom_text(&self.g.atoms[a]));
        for k in self.rings_at[a].clone() {
            let (i, j, order) = self.ring_edges[k];
            let other = if i == a { j } else { i };
            if let Some(label) = self.open.remove(&k) {
                self.out.push_str(order.symbol());
                self.out.push_str(&ring_label(label));
                self.free.push(label);
            } else if !self.emitted[other] {
                let label = self.label();
                self.out.push_str(&ring_label(label));
                self.open.insert(k, label);
            }
        }
        let children = self.children[a].clone();
        for (idx, (c, order)) in children.iter().enumerate() {
            let last = idx + 1 == children.len();
            if !last {
                self.out.push('(');
            }
            self.out.push_str(order.symbol());
            self.emit(*c);
            if !last {
                self.out.push(')');
            }
        }
    }
}
