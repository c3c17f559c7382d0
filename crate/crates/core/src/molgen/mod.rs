//! Molecular structures to FOL: substructure class definitions and
//! prototypical instances with domain closure.

mod smiles;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::fol::{Formula, Term, TptpProblem, TptpUnit};

pub use smiles::{parse_smiles, to_smiles, Atom, Bond, BondOrder, MolecularGraph, SmilesError};

pub const PART_OF: &str = "part_of";
pub const CONNECTED: &str = "connected";
pub const HAS_BOND: &str = "has_bond";
pub const HAS_NO_CHARGE: &str = "has_no_charge";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MolgenError {
    #[error("{id}: prototypical instances need a fully specified structure, found a wildcard atom")]
    WildcardInInstance { id: String },
    #[error("line {line}: {message}")]
    Input { line: usize, message: String },
    #[error("line {line} ({id}): {source}")]
    Smiles { line: usize, id: String, source: SmilesError },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    ClassDefinition,
    PrototypicalInstance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomScheme {
    pub kind: SchemeKind,
    pub class_id: String,
    pub formulas: Vec<Formula>,
}

/// `CHEBI:15377` and `chebi_15377` both become `15377`; anything outside
/// `[A-Za-z0-9_]` becomes `_`.
pub fn normalize_id(id: &str) -> String {
    let id = id.trim();
    let lower = id.to_ascii_lowercase();
    let rest = ["chebi:", "chebi_"].iter().find_map(|p| lower.strip_prefix(p).map(|_| &id[p.len()..])).unwrap_or(id);
    rest.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect()
}

pub fn class_predicate(id: &str) -> String {
    format!("chebi{}", normalize_id(id))
}

pub fn molecule_constant(id: &str) -> String {
    format!("m{}", normalize_id(id))
}

pub fn atom_constant(id: &str, i: usize) -> String {
    format!("n{}_{i}", normalize_id(id))
}

pub fn element_predicate(element: &str) -> String {
    element.to_ascii_lowercase()
}

pub fn charge_predicate(charge: i32) -> String {
    match charge {
        0 => HAS_NO_CHARGE.to_string(),
        c if c > 0 => format!("has_charge_plus_{c}"),
        c => format!("has_charge_minus_{}", -c),
    }
}

pub fn bond_predicate(order: BondOrder) -> String {
    format!("has_{}_bond_to", order.word())
}

/// Element, parthood and charge conjuncts for one atom.
fn atom_conjuncts(atom: &Atom, t: &Term, molecule: &Term, out: &mut Vec<Formula>) {
    if let Some(e) = &atom.element {
        out.push(Formula::pred(element_predicate(e), vec![t.clone()]));
    }
    out.push(Formula::pred(PART_OF, vec![t.clone(), molecule.clone()]));
    out.push(Formula::pred(charge_predicate(atom.charge), vec![t.clone()]));
}

/// `∀M (chebi<id>(M) ↔ ∃N.. (atoms ∧ bonds ∧ distinctness ∧ connected(M)))`.
/// Wildcard atoms and their bonds contribute nothing.
pub fn generate_class_definition(g: &MolecularGraph, class_id: &str) -> AxiomScheme {
    let m = Term::var("M");
    let real: Vec<usize> = (0..g.atoms.len()).filter(|&i| !g.atoms[i].is_wildcard()).collect();
    let var = |i: usize| Term::var(format!("N{i}"));
    let mut body = Vec::new();
    for &i in &real {
        atom_conjuncts(&g.atoms[i], &var(i), &m, &mut body);
    }
    for b in &g.bonds {
        if real.contains(&b.i) && real.contains(&b.j) {
            body.push(Formula::pred(bond_predicate(b.order), vec![var(b.i), var(b.j)]));
        }
    }
    for (k, &i) in real.iter().enumerate() {
        for &j in &real[k + 1..] {
            body.push(Formula::neq(var(j), var(i)));
        }
    }
    body.push(Formula::pred(CONNECTED, vec![m.clone()]));
    let vars = real.iter().map(|i| format!("N{i}")).collect();
    let def = Formula::iff(Formula::pred(class_predicate(class_id), vec![m]), Formula::exists(vars, Formula::and(body)));
    AxiomScheme {
        kind: SchemeKind::ClassDefinition,
        class_id: normalize_id(class_id),
        formulas: vec![Formula::forall(vec!["M".into()], def)],
    }
}

/// Ground description of one molecule plus the closure
/// `∀X (part_of(X, m) → X = n_0 ∨ …)`. A second formula keeps atoms of the
/// same element apart; atoms of different elements are already apart
/// through element disjointness.
pub fn generate_prototypical_instance(g: &MolecularGraph, class_id: &str) -> Result<AxiomScheme, MolgenError> {
    if g.has_wildcard() {
        return Err(MolgenError::WildcardInInstance { id: class_id.to_string() });
    }
    let m = Term::constant(molecule_constant(class_id));
    let n = |i: usize| Term::constant(atom_constant(class_id, i));
    let mut parts = Vec::new();
    for (i, a) in g.atoms.iter().enumerate() {
        atom_conjuncts(a, &n(i), &m, &mut parts);
    }
    for b in &g.bonds {
        parts.push(Formula::pred(bond_predicate(b.order), vec![n(b.i), n(b.j)]));
    }
    for i in 0..g.atoms.len() {
        for j in i + 1..g.atoms.len() {
            if g.bond(i, j).is_none() {
                parts.push(Formula::not(Formula::pred(HAS_BOND, vec![n(i), n(j)])));
            }
        }
    }
    let x = Term::var("X");
    let closure = Formula::implies(
        Formula::pred(PART_OF, vec![x.clone(), m.clone()]),
        Formula::or((0..g.atoms.len()).map(|i| Formula::eq(x.clone(), n(i))).collect()),
    );
    parts.push(Formula::forall(vec!["X".into()], closure));
    parts.push(Formula::pred(CONNECTED, vec![m]));
    let mut formulas = vec![Formula::and(parts)];

    let mut distinct = Vec::new();
    for i in 0..g.atoms.len() {
        for j in i + 1..g.atoms.len() {
            if g.atoms[i].element == g.atoms[j].element {
                distinct.push(Formula::neq(n(i), n(j)));
            }
        }
    }
    if !distinct.is_empty() {
        formulas.push(Formula::and(distinct));
    }
    Ok(AxiomScheme { kind: SchemeKind::PrototypicalInstance, class_id: normalize_id(class_id), formulas })
}

impl AxiomScheme {
    /// `chebi_<id>_0` for class definitions; `chebi_<id>_inst` (and
    /// `chebi_<id>_distinct`) for instances.
    pub fn units(&self) -> Vec<TptpUnit> {
        let id = &self.class_id;
        self.formulas
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let name = match (self.kind, k) {
                    (SchemeKind::ClassDefinition, k) => format!("chebi_{id}_{k}"),
                    (SchemeKind::PrototypicalInstance, 0) => format!("chebi_{id}_inst"),
                    (SchemeKind::PrototypicalInstance, 1) => format!("chebi_{id}_distinct"),
                    (SchemeKind::PrototypicalInstance, k) => format!("chebi_{id}_inst_{k}"),
                };
                TptpUnit::axiom(name, f.clone())
            })
            .collect()
    }

    /// Number of element-predicate conjuncts in the main formula.
    pub fn element_conjuncts(&self) -> usize {
        fn count(f: &Formula) -> usize {
            match f {
                Formula::Predicate(p, args) => {
                    usize::from(args.len() == 1 && p != CONNECTED && !p.starts_with("has_") && !p.starts_with("chebi"))
                }
                Formula::Not(g) => count(g),
                Formula::And(items) | Formula::Or(items) => items.iter().map(count).sum(),
                Formula::Implies(a, b) | Formula::Iff(a, b) => count(a) + count(b),
                Formula::Forall(_, b) | Formula::Exists(_, b) => count(b),
                _ => 0,
            }
        }
        self.formulas.first().map_or(0, count)
    }
}

/// The cross product `B(m_a)` in instance-major order, named
/// `member_<instance>_<class>`.
pub fn make_membership_conjectures(instances: &[String], classes: &[String]) -> Vec<(String, Formula)> {
    let mut out = Vec::with_capacity(instances.len() * classes.len());
    for a in instances {
        for b in classes {
            let name = format!("member_{}_{}", normalize_id(a), normalize_id(b));
            out.push((name, Formula::pred(class_predicate(b), vec![Term::constant(molecule_constant(a))])));
        }
    }
    out
}

/// Element disjointness for the elements given, bond symmetry, and every
/// bond order implying `has_bond`.
pub fn background_chemistry(elements: &BTreeSet<String>) -> TptpProblem {
    let mut units = Vec::new();
    let x = Term::var("X");
    let y = Term::var("Y");
    let elems: Vec<String> = elements.iter().map(|e| element_predicate(e)).collect::<BTreeSet<_>>().into_iter().collect();
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i + 1..] {
            let f = Formula::forall(
                vec!["X".into()],
                Formula::not(Formula::And(vec![
                    Formula::pred(a.as_str(), vec![x.clone()]),
                    Formula::pred(b.as_str(), vec![x.clone()]),
                ])),
            );
            units.push(TptpUnit::axiom(format!("chem_disjoint_{a}_{b}"), f));
        }
    }
    for order in BondOrder::ALL {
        let p = bond_predicate(order);
        let sym = Formula::implies(
            Formula::pred(p.as_str(), vec![x.clone(), y.clone()]),
            Formula::pred(p.as_str(), vec![y.clone(), x.clone()]),
        );
        units.push(TptpUnit::axiom(format!("chem_symmetric_{}", order.word()), Formula::forall(vec!["X".into(), "Y".into()], sym)));
        let bond = Formula::implies(
            Formula::pred(p.as_str(), vec![x.clone(), y.clone()]),
            Formula::pred(HAS_BOND, vec![x.clone(), y.clone()]),
        );
        units.push(TptpUnit::axiom(format!("chem_bond_{}", order.word()), Formula::forall(vec!["X".into(), "Y".into()], bond)));
    }
    TptpProblem::new(units)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryMode {
    Class,
    Instance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MolgenEntry {
    pub id: String,
    pub smiles: String,
    pub mode: EntryMode,
    pub graph: MolecularGraph,
}

/// Reads `<id>\t<smiles>\t<mode>` lines. Blank lines and `#` comments are
/// skipped.
pub fn parse_molgen_input(text: &str) -> Result<Vec<MolgenEntry>, MolgenError> {
    let (entries, mut errors) = parse_molgen_lines(text);
    match errors.is_empty() {
        true => Ok(entries),
        false => Err(errors.remove(0)),
    }
}

/// Like [`parse_molgen_input`], but keeps going past bad lines: the good
/// entries and every line error, both in file order.
pub fn parse_molgen_lines(text: &str) -> (Vec<MolgenEntry>, Vec<MolgenError>) {
    let (mut out, mut errors) = (Vec::new(), Vec::new());
    for (n, line) in text.lines().enumerate() {
        match parse_line(n + 1, line) {
            Ok(Some(e)) => out.push(e),
            Ok(None) => {}
            Err(e) => errors.push(e),
        }
    }
    (out, errors)
}

fn parse_line(line_no: usize, line: &str) -> Result<Option<MolgenEntry>, MolgenError> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    let [id, smiles, mode] = fields[..] else {
        return Err(MolgenError::Input {
            line: line_no,
            message: format!("expected 3 tab-separated fields, found {}", fields.len()),
        });
    };
    let mode = match mode {
        "class" => EntryMode::Class,
        "instance" => EntryMode::Instance,
        other => {
            return Err(MolgenError::Input {
                line: line_no,
                message: format!("mode must be `class` or `instance`, found `{other}`"),
            })
        }
    };
    if normalize_id(id).is_empty() {
        return Err(MolgenError::Input { line: line_no, message: "empty class id".into() });
    }
    let graph = parse_smiles(smiles).map_err(|source| MolgenError::Smiles { line: line_no, id: id.to_string(), source })?;
    if mode == EntryMode::Instance && graph.has_wildcard() {
        return Err(MolgenError::Input {
            line: line_no,
            message: format!("{id}: prototypical instances need a fully specified structure, found a wildcard atom"),
        });
    }
    Ok(Some(MolgenEntry { id: id.to_string(), smiles: smiles.to_string(), mode, graph }))
}

/// Everything a molgen input produces: chemistry background, class
/// definitions, instances, then one conjecture per instance and class.
#[derive(Clone, Debug, Default)]
pub struct MolgenOutput {
    pub axioms: TptpProblem,
    pub conjectures: Vec<(String, Formula)>,
}

pub fn generate(entries: &[MolgenEntry]) -> Result<MolgenOutput, MolgenError> {
    let mut elements = BTreeSet::new();
    let mut schemes = Vec::new();
    let (mut instances, mut classes) = (Vec::new(), Vec::new());
    for e in entries {
        elements.extend(e.graph.atoms.iter().filter_map(|a| a.element.clone()));
        match e.mode {
            EntryMode::Class => {
                schemes.push(generate_class_definition(&e.graph, &e.id));
                classes.push(e.id.clone());
            }
            EntryMode::Instance => {
                schemes.push(generate_prototypical_instance(&e.graph, &e.id)?);
                instances.push(e.id.clone());
            }
        }
    }
    let mut axioms = background_chemistry(&elements);
    for s in &schemes {
        axioms.units.extend(s.units());
    }
    Ok(MolgenOutput { axioms, conjectures: make_membership_conjectures(&instances, &classes) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::tptp::{display_formula, parse_tptp_formula};

    #[test]
    fn nitrile_class_definition_shape() {
        let g = parse_smiles("[*]C#N").unwrap();
        let s = generate_class_definition(&g, "CHEBI:18379");
        let expected = parse_tptp_formula(
            "![M]:(chebi18379(M) <=> (?[N1, N2]:( c(N1) & part_of(N1, M) & has_no_charge(N1) \
             & n(N2) & part_of(N2, M) & has_no_charge(N2) & has_triple_bond_to(N1, N2) & N2 != N1 \
             & connected(M))))",
        )
        .unwrap();
        assert_eq!(s.formulas[0], expected, "{}", display_formula(&s.formulas[0]));
        assert_eq!(s.units()[0].name, "chebi_18379_0");
        assert_eq!(s.element_conjuncts(), 2);
    }

    #[test]
    fn water_instance_shape() {
        let g = parse_smiles("O([H])[H]").unwrap();
        let s = generate_prototypical_instance(&g, "CHEBI:15377").unwrap();
        let expected = parse_tptp_formula(
            "o(n15377_0) & part_of(n15377_0, m15377) & has_no_charge(n15377_0) \
             & h(n15377_1) & part_of(n15377_1, m15377) & has_no_charge(n15377_1) \
             & h(n15377_2) & part_of(n15377_2, m15377) & has_no_charge(n15377_2) \
             & has_single_bond_to(n15377_0, n15377_1) & has_single_bond_to(n15377_0, n15377_2) \
             & ~has_bond(n15377_1, n15377_2) \
             & ![X]:(part_of(X, m15377) => (X=n15377_0 | X=n15377_1 | X=n15377_2)) & connected(m15377)",
        )
        .unwrap();
        assert_eq!(s.formulas[0], expected, "{}", display_formula(&s.formulas[0]));
        assert_eq!(s.formulas[1], parse_tptp_formula("n15377_1 != n15377_2").unwrap());
        let names: Vec<String> = s.units().into_iter().map(|u| u.name).collect();
        assert_eq!(names, ["chebi_15377_inst", "chebi_15377_distinct"]);
        assert_eq!(s.element_conjuncts(), 3);
    }

    #[test]
    fn single_carbon_class() {
        let s = generate_class_definition(&parse_smiles("C").unwrap(), "1");
        let expected = parse_tptp_formula(
            "![M]: (chebi1(M) <=> ?[N0]: (c(N0) & part_of(N0,M) & has_no_charge(N0) & connected(M)))",
        )
        .unwrap();
        assert_eq!(s.formulas[0], expected);
    }

    #[test]
    fn disconnected_atoms_have_no_bond_atom() {
        let s = generate_class_definition(&parse_smiles("C.N").unwrap(), "2");
        let text = display_formula(&s.formulas[0]);
        assert!(text.contains("? [N0,N1]"), "{text}");
        assert!(!text.contains("bond"), "{text}");
    }

    #[test]
    fn instance_counts() {
        let s = generate_prototypical_instance(&parse_smiles("C").unwrap(), "3").unwrap();
        let text = display_formula(&s.formulas[0]);
        assert!(text.contains("=> X = n3_0)"), "{text}");
        assert!(!text.contains("bond"));
        assert_eq!(s.formulas.len(), 1);
        assert!(matches!(
            generate_prototypical_instance(&parse_smiles("*C").unwrap(), "4"),
            Err(MolgenError::WildcardInInstance { .. })
        ));
    }

    #[test]
    fn charges() {
        let s = generate_prototypical_instance(&parse_smiles("[NH4+]").unwrap(), "5").unwrap();
        let text = display_formula(&s.formulas[0]);
        assert!(text.contains("has_charge_plus_1(n5_0)"));
        assert_eq!(charge_predicate(-2), "has_charge_minus_2");
    }

    #[test]
    fn conjectures_are_instance_major() {
        let c = make_membership_conjectures(&["a".into()], &["b".into()]);
        assert_eq!(c.len(), 1);
        let c = make_membership_conjectures(&["1".into(), "2".into()], &["x".into(), "y".into(), "z".into()]);
        let names: Vec<&str> = c.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["member_1_x", "member_1_y", "member_1_z", "member_2_x", "member_2_y", "member_2_z"]);
        assert_eq!(c[0].1, parse_tptp_formula("chebix(m1)").unwrap());
    }

    #[test]
    fn chemistry_background() {
        let two = background_chemistry(&BTreeSet::from(["C".to_string(), "N".to_string()]));
        assert_eq!(two.units.iter().filter(|u| u.name.starts_with("chem_disjoint")).count(), 1);
        let none = background_chemistry(&BTreeSet::new());
        assert_eq!(none.len(), 6);
        assert!(none.units.iter().all(|u| !u.name.starts_with("chem_disjoint")));
    }

    #[test]
    fn input_lines() {
        let text = "# comment\nCHEBI:18379\t[*]C#N\tclass\n\nCHEBI:15377\t[H]O[H]\tinstance\n";
        let entries = parse_molgen_input(text).unwrap();
        assert_eq!(entries.len(), 2);
        let out = generate(&entries).unwrap();
        assert_eq!(out.conjectures.len(), 1);
        assert_eq!(out.conjectures[0].0, "member_15377_18379");
        assert!(out.axioms.duplicate_name().is_none());
        assert!(matches!(parse_molgen_input("x\tC"), Err(MolgenError::Input { line: 1, .. })));
        assert!(matches!(parse_molgen_input("x\tc1ccccc1\tclass"), Err(MolgenError::Smiles { .. })));
        assert!(matches!(parse_molgen_input("x\tC\tboth"), Err(MolgenError::Input { .. })));
    }
}
