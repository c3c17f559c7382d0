//! Problem assembly and the consistency, entailment and membership
//! pipelines on top of an external SZS-speaking prover.

mod prover;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::align::{build_signature_map, AlignConfig, SignatureMap, Target};
use crate::fol::clif::{parse_clif, ClifError};
use crate::fol::mangle::unique_spelling;
use crate::fol::tptp::{parse_tptp_file, parse_tptp_formula, TptpError};
use crate::fol::{free_variables, Formula, Symbol, SymbolRole, Term, TptpProblem, TptpUnit, UnitRole};
use crate::owl::{
    extract_fol_annotations, signature_with_labels, AnnotationSelection, Axiom, ClassExpression, EntityKind, FolSyntax,
    Iri, OntologyDocument, OWL,
};
use crate::translate::{TranslateError, Translator};

pub use prover::{parse_szs_status, run_prover, ProverConfig, ProverVerdict, Status};

#[derive(Debug, Error)]
pub enum ReasonerError {
    #[error("annotation {index} on <{subject}> is not valid {syntax}: {message}")]
    Annotation { subject: Iri, index: usize, syntax: &'static str, message: String },
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

fn annotation_error(a: &crate::owl::FolAnnotation, index: usize, message: String) -> ReasonerError {
    ReasonerError::Annotation { subject: a.subject.clone(), index, syntax: a.syntax.name(), message }
}

/// Formulas of one annotation value. TPTP annotations hold a bare formula
/// or, failing that, whole `fof` units; free variables are closed
/// universally.
fn annotation_formulas(a: &crate::owl::FolAnnotation, index: usize) -> Result<Vec<Formula>, ReasonerError> {
    let formulas = match a.syntax {
        FolSyntax::Clif => parse_clif(&a.text).map_err(|e: ClifError| annotation_error(a, index, e.to_string()))?,
        FolSyntax::Tptp => match parse_tptp_formula(&a.text) {
            Ok(f) => vec![f],
            Err(first) => match parse_tptp_file(&a.text) {
                Ok(p) if !p.is_empty() => p.units.into_iter().map(|u| u.formula).collect(),
                _ => return Err(annotation_error(a, index, TptpError::to_string(&first))),
            },
        },
    };
    Ok(formulas.into_iter().map(close).collect())
}

fn close(f: Formula) -> Formula {
    let free: Vec<String> = free_variables(&f).into_iter().collect();
    Formula::forall(free, f)
}

#[derive(Clone, Debug)]
pub struct AssembleOptions {
    pub selection: AnnotationSelection,
    pub naming: Target,
    /// Leave FOL annotations out entirely.
    pub owl_only: bool,
    pub align: AlignConfig,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions {
            selection: AnnotationSelection::BySuffix,
            naming: Target::Iri,
            owl_only: false,
            align: AlignConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Assembled {
    pub problem: TptpProblem,
    pub map: SignatureMap,
}

/// The FOL material of one document: annotation formulas in document order.
fn document_annotations(doc: &OntologyDocument, opts: &AssembleOptions) -> Result<Vec<Formula>, ReasonerError> {
    if opts.owl_only {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (i, a) in extract_fol_annotations(doc, &opts.selection).iter().enumerate() {
        out.extend(annotation_formulas(a, i)?);
    }
    Ok(out)
}

struct Pieces {
    background: Vec<TptpUnit>,
    translated: Vec<TptpUnit>,
    annotations: Vec<TptpUnit>,
    extras: Vec<TptpUnit>,
    conjectures: Vec<TptpUnit>,
}

/// Aligns every FOL-side symbol against the signature of `docs`, rewrites
/// all units into one signature, and keeps the pieces in their fixed order.
fn harmonize(pieces: Pieces, docs: &[&OntologyDocument], opts: &AssembleOptions) -> Assembled {
    let mut fol_symbols = BTreeSet::new();
    for u in pieces.annotations.iter().chain(&pieces.extras).chain(&pieces.conjectures) {
        fol_symbols.extend(u.formula.symbols());
    }
    let mut signature = Vec::new();
    for d in docs {
        signature.extend(signature_with_labels(d));
    }
    let map = build_signature_map(&fol_symbols, &signature, &opts.align);
    let mut units = Vec::new();
    for u in pieces
        .background
        .into_iter()
        .chain(pieces.translated)
        .chain(pieces.annotations)
        .chain(pieces.extras)
        .chain(pieces.conjectures)
    {
        let formula = map.rewrite_formula(&u.formula, opts.naming);
        units.push(TptpUnit { formula, ..u });
    }
    let mut problem = TptpProblem::new(units);
    disambiguate(&mut problem);
    Assembled { problem, map }
}

/// One spelling per (name, role, arity): a name reused with another role or
/// arity gets a fresh spelling for the later uses.
pub fn disambiguate(problem: &mut TptpProblem) {
    let symbols = problem.symbols();
    let mut first: BTreeMap<&str, &Symbol> = BTreeMap::new();
    let mut clashes: Vec<&Symbol> = Vec::new();
    for s in &symbols {
        match first.get(s.name.as_str()) {
            None => {
                first.insert(&s.name, s);
            }
            Some(_) => clashes.push(s),
        }
    }
    if clashes.is_empty() {
        return;
    }
    let mut taken: BTreeSet<String> = symbols.iter().map(|s| s.name.clone()).collect();
    let mut renames: BTreeMap<(String, SymbolRole, usize), String> = BTreeMap::new();
    for s in clashes {
        let base = match s.role {
            SymbolRole::Constant => format!("{}_c", s.name),
            _ => format!("{}_{}", s.name, s.arity),
        };
        let fresh = unique_spelling(&base, |c| taken.contains(c));
        taken.insert(fresh.clone());
        renames.insert((s.name.clone(), s.role, s.arity), fresh);
    }
    for u in &mut problem.units {
        u.formula = u.formula.map_symbols(&mut |name, role, arity| {
            renames.get(&(name.to_string(), role, arity)).cloned().unwrap_or_else(|| name.to_string())
        });
    }
}

/// Background, OWL translations, `ann_<i>`, extra files, `conj_<i>`, all in
/// one aligned signature.
pub fn assemble_problem(
    doc: &OntologyDocument,
    opts: &AssembleOptions,
    extras: &[TptpProblem],
    conjectures: &[Formula],
) -> Result<Assembled, ReasonerError> {
    let mut tr = Translator::for_documents(&[doc]);
    let translated = tr.document_units(doc)?;
    let annotations = document_annotations(doc, opts)?
        .into_iter()
        .enumerate()
        .map(|(i, f)| TptpUnit::axiom(format!("ann_{i}"), f))
        .collect();
    let extras = extras
        .iter()
        .flat_map(|p| p.units.iter().filter(|u| u.role == UnitRole::Axiom).cloned())
        .collect();
    let conjectures = conjectures
        .iter()
        .enumerate()
        .map(|(i, f)| TptpUnit::conjecture(format!("conj_{i}"), close(f.clone())))
        .collect();
    let pieces = Pieces { background: tr.background().units, translated, annotations, extras, conjectures };
    let mut assembled = harmonize(pieces, &[doc], opts);
    dedupe_names(&mut assembled.problem);
    Ok(assembled)
}

/// Extra files may reuse names already taken; later units get suffixes.
fn dedupe_names(problem: &mut TptpProblem) {
    let mut seen = BTreeSet::new();
    for u in &mut problem.units {
        if !seen.insert(u.name.clone()) {
            let fresh = unique_spelling(&u.name, |c| seen.contains(c));
            seen.insert(fresh.clone());
            u.name = fresh;
        }
    }
}

/// Adds `ClassAssertion(C, <C>__instance)` for every named class other than
/// the reserved ones, turning a satisfiability check into an external
/// consistency check.
pub fn externalize(doc: &OntologyDocument) -> OntologyDocument {
    let mut out = doc.clone();
    let classes: Vec<Iri> = doc
        .entities
        .iter()
        .filter(|(iri, kind)| **kind == EntityKind::Class && !iri.as_str().starts_with(OWL))
        .map(|(iri, _)| iri.clone())
        .collect();
    for c in classes {
        let ind = Iri::new(format!("{}__instance", c.as_str())).expect("suffixing keeps IRIs valid");
        out.entities.entry(ind.clone()).or_insert(EntityKind::NamedIndividual);
        out.axioms.push(Axiom::ClassAssertion(ClassExpression::Class(c), ind));
    }
    out
}

/// Satisfiability of the assembled theory without conjectures.
pub fn check_consistency(
    doc: &OntologyDocument,
    opts: &AssembleOptions,
    extras: &[TptpProblem],
    config: &ProverConfig,
) -> Result<ProverVerdict, ReasonerError> {
    let assembled = assemble_problem(doc, opts, extras, &[])?;
    Ok(run_prover(&assembled.problem, config))
}

/// Conclusion of a single entailment problem.
#[derive(Clone, Debug)]
pub struct EntailmentEntry {
    pub unit_name: String,
    pub source: String,
    pub verdict: ProverVerdict,
}

#[derive(Clone, Debug, Default)]
pub struct EntailmentReport {
    pub entries: Vec<EntailmentEntry>,
    /// The alignment shared by every goal.
    pub map: SignatureMap,
}

impl EntailmentReport {
    pub fn entailed(&self) -> bool {
        self.entries.iter().all(|e| e.verdict.status == Status::Theorem)
    }

    pub fn summary(&self) -> BTreeMap<Status, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.entries {
            *counts.entry(e.verdict.status).or_insert(0) += 1;
        }
        counts
    }

    pub fn table(&self) -> String {
        let w = self.entries.iter().map(|e| e.unit_name.len()).max().unwrap_or(0).max(10);
        let mut out = format!("{:<w$}  {:<18}  {:>8}  source\n", "conjecture", "status", "seconds");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{:<w$}  {:<18}  {:>8.3}  {}",
                e.unit_name,
                e.verdict.status.as_str(),
                e.verdict.wall_clock.as_secs_f64(),
                e.source
            );
        }
        let summary: Vec<String> = self.summary().iter().map(|(s, n)| format!("{}: {n}", s.as_str())).collect();
        let _ = writeln!(
            out,
            "{} conjecture(s); {}; entailed: {}",
            self.entries.len(),
            if summary.is_empty() { "none attempted".to_string() } else { summary.join(", ") },
            if self.entailed() { "yes" } else { "no" }
        );
        out
    }
}

/// One problem per conjecture-side formula: each logical axiom of
/// `conjecture_doc`, then each of its FOL annotations. Premise units are
/// shared; verdicts come back in that order.
pub fn check_entailment(
    premise: &OntologyDocument,
    conjecture_doc: &OntologyDocument,
    opts: &AssembleOptions,
    extras: &[TptpProblem],
    config: &ProverConfig,
    parallelism: usize,
) -> Result<EntailmentReport, ReasonerError> {
    let mut tr = Translator::for_documents(&[premise, conjecture_doc]);
    let translated = tr.document_units(premise)?;
    tr.observe(conjecture_doc);
    let mut goals: Vec<(String, String, Formula)> = Vec::new();
    for (i, ax) in conjecture_doc.logical_axioms().enumerate() {
        if let Some(f) = tr.axiom(ax)? {
            goals.push((format!("goal_{i}"), crate::owl::axiom_to_string(ax), f));
        }
    }
    for (i, f) in document_annotations(conjecture_doc, opts)?.into_iter().enumerate() {
        goals.push((format!("goal_ann_{i}"), crate::fol::tptp::display_formula(&f), f));
    }
    let annotations = document_annotations(premise, opts)?
        .into_iter()
        .enumerate()
        .map(|(i, f)| TptpUnit::axiom(format!("ann_{i}"), f))
        .collect();
    let extras_units: Vec<TptpUnit> = extras
        .iter()
        .flat_map(|p| p.units.iter().filter(|u| u.role == UnitRole::Axiom).cloned())
        .collect();
    // One alignment over everything so every problem shares the signature.
    let pieces = Pieces {
        background: tr.background().units,
        translated,
        annotations,
        extras: extras_units,
        conjectures: goals.iter().map(|(n, _, f)| TptpUnit::conjecture(n.clone(), f.clone())).collect(),
    };
    let Assembled { problem, map } = harmonize(pieces, &[premise, conjecture_doc], opts);
    let (premises, conjectures): (Vec<TptpUnit>, Vec<TptpUnit>) =
        problem.units.into_iter().partition(|u| u.role == UnitRole::Axiom);
    let mut base = TptpProblem::new(premises);
    dedupe_names(&mut base);
    let jobs: Vec<(TptpUnit, String)> = conjectures.into_iter().zip(goals.into_iter().map(|g| g.1)).collect();
    let verdicts = crate::par::map_ordered(&jobs, Some(parallelism.max(1)), |(goal, _)| {
        let mut p = base.clone();
        p.push(goal.clone());
        dedupe_names(&mut p);
        run_prover(&p, config)
    });
    let entries = jobs
        .into_iter()
        .zip(verdicts)
        .map(|((goal, source), verdict)| EntailmentEntry { unit_name: goal.name, source, verdict })
        .collect();
    Ok(EntailmentReport { entries, map })
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipResult {
    pub instance: String,
    pub class: String,
    pub status: Status,
    pub seconds: f64,
    #[serde(skip)]
    pub verdict: ProverVerdict,
}

/// Proves `class(instance)` for every pair, at most `parallelism` provers
/// at a time; results in instance-major order.
pub fn batch_membership(
    base: &TptpProblem,
    instances: &[String],
    classes: &[String],
    config: &ProverConfig,
    parallelism: usize,
) -> Vec<MembershipResult> {
    let pairs: Vec<(&String, &String)> = instances.iter().flat_map(|a| classes.iter().map(move |b| (a, b))).collect();
    let verdicts = crate::par::map_ordered(&pairs, Some(parallelism.max(1)), |(a, b)| {
        let mut p = base.clone();
        let goal = unique_spelling("membership_goal", |n| p.units.iter().any(|u| u.name == n));
        p.push(TptpUnit::conjecture(goal, Formula::pred(b.as_str(), vec![Term::constant(a.as_str())])));
        run_prover(&p, config)
    });
    pairs
        .into_iter()
        .zip(verdicts)
        .map(|((a, b), verdict)| MembershipResult {
            instance: a.clone(),
            class: b.clone(),
            status: verdict.status,
            seconds: verdict.wall_clock.as_secs_f64(),
            verdict,
        })
        .collect()
}

pub fn membership_table(results: &[MembershipResult]) -> String {
    let wi = results.iter().map(|r| r.instance.len()).max().unwrap_or(0).max(8);
    let wc = results.iter().map(|r| r.class.len()).max().unwrap_or(0).max(5);
    let mut out = format!("{:<wi$}  {:<wc$}  {:<18}  {:>8}\n", "instance", "class", "status", "seconds");
    for r in results {
        let _ = writeln!(out, "{:<wi$}  {:<wc$}  {:<18}  {:>8.3}", r.instance, r.class, r.status.as_str(), r.seconds);
    }
    out
}

/// One JSON object per line: instance, class, status, seconds.
pub fn membership_json_lines(results: &[MembershipResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&serde_json::to_string(r).expect("plain struct serializes"));
        out.push('\n');
    }
    out
}
