use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fowl_core::align::{SignatureMap, Target};
use fowl_core::fol::tptp::{emit_tptp, parse_tptp_file, EmitStyle};
use fowl_core::fol::{TptpProblem, UnitRole};
use fowl_core::molgen::{self, MolgenEntry};
use fowl_core::owl::{
    parse_ontology, resolve_imports, AnnotationSelection, Catalog, FolSyntax, Iri, OntologyDocument, ParseMode,
};
use fowl_core::reasoner::{
    assemble_problem, check_entailment, externalize, membership_json_lines, membership_table, run_prover,
    AssembleOptions, ProverConfig, ProverVerdict, ReasonerError, Status,
};
use fowl_core::translate::TranslateError;

const EXIT_INPUT: u8 = 1;
const EXIT_TRANSLATE: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;
const EXIT_PROVER: u8 = 5;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "fowl", version, about = "OWL ontologies with first-order annotations, translated to TPTP and proved")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Write the merged TPTP theory of an ontology.
    Translate {
        input: PathBuf,
        /// Output file; standard output if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the merged theory for satisfiability.
    Consistency { input: PathBuf },
    /// Prove the conjectures of a TPTP file from an ontology. Axioms of the
    /// file are added to the premises.
    Prove { input: PathBuf, conjectures: PathBuf },
    /// Check that every axiom and annotation of the second ontology follows
    /// from the first.
    Entails { premise: PathBuf, conjecture: PathBuf },
    /// Generate class definitions and prototypical instances from
    /// `<id> TAB <smiles> TAB <class|instance>` lines.
    Molgen {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Try every instance of a molgen input against every class.
    Membership {
        input: PathBuf,
        /// JSON lines instead of a table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Flags {
    /// IRI-to-file catalog for resolving imports.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Annotation property carrying FOL text, as `IRI` or `IRI=tptp|clif`.
    /// Replaces the default suffix rule; repeatable.
    #[arg(long = "annotation-prop", global = true, value_name = "IRI")]
    annotation_props: Vec<String>,
    /// Spell symbols by their readable names instead of IRIs.
    #[arg(long, global = true)]
    readable_names: bool,
    /// Ignore FOL annotations.
    #[arg(long, global = true)]
    owl_only: bool,
    /// Prover executable.
    #[arg(long, global = true, env = "FOWL_PROVER")]
    prover: Option<PathBuf>,
    /// Prover arguments; `{file}` and `{timeout}` are substituted.
    #[arg(long, global = true, allow_hyphen_values = true)]
    prover_args: Option<String>,
    /// Seconds per proof attempt.
    #[arg(long, global = true, default_value_t = 30)]
    timeout: u64,
    /// Concurrent proof attempts; without a value, one per core.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "0", default_value_t = 1)]
    parallel: usize,
    /// Write the symbol alignment table to this file.
    #[arg(long, global = true)]
    alignment_report: Option<PathBuf>,
    /// Keep generated problem files in this directory.
    #[arg(long, global = true)]
    keep_problems: Option<PathBuf>,
    /// Add one fresh individual to every class first.
    #[arg(long, global = true)]
    externalize: bool,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

impl From<ReasonerError> for Failure {
    fn from(e: ReasonerError) -> Self {
        let code = match e {
            ReasonerError::Annotation { .. } => EXIT_INPUT,
            ReasonerError::Translate(_) => EXIT_TRANSLATE,
        };
        fail(code, e.to_string())
    }
}

impl From<TranslateError> for Failure {
    fn from(e: TranslateError) -> Self {
        fail(EXIT_TRANSLATE, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let settings = match Settings::from_flags(&cli.flags) {
        Ok(s) => s,
        Err(f) => {
            eprintln!("fowl: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    match run(&cli.command, &settings) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("fowl: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Validated flags; built before any file is touched.
struct Settings {
    catalog: Option<PathBuf>,
    assemble: AssembleOptions,
    prover: ProverConfig,
    parallel: usize,
    alignment_report: Option<PathBuf>,
    externalize: bool,
}

impl Settings {
    fn from_flags(f: &Flags) -> Result<Settings, Failure> {
        let mut assemble = AssembleOptions { owl_only: f.owl_only, ..AssembleOptions::default() };
        if f.readable_names {
            assemble.naming = Target::Readable;
        }
        if !f.annotation_props.is_empty() {
            let mut map = indexmap::IndexMap::new();
            for spec in &f.annotation_props {
                let (iri, syntax) = annotation_prop(spec)?;
                map.insert(iri, syntax);
            }
            assemble.selection = AnnotationSelection::Explicit(map);
        }
        if f.timeout == 0 {
            return Err(fail(EXIT_USAGE, "--timeout must be positive"));
        }
        let mut prover = ProverConfig::for_executable(f.prover.clone().unwrap_or_else(default_prover), f.timeout);
        if let Some(args) = &f.prover_args {
            prover.arguments = args.split_whitespace().map(str::to_string).collect();
            if !prover.arguments.iter().any(|a| a.contains("{file}")) {
                return Err(fail(EXIT_USAGE, "--prover-args must mention {file}"));
            }
        }
        prover.keep_problems = f.keep_problems.clone();
        let parallel = match f.parallel {
            0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
            n => n,
        };
        Ok(Settings {
            catalog: f.catalog.clone(),
            assemble,
            prover,
            parallel,
            alignment_report: f.alignment_report.clone(),
            externalize: f.externalize,
        })
    }
}

fn annotation_prop(spec: &str) -> Result<(Iri, FolSyntax), Failure> {
    let (iri, syntax) = match spec.rsplit_once('=') {
        Some((iri, "tptp")) => (iri, Some(FolSyntax::Tptp)),
        Some((iri, "clif")) => (iri, Some(FolSyntax::Clif)),
        _ => (spec, None),
    };
    let iri = iri.strip_prefix('<').and_then(|i| i.strip_suffix('>')).unwrap_or(iri);
    let iri = Iri::new(iri).map_err(|e| fail(EXIT_USAGE, format!("--annotation-prop {spec}: {e}")))?;
    let syntax = syntax
        .or_else(|| AnnotationSelection::BySuffix.syntax_of(&iri))
        .unwrap_or(FolSyntax::Tptp);
    Ok((iri, syntax))
}

/// A `fowl-prover` next to this executable, else `vampire` on the path.
fn default_prover() -> PathBuf {
    let sibling = std::env::current_exe()
        .ok()
        .and_then(|exe| exe.parent().map(|d| d.join(format!("fowl-prover{}", std::env::consts::EXE_SUFFIX))));
    match sibling {
        Some(p) if p.is_file() => p,
        _ => PathBuf::from("vampire"),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_ontology(path: &Path, s: &Settings) -> Result<OntologyDocument, Failure> {
    let text = read(path)?;
    let doc = parse_ontology(&text, ParseMode::Lenient).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    if doc.imports.is_empty() && s.catalog.is_none() {
        return Ok(doc);
    }
    let catalog = match &s.catalog {
        Some(c) => Catalog::from_file(c).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", c.display())))?,
        None => Catalog::default(),
    };
    resolve_imports(&doc, &catalog).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn load_tptp(path: &Path) -> Result<TptpProblem, Failure> {
    parse_tptp_file(&read(path)?).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn load_molgen(path: &Path) -> Result<(Vec<MolgenEntry>, bool), Failure> {
    let (entries, errors) = molgen::parse_molgen_lines(&read(path)?);
    for e in &errors {
        eprintln!("fowl: {}: {e}", path.display());
    }
    Ok((entries, errors.is_empty()))
}

fn alignment_report(map: &SignatureMap, s: &Settings) -> Result<(), Failure> {
    match &s.alignment_report {
        Some(path) => write(Some(path), &map.report()),
        None => Ok(()),
    }
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Theorem | Status::Satisfiable => 0,
        Status::CounterSatisfiable | Status::Unsatisfiable => EXIT_NEGATIVE,
        Status::Timeout | Status::GaveUp => EXIT_UNKNOWN,
        Status::Error => EXIT_PROVER,
    }
}

fn report_verdict(v: &ProverVerdict) -> u8 {
    println!("{} ({:.3} s)", v.status.as_str(), v.wall_clock.as_secs_f64());
    if v.status == Status::Error {
        eprintln!("fowl: prover failed: {}", v.raw_output.trim_end());
    }
    status_code(v.status)
}

fn run(command: &Command, s: &Settings) -> Result<u8, Failure> {
    match command {
        Command::Translate { input, output } => {
            let mut doc = load_ontology(input, s)?;
            if s.externalize {
                doc = externalize(&doc);
            }
            let assembled = assemble_problem(&doc, &s.assemble, &[], &[])?;
            alignment_report(&assembled.map, s)?;
            let text = emit_tptp(&assembled.problem, EmitStyle::Quoted).map_err(|e| fail(EXIT_TRANSLATE, e.to_string()))?;
            write(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Consistency { input } => {
            let mut doc = load_ontology(input, s)?;
            if s.externalize {
                doc = externalize(&doc);
            }
            let assembled = assemble_problem(&doc, &s.assemble, &[], &[])?;
            alignment_report(&assembled.map, s)?;
            Ok(report_verdict(&run_prover(&assembled.problem, &s.prover)))
        }
        Command::Prove { input, conjectures } => {
            let doc = load_ontology(input, s)?;
            let file = load_tptp(conjectures)?;
            let goals: Vec<_> = file.conjectures().map(|u| u.formula.clone()).collect();
            if goals.is_empty() {
                return Err(fail(EXIT_INPUT, format!("{}: no conjecture", conjectures.display())));
            }
            let axioms = TptpProblem::new(file.units.iter().filter(|u| u.role == UnitRole::Axiom).cloned().collect());
            let assembled = assemble_problem(&doc, &s.assemble, &[axioms], &goals)?;
            alignment_report(&assembled.map, s)?;
            Ok(report_verdict(&run_prover(&assembled.problem, &s.prover)))
        }
        Command::Entails { premise, conjecture } => {
            let premise = load_ontology(premise, s)?;
            let conjecture = load_ontology(conjecture, s)?;
            let report = check_entailment(&premise, &conjecture, &s.assemble, &[], &s.prover, s.parallel)?;
            alignment_report(&report.map, s)?;
            print!("{}", report.table());
            for e in report.entries.iter().filter(|e| e.verdict.status == Status::Error) {
                eprintln!("fowl: {}: prover failed: {}", e.unit_name, e.verdict.raw_output.trim_end());
            }
            let statuses: Vec<Status> = report.entries.iter().map(|e| e.verdict.status).collect();
            Ok(if report.entailed() {
                0
            } else if statuses.contains(&Status::Error) {
                EXIT_PROVER
            } else if statuses.iter().any(|st| st.is_unknown()) {
                EXIT_UNKNOWN
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Molgen { input, output } => {
            let (entries, clean) = load_molgen(input)?;
            let generated = molgen::generate(&entries).map_err(|e| fail(EXIT_INPUT, e.to_string()))?;
            let text = emit_tptp(&generated.axioms, EmitStyle::Quoted).map_err(|e| fail(EXIT_TRANSLATE, e.to_string()))?;
            write(output.as_deref(), &text)?;
            Ok(if clean { 0 } else { EXIT_INPUT })
        }
        Command::Membership { input, json } => {
            let (entries, clean) = load_molgen(input)?;
            if !clean {
                return Ok(EXIT_INPUT);
            }
            let generated = molgen::generate(&entries).map_err(|e| fail(EXIT_INPUT, e.to_string()))?;
            let ids = |mode| -> Vec<String> {
                entries.iter().filter(|e| e.mode == mode).map(|e| e.id.clone()).collect()
            };
            let instances: Vec<String> = ids(molgen::EntryMode::Instance).iter().map(|i| molgen::molecule_constant(i)).collect();
            let classes: Vec<String> = ids(molgen::EntryMode::Class).iter().map(|c| molgen::class_predicate(c)).collect();
            let results =
                fowl_core::reasoner::batch_membership(&generated.axioms, &instances, &classes, &s.prover, s.parallel);
            print!("{}", if *json { membership_json_lines(&results) } else { membership_table(&results) });
            Ok(0)
        }
    }
}
