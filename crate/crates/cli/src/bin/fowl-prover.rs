//! Standalone prover: reads one TPTP FOF file and prints an SZS status line.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use fowl_core::fol::tptp::parse_tptp_file;
use fowl_prover::{prove, Options};

#[derive(Parser)]
#[command(name = "fowl-prover", version, about = "Superposition prover with a finite model finder")]
struct Args {
    /// Wall-clock limit in seconds.
    #[arg(long, short = 't', default_value_t = 30)]
    timeout: u64,
    /// Largest domain the model finder tries.
    #[arg(long, default_value_t = 12)]
    max_size: usize,
    file: PathBuf,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let stem = args.file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let problem = match std::fs::read_to_string(&args.file) {
        Ok(text) => parse_tptp_file(&text).map_err(|e| e.to_string()),
        Err(e) => Err(format!("{}: {e}", args.file.display())),
    };
    let problem = match problem {
        Ok(p) => p,
        Err(e) => {
            eprintln!("fowl-prover: {e}");
            println!("% SZS status InputError for {stem}");
            return ExitCode::from(1);
        }
    };
    let opts = Options { timeout: Duration::from_secs(args.timeout), max_model_size: args.max_size, ..Options::default() };
    let report = prove(&problem, &opts);
    println!("% {} ({:.3} s)", report.detail, report.elapsed.as_secs_f64());
    println!("% SZS status {} for {stem}", report.answer.szs());
    ExitCode::SUCCESS
}
