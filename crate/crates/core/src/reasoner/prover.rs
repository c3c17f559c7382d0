use std::io::{Read, Write as _};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::fol::tptp::{emit_tptp, EmitStyle};
use crate::fol::TptpProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Status {
    Theorem,
    CounterSatisfiable,
    Satisfiable,
    Unsatisfiable,
    Timeout,
    GaveUp,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Theorem => "Theorem",
            Status::CounterSatisfiable => "CounterSatisfiable",
            Status::Satisfiable => "Satisfiable",
            Status::Unsatisfiable => "Unsatisfiable",
            Status::Timeout => "Timeout",
            Status::GaveUp => "GaveUp",
            Status::Error => "Error",
        }
    }

    pub fn is_unknown(self) -> bool {
        matches!(self, Status::Timeout | Status::GaveUp)
    }
}

#[derive(Clone, Debug)]
pub struct ProverVerdict {
    pub status: Status,
    pub wall_clock: Duration,
    pub raw_output: String,
    /// Where the problem was written, when it was kept.
    pub problem_file: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverConfig {
    pub executable: PathBuf,
    /// Arguments with `{file}` and `{timeout}` placeholders.
    pub arguments: Vec<String>,
    pub timeout_seconds: u64,
    /// Directory to keep problem files in; `None` deletes them.
    pub keep_problems: Option<PathBuf>,
}

impl ProverConfig {
    /// Picks an argument template from the executable's file name.
    pub fn for_executable(executable: impl Into<PathBuf>, timeout_seconds: u64) -> Self {
        let executable = executable.into();
        ProverConfig {
            arguments: default_arguments(&executable),
            executable,
            timeout_seconds: timeout_seconds.max(1),
            keep_problems: None,
        }
    }
}

pub fn default_arguments(executable: &Path) -> Vec<String> {
    let stem = executable.file_stem().and_then(|s| s.to_str()).unwrap_or("").to_ascii_lowercase();
    let template = if stem.starts_with("vampire") {
        "--mode casc -t {timeout} {file}"
    } else if stem == "eprover" || stem == "e" {
        "--auto --tstp-format -s --cpu-limit={timeout} {file}"
    } else {
        "--timeout {timeout} {file}"
    };
    template.split_whitespace().map(String::from).collect()
}

/// Status word of the first `SZS status` line. `has_conjecture` decides how
/// `ContradictoryAxioms` reads.
pub fn parse_szs_status(output: &str, has_conjecture: bool) -> Option<Status> {
    let word = output.lines().find_map(|l| {
        let rest = &l[l.find("SZS status")? + "SZS status".len()..];
        rest.split_whitespace().next()
    })?;
    Some(match word {
        "Theorem" => Status::Theorem,
        "CounterSatisfiable" => Status::CounterSatisfiable,
        "Satisfiable" => Status::Satisfiable,
        "Unsatisfiable" => Status::Unsatisfiable,
        "ContradictoryAxioms" if has_conjecture => Status::Theorem,
        "ContradictoryAxioms" => Status::Unsatisfiable,
        "Timeout" | "ResourceOut" => Status::Timeout,
        "GaveUp" | "Unknown" | "Incomplete" | "Inappropriate" => Status::GaveUp,
        _ => Status::Error,
    })
}

fn error(start: Instant, message: String, problem_file: Option<PathBuf>) -> ProverVerdict {
    ProverVerdict { status: Status::Error, wall_clock: start.elapsed(), raw_output: message, problem_file }
}

fn drain(mut r: impl Read + Send + 'static) -> std::thread::JoinHandle<String> {
    std::thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        String::from_utf8_lossy(&buf).into_owned()
    })
}

fn kill_tree(child: &mut std::process::Child) {
    #[cfg(unix)]
    unsafe {
        // The group id equals the child's pid since it leads its own group.
        libc::killpg(child.id() as libc::pid_t, libc::SIGKILL);
    }
    let _ = child.kill();
}

/// Writes `problem` to a file, runs the prover on it and maps its SZS line.
/// Never fails: every problem becomes a verdict.
pub fn run_prover(problem: &TptpProblem, config: &ProverConfig) -> ProverVerdict {
    let start = Instant::now();
    let text = match emit_tptp(problem, EmitStyle::Quoted) {
        Ok(t) => t,
        Err(e) => return error(start, format!("cannot serialize problem: {e}"), None),
    };
    let file = match &config.keep_problems {
        Some(dir) => tempfile::Builder::new().prefix("fowl-").suffix(".p").tempfile_in(dir),
        None => tempfile::Builder::new().prefix("fowl-").suffix(".p").tempfile(),
    };
    let mut file = match file {
        Ok(f) => f,
        Err(e) => return error(start, format!("cannot create problem file: {e}"), None),
    };
    if let Err(e) = file.write_all(text.as_bytes()).and_then(|_| file.flush()) {
        return error(start, format!("cannot write problem file: {e}"), None);
    }
    let path = file.path().to_path_buf();
    let kept = config.keep_problems.as_ref().map(|_| path.clone());
    let timeout = config.timeout_seconds.max(1);
    let args: Vec<String> = config
        .arguments
        .iter()
        .map(|a| a.replace("{file}", &path.to_string_lossy()).replace("{timeout}", &timeout.to_string()))
        .collect();
    let mut command = Command::new(&config.executable);
    command.args(&args).stdin(Stdio::null()).stdout(Stdio::piped()).stderr(Stdio::piped());
    #[cfg(unix)]
    {
        use std::os::unix::process::CommandExt;
        // Own group, so a timeout also reaches the prover's children.
        command.process_group(0);
    }
    let child = command.spawn();
    let mut child = match child {
        Ok(c) => c,
        Err(e) => return error(start, format!("cannot start {}: {e}", config.executable.display()), kept),
    };
    let out = drain(child.stdout.take().expect("piped stdout"));
    let err = drain(child.stderr.take().expect("piped stderr"));
    let deadline = start + Duration::from_secs(timeout);
    let mut timed_out = false;
    let exit = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) if Instant::now() >= deadline => {
                kill_tree(&mut child);
                let _ = child.wait();
                timed_out = true;
                break None;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(5)),
            Err(_) => break None,
        }
    };
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    let wall_clock = start.elapsed();
    if config.keep_problems.is_some() {
        let _ = file.keep();
    }
    let mut raw_output = stdout;
    if !stderr.is_empty() {
        raw_output.push_str(&stderr);
    }
    let status = if timed_out {
        Status::Timeout
    } else {
        parse_szs_status(&raw_output, problem.conjectures().next().is_some()).unwrap_or(Status::Error)
    };
    if status == Status::Error && exit.is_some_and(|s| !s.success()) {
        raw_output.push_str(&format!("\nprover exited with {}", exit.unwrap()));
    }
    ProverVerdict { status, wall_clock, raw_output, problem_file: kept }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn szs_words() {
        assert_eq!(parse_szs_status("% SZS status Theorem for p\n", true), Some(Status::Theorem));
        assert_eq!(parse_szs_status("x\n# SZS status CounterSatisfiable\n", true), Some(Status::CounterSatisfiable));
        assert_eq!(parse_szs_status("SZS status ContradictoryAxioms", true), Some(Status::Theorem));
        assert_eq!(parse_szs_status("SZS status ContradictoryAxioms", false), Some(Status::Unsatisfiable));
        assert_eq!(parse_szs_status("SZS status ResourceOut", false), Some(Status::Timeout));
        assert_eq!(parse_szs_status("SZS status GaveUp", false), Some(Status::GaveUp));
        assert_eq!(parse_szs_status("SZS status Weird", false), Some(Status::Error));
        assert_eq!(
            parse_szs_status("SZS status Satisfiable\nSZS status Unsatisfiable", false),
            Some(Status::Satisfiable)
        );
        assert_eq!(parse_szs_status("nothing here", false), None);
    }

    #[test]
    fn templates() {
        assert_eq!(default_arguments(Path::new("/opt/vampire"))[..2], ["--mode", "casc"]);
        assert_eq!(default_arguments(Path::new("eprover"))[0], "--auto");
        assert_eq!(default_arguments(Path::new("fowl-prover")), ["--timeout", "{timeout}", "{file}"]);
    }

    #[cfg(unix)]
    fn script(body: &str) -> (tempfile::TempDir, PathBuf) {
        use std::os::unix::fs::PermissionsExt;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fake-prover");
        std::fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
        std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
        (dir, path)
    }

    #[cfg(unix)]
    #[test]
    fn subprocess_outcomes() {
        let problem = TptpProblem::default();
        let (_d, ok) = script("echo '% SZS status Satisfiable for x'");
        assert_eq!(run_prover(&problem, &ProverConfig::for_executable(&ok, 5)).status, Status::Satisfiable);

        let (_d, silent) = script("exit 3");
        assert_eq!(run_prover(&problem, &ProverConfig::for_executable(&silent, 5)).status, Status::Error);

        let (_d, slow) = script("sleep 5; echo 'SZS status Theorem'");
        let v = run_prover(&problem, &ProverConfig::for_executable(&slow, 1));
        assert_eq!(v.status, Status::Timeout);
        assert!(v.wall_clock < Duration::from_secs(4));

        let missing = ProverConfig::for_executable("/nonexistent/prover", 1);
        assert_eq!(run_prover(&problem, &missing).status, Status::Error);

        // The file placeholder is substituted and the file exists meanwhile.
        let (_d, cat) = script("cat \"$3\"; echo 'SZS status Unsatisfiable'");
        let v = run_prover(&problem, &ProverConfig::for_executable(&cat, 5));
        assert!(v.raw_output.starts_with(crate::fol::tptp::HEADER), "{}", v.raw_output);
    }

    #[cfg(unix)]
    #[test]
    fn kept_problems_survive() {
        let dir = tempfile::tempdir().unwrap();
        let (_d, ok) = script("echo 'SZS status Satisfiable'");
        let mut config = ProverConfig::for_executable(&ok, 5);
        config.keep_problems = Some(dir.path().to_path_buf());
        let v = run_prover(&TptpProblem::default(), &config);
        assert!(v.problem_file.as_ref().unwrap().exists());
    }
}
