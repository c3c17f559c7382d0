//! A small first-order prover for TPTP FOF problems.
//!
//! Superposition saturation looks for refutations (and occasionally
//! saturates); a finite model finder looks for models. Both run at once and
//! the first definite answer is reported in SZS terms.

pub mod clause;
pub mod cnf;
pub mod kbo;
pub mod mace;
pub mod saturate;
pub mod term;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{mpsc, Arc};
use std::time::{Duration, Instant};

use fowl_core::fol::{Formula, TptpProblem};

use crate::clause::Clause;
use crate::cnf::Clausifier;
use crate::term::Signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Theorem,
    CounterSatisfiable,
    Unsatisfiable,
    Satisfiable,
    GaveUp,
    Timeout,
}

impl Answer {
    pub fn szs(self) -> &'static str {
        match self {
            Answer::Theorem => "Theorem",
            Answer::CounterSatisfiable => "CounterSatisfiable",
            Answer::Unsatisfiable => "Unsatisfiable",
            Answer::Satisfiable => "Satisfiable",
            Answer::GaveUp => "GaveUp",
            Answer::Timeout => "Timeout",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub timeout: Duration,
    pub max_model_size: usize,
    /// Ground literals the model finder may produce per domain size.
    pub model_budget: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { timeout: Duration::from_secs(30), max_model_size: 12, model_budget: 4_000_000 }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub answer: Answer,
    /// Which engine answered and how.
    pub detail: String,
    pub elapsed: Duration,
}

enum Found {
    Contradiction(String),
    Model(String),
    Nothing,
}

/// Clauses of the axioms plus the negated conjunction of the conjectures.
pub fn clausify(problem: &TptpProblem) -> (Signature, Vec<Clause>, bool) {
    let mut sig = Signature::new();
    let mut raw = Vec::new();
    let conjectures: Vec<Formula> = problem.conjectures().map(|u| u.formula.clone()).collect();
    let has_conjecture = !conjectures.is_empty();
    {
        let mut cl = Clausifier::new(&mut sig);
        for u in problem.axioms() {
            raw.extend(cl.clausify(&u.formula));
        }
        if has_conjecture {
            raw.extend(cl.clausify(&Formula::not(Formula::and(conjectures))));
        }
    }
    (sig, raw.into_iter().filter_map(Clause::new).collect(), has_conjecture)
}

pub fn prove(problem: &TptpProblem, opts: &Options) -> Report {
    let start = Instant::now();
    let deadline = start + opts.timeout;
    let (sig, clauses, has_conjecture) = clausify(problem);
    let verdict = |found: Found| match found {
        Found::Contradiction(d) => {
            Some((if has_conjecture { Answer::Theorem } else { Answer::Unsatisfiable }, d))
        }
        Found::Model(d) => Some((if has_conjecture { Answer::CounterSatisfiable } else { Answer::Satisfiable }, d)),
        Found::Nothing => None,
    };
    let report = |(answer, detail): (Answer, String)| Report { answer, detail, elapsed: start.elapsed() };
    if clauses.iter().any(Clause::is_empty) {
        return report(verdict(Found::Contradiction("trivially false clause".into())).expect("definite"));
    }

    let sig = Arc::new(sig);
    let clauses = Arc::new(clauses);
    let stop = Arc::new(AtomicBool::new(false));
    let (tx, rx) = mpsc::channel::<Found>();
    {
        let (sig, clauses, stop, tx) = (sig.clone(), clauses.clone(), stop.clone(), tx.clone());
        std::thread::spawn(move || {
            let mut sat = saturate::Saturation::new(&sig);
            for c in clauses.iter() {
                sat.add(c.lits.clone());
            }
            let out = sat.run(&saturate::Limits { deadline: Some(deadline), stop: Some(&stop) });
            let found = match out {
                saturate::Outcome::Refutation => {
                    Found::Contradiction(format!("refutation after {} given clauses", sat.given_count))
                }
                saturate::Outcome::Saturated => {
                    Found::Model(format!("saturation after {} given clauses", sat.given_count))
                }
                saturate::Outcome::Stopped => Found::Nothing,
            };
            let _ = tx.send(found);
        });
    }
    {
        let (sig, clauses, stop) = (sig.clone(), clauses.clone(), stop.clone());
        let (max_size, budget) = (opts.max_model_size, opts.model_budget);
        std::thread::spawn(move || {
            let cfg = mace::Config { max_size, budget, deadline: Some(deadline), stop: Some(&stop) };
            let found = match mace::find_model(&clauses, &sig, &cfg) {
                mace::Search::Model(n) => Found::Model(format!("finite model of size {n}")),
                mace::Search::NoModel => Found::Contradiction("no model up to the Herbrand bound".into()),
                mace::Search::Unknown => Found::Nothing,
            };
            let _ = tx.send(found);
        });
    }
    let mut pending = 2;
    let result = loop {
        let left = deadline.saturating_duration_since(Instant::now());
        match rx.recv_timeout(left) {
            Ok(found) => {
                pending -= 1;
                if let Some(v) = verdict(found) {
                    break v;
                }
                if pending == 0 {
                    break (Answer::GaveUp, "both engines gave up".into());
                }
            }
            Err(mpsc::RecvTimeoutError::Timeout) => break (Answer::Timeout, "time limit".into()),
            Err(mpsc::RecvTimeoutError::Disconnected) => break (Answer::GaveUp, "engines stopped".into()),
        }
    };
    stop.store(true, Ordering::Relaxed);
    report(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fowl_core::fol::tptp::parse_tptp_file;

    fn answer(text: &str) -> Answer {
        let p = parse_tptp_file(text).unwrap();
        prove(&p, &Options { timeout: Duration::from_secs(20), ..Options::default() }).answer
    }

    #[test]
    fn szs_answers() {
        assert_eq!(answer("fof(a, axiom, p(a)). fof(c, conjecture, q(a))."), Answer::CounterSatisfiable);
        assert_eq!(answer("fof(a, axiom, p(a)). fof(c, conjecture, p(a))."), Answer::Theorem);
        assert_eq!(answer("fof(a, axiom, p(a)). fof(b, axiom, ~p(a))."), Answer::Unsatisfiable);
        assert_eq!(answer("fof(a, axiom, ![X]: ?[Y]: r(X, Y))."), Answer::Satisfiable);
        assert_eq!(answer("fof(a, axiom, $false)."), Answer::Unsatisfiable);
        assert_eq!(answer(""), Answer::Satisfiable);
    }

    #[test]
    fn conjectures_are_conjoined() {
        let text = "fof(a, axiom, p & q). fof(c1, conjecture, p). fof(c2, conjecture, q).";
        assert_eq!(answer(text), Answer::Theorem);
        let text = "fof(a, axiom, p). fof(c1, conjecture, p). fof(c2, conjecture, q).";
        assert_eq!(answer(text), Answer::CounterSatisfiable);
    }

    #[test]
    fn saturation_covers_infinite_models() {
        // Only infinite models, yet the clause set saturates at once.
        let text = "fof(inj, axiom, ![X, Y]: (s(X) = s(Y) => X = Y)). fof(z, axiom, ![X]: s(X) != z).";
        assert_eq!(answer(text), Answer::Satisfiable);
    }

    #[test]
    fn undecided_problems_time_out() {
        let text = "fof(inj, axiom, ![X, Y]: (s(X) = s(Y) => X = Y)). fof(z, axiom, ![X]: s(X) != z). \
                    fof(base, axiom, p(z)). fof(step, axiom, ![X]: (p(X) => p(s(X)))).";
        let p = parse_tptp_file(text).unwrap();
        let r = prove(&p, &Options { timeout: Duration::from_secs(1), max_model_size: 4, ..Options::default() });
        assert!(matches!(r.answer, Answer::Timeout | Answer::GaveUp), "{:?}", r);
    }
}
