//! Command-line driver: parse, preprocess, saturate, assemble, verify.

use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use crate::frontend::{parse_lenient, parse_problem};
use crate::preprocess::{self, preprocess, Mode};
use crate::saturation::{saturate, Limits, Options, Outcome};
use crate::synthesis::{assemble, verify_program, FiniteModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNKNOWN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CliMode {
    Prove,
    Synthesize,
}

/// Synthesize recursion-free programs from first-order specifications.
#[derive(Parser, Debug, Clone)]
#[command(name = "satsynth", version)]
pub struct Args {
    /// Problem file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "synthesize")]
    pub mode: CliMode,
    /// Soft time limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub time_limit: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub clause_budget: usize,
    /// Print one line per created clause.
    #[arg(long)]
    pub trace: bool,
    /// Write the trace here instead of standard error.
    #[arg(long)]
    pub trace_file: Option<PathBuf>,
    /// Finite-model fixture (JSON) to check the program against.
    #[arg(long)]
    pub verify: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub ordering_seed: u64,
    /// Let skolem functions of assumptions appear in programs.
    #[arg(long)]
    pub skolems_computable: bool,
    /// Print run statistics to standard error.
    #[arg(long)]
    pub stats: bool,
}

/// Run the pipeline and return the process exit code.
pub fn run(args: &Args, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_inner(args, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn run_inner(args: &Args, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    if !(args.time_limit > 0.0) || args.clause_budget == 0 {
        return Err("time limit and clause budget must be positive".into());
    }
    let text = std::fs::read_to_string(&args.input).map_err(|e| format!("{}: {e}", args.input.display()))?;
    let problem = match args.mode {
        CliMode::Synthesize => parse_problem(&text),
        CliMode::Prove => parse_lenient(&text),
    }
    .map_err(|e| e.to_string())?;
    let mode = match args.mode {
        CliMode::Synthesize => Mode::Synthesize,
        CliMode::Prove => Mode::Prove,
    };
    let pre_opts = preprocess::Options { skolems_computable: args.skolems_computable };
    let pre = preprocess(&problem, mode, pre_opts).map_err(|e| e.to_string())?;
    let model = match &args.verify {
        Some(path) if mode == Mode::Synthesize => {
            let json = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Some(FiniteModel::from_json(&json, &pre.sig).map_err(|e| e.to_string())?)
        }
        _ => None,
    };

    let time_limit = Duration::from_secs_f64(args.time_limit);
    let cancel = Arc::new(AtomicBool::new(false));
    let done = Arc::new(AtomicBool::new(false));
    let watchdog = {
        let (cancel, done) = (cancel.clone(), done.clone());
        std::thread::spawn(move || {
            let step = Duration::from_millis(10);
            let mut waited = Duration::ZERO;
            while waited < time_limit && !done.load(Ordering::Relaxed) {
                std::thread::sleep(step);
                waited += step;
            }
            cancel.store(true, Ordering::Relaxed);
        })
    };
    let opts = Options {
        limits: Limits { time_limit, clause_budget: args.clause_budget, cancel: Some(cancel) },
        trace: args.trace || args.trace_file.is_some(),
        ordering_seed: args.ordering_seed,
        answer_subsumption: None,
    };
    let result = saturate(&pre, &opts);
    done.store(true, Ordering::Relaxed);
    let _ = watchdog.join();

    if opts.trace {
        let lines = result.trace.join("\n");
        match &args.trace_file {
            Some(path) => std::fs::write(path, lines + "\n").map_err(|e| format!("{}: {e}", path.display()))?,
            None if !lines.is_empty() => {
                let _ = writeln!(err, "{lines}");
            }
            None => {}
        }
    }
    if args.stats {
        let s = &result.stats;
        let _ = writeln!(
            err,
            "created {} activated {} intercepted {} invariant violations {} time {:.3}s",
            s.created,
            s.activated,
            s.intercepted,
            s.invariant_violations,
            s.elapsed.as_secs_f64()
        );
    }
    let reason = match result.outcome {
        Outcome::Refutation(_) => None,
        Outcome::Saturated => Some("saturated without refutation"),
        Outcome::TimeLimit | Outcome::Cancelled => Some("time limit reached"),
        Outcome::ClauseBudget => Some("clause budget exhausted"),
    };
    if let Some(reason) = reason {
        let _ = writeln!(out, "unknown");
        let _ = writeln!(err, "{reason}");
        return Ok(EXIT_UNKNOWN);
    }
    if mode == Mode::Prove {
        let _ = writeln!(out, "proved");
        return Ok(EXIT_OK);
    }

    let program = assemble(&pre, &result, &problem.input_names());
    for d in &program.diagnostics {
        let _ = writeln!(err, "note: {d}");
    }
    let _ = writeln!(out, "{}", program.render(&pre.sig));
    if let Some(model) = model {
        let report = verify_program(&program, &problem, &pre.sig, &model).map_err(|e| e.to_string())?;
        let _ = writeln!(out, "{report}");
        if !report.passed() {
            return Ok(EXIT_VERIFY_FAILED);
        }
    }
    Ok(EXIT_OK)
}
