//! Python bindings: parse problems, run synthesis or proving, inspect
//! results and check programs on finite models.

use std::time::Duration;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use satsynth::frontend::{parse_lenient, parse_problem, print_problem};
use satsynth::preprocess::{self, preprocess as run_preprocess, Mode};
use satsynth::saturation::{saturate, Limits, Options, Outcome, SynthesisResult};
use satsynth::synthesis::{assemble, verify_program, FiniteModel, SynthesizedProgram};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A parsed problem file.
#[pyclass(module = "satsynth_py")]
#[derive(Clone)]
pub struct Problem {
    inner: satsynth::frontend::Problem,
}

#[pymethods]
impl Problem {
    /// Parse a synthesis problem. With `lenient`, any `assert-not` goal is
    /// accepted, as needed for proving.
    #[new]
    #[pyo3(signature = (text, lenient = false))]
    fn new(text: &str, lenient: bool) -> PyResult<Self> {
        let inner = if lenient { parse_lenient(text) } else { parse_problem(text) }.map_err(value_error)?;
        Ok(Problem { inner })
    }

    #[getter]
    fn input_names(&self) -> Vec<String> {
        self.inner.input_names()
    }

    #[getter]
    fn num_assumptions(&self) -> usize {
        self.inner.assumptions.len()
    }

    #[getter]
    fn uncomputable(&self) -> Vec<String> {
        self.inner.uncomputable.clone()
    }

    fn __str__(&self) -> String {
        print_problem(&self.inner)
    }
}

/// Outcome of a saturation run, with the assembled program when the run
/// ended in a refutation.
#[pyclass(module = "satsynth_py")]
pub struct Synthesis {
    problem: satsynth::frontend::Problem,
    pre: preprocess::Preprocessed,
    result: SynthesisResult,
    program: Option<SynthesizedProgram>,
}

#[pymethods]
impl Synthesis {
    /// One of `refutation`, `saturated`, `time_limit`, `clause_budget`.
    #[getter]
    fn outcome(&self) -> &'static str {
        match self.result.outcome {
            Outcome::Refutation(_) => "refutation",
            Outcome::Saturated => "saturated",
            Outcome::TimeLimit | Outcome::Cancelled => "time_limit",
            Outcome::ClauseBudget => "clause_budget",
        }
    }

    #[getter]
    fn refuted(&self) -> bool {
        self.result.refuted()
    }

    /// The program as an s-expression, or None without a refutation.
    #[getter]
    fn program(&self) -> Option<String> {
        self.program.as_ref().map(|p| p.render(&self.pre.sig))
    }

    #[getter]
    fn diagnostics(&self) -> Vec<String> {
        self.program.as_ref().map(|p| p.diagnostics.clone()).unwrap_or_default()
    }

    /// Number of branches the program was assembled from.
    #[getter]
    fn branches(&self) -> usize {
        self.program.as_ref().map_or(0, |p| p.provenance.len())
    }

    #[getter]
    fn trace(&self) -> Vec<String> {
        self.result.trace.clone()
    }

    /// Derivation of the empty clause, one line per clause.
    fn proof(&self) -> Vec<String> {
        self.result.proof(&self.pre.sig)
    }

    /// Run statistics as a dict of counters plus `elapsed` in seconds.
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let s = &self.result.stats;
        let d = pyo3::types::PyDict::new_bound(py);
        d.set_item("created", s.created)?;
        d.set_item("activated", s.activated)?;
        d.set_item("deleted_tautology", s.deleted_tautology)?;
        d.set_item("deleted_subsumed", s.deleted_subsumed)?;
        d.set_item("deleted_duplicate", s.deleted_duplicate)?;
        d.set_item("demodulated", s.demodulated)?;
        d.set_item("evaluated", s.evaluated)?;
        d.set_item("intercepted", s.intercepted)?;
        d.set_item("invariant_violations", s.invariant_violations)?;
        d.set_item("elapsed", s.elapsed.as_secs_f64())?;
        Ok(d)
    }

    /// Check the program on every input tuple of a JSON finite model.
    /// Returns `(passed, checked, counterexample)`; the counterexample is a
    /// dict of input values plus `output`, or None.
    fn verify<'py>(&self, py: Python<'py>, model_json: &str) -> PyResult<(bool, usize, PyObject)> {
        let prog = self.program.as_ref().ok_or_else(|| PyValueError::new_err("no program to verify"))?;
        let model = FiniteModel::from_json(model_json, &self.pre.sig).map_err(value_error)?;
        let report = verify_program(prog, &self.problem, &self.pre.sig, &model).map_err(value_error)?;
        let cex = match &report.counterexample {
            None => py.None(),
            Some(c) => {
                let d = pyo3::types::PyDict::new_bound(py);
                for (name, value) in &c.inputs {
                    d.set_item(name, value)?;
                }
                d.set_item("output", &c.output)?;
                d.into_any().unbind()
            }
        };
        Ok((report.passed(), report.checked, cex))
    }
}

fn run(
    problem: &Problem,
    mode: Mode,
    time_limit: f64,
    clause_budget: usize,
    ordering_seed: u64,
    skolems_computable: bool,
    trace: bool,
) -> PyResult<Synthesis> {
    if !(time_limit > 0.0) || clause_budget == 0 {
        return Err(PyValueError::new_err("time limit and clause budget must be positive"));
    }
    let pre = run_preprocess(&problem.inner, mode, preprocess::Options { skolems_computable }).map_err(value_error)?;
    let opts = Options {
        limits: Limits { time_limit: Duration::from_secs_f64(time_limit), clause_budget, cancel: None },
        trace,
        ordering_seed,
        answer_subsumption: None,
    };
    let result = saturate(&pre, &opts);
    let program =
        (mode == Mode::Synthesize && result.refuted()).then(|| assemble(&pre, &result, &problem.inner.input_names()));
    Ok(Synthesis { problem: problem.inner.clone(), pre, result, program })
}

/// Synthesize a program for `problem`.
#[pyfunction]
#[pyo3(signature = (problem, time_limit = 60.0, clause_budget = 1_000_000, ordering_seed = 0, skolems_computable = false, trace = false))]
fn synthesize(
    py: Python<'_>,
    problem: &Problem,
    time_limit: f64,
    clause_budget: usize,
    ordering_seed: u64,
    skolems_computable: bool,
    trace: bool,
) -> PyResult<Synthesis> {
    py.allow_threads(|| {
        run(problem, Mode::Synthesize, time_limit, clause_budget, ordering_seed, skolems_computable, trace)
    })
}

/// Refute assumptions plus the negated goal, without answer literals.
#[pyfunction]
#[pyo3(signature = (problem, time_limit = 60.0, clause_budget = 1_000_000, ordering_seed = 0))]
fn prove(
    py: Python<'_>,
    problem: &Problem,
    time_limit: f64,
    clause_budget: usize,
    ordering_seed: u64,
) -> PyResult<Synthesis> {
    py.allow_threads(|| run(problem, Mode::Prove, time_limit, clause_budget, ordering_seed, false, false))
}

#[pymodule]
pub fn satsynth_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Problem>()?;
    m.add_class::<Synthesis>()?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    Ok(())
}
