use std::fmt;

use crate::frontend::Problem;
use crate::logic::Signature;

use super::model::{Env, EvalError, FiniteModel, Value};
use super::program::SynthesizedProgram;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("the model violates assumption {0}")]
    InvalidModel(usize),
    #[error("the problem has no specification to check")]
    NoSpecification,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// `name = value` for each input, then the program output.
    pub inputs: Vec<(String, String)>,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "verification passed on {} input tuples", self.checked),
            Some(cex) => {
                let inputs: Vec<String> = cex.inputs.iter().map(|(n, v)| format!("{n} = {v}")).collect();
                write!(f, "verification failed at {} with output {}", inputs.join(", "), cex.output)
            }
        }
    }
}

/// Check that the model satisfies the assumptions, then evaluate the
/// program on every input tuple and check the specification body.
///
/// `sig` must extend the problem signature with the program's input symbols.
pub fn verify_program(
    prog: &SynthesizedProgram,
    problem: &Problem,
    sig: &Signature,
    model: &FiniteModel,
) -> Result<VerifyReport, VerifyError> {
    let spec = problem.spec.as_ref().ok_or(VerifyError::NoSpecification)?;
    for (k, a) in problem.assumptions.iter().enumerate() {
        if !model.eval_formula(a, &Env::default(), sig)? {
            return Err(VerifyError::InvalidModel(k));
        }
    }
    let domains = spec.inputs.iter().map(|v| model.domain(v.sort, sig)).collect::<Result<Vec<_>, _>>()?;
    let mut checked = 0;
    let mut tuple: Vec<Value> = Vec::with_capacity(domains.len());
    let mut idx = vec![0usize; domains.len()];
    if domains.iter().any(Vec::is_empty) {
        return Ok(VerifyReport { checked, counterexample: None });
    }
    loop {
        tuple.clear();
        tuple.extend(idx.iter().zip(&domains).map(|(&i, d)| d[i]));
        let mut env = Env::default();
        for (k, &v) in tuple.iter().enumerate() {
            env.vars.insert(spec.inputs[k], v);
            if let Some(&sym) = prog.input_syms.get(k) {
                env.consts.insert(sym, v);
            }
        }
        let y = model.eval_term(&prog.body, &env, sig)?;
        env.vars.insert(spec.output, y);
        checked += 1;
        if !model.eval_formula(&spec.body, &env, sig)? {
            let inputs = spec
                .inputs
                .iter()
                .zip(&tuple)
                .map(|(v, &val)| (problem.var_name(*v), model.show_value(val, v.sort)))
                .collect();
            let output = model.show_value(y, spec.output.sort);
            return Ok(VerifyReport { checked, counterexample: Some(Counterexample { inputs, output }) });
        }
        // odometer increment, last input fastest
        let mut k = idx.len();
        loop {
            if k == 0 {
                return Ok(VerifyReport { checked, counterexample: None });
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}
