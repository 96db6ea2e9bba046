//! Program assembly from recorded branches, simplification and checking on
//! finite interpretations.

mod model;
mod program;
mod verify;

pub use model::{Env, EvalError, FiniteModel, ModelError, Value};
pub use program::{
    compose_program, default_value, ground_leftover_vars, is_closed_program, negate_clause, prune_variable_programs,
    simplify_program, SynthesizedProgram,
};
pub use verify::{verify_program, Counterexample, VerifyError, VerifyReport};

use crate::frontend::Problem;
use crate::logic::Signature;
use crate::preprocess::{self, preprocess, Mode, PreprocessError, Preprocessed};
use crate::saturation::{saturate, Options, SynthesisResult};

/// Everything one synthesis run produced.
pub struct Synthesis {
    pub pre: Preprocessed,
    pub result: SynthesisResult,
    /// Present whenever the run ended in a refutation.
    pub program: Option<SynthesizedProgram>,
}

impl Synthesis {
    pub fn sig(&self) -> &Signature {
        &self.pre.sig
    }
}

/// Turn the branches used by a refutation into a closed program.
pub fn assemble(pre: &Preprocessed, result: &SynthesisResult, input_names: &[String]) -> SynthesizedProgram {
    let sig = &pre.sig;
    let inputs: Vec<(String, crate::logic::SortId)> =
        input_names.iter().cloned().zip(pre.inputs.iter().map(|&x| sig.symbol(x).result)).collect();
    let kept = prune_variable_programs(&result.used);
    let mut diagnostics = Vec::new();
    let out_sort = pre.output_sort.unwrap_or(crate::logic::SortId::INT);
    let body = match compose_program(&kept) {
        Some(t) => t,
        None => {
            diagnostics.push("any output satisfies the specification; emitting a default value".to_string());
            default_value(out_sort, sig, &pre.inputs).unwrap_or(crate::logic::Term::Int(0))
        }
    };
    let body = match ground_leftover_vars(&body, sig, &pre.inputs) {
        Some(t) => t,
        None => {
            diagnostics.push("no closed value available for a leftover variable".to_string());
            body
        }
    };
    let body = simplify_program(&body, sig);
    SynthesizedProgram { inputs, input_syms: pre.inputs.clone(), body, provenance: kept, diagnostics }
}

/// Preprocess, saturate and assemble.
pub fn synthesize(problem: &Problem, opts: &Options, pre_opts: preprocess::Options) -> Result<Synthesis, PreprocessError> {
    let pre = preprocess(problem, Mode::Synthesize, pre_opts)?;
    let result = saturate(&pre, opts);
    let program = result.refuted().then(|| assemble(&pre, &result, &problem.input_names()));
    Ok(Synthesis { pre, result, program })
}
