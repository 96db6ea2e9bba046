//! Inference rules with answer literals, ground theory evaluation and
//! simplification.

mod rules;
mod simplify;
mod theory;

pub use rules::Calculus;
pub use simplify::{is_tautology, match_term, subsumes, subsumes_with, Demodulator};
pub use theory::{eval_atom, evaluate_ground_theory, normalize_formula, normalize_term};
