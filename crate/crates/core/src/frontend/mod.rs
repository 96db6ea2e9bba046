//! Problem files: an s-expression format with `assert-not` marking the
//! specification and `(set-option :uncomputable (..))` marking symbols that
//! programs may not use.

mod parser;
mod printer;
mod sexp;

pub use parser::{parse_lenient, parse_problem, ParseError, Problem, Spec};
pub use printer::{print_formula, print_formula_named, print_problem, print_term, print_term_named};
pub use sexp::{read_all, Sexp, SexpError};
