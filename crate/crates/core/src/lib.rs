//! Saturation-based synthesis of recursion-free programs.
//!
//! A specification `∀x̄.∃y.F[x̄,y]` is negated, skolemized and extended with an
//! answer literal `ans(y)`. Saturation with a superposition calculus that
//! keeps answer arguments computable then records guarded program branches,
//! which are assembled into an if-then-else program once the empty clause is
//! derived.

pub mod calculus;
pub mod cli;
pub mod frontend;
pub mod logic;
pub mod order;
pub mod preprocess;
pub mod saturation;
pub mod synthesis;
pub mod unify;
