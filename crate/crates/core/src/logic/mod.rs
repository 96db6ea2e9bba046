//! Sorted terms, literals and clauses with computability tracking.

mod clause;
mod display;
mod formula;
mod signature;
mod subst;
mod term;

pub use clause::{Clause, ClauseError, ClauseId, Literal, Rule, RuleKind, Variant};
pub use display::{show_clause, show_formula, show_literal, show_term};
pub use formula::{Atom, Formula};
pub use signature::{
    BuiltinSort, Interp, Signature, SignatureError, Sort, SortId, SymId, Symbol, SymbolRole,
};
pub use subst::{SubstError, Substitutable, Substitution};
pub use term::{Ite, Term, Var};

/// Fresh variable supply.
#[derive(Debug, Clone, Default)]
pub struct VarGen {
    next: u32,
}

impl VarGen {
    /// Start above every id in use.
    pub fn above(max: Option<u32>) -> Self {
        VarGen { next: max.map_or(0, |m| m + 1) }
    }

    pub fn fresh(&mut self, sort: SortId) -> Var {
        let v = Var::new(self.next, sort);
        self.next += 1;
        v
    }

    pub fn peek(&self) -> u32 {
        self.next
    }
}
