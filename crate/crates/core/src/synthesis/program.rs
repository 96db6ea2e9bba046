use crate::calculus::normalize_term;
use crate::frontend::print_term;
use crate::logic::{Clause, Formula, Signature, SortId, SymId, SymbolRole, Term};
use crate::saturation::ProgramWithConditions;

/// A program over named inputs. The body mentions only computable symbols
/// and the input symbols.
#[derive(Clone, Debug)]
pub struct SynthesizedProgram {
    pub inputs: Vec<(String, SortId)>,
    /// Symbols standing for the inputs inside `body`, same order as `inputs`.
    pub input_syms: Vec<SymId>,
    pub body: Term,
    pub provenance: Vec<ProgramWithConditions>,
    pub diagnostics: Vec<String>,
}

impl SynthesizedProgram {
    pub fn render(&self, sig: &Signature) -> String {
        print_term(&self.body, sig)
    }
}

/// `¬C` for a clause `C`: the conjunction of its negated literals.
pub fn negate_clause(c: &Clause) -> Formula {
    Formula::and(c.literals.iter().map(|l| Formula::literal(!l.positive, l.atom.clone())).collect())
}

/// The ite cascade `if ¬C₁ then r₁ else … else rₖ`; the last branch is
/// unguarded. `None` on an empty sequence.
pub fn compose_program(ps: &[ProgramWithConditions]) -> Option<Term> {
    let (last, init) = ps.split_last()?;
    Some(init.iter().rev().fold(last.term.clone(), |acc, p| Term::ite(negate_clause(&p.condition), p.term.clone(), acc)))
}

/// Drop branches whose output is a bare variable: any value works there.
pub fn prune_variable_programs(ps: &[ProgramWithConditions]) -> Vec<ProgramWithConditions> {
    ps.iter().filter(|p| !p.term.is_var()).cloned().collect()
}

/// Evaluation-preserving cleanup: constant guards, equal branches, double
/// negation and ground integer arithmetic.
pub fn simplify_program(t: &Term, sig: &Signature) -> Term {
    normalize_term(t, sig)
}

/// A closed computable term of `sort`: `0` for integers, otherwise a
/// declared computable constant, otherwise an input of that sort.
pub fn default_value(sort: SortId, sig: &Signature, inputs: &[SymId]) -> Option<Term> {
    if sort == SortId::INT {
        return Some(Term::Int(0));
    }
    let declared = sig.symbols().find(|(_, s)| {
        s.arity() == 0 && s.result == sort && s.computable && s.role == SymbolRole::Declared
    });
    if let Some((id, _)) = declared {
        return Some(Term::constant(id));
    }
    inputs.iter().copied().find(|&x| sig.symbol(x).result == sort).map(Term::constant)
}

/// Replace every remaining variable by a default value of its sort.
pub fn ground_leftover_vars(t: &Term, sig: &Signature, inputs: &[SymId]) -> Option<Term> {
    let mut out = t.clone();
    for v in t.vars() {
        let d = default_value(v.sort, sig, inputs)?;
        out = out.replace_term(&Term::Var(v), &d);
    }
    Some(out)
}

/// Whether `t` mentions no variables, no skolems and no answer predicate,
/// and every symbol is computable.
pub fn is_closed_program(t: &Term, sig: &Signature) -> bool {
    let mut syms = std::collections::BTreeSet::new();
    t.collect_symbols(&mut syms);
    t.is_ground()
        && t.is_computable(sig)
        && syms.iter().all(|&s| {
            let sym = sig.symbol(s);
            !sym.is_skolem() && !sym.is_answer()
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{show_term, Atom, ClauseId, Literal};

    fn pwc(term: Term, condition: Vec<Literal>) -> ProgramWithConditions {
        ProgramWithConditions { term, prior: vec![], condition: Clause::new(condition), origin: ClauseId(0) }
    }

    #[test]
    fn single_branch_is_unguarded() {
        let mut sig = Signature::new();
        let s = sig.declare_sort("G").unwrap();
        let x = sig.declare_with_role("x", vec![], s, SymbolRole::Input, true).unwrap();
        let i = sig.declare("i", vec![s], s).unwrap();
        let body = compose_program(&[pwc(Term::app(i, vec![Term::constant(x)]), vec![])]).unwrap();
        assert_eq!(show_term(&body, &sig), "i(x)");
        assert!(compose_program(&[]).is_none());
    }

    #[test]
    fn two_branches_cascade() {
        let mut sig = Signature::new();
        let s = sig.declare_sort("G").unwrap();
        let a = sig.declare("a", vec![], s).unwrap();
        let b = sig.declare("b", vec![], s).unwrap();
        let p = sig.declare("p", vec![], SortId::BOOL).unwrap();
        let c1 = vec![Literal::new(true, Atom::pred(p, vec![]))];
        let body = compose_program(&[pwc(Term::constant(a), c1), pwc(Term::constant(b), vec![])]).unwrap();
        assert_eq!(print_term(&body, &sig), "(ite (not p) a b)");
    }

    #[test]
    fn variables_are_pruned_inputs_kept() {
        let mut sig = Signature::new();
        let s = sig.declare_sort("G").unwrap();
        let x = sig.declare_with_role("x", vec![], s, SymbolRole::Input, true).unwrap();
        let ps = vec![pwc(Term::var(0, s), vec![]), pwc(Term::constant(x), vec![])];
        let kept = prune_variable_programs(&ps);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].term, Term::constant(x));
        assert!(prune_variable_programs(&[]).is_empty());
    }

    #[test]
    fn simplification_cases() {
        let mut sig = Signature::new();
        let s = sig.declare_sort("G").unwrap();
        let a = Term::constant(sig.declare("a", vec![], s).unwrap());
        let b = Term::constant(sig.declare("b", vec![], s).unwrap());
        let c = Term::constant(sig.declare("c", vec![], s).unwrap());
        let g = Formula::eq(a.clone(), b.clone());
        assert_eq!(simplify_program(&Term::ite(Formula::eq(c.clone(), c), a.clone(), b.clone()), &sig), a);
        assert_eq!(simplify_program(&Term::ite(g.clone(), a.clone(), a.clone()), &sig), a);
        let double = Term::ite(Formula::not(Formula::not(g.clone())), a.clone(), b.clone());
        assert_eq!(simplify_program(&double, &sig), Term::ite(g, a, b));
    }

    #[test]
    fn defaults_prefer_declared_constants() {
        let mut sig = Signature::new();
        let s = sig.declare_sort("G").unwrap();
        let x = sig.declare_with_role("x", vec![], s, SymbolRole::Input, true).unwrap();
        assert_eq!(default_value(s, &sig, &[x]), Some(Term::constant(x)));
        let e = sig.declare("e", vec![], s).unwrap();
        assert_eq!(default_value(s, &sig, &[x]), Some(Term::constant(e)));
        assert_eq!(default_value(SortId::INT, &sig, &[]), Some(Term::Int(0)));
    }
}
