use crate::logic::{Atom, Clause, Formula, Interp, Literal, Rule, Signature, Term};

/// Normalize integer subterms: fold ground operations on numerals and drop
/// neutral elements (`x+0`, `0+x`, `x-0`, `x*1`, `1*x`).
pub fn normalize_term(t: &Term, sig: &Signature) -> Term {
    match t {
        Term::Var(_) | Term::Int(_) => t.clone(),
        Term::App(f, args) => {
            if args.is_empty() {
                return t.clone();
            }
            let args: Vec<Term> = args.iter().map(|a| normalize_term(a, sig)).collect();
            if let Some(op) = sig.symbol(*f).interpreted {
                if let Some(v) = fold(op, &args[0], &args[1]) {
                    return v;
                }
            }
            Term::app(*f, args)
        }
        Term::Ite(ite) => {
            let guard = normalize_formula(&ite.guard, sig);
            let then = normalize_term(&ite.then, sig);
            let els = normalize_term(&ite.els, sig);
            // a branch that repeats the guard takes the matching side
            let then = match &then {
                Term::Ite(inner) if inner.guard == guard => inner.then.clone(),
                _ => then,
            };
            let els = match &els {
                Term::Ite(inner) if inner.guard == guard => inner.els.clone(),
                _ => els,
            };
            match guard {
                Formula::True => then,
                Formula::False => els,
                _ if then == els => then,
                g => Term::ite(g, then, els),
            }
        }
    }
}

fn fold(op: Interp, a: &Term, b: &Term) -> Option<Term> {
    match (op, a, b) {
        (Interp::Add, Term::Int(x), Term::Int(y)) => x.checked_add(*y).map(Term::Int),
        (Interp::Sub, Term::Int(x), Term::Int(y)) => x.checked_sub(*y).map(Term::Int),
        (Interp::Mul, Term::Int(x), Term::Int(y)) => x.checked_mul(*y).map(Term::Int),
        (Interp::Add, t, Term::Int(0)) | (Interp::Add, Term::Int(0), t) => Some(t.clone()),
        (Interp::Sub, t, Term::Int(0)) => Some(t.clone()),
        (Interp::Mul, t, Term::Int(1)) | (Interp::Mul, Term::Int(1), t) => Some(t.clone()),
        (Interp::Mul, _, Term::Int(0)) | (Interp::Mul, Term::Int(0), _) => Some(Term::Int(0)),
        _ => None,
    }
}

/// Truth value of an atom when it is decided by evaluation alone.
pub fn eval_atom(a: &Atom, sig: &Signature) -> Option<bool> {
    match a {
        Atom::Eq(l, r) if l == r => Some(true),
        Atom::Eq(Term::Int(x), Term::Int(y)) => Some(x == y),
        Atom::Eq(..) => None,
        Atom::Pred(p, args) => {
            let op = sig.symbol(*p).interpreted?;
            let (x, y) = (&args[0], &args[1]);
            if x == y {
                return Some(matches!(op, Interp::Le | Interp::Ge));
            }
            let (Term::Int(x), Term::Int(y)) = (x, y) else { return None };
            match op {
                Interp::Lt => Some(x < y),
                Interp::Le => Some(x <= y),
                Interp::Gt => Some(x > y),
                Interp::Ge => Some(x >= y),
                _ => None,
            }
        }
    }
}

pub fn normalize_formula(f: &Formula, sig: &Signature) -> Formula {
    match f {
        Formula::Atom(a) => {
            let a = a.map_terms(|t| normalize_term(t, sig));
            match eval_atom(&a, sig) {
                Some(true) => Formula::True,
                Some(false) => Formula::False,
                None => Formula::Atom(a),
            }
        }
        Formula::Not(g) => match normalize_formula(g, sig) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(h) => *h,
            h => Formula::not(h),
        },
        Formula::And(gs) => {
            let mut parts = Vec::new();
            for g in gs {
                match normalize_formula(g, sig) {
                    Formula::True => {}
                    Formula::False => return Formula::False,
                    h => parts.push(h),
                }
            }
            Formula::and(parts)
        }
        Formula::Or(gs) => {
            let mut parts = Vec::new();
            for g in gs {
                match normalize_formula(g, sig) {
                    Formula::False => {}
                    Formula::True => return Formula::True,
                    h => parts.push(h),
                }
            }
            Formula::or(parts)
        }
        _ => f.map_terms(&mut |t| normalize_term(t, sig)),
    }
}

/// Evaluate interpreted literals. `None` means the clause is a tautology;
/// otherwise false literals are removed and integer subterms normalized.
/// The answer term is normalized too when the result stays computable.
pub fn evaluate_ground_theory(c: &Clause, sig: &Signature) -> Option<Clause> {
    let mut changed = false;
    let mut lits = Vec::with_capacity(c.literals.len());
    for l in &c.literals {
        let atom = l.atom.map_terms(|t| normalize_term(t, sig));
        changed |= atom != l.atom;
        match eval_atom(&atom, sig) {
            Some(v) if v == l.positive => return None,
            Some(_) => changed = true,
            None => lits.push(Literal { atom, ..l.clone() }),
        }
    }
    let mut answer = c.answer.clone();
    if let Some(r) = &c.answer {
        let nf = normalize_term(r, sig);
        if nf != *r && nf.is_computable(sig) {
            answer = Some(nf);
            changed = true;
        }
    }
    if !changed {
        return Some(c.clone());
    }
    let mut out = Clause { literals: lits, answer, ..c.clone() };
    if c.rule != Rule::Evaluation {
        out.rule = Rule::Evaluation;
        out.parents = vec![c.id];
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{show_clause, SortId};

    fn sig_with_input() -> (Signature, Term) {
        let mut sig = Signature::new();
        let s1 = sig.declare("s1", vec![], SortId::INT).unwrap();
        (sig, Term::constant(s1))
    }

    #[test]
    fn true_literal_deletes_clause() {
        let (sig, s1) = sig_with_input();
        let lt = sig.interp(Interp::Lt);
        let c = Clause::new(vec![Literal::new(true, Atom::pred(lt, vec![Term::Int(1), Term::Int(2)])), Literal::eq(s1.clone(), Term::Int(3))]);
        assert!(evaluate_ground_theory(&c, &sig).is_none());
    }

    #[test]
    fn false_literal_is_removed() {
        let (sig, s1) = sig_with_input();
        let add = sig.interp(Interp::Add);
        let c = Clause::new(vec![
            Literal::neq(Term::app(add, vec![Term::Int(2), Term::Int(3)]), Term::Int(5)),
            Literal::eq(s1, Term::Int(3)),
        ]);
        let out = evaluate_ground_theory(&c, &sig).unwrap();
        assert_eq!(show_clause(&out, &sig), "s1 = 3");
    }

    #[test]
    fn neutral_addition_is_dropped() {
        let (sig, s1) = sig_with_input();
        let add = sig.interp(Interp::Add);
        let c = Clause::new(vec![Literal::eq(Term::app(add, vec![s1.clone(), Term::Int(0)]), s1)]);
        assert!(evaluate_ground_theory(&c, &sig).is_none());
    }

    #[test]
    fn irreflexive_comparison_is_false() {
        let (sig, s1) = sig_with_input();
        let lt = sig.interp(Interp::Lt);
        let c = Clause::new(vec![Literal::new(true, Atom::pred(lt, vec![s1.clone(), s1]))]);
        assert!(evaluate_ground_theory(&c, &sig).unwrap().literals.is_empty());
    }
}
