//! Syntactic unification and computable unification with abstraction.

use std::collections::VecDeque;

use crate::logic::{Atom, Formula, Literal, Signature, Substitution, Term, VarGen};

/// Something that can be unified: a term, an atom or a literal.
#[derive(Clone, Copy, Debug)]
pub enum Expr<'a> {
    Term(&'a Term),
    Atom(&'a Atom),
    Literal(&'a Literal),
}

impl<'a> From<&'a Term> for Expr<'a> {
    fn from(t: &'a Term) -> Self {
        Expr::Term(t)
    }
}

impl<'a> From<&'a Atom> for Expr<'a> {
    fn from(a: &'a Atom) -> Self {
        Expr::Atom(a)
    }
}

impl<'a> From<&'a Literal> for Expr<'a> {
    fn from(l: &'a Literal) -> Self {
        Expr::Literal(l)
    }
}

/// A substitution together with the disjunction `D` of disequality
/// constraints under which it unifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractUnifier {
    pub theta: Substitution,
    /// Disequalities `s ≄ t`, flagged as constraints. Not yet instantiated by `theta`.
    pub constraints: Vec<Literal>,
}

type Equations = VecDeque<(Term, Term)>;

fn atom_equations(a: &Atom, b: &Atom, out: &mut Equations) -> bool {
    match (a, b) {
        (Atom::Eq(l1, r1), Atom::Eq(l2, r2)) => {
            out.push_back((l1.clone(), l2.clone()));
            out.push_back((r1.clone(), r2.clone()));
            true
        }
        (Atom::Pred(p, xs), Atom::Pred(q, ys)) if p == q && xs.len() == ys.len() => {
            out.extend(xs.iter().cloned().zip(ys.iter().cloned()));
            true
        }
        _ => false,
    }
}

/// Push the pairwise equations of two guards with the same connective
/// structure; false if the shapes differ.
fn formula_equations(f: &Formula, g: &Formula, out: &mut Equations) -> bool {
    match (f, g) {
        (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
        (Formula::Atom(a), Formula::Atom(b)) => atom_equations(a, b, out),
        (Formula::Not(a), Formula::Not(b)) => formula_equations(a, b, out),
        (Formula::And(xs), Formula::And(ys)) | (Formula::Or(xs), Formula::Or(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| formula_equations(x, y, out))
        }
        (Formula::Implies(a1, b1), Formula::Implies(a2, b2))
        | (Formula::Iff(a1, b1), Formula::Iff(a2, b2)) => {
            formula_equations(a1, a2, out) && formula_equations(b1, b2, out)
        }
        _ => false,
    }
}

fn initial_equations(e1: Expr, e2: Expr) -> Option<Equations> {
    let mut eqs = VecDeque::new();
    let ok = match (e1, e2) {
        (Expr::Term(s), Expr::Term(t)) => {
            eqs.push_back((s.clone(), t.clone()));
            true
        }
        (Expr::Atom(a), Expr::Atom(b)) => atom_equations(a, b, &mut eqs),
        (Expr::Literal(a), Expr::Literal(b)) => {
            a.positive == b.positive && atom_equations(&a.atom, &b.atom, &mut eqs)
        }
        _ => false,
    };
    ok.then_some(eqs)
}

/// Decompose two non-variable terms with the same head; false on a clash.
fn decompose(s: &Term, t: &Term, eqs: &mut Equations) -> bool {
    match (s, t) {
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
            eqs.extend(xs.iter().cloned().zip(ys.iter().cloned()));
            true
        }
        (Term::Int(a), Term::Int(b)) => a == b,
        (Term::Ite(a), Term::Ite(b)) => {
            eqs.push_back((a.then.clone(), b.then.clone()));
            eqs.push_back((a.els.clone(), b.els.clone()));
            formula_equations(&a.guard, &b.guard, eqs)
        }
        _ => false,
    }
}

/// Most general unifier with occurs check; `None` if none exists.
pub fn mgu<'a>(e1: impl Into<Expr<'a>>, e2: impl Into<Expr<'a>>, sig: &Signature) -> Option<Substitution> {
    let mut eqs = initial_equations(e1.into(), e2.into())?;
    let mut theta = Substitution::new();
    while let Some((s, t)) = eqs.pop_front() {
        let s = theta.apply(&s);
        let t = theta.apply(&t);
        if s == t {
            continue;
        }
        match (&s, &t) {
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if other.occurs(*x) || other.sort(sig) != x.sort {
                    return None;
                }
                theta.bind(*x, other.clone());
            }
            _ => {
                if !decompose(&s, &t, &mut eqs) {
                    return None;
                }
            }
        }
    }
    Some(theta)
}

/// Computable unification with abstraction.
///
/// Unifies `e1` and `e2` while keeping `e3θ` computable: a variable of
/// `e3θ` is only bound to computable terms. A computable head over
/// uncomputable arguments is imitated with fresh variables; an
/// uncomputable head is abstracted into a constraint `s ≄ t`. Fails when `e3`
/// itself is uncomputable, on an occurs check or on a symbol clash.
/// Equations are processed first-in first-out.
pub fn mgu_comp<'a>(
    e1: impl Into<Expr<'a>>,
    e2: impl Into<Expr<'a>>,
    e3: &Term,
    sig: &Signature,
    vars: &mut VarGen,
) -> Option<AbstractUnifier> {
    if !e3.is_computable(sig) {
        return None;
    }
    let mut eqs = initial_equations(e1.into(), e2.into())?;
    let mut theta = Substitution::new();
    let mut constraints: Vec<Literal> = Vec::new();
    while let Some((s, t)) = eqs.pop_front() {
        let s = theta.apply(&s);
        let t = theta.apply(&t);
        if s == t {
            continue;
        }
        if let Term::Var(x) = s {
            if t.occurs(x) {
                return None;
            }
            if t.sort(sig) != x.sort {
                return None;
            }
            // "occurs in E3" is checked against the current instance E3θ
            if !theta.apply(e3).occurs(x) || t.is_computable(sig) {
                theta.bind(x, t);
            } else {
                match &t {
                    Term::App(f, args) if sig.is_computable(*f) => {
                        let fresh: Vec<Term> =
                            args.iter().map(|a| Term::Var(vars.fresh(a.sort(sig)))).collect();
                        theta.bind(x, Term::app(*f, fresh.clone()));
                        eqs.extend(fresh.into_iter().zip(args.iter().cloned()));
                    }
                    _ => {
                        let d = Literal::constraint(Term::Var(x), t);
                        if !constraints.contains(&d) {
                            constraints.push(d);
                        }
                    }
                }
            }
        } else if t.is_var() {
            eqs.push_back((t, s));
        } else if !decompose(&s, &t, &mut eqs) {
            return None;
        }
    }
    Some(AbstractUnifier { theta, constraints })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{SortId, SymId, Var};

    struct Fx {
        sig: Signature,
        s: SortId,
        f: SymId,
        g: SymId,
        mul: SymId,
        i: SymId,
        c: SymId,
        d: SymId,
        p: SymId,
    }

    fn fx() -> Fx {
        let mut sig = Signature::new();
        let s = sig.declare_sort("S").unwrap();
        let f = sig.declare("f", vec![s], s).unwrap();
        let g = sig.declare("g", vec![s], s).unwrap();
        let mul = sig.declare("*", vec![s, s], s).unwrap();
        let i = sig.declare("i", vec![s], s).unwrap();
        let c = sig.declare("c", vec![], s).unwrap();
        let d = sig.declare("d", vec![], s).unwrap();
        let p = sig.declare("p", vec![s], SortId::BOOL).unwrap();
        sig.set_computable(g, false).unwrap();
        Fx { sig, s, f, g, mul, i, c, d, p }
    }

    #[test]
    fn mgu_binds_product_pattern() {
        let Fx { sig, s, mul, i, c, .. } = fx();
        let x = Var::new(0, s);
        let y = Var::new(1, s);
        let sigma = Term::constant(c);
        let pattern = Term::app(mul, vec![Term::Var(x), Term::Var(y)]);
        let target = Term::app(mul, vec![sigma.clone(), Term::app(i, vec![sigma.clone()])]);
        let theta = mgu(&pattern, &target, &sig).unwrap();
        assert_eq!(theta.get(x), Some(&sigma));
        assert_eq!(theta.get(y), Some(&Term::app(i, vec![sigma])));
        assert_eq!(theta.apply(&pattern), target);
    }

    #[test]
    fn mgu_failures() {
        let Fx { sig, s, f, c, d, .. } = fx();
        let x = Term::var(0, s);
        assert!(mgu(&x, &Term::app(f, vec![x.clone()]), &sig).is_none());
        assert!(mgu(&Term::constant(c), &Term::constant(d), &sig).is_none());
        assert!(mgu(&x, &Term::Int(1), &sig).is_none(), "sorts differ");
    }

    #[test]
    fn literal_polarity_must_match() {
        let Fx { sig, s, p, c, .. } = fx();
        let a = Literal::new(true, Atom::pred(p, vec![Term::var(0, s)]));
        let b = Literal::new(false, Atom::pred(p, vec![Term::constant(c)]));
        assert!(mgu(&a, &b, &sig).is_none());
        assert!(mgu(&a, &b.negated(), &sig).is_some());
    }

    #[test]
    fn comp_imitates_computable_head() {
        // f computable, g uncomputable: mgu_comp(f(g(x)), y, f(y)) = ({y ↦ f(z)}, z ≄ g(x))
        let Fx { sig, s, f, g, .. } = fx();
        let x = Term::var(0, s);
        let y = Var::new(1, s);
        let e1 = Term::app(f, vec![Term::app(g, vec![x.clone()])]);
        let e3 = Term::app(f, vec![Term::Var(y)]);
        let mut vars = VarGen::above(Some(1));
        let u = mgu_comp(&e1, &Term::Var(y), &e3, &sig, &mut vars).unwrap();
        let z = Term::var(2, s);
        assert_eq!(u.theta.get(y), Some(&Term::app(f, vec![z.clone()])));
        assert_eq!(u.theta.len(), 1);
        assert_eq!(u.constraints, vec![Literal::neq(z, Term::app(g, vec![x]))]);
        assert!(u.constraints[0].constraint);
        assert!(u.theta.apply(&e3).is_computable(&sig));
    }

    #[test]
    fn comp_identical_expressions() {
        let Fx { sig, s, .. } = fx();
        let x = Term::var(0, s);
        let u = mgu_comp(&x, &x, &x, &sig, &mut VarGen::above(Some(0))).unwrap();
        assert!(u.theta.is_empty());
        assert!(u.constraints.is_empty());
    }

    #[test]
    fn comp_abstracts_uncomputable_head() {
        let Fx { sig, s, g, .. } = fx();
        let x = Term::var(0, s);
        let y = Term::var(1, s);
        let gx = Term::app(g, vec![x]);
        let u = mgu_comp(&gx, &y, &y, &sig, &mut VarGen::above(Some(1))).unwrap();
        assert!(u.theta.is_empty());
        assert_eq!(u.constraints, vec![Literal::neq(y, gx)]);
    }

    #[test]
    fn comp_fails_on_uncomputable_target() {
        let Fx { sig, s, g, c, .. } = fx();
        let x = Term::var(0, s);
        let e3 = Term::app(g, vec![x.clone()]);
        assert!(mgu_comp(&x, &x, &e3, &sig, &mut VarGen::above(Some(0))).is_none());
        assert!(mgu_comp(&x, &Term::constant(c), &e3, &sig, &mut VarGen::above(Some(0))).is_none());
    }

    #[test]
    fn comp_binds_freely_outside_target() {
        let Fx { sig, s, g, c, .. } = fx();
        let x = Var::new(0, s);
        let y = Term::var(1, s);
        let gc = Term::app(g, vec![Term::constant(c)]);
        let u = mgu_comp(&Term::Var(x), &gc, &y, &sig, &mut VarGen::above(Some(1))).unwrap();
        assert_eq!(u.theta.get(x), Some(&gc));
        assert!(u.constraints.is_empty());
    }

    #[test]
    fn comp_occurs_check_and_clash() {
        let Fx { sig, s, f, c, d, .. } = fx();
        let x = Term::var(0, s);
        let fx_ = Term::app(f, vec![x.clone()]);
        assert!(mgu_comp(&x, &fx_, &x, &sig, &mut VarGen::above(Some(0))).is_none());
        assert!(mgu_comp(&Term::constant(c), &Term::constant(d), &x, &sig, &mut VarGen::above(Some(0))).is_none());
    }

    #[test]
    fn later_binding_of_abstracted_variable() {
        // f(x, x) against *(g(c), d) style clash: x ≄ g(c) recorded, then x ↦ d
        let Fx { sig, s, mul, g, c, d, .. } = fx();
        let x = Var::new(0, s);
        let e1 = Term::app(mul, vec![Term::Var(x), Term::Var(x)]);
        let gc = Term::app(g, vec![Term::constant(c)]);
        let e2 = Term::app(mul, vec![gc.clone(), Term::constant(d)]);
        let u = mgu_comp(&e1, &e2, &Term::Var(x), &sig, &mut VarGen::above(Some(0))).unwrap();
        assert_eq!(u.theta.get(x), Some(&Term::constant(d)));
        assert_eq!(u.constraints, vec![Literal::neq(Term::Var(x), gc)]);
    }

    #[test]
    fn ite_terms_unify_through_guards() {
        let Fx { sig, s, c, d, p, .. } = fx();
        let x = Var::new(0, s);
        let guard = |t: Term| Formula::Atom(Atom::pred(p, vec![t]));
        let a = Term::ite(guard(Term::Var(x)), Term::constant(c), Term::constant(d));
        let b = Term::ite(guard(Term::constant(c)), Term::constant(c), Term::constant(d));
        let theta = mgu(&a, &b, &sig).unwrap();
        assert_eq!(theta.get(x), Some(&Term::constant(c)));
    }
}
