use proptest::prelude::*;

use satsynth::calculus::{normalize_term, subsumes};
use satsynth::logic::{Clause, Interp, Literal, Signature, SortId, SymId, Term, VarGen};
use satsynth::unify::{mgu, mgu_comp};

/// Shape of a term over `a`, `c`, `f/2`, `h/1` and variables `0..4`.
#[derive(Clone, Debug)]
enum Shape {
    Var(u32),
    A,
    C,
    F(Box<Shape>, Box<Shape>),
    H(Box<Shape>),
}

fn shape() -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![(0u32..4).prop_map(Shape::Var), Just(Shape::A), Just(Shape::C)];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Shape::F(Box::new(l), Box::new(r))),
            inner.prop_map(|x| Shape::H(Box::new(x))),
        ]
    })
}

struct Fx {
    sig: Signature,
    g: SortId,
    a: SymId,
    c: SymId,
    f: SymId,
    h: SymId,
}

/// `c` and `h` are uncomputable.
fn fx() -> Fx {
    let mut sig = Signature::new();
    let g = sig.declare_sort("G").unwrap();
    let a = sig.declare("a", vec![], g).unwrap();
    let c = sig.declare("c", vec![], g).unwrap();
    let f = sig.declare("f", vec![g, g], g).unwrap();
    let h = sig.declare("h", vec![g], g).unwrap();
    sig.set_computable(c, false).unwrap();
    sig.set_computable(h, false).unwrap();
    Fx { sig, g, a, c, f, h }
}

fn build(fx: &Fx, s: &Shape) -> Term {
    match s {
        Shape::Var(v) => Term::var(*v, fx.g),
        Shape::A => Term::constant(fx.a),
        Shape::C => Term::constant(fx.c),
        Shape::F(l, r) => Term::app(fx.f, vec![build(fx, l), build(fx, r)]),
        Shape::H(x) => Term::app(fx.h, vec![build(fx, x)]),
    }
}

/// Ground integer expressions over `+`, `-`, `*` and `ite` on `<`.
#[derive(Clone, Debug)]
enum IntExpr {
    Lit(i64),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    IteLt(Box<IntExpr>, Box<IntExpr>, Box<IntExpr>, Box<IntExpr>),
}

fn int_expr() -> impl Strategy<Value = IntExpr> {
    (-20i64..20).prop_map(IntExpr::Lit).prop_recursive(3, 20, 4, |inner| {
        let b = || inner.clone().prop_map(Box::new);
        prop_oneof![
            (b(), b()).prop_map(|(l, r)| IntExpr::Add(l, r)),
            (b(), b()).prop_map(|(l, r)| IntExpr::Sub(l, r)),
            (b(), b()).prop_map(|(l, r)| IntExpr::Mul(l, r)),
            (b(), b(), b(), b()).prop_map(|(p, q, t, e)| IntExpr::IteLt(p, q, t, e)),
        ]
    })
}

fn int_value(e: &IntExpr) -> i64 {
    match e {
        IntExpr::Lit(n) => *n,
        IntExpr::Add(l, r) => int_value(l) + int_value(r),
        IntExpr::Sub(l, r) => int_value(l) - int_value(r),
        IntExpr::Mul(l, r) => int_value(l) * int_value(r),
        IntExpr::IteLt(p, q, t, e) => {
            if int_value(p) < int_value(q) {
                int_value(t)
            } else {
                int_value(e)
            }
        }
    }
}

fn int_term(sig: &Signature, e: &IntExpr) -> Term {
    let op = |o: Interp, l: &IntExpr, r: &IntExpr| Term::app(sig.interp(o), vec![int_term(sig, l), int_term(sig, r)]);
    match e {
        IntExpr::Lit(n) => Term::Int(*n),
        IntExpr::Add(l, r) => op(Interp::Add, l, r),
        IntExpr::Sub(l, r) => op(Interp::Sub, l, r),
        IntExpr::Mul(l, r) => op(Interp::Mul, l, r),
        IntExpr::IteLt(p, q, t, e) => {
            let guard = satsynth::logic::Formula::Atom(satsynth::logic::Atom::pred(
                sig.interp(Interp::Lt),
                vec![int_term(sig, p), int_term(sig, q)],
            ));
            Term::ite(guard, int_term(sig, t), int_term(sig, e))
        }
    }
}

proptest! {
    #[test]
    fn composition_applies_in_sequence(t in shape(), s1 in shape(), s2 in shape(), u in shape()) {
        let fx = fx();
        let t = build(&fx, &t);
        let mut th = satsynth::logic::Substitution::new();
        th.bind(satsynth::logic::Var::new(0, fx.g), build(&fx, &s1));
        let mut si = satsynth::logic::Substitution::new();
        si.bind(satsynth::logic::Var::new(1, fx.g), build(&fx, &s2));
        si.bind(satsynth::logic::Var::new(2, fx.g), build(&fx, &u));
        prop_assert_eq!(th.compose(&si).apply(&t), si.apply(&th.apply(&t)));
    }

    #[test]
    fn unifiers_unify(s in shape(), t in shape()) {
        let fx = fx();
        let (s, t) = (build(&fx, &s), build(&fx, &t));
        if let Some(th) = mgu(&s, &t, &fx.sig) {
            prop_assert_eq!(th.apply(&s), th.apply(&t));
            // idempotent
            prop_assert_eq!(th.apply(&th.apply(&s)), th.apply(&s));
        }
    }

    #[test]
    fn unification_is_symmetric_in_success(s in shape(), t in shape()) {
        let fx = fx();
        let (s, t) = (build(&fx, &s), build(&fx, &t));
        prop_assert_eq!(mgu(&s, &t, &fx.sig).is_some(), mgu(&t, &s, &fx.sig).is_some());
    }

    #[test]
    fn computable_unifier_keeps_answer_computable(s in shape(), t in shape(), r in shape()) {
        let fx = fx();
        let (s, t, r) = (build(&fx, &s), build(&fx, &t), build(&fx, &r));
        let mut vars = VarGen::above(Some(4));
        if let Some(u) = mgu_comp(&s, &t, &r, &fx.sig, &mut vars) {
            prop_assert!(u.theta.apply(&r).is_computable(&fx.sig));
            prop_assert!(u.constraints.iter().all(|l| l.constraint && !l.positive));
            if u.constraints.is_empty() {
                prop_assert_eq!(u.theta.apply(&s), u.theta.apply(&t));
            }
        }
    }

    #[test]
    fn ground_arithmetic_normalizes_to_its_value(e in int_expr()) {
        let sig = Signature::new();
        let t = int_term(&sig, &e);
        prop_assert_eq!(normalize_term(&t, &sig), Term::Int(int_value(&e)));
    }

    #[test]
    fn normalization_is_idempotent_and_renaming_invariant(a in shape(), b in shape(), shift in 1u32..10) {
        let fx = fx();
        let c = Clause::new(vec![Literal::eq(build(&fx, &a), build(&fx, &b))]);
        let n = c.normalized();
        prop_assert_eq!(&n.normalized().literals, &n.literals);
        prop_assert_eq!(&c.shifted(shift).normalized().literals, &n.literals);
    }

    #[test]
    fn clauses_subsume_their_instances(a in shape(), b in shape(), s in shape(), extra in shape()) {
        let fx = fx();
        let c = Clause::new(vec![Literal::neq(build(&fx, &a), build(&fx, &b))]);
        prop_assert!(subsumes(&c, &c, &fx.sig));
        let th = satsynth::logic::Substitution::singleton(satsynth::logic::Var::new(0, fx.g), build(&fx, &s));
        let mut d = Clause::new(c.literals.iter().map(|l| th.apply(l)).collect());
        d.literals.push(Literal::eq(build(&fx, &extra), Term::constant(fx.a)));
        prop_assert!(subsumes(&c, &d, &fx.sig));
    }
}
