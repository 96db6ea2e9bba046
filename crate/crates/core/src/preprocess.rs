//! Clausification of a problem into the initial clause set.
//!
//! Assumptions are clausified as they are. The specification `∀x̄.∃y.F` has
//! its inputs replaced by fresh skolem constants, is negated and every clause
//! of the result carries the answer literal `ans(y)`.

use std::collections::BTreeSet;

use crate::frontend::Problem;
use crate::logic::{
    Atom, Clause, Formula, Interp, Literal, Rule, Signature, SignatureError, SortId, Substitution,
    SymId, SymbolRole, Term, Var, VarGen,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PreprocessError {
    #[error("synthesis needs a specification of the form forall x. exists y. F")]
    NoSpecification,
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Refute the assumptions together with the negated goal, without answers.
    Prove,
    /// Negate the specification and attach `ans(y)`.
    Synthesize,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    /// Skolem functions of assumption existentials may appear in programs.
    pub skolems_computable: bool,
}

/// The initial clause set together with the symbols it introduced.
#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub sig: Signature,
    pub clauses: Vec<Clause>,
    /// One skolem constant per specification input, in binder order.
    pub input_skolems: Vec<SymId>,
    /// Program inputs standing for `input_skolems`, same order.
    pub inputs: Vec<SymId>,
    pub answer: Option<SymId>,
    pub output_sort: Option<SortId>,
}

pub fn preprocess(p: &Problem, mode: Mode, opts: Options) -> Result<Preprocessed, PreprocessError> {
    let mut sig = p.sig.clone();
    let max_var = p
        .assumptions
        .iter()
        .chain(p.goal.iter())
        .filter_map(Formula::max_var)
        .max();
    let mut cx = Clausifier { sig: &mut sig, vars: VarGen::above(max_var), skolems_computable: opts.skolems_computable };
    let mut clauses = Vec::new();
    for a in &p.assumptions {
        for lits in cx.clausify(a, true) {
            clauses.push(Clause::derived(lits, None, Rule::Input, vec![]));
        }
    }

    let mut input_skolems = Vec::new();
    let mut inputs = Vec::new();
    let mut answer = None;
    let mut output_sort = None;
    match mode {
        Mode::Prove => {
            if let Some(g) = &p.goal {
                for lits in cx.clausify(g, false) {
                    clauses.push(Clause::derived(lits, None, Rule::Specification, vec![]));
                }
            }
        }
        Mode::Synthesize => {
            let spec = p.spec.as_ref().ok_or(PreprocessError::NoSpecification)?;
            let single = spec.inputs.len() == 1;
            let mut theta = Substitution::new();
            for (k, v) in spec.inputs.iter().enumerate() {
                let base = if single { "σ".to_string() } else { format!("σ{}", k + 1) };
                let name = cx.sig.fresh_name(&base);
                let sk = cx.sig.declare_with_role(&name, vec![], v.sort, SymbolRole::InputSkolem, true)?;
                let input_name = cx.sig.fresh_name(&p.var_name(*v));
                let input = cx.sig.declare_with_role(&input_name, vec![], v.sort, SymbolRole::Input, true)?;
                theta.bind(*v, Term::constant(sk));
                input_skolems.push(sk);
                inputs.push(input);
            }
            let y = spec.output;
            let ans_name = cx.sig.fresh_name("ans");
            answer = Some(cx.sig.declare_with_role(&ans_name, vec![y.sort], SortId::BOOL, SymbolRole::Answer, true)?);
            output_sort = Some(y.sort);
            let body = theta.apply(&spec.body);
            for lits in cx.clausify(&body, false) {
                clauses.push(Clause::derived(lits, Some(Term::Var(y)), Rule::Specification, vec![]));
            }
        }
    }

    let lt = sig.interp(Interp::Lt);
    if clauses.iter().any(|c| c.literals.iter().any(|l| l.atom.contains_symbol(lt))) {
        clauses.extend(ordering_axioms(lt));
    }
    let clauses = clauses.into_iter().map(|c| c.normalized()).collect();
    Ok(Preprocessed { sig, clauses, input_skolems, inputs, answer, output_sort })
}

/// Totality, transitivity and irreflexivity of integer `<`.
pub fn ordering_axioms(lt: SymId) -> Vec<Clause> {
    let v = |i| Term::var(i, SortId::INT);
    let less = |a: Term, b: Term| Atom::pred(lt, vec![a, b]);
    [
        vec![
            Literal::new(true, less(v(0), v(1))),
            Literal::new(true, less(v(1), v(0))),
            Literal::eq(v(0), v(1)),
        ],
        vec![
            Literal::new(false, less(v(0), v(1))),
            Literal::new(false, less(v(1), v(2))),
            Literal::new(true, less(v(0), v(2))),
        ],
        vec![Literal::new(false, less(v(0), v(0)))],
    ]
    .into_iter()
    .map(|lits| Clause::derived(lits, None, Rule::TheoryAxiom, vec![]))
    .collect()
}

/// Negation normal form over literals.
enum Nnf {
    True,
    False,
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

struct Clausifier<'a> {
    sig: &'a mut Signature,
    vars: VarGen,
    skolems_computable: bool,
}

impl Clausifier<'_> {
    /// CNF of `f` (or of `¬f` when `positive` is false) as literal lists.
    fn clausify(&mut self, f: &Formula, positive: bool) -> Vec<Vec<Literal>> {
        let n = self.nnf(f, positive, &Substitution::new());
        cnf(&n)
            .into_iter()
            .filter_map(|mut lits| {
                let mut c = Clause::new(std::mem::take(&mut lits));
                c.dedup_literals();
                let taut = c.literals.iter().any(|l| {
                    c.literals.iter().any(|m| m.positive != l.positive && m.atom == l.atom)
                        || (l.positive && matches!(&l.atom, Atom::Eq(a, b) if a == b))
                });
                (!taut).then_some(c.literals)
            })
            .collect()
    }

    fn nnf(&mut self, f: &Formula, positive: bool, theta: &Substitution) -> Nnf {
        match f {
            Formula::True => if positive { Nnf::True } else { Nnf::False },
            Formula::False => if positive { Nnf::False } else { Nnf::True },
            Formula::Atom(a) => {
                let a = theta.apply(a);
                match expand_atom(&a, self.sig) {
                    Some(g) => self.nnf(&g, positive, &Substitution::new()),
                    None => Nnf::Lit(Literal::new(positive, a)),
                }
            }
            Formula::Not(g) => self.nnf(g, !positive, theta),
            Formula::And(gs) | Formula::Or(gs) => {
                let parts = gs.iter().map(|g| self.nnf(g, positive, theta)).collect();
                if matches!(f, Formula::And(_)) == positive { Nnf::And(parts) } else { Nnf::Or(parts) }
            }
            Formula::Implies(a, b) => {
                let g = Formula::Or(vec![Formula::not((**a).clone()), (**b).clone()]);
                self.nnf(&g, positive, theta)
            }
            Formula::Iff(a, b) => {
                let (a, b) = (&**a, &**b);
                let g = Formula::And(vec![
                    Formula::Or(vec![Formula::not(a.clone()), b.clone()]),
                    Formula::Or(vec![a.clone(), Formula::not(b.clone())]),
                ]);
                self.nnf(&g, positive, theta)
            }
            Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
                let universal = matches!(f, Formula::Forall(..)) == positive;
                let mut inner = theta.clone();
                if universal {
                    for v in vs {
                        let fresh = self.vars.fresh(v.sort);
                        inner.bind(*v, Term::Var(fresh));
                    }
                } else {
                    // skolem arguments: the free variables of this subformula after renaming
                    let mut args: BTreeSet<Var> = BTreeSet::new();
                    for v in f.free_vars() {
                        theta.apply(&Term::Var(v)).collect_vars(&mut args);
                    }
                    let args: Vec<Term> = args.into_iter().map(Term::Var).collect();
                    let arg_sorts: Vec<SortId> = args.iter().map(|t| t.sort(self.sig)).collect();
                    for v in vs {
                        let name = self.sig.fresh_name("sk");
                        let sk = self
                            .sig
                            .declare_with_role(&name, arg_sorts.clone(), v.sort, SymbolRole::Skolem, self.skolems_computable)
                            .expect("fresh name");
                        inner.bind(*v, Term::app(sk, args.clone()));
                    }
                }
                self.nnf(body, positive, &inner)
            }
        }
    }
}

/// Rewrite an atom that needs expansion: comparisons other than `<` become
/// `<` literals and an ite argument is lifted into the formula.
fn expand_atom(a: &Atom, sig: &Signature) -> Option<Formula> {
    if let Some(pos) = first_ite(a) {
        let (args, k, path) = pos;
        let Term::Ite(ite) = args[k].at(&path).clone() else { unreachable!() };
        let with = |branch: &Term| {
            let mut ts: Vec<Term> = args.clone();
            ts[k] = ts[k].replace_at(&path, branch.clone());
            Formula::Atom(rebuild(a, ts))
        };
        return Some(Formula::And(vec![
            Formula::Or(vec![Formula::not(ite.guard.clone()), with(&ite.then)]),
            Formula::Or(vec![ite.guard.clone(), with(&ite.els)]),
        ]));
    }
    if let Atom::Pred(p, args) = a {
        let lt = sig.interp(Interp::Lt);
        let less = |x: &Term, y: &Term| Formula::Atom(Atom::pred(lt, vec![x.clone(), y.clone()]));
        return match sig.symbol(*p).interpreted {
            Some(Interp::Le) => Some(Formula::not(less(&args[1], &args[0]))),
            Some(Interp::Gt) => Some(less(&args[1], &args[0])),
            Some(Interp::Ge) => Some(Formula::not(less(&args[0], &args[1]))),
            _ => None,
        };
    }
    None
}

/// The atom's terms plus the outermost ite position: (terms, term index, path).
fn first_ite(a: &Atom) -> Option<(Vec<Term>, usize, Vec<usize>)> {
    let terms: Vec<Term> = a.terms().into_iter().cloned().collect();
    for (k, t) in terms.iter().enumerate() {
        for path in t.non_var_positions() {
            if matches!(t.at(&path), Term::Ite(_)) {
                return Some((terms.clone(), k, path));
            }
        }
    }
    None
}

fn rebuild(a: &Atom, mut ts: Vec<Term>) -> Atom {
    match a {
        Atom::Eq(..) => {
            let r = ts.pop().unwrap();
            let l = ts.pop().unwrap();
            Atom::Eq(l, r)
        }
        Atom::Pred(p, _) => Atom::pred(*p, ts),
    }
}

fn cnf(n: &Nnf) -> Vec<Vec<Literal>> {
    match n {
        Nnf::True => vec![],
        Nnf::False => vec![vec![]],
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::And(parts) => parts.iter().flat_map(cnf).collect(),
        Nnf::Or(parts) => {
            let mut acc: Vec<Vec<Literal>> = vec![vec![]];
            for p in parts {
                let c = cnf(p);
                let mut next = Vec::with_capacity(acc.len() * c.len());
                for a in &acc {
                    for b in &c {
                        let mut lits = a.clone();
                        lits.extend(b.iter().cloned());
                        next.push(lits);
                    }
                }
                acc = next;
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_lenient, parse_problem};
    use crate::logic::show_clause;

    fn shown(p: &Preprocessed, rule: Rule) -> Vec<String> {
        p.clauses.iter().filter(|c| c.rule == rule).map(|c| show_clause(c, &p.sig)).collect()
    }

    const GROUP: &str = "
        (declare-sort G 0)
        (declare-fun * (G G) G)
        (declare-fun i (G) G)
        (declare-const e G)
        (assert (forall ((x G)) (= (* (i x) x) e)))
    ";

    #[test]
    fn group_inverse_specification() {
        let p = parse_problem(&format!("{GROUP}(assert-not (forall ((x G)) (exists ((y G)) (= (* x y) e))))")).unwrap();
        let pre = preprocess(&p, Mode::Synthesize, Options::default()).unwrap();
        assert_eq!(shown(&pre, Rule::Specification), vec!["σ*x != e | ans(x)"]);
        assert_eq!(shown(&pre, Rule::Input), vec!["i(x)*x = e"]);
        assert_eq!(pre.input_skolems.len(), 1);
        assert_eq!(pre.sig.symbol(pre.inputs[0]).name, "x");
        assert!(p.sig.by_name("σ").is_empty(), "skolems are fresh");
    }

    #[test]
    fn non_commutative_specification() {
        let p = parse_problem(&format!(
            "{GROUP}(assert-not (forall ((x G) (y G)) (exists ((z G)) (=> (distinct (* x y) (* y x)) (distinct (* z z) e)))))"
        ))
        .unwrap();
        let pre = preprocess(&p, Mode::Synthesize, Options::default()).unwrap();
        let spec = shown(&pre, Rule::Specification);
        assert_eq!(spec, vec!["σ1*σ2 != σ2*σ1 | ans(x)", "x*x = e | ans(x)"]);
    }

    #[test]
    fn trivial_body() {
        let p = parse_problem("(declare-sort S 0)(assert-not (forall ((x S)) (exists ((y S)) (= y x))))").unwrap();
        let pre = preprocess(&p, Mode::Synthesize, Options::default()).unwrap();
        assert_eq!(shown(&pre, Rule::Specification), vec!["x != σ | ans(x)"]);
    }

    #[test]
    fn assumption_existentials_are_skolemized() {
        let p = parse_lenient("(declare-sort S 0)(declare-fun q (S S) Bool)(assert (forall ((x S)) (exists ((z S)) (q x z))))").unwrap();
        let pre = preprocess(&p, Mode::Prove, Options::default()).unwrap();
        assert_eq!(shown(&pre, Rule::Input), vec!["q(x,sk(x))"]);
        let sk = pre.sig.by_name("sk")[0];
        assert!(!pre.sig.is_computable(sk));
        let pre = preprocess(&p, Mode::Prove, Options { skolems_computable: true }).unwrap();
        assert!(pre.sig.is_computable(pre.sig.by_name("sk")[0]));
    }

    #[test]
    fn de_morgan_and_comparisons() {
        let p = parse_lenient("(declare-fun p () Bool)(declare-fun q () Bool)(assert (not (and p q)))(assert (forall ((a Int) (b Int)) (>= a b)))").unwrap();
        let pre = preprocess(&p, Mode::Prove, Options::default()).unwrap();
        let input = shown(&pre, Rule::Input);
        assert_eq!(input, vec!["~p | ~q", "~x<y"]);
        assert_eq!(shown(&pre, Rule::TheoryAxiom).len(), 3);
    }

    #[test]
    fn ite_terms_are_lifted() {
        let p = parse_lenient("(declare-fun p () Bool)(declare-fun c () Int)(assert (= c (ite p 1 2)))").unwrap();
        let pre = preprocess(&p, Mode::Prove, Options::default()).unwrap();
        let mut input = shown(&pre, Rule::Input);
        input.sort();
        assert_eq!(input, vec!["p | c = 2", "~p | c = 1"]);
    }

    #[test]
    fn max_of_two_specification() {
        let p = parse_problem(
            "(assert-not (forall ((x1 Int) (x2 Int)) (exists ((y Int)) (and (>= y x1) (>= y x2) (or (= y x1) (= y x2))))))",
        )
        .unwrap();
        let pre = preprocess(&p, Mode::Synthesize, Options::default()).unwrap();
        let spec = shown(&pre, Rule::Specification);
        assert_eq!(spec, vec!["x<σ1 | x<σ2 | x != σ1 | ans(x)", "x<σ1 | x<σ2 | x != σ2 | ans(x)"]);
        let names: Vec<&str> = pre.inputs.iter().map(|s| pre.sig.symbol(*s).name.as_str()).collect();
        assert_eq!(names, vec!["x1", "x2"]);
    }
}
