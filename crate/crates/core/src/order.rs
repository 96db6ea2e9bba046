//! Knuth-Bendix ordering and literal selection.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::logic::{Atom, Clause, Formula, Literal, Signature, SymId, SymbolRole, Term, Var};

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Cmp {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl Cmp {
    pub fn reverse(self) -> Cmp {
        match self {
            Cmp::Greater => Cmp::Less,
            Cmp::Less => Cmp::Greater,
            c => c,
        }
    }

    /// `s ⋡ t` given `self = compare(s, t)`.
    pub fn not_greater_or_equal(self) -> bool {
        matches!(self, Cmp::Less | Cmp::Incomparable)
    }
}

/// Weights and precedence for KBO.
#[derive(Clone, Debug)]
pub struct KboConfig {
    weights: Vec<u32>,
    var_weight: u32,
    /// Rank per symbol; higher rank means greater in the precedence.
    rank: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KboError {
    #[error("symbol weights must be positive")]
    ZeroWeight,
    #[error("constant `{0}` is lighter than a variable")]
    LightConstant(String),
    #[error("precedence must rank every symbol exactly once")]
    BadPrecedence,
}

impl KboConfig {
    /// All weights 1; precedence is reverse declaration order with skolem
    /// symbols above everything else. A non-zero seed shuffles the
    /// precedence of the non-skolem symbols.
    pub fn default_for(sig: &Signature, seed: u64) -> Self {
        // highest first: skolems, then everything else, each by reverse declaration
        let mut order: Vec<SymId> = sig.symbols().map(|(id, _)| id).rev().collect();
        order.sort_by_key(|id| !sig.symbol(*id).is_skolem());
        let skolems = order.iter().take_while(|id| sig.symbol(**id).is_skolem()).count();
        if seed != 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            order[skolems..].shuffle(&mut rng);
        }
        let n = order.len() as u32;
        let mut rank = vec![0; order.len()];
        for (i, id) in order.iter().enumerate() {
            rank[id.0 as usize] = n - i as u32;
        }
        KboConfig { weights: vec![1; sig.len()], var_weight: 1, rank }
    }

    /// Explicit configuration; `precedence` lists symbols from lowest to highest.
    pub fn new(
        sig: &Signature,
        weights: Vec<u32>,
        var_weight: u32,
        precedence: &[SymId],
    ) -> Result<Self, KboError> {
        if var_weight == 0 || weights.iter().any(|&w| w == 0) {
            return Err(KboError::ZeroWeight);
        }
        if weights.len() != sig.len() || precedence.len() != sig.len() {
            return Err(KboError::BadPrecedence);
        }
        for (id, sym) in sig.symbols() {
            if sym.arity() == 0 && weights[id.0 as usize] < var_weight {
                return Err(KboError::LightConstant(sym.name.clone()));
            }
        }
        let mut rank = vec![u32::MAX; sig.len()];
        for (i, id) in precedence.iter().enumerate() {
            let slot = rank.get_mut(id.0 as usize).ok_or(KboError::BadPrecedence)?;
            if *slot != u32::MAX {
                return Err(KboError::BadPrecedence);
            }
            *slot = i as u32 + 1;
        }
        if rank.contains(&u32::MAX) {
            return Err(KboError::BadPrecedence);
        }
        Ok(KboConfig { weights, var_weight, rank })
    }

    /// Extend to symbols added to the signature after construction.
    pub fn extend_to(&mut self, sig: &Signature) {
        let top = self.rank.iter().copied().max().unwrap_or(0);
        for (id, sym) in sig.symbols().skip(self.rank.len()) {
            self.weights.push(1);
            // late skolems go on top, anything else at the bottom
            let r = if sym.is_skolem() || sym.role == SymbolRole::Input { top + 1 + id.0 } else { 0 };
            self.rank.push(r);
        }
    }

    fn weight(&self, f: SymId) -> u32 {
        self.weights.get(f.0 as usize).copied().unwrap_or(1)
    }

    fn rank(&self, f: SymId) -> u32 {
        self.rank.get(f.0 as usize).copied().unwrap_or(0)
    }

    pub fn compare(&self, s: &Term, t: &Term) -> Cmp {
        self.cmp_nodes(Node::T(s), Node::T(t))
    }

    fn cmp_nodes(&self, s: Node, t: Node) -> Cmp {
        if s == t {
            return Cmp::Equal;
        }
        let mut balance = Balance::default();
        let ws = self.tally(s, 1, &mut balance) as i64;
        let wt = self.tally(t, -1, &mut balance) as i64;
        let s_covers = balance.all(|n| n >= 0);
        let t_covers = balance.all(|n| n <= 0);
        let greater = if s_covers { Cmp::Greater } else { Cmp::Incomparable };
        let less = if t_covers { Cmp::Less } else { Cmp::Incomparable };
        match ws.cmp(&wt) {
            Ordering::Greater => return greater,
            Ordering::Less => return less,
            Ordering::Equal => {}
        }
        let (hs, ht) = match (self.head(s), self.head(t)) {
            (Some(a), Some(b)) => (a, b),
            // equal weight and one side a variable: distinct, so no relation
            _ => return Cmp::Incomparable,
        };
        match hs.cmp(&ht) {
            Ordering::Greater => return greater,
            Ordering::Less => return less,
            Ordering::Equal => {}
        }
        let cs = s.children();
        let ct = t.children();
        for (a, b) in cs.iter().zip(ct.iter()) {
            match self.cmp_nodes(*a, *b) {
                Cmp::Equal => continue,
                Cmp::Greater => return greater,
                Cmp::Less => return less,
                Cmp::Incomparable => return Cmp::Incomparable,
            }
        }
        match cs.len().cmp(&ct.len()) {
            Ordering::Greater => greater,
            Ordering::Less => less,
            Ordering::Equal => Cmp::Equal,
        }
    }

    fn tally(&self, n: Node, sign: i32, balance: &mut Balance) -> u32 {
        match n {
            Node::T(Term::Var(v)) => {
                balance.add(*v, sign);
                self.var_weight
            }
            Node::T(Term::Int(_)) | Node::Top => self.var_weight,
            Node::T(Term::App(f, args)) => {
                self.weight(*f) + args.iter().map(|a| self.tally(Node::T(a), sign, balance)).sum::<u32>()
            }
            Node::A(Atom::Pred(p, args)) => {
                self.weight(*p) + args.iter().map(|a| self.tally(Node::T(a), sign, balance)).sum::<u32>()
            }
            _ => 1 + n.children().into_iter().map(|c| self.tally(c, sign, balance)).sum::<u32>(),
        }
    }

    fn head(&self, n: Node) -> Option<(i8, i64)> {
        Some(match n {
            Node::T(Term::Var(_)) => return None,
            Node::Top => (-1, 0),
            Node::T(Term::Int(v)) => (0, *v),
            Node::T(Term::App(f, _)) | Node::A(Atom::Pred(f, _)) => (1, self.rank(*f) as i64),
            Node::A(Atom::Eq(..)) => (2, 2),
            Node::F(f) => match f {
                Formula::True => (2, 0),
                Formula::False => (2, 1),
                Formula::Atom(_) => unreachable!("atoms are unwrapped"),
                Formula::Not(_) => (2, 3),
                Formula::And(_) => (2, 4),
                Formula::Or(_) => (2, 5),
                Formula::Implies(..) => (2, 6),
                Formula::Iff(..) => (2, 7),
                Formula::Forall(..) => (2, 8),
                Formula::Exists(..) => (2, 9),
            },
            Node::T(Term::Ite(_)) => (3, 0),
        })
    }

    /// Multiset comparison of the literal encodings: `s = t` as `{s, t}`,
    /// `s != t` as `{s, s, t, t}`, predicates as equations with a minimal `⊤`.
    pub fn compare_literals(&self, a: &Literal, b: &Literal) -> Cmp {
        let ma = literal_multiset(a);
        let mb = literal_multiset(b);
        self.multiset_cmp(&ma, &mb)
    }

    fn multiset_cmp(&self, a: &[Node], b: &[Node]) -> Cmp {
        let mut a: Vec<Node> = a.to_vec();
        let mut b: Vec<Node> = b.to_vec();
        // cancel common elements
        let mut i = 0;
        while i < a.len() {
            if let Some(j) = b.iter().position(|x| *x == a[i]) {
                a.swap_remove(i);
                b.swap_remove(j);
            } else {
                i += 1;
            }
        }
        if a.is_empty() && b.is_empty() {
            return Cmp::Equal;
        }
        let dominates = |xs: &[Node], ys: &[Node]| {
            !xs.is_empty()
                && ys.iter().all(|y| xs.iter().any(|x| self.cmp_nodes(*x, *y) == Cmp::Greater))
        };
        if dominates(&a, &b) {
            Cmp::Greater
        } else if dominates(&b, &a) {
            Cmp::Less
        } else {
            Cmp::Incomparable
        }
    }

    /// Indices of literals not dominated by another literal of the clause.
    pub fn maximal_literals(&self, lits: &[Literal]) -> Vec<usize> {
        (0..lits.len())
            .filter(|&i| {
                !(0..lits.len())
                    .any(|j| j != i && self.compare_literals(&lits[j], &lits[i]) == Cmp::Greater)
            })
            .collect()
    }

    /// Set the selection flags of a clause.
    ///
    /// Constraint disequalities, when present, are selected exclusively.
    /// Otherwise the heaviest negative literal is selected, and failing that
    /// every maximal literal. The answer literal is never selected: it is not
    /// stored among the literals.
    pub fn select(&self, c: &mut Clause) {
        for l in &mut c.literals {
            l.selected = false;
        }
        if c.literals.is_empty() {
            return;
        }
        if c.has_constraints() {
            for l in &mut c.literals {
                l.selected = l.constraint;
            }
            return;
        }
        let negative = c
            .literals
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.positive)
            .max_by(|(i, a), (j, b)| a.atom.size().cmp(&b.atom.size()).then(j.cmp(i)));
        if let Some((i, _)) = negative {
            c.literals[i].selected = true;
            return;
        }
        for i in self.maximal_literals(&c.literals) {
            c.literals[i].selected = true;
        }
    }
}

fn literal_multiset(l: &Literal) -> Vec<Node<'_>> {
    let (a, b) = match &l.atom {
        Atom::Eq(s, t) => (Node::T(s), Node::T(t)),
        atom @ Atom::Pred(..) => (Node::A(atom), Node::Top),
    };
    if l.positive {
        vec![a, b]
    } else {
        vec![a, a, b, b]
    }
}

/// Uniform view of terms, guard formulas and atoms for the ordering.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Node<'a> {
    T(&'a Term),
    F(&'a Formula),
    A(&'a Atom),
    Top,
}

impl<'a> Node<'a> {
    fn children(self) -> Vec<Node<'a>> {
        match self {
            Node::T(Term::App(_, args)) | Node::A(Atom::Pred(_, args)) => args.iter().map(Node::T).collect(),
            Node::T(Term::Ite(ite)) => vec![Node::of_formula(&ite.guard), Node::T(&ite.then), Node::T(&ite.els)],
            Node::A(Atom::Eq(l, r)) => vec![Node::T(l), Node::T(r)],
            Node::F(f) => f.children().into_iter().map(Node::of_formula).collect(),
            _ => vec![],
        }
    }

    fn of_formula(f: &'a Formula) -> Node<'a> {
        match f {
            Formula::Atom(a) => Node::A(a),
            _ => Node::F(f),
        }
    }
}

#[derive(Default)]
struct Balance(Vec<(Var, i32)>);

impl Balance {
    fn add(&mut self, v: Var, d: i32) {
        match self.0.iter_mut().find(|(w, _)| *w == v) {
            Some((_, n)) => *n += d,
            None => self.0.push((v, d)),
        }
    }

    fn all(&self, p: impl Fn(i32) -> bool) -> bool {
        self.0.iter().all(|(_, n)| p(*n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{SortId, Substitution};
    use proptest::prelude::*;

    struct Fx {
        sig: Signature,
        kbo: KboConfig,
        f: SymId,
        g: SymId,
        h: SymId,
        a: SymId,
        b: SymId,
        s: SortId,
    }

    fn fx() -> Fx {
        let mut sig = Signature::new();
        let s = sig.declare_sort("S").unwrap();
        let f = sig.declare("f", vec![s], s).unwrap();
        let g = sig.declare("g", vec![s, s], s).unwrap();
        let h = sig.declare("h", vec![s], s).unwrap();
        let a = sig.declare("a", vec![], s).unwrap();
        let b = sig.declare("b", vec![], s).unwrap();
        let kbo = KboConfig::default_for(&sig, 0);
        Fx { sig, kbo, f, g, h, a, b, s }
    }

    #[test]
    fn spec_examples() {
        let Fx { kbo, f, s, .. } = fx();
        let x = Term::var(0, s);
        let y = Term::var(1, s);
        assert_eq!(kbo.compare(&Term::app(f, vec![x.clone()]), &x), Cmp::Greater);
        assert_eq!(kbo.compare(&x, &y), Cmp::Incomparable);
        let ffx = Term::app(f, vec![Term::app(f, vec![x.clone()])]);
        assert_eq!(kbo.compare(&ffx, &x), Cmp::Greater);
        assert_eq!(kbo.compare(&x, &ffx), Cmp::Less);
    }

    #[test]
    fn variable_condition_blocks_orientation() {
        let Fx { kbo, g, f, s, .. } = fx();
        let x = Term::var(0, s);
        let y = Term::var(1, s);
        // g(x, x) vs f(y): heavier but y is missing on the left
        let l = Term::app(g, vec![x.clone(), x]);
        let r = Term::app(f, vec![y]);
        assert_eq!(kbo.compare(&l, &r), Cmp::Incomparable);
    }

    #[test]
    fn associativity_orients_left_to_right() {
        let Fx { kbo, g, s, .. } = fx();
        let (x, y, z) = (Term::var(0, s), Term::var(1, s), Term::var(2, s));
        let left = Term::app(g, vec![Term::app(g, vec![x.clone(), y.clone()]), z.clone()]);
        let right = Term::app(g, vec![x, Term::app(g, vec![y, z])]);
        assert_eq!(kbo.compare(&left, &right), Cmp::Greater);
    }

    #[test]
    fn ite_is_above_its_branches() {
        let Fx { kbo, a, b, .. } = fx();
        let ca = Term::constant(a);
        let cb = Term::constant(b);
        let ite = Term::ite(Formula::eq(ca.clone(), cb.clone()), ca.clone(), cb);
        assert_eq!(kbo.compare(&ite, &ca), Cmp::Greater);
    }

    #[test]
    fn negative_literal_dominates_positive_of_same_equation() {
        let Fx { kbo, a, b, .. } = fx();
        let pos = Literal::eq(Term::constant(a), Term::constant(b));
        let neg = Literal::neq(Term::constant(a), Term::constant(b));
        assert_eq!(kbo.compare_literals(&neg, &pos), Cmp::Greater);
    }

    #[test]
    fn constraints_are_selected_exclusively() {
        let Fx { kbo, f, a, s, .. } = fx();
        let x = Term::var(0, s);
        let mut c = Clause::new(vec![
            Literal::neq(Term::app(f, vec![Term::app(f, vec![x.clone()])]), Term::constant(a)),
            Literal::constraint(x.clone(), Term::constant(a)),
        ])
        .with_answer(x)
        .unwrap();
        kbo.select(&mut c);
        let sel: Vec<usize> = c.selected().map(|(i, _)| i).collect();
        assert_eq!(sel, vec![1]);
    }

    #[test]
    fn unit_answer_clause_selects_nothing() {
        let Fx { kbo, a, .. } = fx();
        let mut c = Clause::new(vec![]).with_answer(Term::constant(a)).unwrap();
        kbo.select(&mut c);
        assert_eq!(c.selected().count(), 0);
    }

    #[test]
    fn sole_non_answer_literal_is_selected() {
        let Fx { kbo, g, a, s, .. } = fx();
        let y = Term::var(0, s);
        let mut c = Clause::new(vec![Literal::neq(Term::app(g, vec![Term::constant(a), y.clone()]), Term::constant(a))])
            .with_answer(y)
            .unwrap();
        kbo.select(&mut c);
        assert_eq!(c.selected().count(), 1);
    }

    #[test]
    fn positive_clause_selects_all_maximal() {
        let Fx { kbo, f, a, b, s, .. } = fx();
        let x = Term::var(0, s);
        let mut c = Clause::new(vec![
            Literal::eq(Term::app(f, vec![x.clone()]), Term::constant(a)),
            Literal::eq(Term::app(f, vec![Term::app(f, vec![x.clone()])]), Term::constant(b)),
            Literal::eq(x, Term::constant(a)),
        ]);
        kbo.select(&mut c);
        let sel: Vec<usize> = c.selected().map(|(i, _)| i).collect();
        assert_eq!(sel, vec![1]);
    }

    /// Random terms over f/1, h/1, g/2, a, b and (optionally) x, y.
    fn arb_term(with_vars: bool) -> impl Strategy<Value = Vec<u8>> {
        prop::collection::vec(0u8..if with_vars { 7 } else { 5 }, 1..12)
    }

    fn build(fx: &Fx, code: &[u8]) -> Term {
        fn go(fx: &Fx, code: &[u8], pos: &mut usize, depth: u32) -> Term {
            let c = code.get(*pos).copied().unwrap_or(3);
            *pos += 1;
            let leaf = depth > 4;
            match if leaf { 3 + c % 2 } else { c } {
                0 => Term::app(fx.f, vec![go(fx, code, pos, depth + 1)]),
                1 => Term::app(fx.h, vec![go(fx, code, pos, depth + 1)]),
                2 => Term::app(fx.g, vec![go(fx, code, pos, depth + 1), go(fx, code, pos, depth + 1)]),
                3 => Term::constant(fx.a),
                4 => Term::constant(fx.b),
                5 => Term::var(0, fx.s),
                _ => Term::var(1, fx.s),
            }
        }
        go(fx, code, &mut 0, 0)
    }

    proptest! {
        #[test]
        fn total_and_antisymmetric_on_ground(a in arb_term(false), b in arb_term(false)) {
            let fx = fx();
            let s = build(&fx, &a);
            let t = build(&fx, &b);
            let st = fx.kbo.compare(&s, &t);
            prop_assert_eq!(st, fx.kbo.compare(&t, &s).reverse());
            if s == t {
                prop_assert_eq!(st, Cmp::Equal);
            } else {
                prop_assert!(matches!(st, Cmp::Greater | Cmp::Less));
            }
        }

        #[test]
        fn transitive(a in arb_term(true), b in arb_term(true), c in arb_term(true)) {
            let fx = fx();
            let (s, t, u) = (build(&fx, &a), build(&fx, &b), build(&fx, &c));
            if fx.kbo.compare(&s, &t) == Cmp::Greater && fx.kbo.compare(&t, &u) == Cmp::Greater {
                prop_assert_eq!(fx.kbo.compare(&s, &u), Cmp::Greater);
            }
        }

        #[test]
        fn subterm_property(a in arb_term(true)) {
            let fx = fx();
            let s = build(&fx, &a);
            for p in s.non_var_positions().into_iter().filter(|p| !p.is_empty()) {
                prop_assert_eq!(fx.kbo.compare(&s, s.at(&p)), Cmp::Greater);
            }
        }

        #[test]
        fn compatible_with_contexts(a in arb_term(true), b in arb_term(true), ctx in arb_term(false)) {
            let fx = fx();
            let (s, t) = (build(&fx, &a), build(&fx, &b));
            if fx.kbo.compare(&s, &t) == Cmp::Greater {
                let u = build(&fx, &ctx);
                for p in u.non_var_positions() {
                    let us = u.replace_at(&p, s.clone());
                    let ut = u.replace_at(&p, t.clone());
                    prop_assert_eq!(fx.kbo.compare(&us, &ut), Cmp::Greater);
                }
            }
        }

        #[test]
        fn stable_under_substitution(a in arb_term(true), b in arb_term(true), c in arb_term(false)) {
            let fx = fx();
            let (s, t) = (build(&fx, &a), build(&fx, &b));
            if fx.kbo.compare(&s, &t) == Cmp::Greater {
                let theta = Substitution::from_bindings(
                    [(Var::new(0, fx.s), build(&fx, &c)), (Var::new(1, fx.s), Term::constant(fx.b))],
                    &fx.sig,
                ).unwrap();
                prop_assert_eq!(fx.kbo.compare(&theta.apply(&s), &theta.apply(&t)), Cmp::Greater);
            }
        }
    }
}
