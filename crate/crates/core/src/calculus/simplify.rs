use std::collections::{BTreeMap, HashMap};

use crate::logic::{Atom, Clause, ClauseId, Formula, Literal, Rule, Signature, Substitution, SymId, Term, Var};
use crate::order::{Cmp, KboConfig};

/// One-way matching: extend `binding` so that `pattern` instantiates to
/// `target`. Variables of `target` are treated as constants.
pub fn match_term(pattern: &Term, target: &Term, binding: &mut BTreeMap<Var, Term>, sig: &Signature) -> bool {
    match (pattern, target) {
        (Term::Var(v), t) => {
            if v.sort != t.sort(sig) {
                return false;
            }
            match binding.get(v) {
                Some(bound) => bound == t,
                None => {
                    binding.insert(*v, t.clone());
                    true
                }
            }
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| match_term(x, y, binding, sig))
        }
        (Term::Int(a), Term::Int(b)) => a == b,
        (Term::Ite(a), Term::Ite(b)) => {
            match_formula(&a.guard, &b.guard, binding, sig)
                && match_term(&a.then, &b.then, binding, sig)
                && match_term(&a.els, &b.els, binding, sig)
        }
        _ => false,
    }
}

fn match_atom(p: &Atom, t: &Atom, binding: &mut BTreeMap<Var, Term>, sig: &Signature) -> bool {
    match (p, t) {
        (Atom::Eq(a, b), Atom::Eq(c, d)) => match_term(a, c, binding, sig) && match_term(b, d, binding, sig),
        (Atom::Pred(f, xs), Atom::Pred(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| match_term(x, y, binding, sig))
        }
        _ => false,
    }
}

fn match_formula(p: &Formula, t: &Formula, binding: &mut BTreeMap<Var, Term>, sig: &Signature) -> bool {
    match (p, t) {
        (Formula::Atom(a), Formula::Atom(b)) => match_atom(a, b, binding, sig),
        (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
        (Formula::Not(a), Formula::Not(b)) => match_formula(a, b, binding, sig),
        (Formula::And(xs), Formula::And(ys)) | (Formula::Or(xs), Formula::Or(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_formula(x, y, binding, sig))
        }
        _ => p == t,
    }
}

fn apply(binding: &BTreeMap<Var, Term>, t: &Term) -> Term {
    Substitution::from_map(binding.clone()).apply(t)
}

/// Literal `p` instantiates to literal `t`, modulo orientation of equations.
fn match_literal(p: &Literal, t: &Literal, binding: &BTreeMap<Var, Term>, sig: &Signature) -> Vec<BTreeMap<Var, Term>> {
    if p.positive != t.positive {
        return vec![];
    }
    let mut out = Vec::new();
    let mut b = binding.clone();
    if match_atom(&p.atom, &t.atom, &mut b, sig) {
        out.push(b);
    }
    if let (Atom::Eq(a, c), Atom::Eq(..)) = (&p.atom, &t.atom) {
        let mut b = binding.clone();
        if match_atom(&Atom::Eq(c.clone(), a.clone()), &t.atom, &mut b, sig) {
            out.push(b);
        }
    }
    out
}

/// `c` subsumes `d`: some instance of `c` is contained in `d`. A clause with
/// an answer is only subsumed by a clause whose answer instantiates to it.
pub fn subsumes(c: &Clause, d: &Clause, sig: &Signature) -> bool {
    subsumes_with(c, d, sig, true)
}

/// Like [`subsumes`], but when `match_answers` is false two answer clauses
/// are compared on their literals only.
pub fn subsumes_with(c: &Clause, d: &Clause, sig: &Signature, match_answers: bool) -> bool {
    if c.literals.len() > d.literals.len() || c.has_answer() != d.has_answer() {
        return false;
    }
    let mut start = BTreeMap::new();
    if let (true, Some(rc), Some(rd)) = (match_answers, &c.answer, &d.answer) {
        if !match_term(rc, rd, &mut start, sig) {
            return false;
        }
    }
    let mut used = vec![false; d.literals.len()];
    search(&c.literals, &d.literals, &mut used, start, sig)
}

fn search(cs: &[Literal], ds: &[Literal], used: &mut [bool], binding: BTreeMap<Var, Term>, sig: &Signature) -> bool {
    let Some((first, rest)) = cs.split_first() else { return true };
    for j in 0..ds.len() {
        if used[j] {
            continue;
        }
        for b in match_literal(first, &ds[j], &binding, sig) {
            used[j] = true;
            if search(rest, ds, used, b, sig) {
                used[j] = false;
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// Complementary literals or a reflexive equation.
pub fn is_tautology(c: &Clause) -> bool {
    c.literals.iter().enumerate().any(|(i, l)| {
        (l.positive && matches!(&l.atom, Atom::Eq(a, b) if a == b))
            || c.literals[i + 1..].iter().any(|m| m.positive != l.positive && m.negated().same_modulo_symmetry(l))
    })
}

/// Oriented unit equations used to rewrite literals, and optionally answers.
/// A rewritten answer is kept only when it stays computable.
#[derive(Default, Clone)]
pub struct Demodulator {
    by_head: HashMap<SymId, Vec<(Term, Term, ClauseId)>>,
    count: usize,
    answers: bool,
}

impl Demodulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// A demodulator that also rewrites answer terms.
    pub fn with_answers() -> Self {
        Demodulator { answers: true, ..Self::default() }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Register `c` if it is an answer-free positive unit equation.
    pub fn insert(&mut self, c: &Clause, ord: &KboConfig) -> bool {
        if c.has_answer() || c.literals.len() != 1 || !c.literals[0].positive {
            return false;
        }
        let Atom::Eq(l, r) = &c.literals[0].atom else { return false };
        let mut added = false;
        for (a, b) in [(l, r), (r, l)] {
            let Term::App(f, _) = a else { continue };
            // orientable at some instance: not smaller than or equal to the other side
            if ord.compare(a, b) == Cmp::Less || a == b {
                continue;
            }
            if !b.vars().is_subset(&a.vars()) {
                continue;
            }
            self.by_head.entry(*f).or_default().push((a.clone(), b.clone(), c.id));
            added = true;
        }
        if added {
            self.count += 1;
        }
        added
    }

    pub fn remove(&mut self, id: ClauseId) {
        let mut removed = false;
        for rules in self.by_head.values_mut() {
            let before = rules.len();
            rules.retain(|(_, _, cid)| *cid != id);
            removed |= rules.len() != before;
        }
        if removed {
            self.count -= 1;
        }
    }

    /// One rewrite step at the outermost-leftmost reducible position.
    fn step(&self, t: &Term, ord: &KboConfig, sig: &Signature, skip: ClauseId) -> Option<(Term, ClauseId)> {
        if let Term::App(f, args) = t {
            if let Some(rules) = self.by_head.get(f) {
                for (l, r, id) in rules {
                    if *id == skip {
                        continue;
                    }
                    let mut b = BTreeMap::new();
                    if match_term(l, t, &mut b, sig) {
                        let rhs = apply(&b, r);
                        if ord.compare(t, &rhs) == Cmp::Greater {
                            return Some((rhs, *id));
                        }
                    }
                }
            }
            for (k, a) in args.iter().enumerate() {
                if let Some((new, id)) = self.step(a, ord, sig, skip) {
                    let mut args = args.to_vec();
                    args[k] = new;
                    return Some((Term::app(*f, args), id));
                }
            }
        }
        None
    }

    /// Innermost normal form, descending into ite guards and branches.
    fn normalize(&self, t: &Term, ord: &KboConfig, sig: &Signature, skip: ClauseId, used: &mut Vec<ClauseId>) -> Term {
        let t = match t {
            Term::App(f, args) if !args.is_empty() => {
                Term::app(*f, args.iter().map(|a| self.normalize(a, ord, sig, skip, used)).collect())
            }
            Term::Ite(ite) => {
                let guard = ite.guard.map_terms(&mut |x| self.normalize(x, ord, sig, skip, used));
                let then = self.normalize(&ite.then, ord, sig, skip, used);
                let els = self.normalize(&ite.els, ord, sig, skip, used);
                return Term::ite(guard, then, els);
            }
            _ => t.clone(),
        };
        let Term::App(f, _) = &t else { return t };
        for (l, r, id) in self.by_head.get(f).into_iter().flatten() {
            if *id == skip {
                continue;
            }
            let mut b = BTreeMap::new();
            if match_term(l, &t, &mut b, sig) {
                let rhs = apply(&b, r);
                if ord.compare(&t, &rhs) == Cmp::Greater {
                    if !used.contains(id) {
                        used.push(*id);
                    }
                    return self.normalize(&rhs, ord, sig, skip, used);
                }
            }
        }
        t
    }

    /// Normalize every literal of `c`; `None` when nothing changed.
    pub fn rewrite(&self, c: &Clause, ord: &KboConfig, sig: &Signature) -> Option<Clause> {
        if self.count == 0 {
            return None;
        }
        let mut used: Vec<ClauseId> = Vec::new();
        let mut lits = c.literals.clone();
        for l in &mut lits {
            let terms: Vec<Term> = l.atom.terms().into_iter().cloned().collect();
            let mut new_terms = Vec::with_capacity(terms.len());
            for t in terms {
                let mut cur = t;
                while let Some((next, id)) = self.step(&cur, ord, sig, c.id) {
                    cur = next;
                    if !used.contains(&id) {
                        used.push(id);
                    }
                }
                new_terms.push(cur);
            }
            let mut it = new_terms.into_iter();
            l.atom = l.atom.map_terms(|_| it.next().unwrap());
        }
        let mut answer = c.answer.clone();
        if let (true, Some(r)) = (self.answers, &c.answer) {
            let mut by = Vec::new();
            let nf = self.normalize(r, ord, sig, c.id, &mut by);
            if nf != *r && nf.is_computable(sig) {
                answer = Some(nf);
                used.extend(by.into_iter().filter(|id| !used.contains(id)).collect::<Vec<_>>());
            }
        }
        if used.is_empty() {
            return None;
        }
        let mut parents = vec![c.id];
        parents.extend(used);
        let mut out = Clause::derived(lits, answer, Rule::Demodulation, parents);
        out.dedup_literals();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{show_clause, SortId};

    fn setup() -> (Signature, SortId, SymId, SymId, SymId, SymId) {
        let mut sig = Signature::new();
        let s = sig.declare_sort("S").unwrap();
        let f = sig.declare("f", vec![s], s).unwrap();
        let p = sig.declare("p", vec![s], SortId::BOOL).unwrap();
        let a = sig.declare("a", vec![], s).unwrap();
        let b = sig.declare("b", vec![], s).unwrap();
        (sig, s, f, p, a, b)
    }

    #[test]
    fn answers_restrict_subsumption() {
        let (sig, s, _, p, a, _) = setup();
        let x = Term::var(0, s);
        let pa = Literal::new(true, Atom::pred(p, vec![Term::constant(a)]));
        let px = Literal::new(true, Atom::pred(p, vec![x.clone()]));
        let general = Clause::new(vec![px.clone()]);
        let target = Clause::new(vec![pa.clone()]).with_answer(Term::constant(a)).unwrap();
        assert!(!subsumes(&general, &target, &sig), "answer-free clauses never subsume answer clauses");
        let with_ans = Clause::new(vec![px]).with_answer(x).unwrap();
        assert!(subsumes(&with_ans, &target, &sig));
        assert!(!subsumes(&target, &with_ans, &sig));
        assert!(subsumes(&general, &Clause::new(vec![pa]), &sig));
    }

    #[test]
    fn demodulation_of_answers_is_optional() {
        let (sig, s, f, p, a, b) = setup();
        let ord = KboConfig::default_for(&sig, 0);
        let x = Term::var(0, s);
        let mut rule = Clause::new(vec![Literal::eq(Term::app(f, vec![Term::app(f, vec![x.clone()])]), x)]);
        rule.id = ClauseId(7);
        let mut demod = Demodulator::new();
        assert!(demod.insert(&rule, &ord));
        let ffa = Term::app(f, vec![Term::app(f, vec![Term::constant(a)])]);
        let mut c = Clause::new(vec![Literal::new(true, Atom::pred(p, vec![ffa.clone()]))]).with_answer(ffa).unwrap();
        c.id = ClauseId(9);
        let out = demod.rewrite(&c, &ord, &sig).unwrap();
        assert_eq!(show_clause(&out, &sig), "p(a) | ans(f(f(a)))");
        assert_eq!(out.parents, vec![ClauseId(9), ClauseId(7)]);
        let mut with_answers = Demodulator::with_answers();
        with_answers.insert(&rule, &ord);
        let out = with_answers.rewrite(&c, &ord, &sig).unwrap();
        assert_eq!(show_clause(&out, &sig), "p(a) | ans(a)");
        let _ = b;
    }

    #[test]
    fn tautologies() {
        let (_, _, _, p, a, _) = setup();
        let pa = Literal::new(true, Atom::pred(p, vec![Term::constant(a)]));
        assert!(is_tautology(&Clause::new(vec![pa.clone(), pa.negated()])));
        assert!(!is_tautology(&Clause::new(vec![pa])));
    }
}
