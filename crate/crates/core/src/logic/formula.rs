use std::collections::BTreeSet;
use std::sync::Arc;

use super::signature::{Signature, SymId};
use super::term::{Term, Var};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Atom {
    Eq(Term, Term),
    Pred(SymId, Arc<[Term]>),
}

impl Atom {
    pub fn pred(sym: SymId, args: Vec<Term>) -> Atom {
        Atom::Pred(sym, Arc::from(args))
    }

    pub fn is_equality(&self) -> bool {
        matches!(self, Atom::Eq(..))
    }

    /// The argument terms (both sides for an equation).
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Eq(l, r) => vec![l, r],
            Atom::Pred(_, args) => args.iter().collect(),
        }
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Atom {
        match self {
            Atom::Eq(l, r) => Atom::Eq(f(l), f(r)),
            Atom::Pred(p, args) => Atom::pred(*p, args.iter().map(f).collect()),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.terms().iter().all(|t| t.is_ground())
    }

    pub fn occurs(&self, v: Var) -> bool {
        self.terms().iter().any(|t| t.occurs(v))
    }

    pub fn is_computable(&self, sig: &Signature) -> bool {
        let head_ok = match self {
            Atom::Eq(..) => true,
            Atom::Pred(p, _) => sig.is_computable(*p),
        };
        head_ok && self.terms().iter().all(|t| t.is_computable(sig))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        self.terms().iter().for_each(|t| t.collect_vars(out));
    }

    pub fn max_var(&self) -> Option<u32> {
        self.terms().iter().filter_map(|t| t.max_var()).max()
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<SymId>) {
        if let Atom::Pred(p, _) = self {
            out.insert(*p);
        }
        self.terms().iter().for_each(|t| t.collect_symbols(out));
    }

    pub fn contains_symbol(&self, sym: SymId) -> bool {
        matches!(self, Atom::Pred(p, _) if *p == sym)
            || self.terms().iter().any(|t| t.contains_symbol(sym))
    }

    pub fn size(&self) -> usize {
        1 + self.terms().iter().map(|t| t.size()).sum::<usize>()
    }
}

/// First-order formula. Ite guards use the quantifier-free fragment.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Vec<Var>, Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn eq(l: Term, r: Term) -> Formula {
        Formula::Atom(Atom::Eq(l, r))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn literal(positive: bool, atom: Atom) -> Formula {
        if positive {
            Formula::Atom(atom)
        } else {
            Formula::not(Formula::Atom(atom))
        }
    }

    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    pub fn or(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => vec![],
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
        }
    }

    fn atoms_any(&self, pred: &mut impl FnMut(&Atom) -> bool) -> bool {
        match self {
            Formula::Atom(a) => pred(a),
            _ => self.children().into_iter().any(|c| c.atoms_any(pred)),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => false,
            _ => self.children().into_iter().all(Formula::is_quantifier_free),
        }
    }

    pub fn is_ground(&self) -> bool {
        !self.atoms_any(&mut |a| !a.is_ground())
    }

    pub fn occurs(&self, v: Var) -> bool {
        match self {
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => vs.contains(&v) || f.occurs(v),
            _ => self.atoms_any(&mut |a| a.occurs(v)),
        }
    }

    pub fn is_computable(&self, sig: &Signature) -> bool {
        !self.atoms_any(&mut |a| !a.is_computable(sig))
    }

    pub fn contains_symbol(&self, sym: SymId) -> bool {
        self.atoms_any(&mut |a| a.contains_symbol(sym))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(a) => a.collect_vars(out),
            _ => self.children().into_iter().for_each(|c| c.collect_vars(out)),
        }
    }

    /// Variables not bound by a quantifier.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        match self {
            Formula::Atom(a) => {
                let mut out = BTreeSet::new();
                a.collect_vars(&mut out);
                out
            }
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => {
                let mut inner = f.free_vars();
                for v in vs {
                    inner.remove(v);
                }
                inner
            }
            _ => self.children().into_iter().flat_map(Formula::free_vars).collect(),
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            Formula::Atom(a) => a.max_var(),
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => {
                vs.iter().map(|v| v.id).chain(f.max_var()).max()
            }
            _ => self.children().into_iter().filter_map(Formula::max_var).max(),
        }
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<SymId>) {
        match self {
            Formula::Atom(a) => a.collect_symbols(out),
            _ => self.children().into_iter().for_each(|c| c.collect_symbols(out)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(a) => a.size(),
            _ => 1 + self.children().into_iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Rebuild the formula with every term passed through `f`.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(a.map_terms(|t| f(t))),
            Formula::Not(g) => Formula::not(g.map_terms(f)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_terms(f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_terms(f)).collect()),
            Formula::Implies(a, b) => {
                Formula::Implies(Box::new(a.map_terms(f)), Box::new(b.map_terms(f)))
            }
            Formula::Iff(a, b) => Formula::Iff(Box::new(a.map_terms(f)), Box::new(b.map_terms(f))),
            Formula::Forall(vs, g) => Formula::Forall(vs.clone(), Box::new(g.map_terms(f))),
            Formula::Exists(vs, g) => Formula::Exists(vs.clone(), Box::new(g.map_terms(f))),
        }
    }

    pub fn replace_term(&self, from: &Term, to: &Term) -> Formula {
        self.map_terms(&mut |t| t.replace_term(from, to))
    }

    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Var) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(a.map_terms(|t| t.map_vars(f))),
            Formula::Not(g) => Formula::not(g.map_vars(f)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_vars(f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_vars(f)).collect()),
            Formula::Implies(a, b) => {
                Formula::Implies(Box::new(a.map_vars(f)), Box::new(b.map_vars(f)))
            }
            Formula::Iff(a, b) => Formula::Iff(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Formula::Forall(vs, g) => {
                let vs = vs.iter().map(|v| f(*v)).collect();
                Formula::Forall(vs, Box::new(g.map_vars(f)))
            }
            Formula::Exists(vs, g) => {
                let vs = vs.iter().map(|v| f(*v)).collect();
                Formula::Exists(vs, Box::new(g.map_vars(f)))
            }
        }
    }
}
