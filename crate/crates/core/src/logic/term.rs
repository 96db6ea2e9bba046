use std::collections::BTreeSet;
use std::sync::Arc;

use super::formula::Formula;
use super::signature::{Signature, SortId, SymId};

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Var {
    pub id: u32,
    pub sort: SortId,
}

impl Var {
    pub fn new(id: u32, sort: SortId) -> Self {
        Var { id, sort }
    }
}

/// A sorted first-order term.
///
/// Argument lists are reference counted, so cloning a term is cheap.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(Var),
    App(SymId, Arc<[Term]>),
    /// Integer numeral.
    Int(i64),
    Ite(Arc<Ite>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ite {
    pub guard: Formula,
    pub then: Term,
    pub els: Term,
}

impl Term {
    pub fn var(id: u32, sort: SortId) -> Term {
        Term::Var(Var::new(id, sort))
    }

    pub fn constant(sym: SymId) -> Term {
        Term::App(sym, Arc::from(Vec::new()))
    }

    pub fn app(sym: SymId, args: Vec<Term>) -> Term {
        Term::App(sym, Arc::from(args))
    }

    pub fn ite(guard: Formula, then: Term, els: Term) -> Term {
        Term::Ite(Arc::new(Ite { guard, then, els }))
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            Term::Var(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            _ => &[],
        }
    }

    pub fn sort(&self, sig: &Signature) -> SortId {
        match self {
            Term::Var(v) => v.sort,
            Term::App(f, _) => sig.symbol(*f).result,
            Term::Int(_) => SortId::INT,
            Term::Ite(ite) => ite.then.sort(sig),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
            Term::Int(_) => true,
            Term::Ite(ite) => ite.guard.is_ground() && ite.then.is_ground() && ite.els.is_ground(),
        }
    }

    /// True iff `v` occurs anywhere in the term, including ite guards.
    pub fn occurs(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
            Term::Int(_) => false,
            Term::Ite(ite) => ite.guard.occurs(v) || ite.then.occurs(v) || ite.els.occurs(v),
        }
    }

    /// True iff every symbol in the term, guards included, is computable.
    pub fn is_computable(&self, sig: &Signature) -> bool {
        match self {
            Term::Var(_) | Term::Int(_) => true,
            Term::App(f, args) => sig.is_computable(*f) && args.iter().all(|a| a.is_computable(sig)),
            Term::Ite(ite) => {
                ite.guard.is_computable(sig)
                    && ite.then.is_computable(sig)
                    && ite.els.is_computable(sig)
            }
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Int(_) => {}
            Term::Ite(ite) => {
                ite.guard.collect_vars(out);
                ite.then.collect_vars(out);
                ite.els.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(v.id),
            Term::App(_, args) => args.iter().filter_map(Term::max_var).max(),
            Term::Int(_) => None,
            Term::Ite(ite) => [ite.guard.max_var(), ite.then.max_var(), ite.els.max_var()]
                .into_iter()
                .flatten()
                .max(),
        }
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<SymId>) {
        match self {
            Term::Var(_) | Term::Int(_) => {}
            Term::App(f, args) => {
                out.insert(*f);
                args.iter().for_each(|a| a.collect_symbols(out));
            }
            Term::Ite(ite) => {
                ite.guard.collect_symbols(out);
                ite.then.collect_symbols(out);
                ite.els.collect_symbols(out);
            }
        }
    }

    pub fn contains_symbol(&self, sym: SymId) -> bool {
        match self {
            Term::Var(_) | Term::Int(_) => false,
            Term::App(f, args) => *f == sym || args.iter().any(|a| a.contains_symbol(sym)),
            Term::Ite(ite) => {
                ite.guard.contains_symbol(sym)
                    || ite.then.contains_symbol(sym)
                    || ite.els.contains_symbol(sym)
            }
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Int(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Term::Ite(ite) => 1 + ite.guard.size() + ite.then.size() + ite.els.size(),
        }
    }

    pub fn contains_ite(&self) -> bool {
        match self {
            Term::Ite(_) => true,
            Term::App(_, args) => args.iter().any(Term::contains_ite),
            _ => false,
        }
    }

    /// Subterm at a path of argument indices. Ite nodes have no addressable positions.
    pub fn at(&self, path: &[usize]) -> &Term {
        match path.split_first() {
            None => self,
            Some((&i, rest)) => self.args()[i].at(rest),
        }
    }

    pub fn replace_at(&self, path: &[usize], new: Term) -> Term {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    let mut args = args.to_vec();
                    args[i] = args[i].replace_at(rest, new);
                    Term::app(*f, args)
                }
                _ => panic!("position {path:?} does not exist"),
            },
        }
    }

    /// Paths of all non-variable subterms in pre-order (root first).
    pub fn non_var_positions(&self) -> Vec<Vec<usize>> {
        fn walk(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            match t {
                Term::Var(_) => {}
                Term::App(_, args) => {
                    out.push(path.clone());
                    for (i, a) in args.iter().enumerate() {
                        path.push(i);
                        walk(a, path, out);
                        path.pop();
                    }
                }
                Term::Int(_) | Term::Ite(_) => out.push(path.clone()),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Replace every occurrence of `from` by `to` (used to turn skolem
    /// constants into program inputs).
    pub fn replace_term(&self, from: &Term, to: &Term) -> Term {
        if self == from {
            return to.clone();
        }
        match self {
            Term::Var(_) | Term::Int(_) => self.clone(),
            Term::App(f, args) => {
                Term::app(*f, args.iter().map(|a| a.replace_term(from, to)).collect())
            }
            Term::Ite(ite) => Term::ite(
                ite.guard.replace_term(from, to),
                ite.then.replace_term(from, to),
                ite.els.replace_term(from, to),
            ),
        }
    }

    /// Rename variables through `f`.
    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Var) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(*v)),
            Term::Int(_) => self.clone(),
            Term::App(g, args) => {
                if args.is_empty() {
                    return self.clone();
                }
                Term::app(*g, args.iter().map(|a| a.map_vars(f)).collect())
            }
            Term::Ite(ite) => Term::ite(ite.guard.map_vars(f), ite.then.map_vars(f), ite.els.map_vars(f)),
        }
    }
}
