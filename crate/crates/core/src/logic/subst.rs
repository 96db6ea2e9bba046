use std::collections::BTreeMap;

use super::clause::{Clause, Literal};
use super::formula::{Atom, Formula};
use super::signature::Signature;
use super::term::{Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstError {
    #[error("variable #{var} cannot be bound to a term of a different sort")]
    SortMismatch { var: u32 },
}

/// Mapping from variables to terms, applied simultaneously.
///
/// Bindings built through [`Substitution::bind`] and
/// [`Substitution::compose`] are kept idempotent: no bound variable occurs in
/// the range.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from raw bindings, checking sorts.
    pub fn from_bindings(
        bindings: impl IntoIterator<Item = (Var, Term)>,
        sig: &Signature,
    ) -> Result<Self, SubstError> {
        let mut map = BTreeMap::new();
        for (v, t) in bindings {
            if t.sort(sig) != v.sort {
                return Err(SubstError::SortMismatch { var: v.id });
            }
            map.insert(v, t);
        }
        Ok(Substitution { map })
    }

    /// Wrap raw bindings without checks.
    pub fn from_map(map: BTreeMap<Var, Term>) -> Self {
        Substitution { map }
    }

    pub fn singleton(v: Var, t: Term) -> Self {
        let mut map = BTreeMap::new();
        map.insert(v, t);
        Substitution { map }
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.map.get(&v)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    /// `self ∘ {v ↦ t}`: apply the new binding to the existing range, then add it.
    pub fn bind(&mut self, v: Var, t: Term) {
        let single = Substitution::singleton(v, t.clone());
        for value in self.map.values_mut() {
            if value.occurs(v) {
                *value = single.apply(value);
            }
        }
        self.map.insert(v, t);
    }

    /// The substitution equivalent to applying `self` and then `other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut map: BTreeMap<Var, Term> =
            self.map.iter().map(|(v, t)| (*v, other.apply(t))).collect();
        for (v, t) in &other.map {
            map.entry(*v).or_insert_with(|| t.clone());
        }
        map.retain(|v, t| t.as_var() != Some(*v));
        Substitution { map }
    }

    pub fn apply<T: Substitutable + ?Sized>(&self, e: &T) -> T::Output {
        e.apply_subst(self)
    }

    /// Apply with a sort check of every binding first.
    pub fn apply_checked<T: Substitutable + ?Sized>(
        &self,
        e: &T,
        sig: &Signature,
    ) -> Result<T::Output, SubstError> {
        for (v, t) in &self.map {
            if t.sort(sig) != v.sort {
                return Err(SubstError::SortMismatch { var: v.id });
            }
        }
        Ok(e.apply_subst(self))
    }
}

pub trait Substitutable {
    type Output;
    fn apply_subst(&self, s: &Substitution) -> Self::Output;
}

impl Substitutable for Term {
    type Output = Term;
    fn apply_subst(&self, s: &Substitution) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(v) => s.get(*v).cloned().unwrap_or_else(|| self.clone()),
            Term::Int(_) => self.clone(),
            Term::App(f, args) => {
                if args.is_empty() {
                    return self.clone();
                }
                Term::app(*f, args.iter().map(|a| a.apply_subst(s)).collect())
            }
            Term::Ite(ite) => Term::ite(
                ite.guard.apply_subst(s),
                ite.then.apply_subst(s),
                ite.els.apply_subst(s),
            ),
        }
    }
}

impl Substitutable for Atom {
    type Output = Atom;
    fn apply_subst(&self, s: &Substitution) -> Atom {
        self.map_terms(|t| t.apply_subst(s))
    }
}

impl Substitutable for Formula {
    type Output = Formula;
    fn apply_subst(&self, s: &Substitution) -> Formula {
        // quantified variables are shadowed
        match self {
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => {
                let mut inner = s.clone();
                for v in vs {
                    inner.map.remove(v);
                }
                let body = Box::new(f.apply_subst(&inner));
                match self {
                    Formula::Forall(..) => Formula::Forall(vs.clone(), body),
                    _ => Formula::Exists(vs.clone(), body),
                }
            }
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(a.apply_subst(s)),
            Formula::Not(f) => Formula::not(f.apply_subst(s)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.apply_subst(s)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.apply_subst(s)).collect()),
            Formula::Implies(a, b) => {
                Formula::Implies(Box::new(a.apply_subst(s)), Box::new(b.apply_subst(s)))
            }
            Formula::Iff(a, b) => {
                Formula::Iff(Box::new(a.apply_subst(s)), Box::new(b.apply_subst(s)))
            }
        }
    }
}

impl Substitutable for Literal {
    type Output = Literal;
    fn apply_subst(&self, s: &Substitution) -> Literal {
        Literal { atom: self.atom.apply_subst(s), ..self.clone() }
    }
}

impl Substitutable for Clause {
    type Output = Clause;
    fn apply_subst(&self, s: &Substitution) -> Clause {
        Clause {
            literals: self.literals.iter().map(|l| l.apply_subst(s)).collect(),
            answer: self.answer.as_ref().map(|r| r.apply_subst(s)),
            ..self.clone()
        }
    }
}
