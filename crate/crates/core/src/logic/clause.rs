use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use super::formula::Atom;
use super::signature::Signature;
use super::term::{Term, Var};

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct ClauseId(pub u32);

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal. `selected` and `constraint` are bookkeeping flags and take no
/// part in equality or hashing.
#[derive(Clone, Debug)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
    pub selected: bool,
    /// Disequality added by a computable unifier or an answer constraint;
    /// selection prefers these.
    pub constraint: bool,
}

impl PartialEq for Literal {
    fn eq(&self, other: &Self) -> bool {
        self.positive == other.positive && self.atom == other.atom
    }
}

impl Eq for Literal {}

impl Hash for Literal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.positive.hash(state);
        self.atom.hash(state);
    }
}

impl Literal {
    pub fn new(positive: bool, atom: Atom) -> Self {
        Literal { positive, atom, selected: false, constraint: false }
    }

    pub fn eq(l: Term, r: Term) -> Self {
        Literal::new(true, Atom::Eq(l, r))
    }

    pub fn neq(l: Term, r: Term) -> Self {
        Literal::new(false, Atom::Eq(l, r))
    }

    pub fn constraint(l: Term, r: Term) -> Self {
        Literal { constraint: true, ..Literal::neq(l, r) }
    }

    pub fn negated(&self) -> Literal {
        Literal { positive: !self.positive, selected: false, constraint: false, ..self.clone() }
    }

    pub fn is_equality(&self) -> bool {
        self.atom.is_equality()
    }

    /// Same literal up to the orientation of an equation.
    pub fn same_modulo_symmetry(&self, other: &Literal) -> bool {
        if self.positive != other.positive {
            return false;
        }
        match (&self.atom, &other.atom) {
            (Atom::Eq(a, b), Atom::Eq(c, d)) => (a == c && b == d) || (a == d && b == c),
            (x, y) => x == y,
        }
    }

    pub fn is_computable(&self, sig: &Signature) -> bool {
        self.atom.is_computable(sig)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum RuleKind {
    Superposition,
    BinaryResolution,
    Factoring,
    EqualityResolution,
    EqualityFactoring,
}

impl RuleKind {
    pub fn short(self) -> &'static str {
        match self {
            RuleKind::Superposition => "Sup",
            RuleKind::BinaryResolution => "BR",
            RuleKind::Factoring => "F",
            RuleKind::EqualityResolution => "ER",
            RuleKind::EqualityFactoring => "EF",
        }
    }
}

/// How a rule treats answer literals of its premises.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Variant {
    /// No premise carries an answer literal.
    Base,
    /// Both premises carry answers, combined with an ite.
    IteAnswer,
    /// Both premises carry answers; the conclusion keeps one and adds `r ≄ r'`.
    ConstraintAnswer,
    /// Exactly one premise carries an answer.
    SingleAnswer,
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Rule {
    Input,
    Specification,
    TheoryAxiom,
    Inference(RuleKind, Variant),
    AnswerRemoval,
    Demodulation,
    Evaluation,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Input => write!(f, "input"),
            Rule::Specification => write!(f, "preprocessed specification"),
            Rule::TheoryAxiom => write!(f, "theory axiom"),
            Rule::Inference(kind, Variant::IteAnswer) => write!(f, "{} ite", kind.short()),
            Rule::Inference(kind, Variant::ConstraintAnswer) => {
                write!(f, "{} constraint", kind.short())
            }
            Rule::Inference(kind, _) => write!(f, "{}", kind.short()),
            Rule::AnswerRemoval => write!(f, "answer literal removal"),
            Rule::Demodulation => write!(f, "demodulation"),
            Rule::Evaluation => write!(f, "evaluation"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClauseError {
    #[error("clause already carries an answer literal")]
    SecondAnswer,
}

/// A disjunction of literals plus at most one answer literal `ans(answer)`.
///
/// The answer literal is kept apart from `literals`, so it can never be
/// selected and a second one cannot be represented.
#[derive(Clone, Debug)]
pub struct Clause {
    pub id: ClauseId,
    pub literals: Vec<Literal>,
    pub answer: Option<Term>,
    pub rule: Rule,
    pub parents: Vec<ClauseId>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { id: ClauseId(0), literals, answer: None, rule: Rule::Input, parents: Vec::new() }
    }

    pub fn derived(literals: Vec<Literal>, answer: Option<Term>, rule: Rule, parents: Vec<ClauseId>) -> Self {
        Clause { id: ClauseId(0), literals, answer, rule, parents }
    }

    pub fn with_answer(mut self, answer: Term) -> Result<Self, ClauseError> {
        if self.answer.is_some() {
            return Err(ClauseError::SecondAnswer);
        }
        self.answer = Some(answer);
        Ok(self)
    }

    /// The empty clause: no literals and no answer.
    pub fn is_empty(&self) -> bool {
        self.literals.is_empty() && self.answer.is_none()
    }

    pub fn has_answer(&self) -> bool {
        self.answer.is_some()
    }

    /// Groundness of the non-answer part.
    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(|l| l.atom.is_ground())
    }

    pub fn literals_computable(&self, sig: &Signature) -> bool {
        self.literals.iter().all(|l| l.is_computable(sig))
    }

    pub fn max_var(&self) -> Option<u32> {
        self.literals
            .iter()
            .filter_map(|l| l.atom.max_var())
            .chain(self.answer.as_ref().and_then(Term::max_var))
            .max()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for l in &self.literals {
            l.atom.collect_vars(&mut out);
        }
        if let Some(r) = &self.answer {
            r.collect_vars(&mut out);
        }
        out
    }

    /// Symbol count of the literals; an answer adds one regardless of its size.
    pub fn weight(&self) -> usize {
        self.literals.iter().map(|l| l.atom.size()).sum::<usize>()
            + usize::from(self.answer.is_some())
    }

    pub fn selected(&self) -> impl Iterator<Item = (usize, &Literal)> {
        self.literals.iter().enumerate().filter(|(_, l)| l.selected)
    }

    pub fn has_constraints(&self) -> bool {
        self.literals.iter().any(|l| l.constraint)
    }

    fn rename(&self, f: &mut impl FnMut(Var) -> Var) -> Clause {
        Clause {
            literals: self
                .literals
                .iter()
                .map(|l| Literal { atom: l.atom.map_terms(|t| t.map_vars(f)), ..l.clone() })
                .collect(),
            answer: self.answer.as_ref().map(|r| r.map_vars(f)),
            ..self.clone()
        }
    }

    /// Shift every variable id by `offset`.
    pub fn shifted(&self, offset: u32) -> Clause {
        if offset == 0 {
            return self.clone();
        }
        self.rename(&mut |v| Var::new(v.id + offset, v.sort))
    }

    /// Rename variables to `0..n` in order of first occurrence.
    pub fn normalized(&self) -> Clause {
        let mut map: HashMap<Var, u32> = HashMap::new();
        self.rename(&mut |v| {
            let next = map.len() as u32;
            let id = *map.entry(v).or_insert(next);
            Var::new(id, v.sort)
        })
    }

    /// Drop repeated literals, merging their flags.
    pub fn dedup_literals(&mut self) {
        let mut out: Vec<Literal> = Vec::with_capacity(self.literals.len());
        for l in self.literals.drain(..) {
            match out.iter_mut().find(|m| m.same_modulo_symmetry(&l)) {
                Some(m) => m.constraint |= l.constraint,
                None => out.push(l),
            }
        }
        self.literals = out;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::signature::SortId;

    #[test]
    fn second_answer_is_rejected() {
        let c = Clause::new(vec![]).with_answer(Term::Int(1)).unwrap();
        assert_eq!(c.with_answer(Term::Int(2)).unwrap_err(), ClauseError::SecondAnswer);
    }

    #[test]
    fn flags_do_not_affect_equality() {
        let a = Literal::neq(Term::Int(1), Term::var(0, SortId::INT));
        let mut b = a.clone();
        b.selected = true;
        b.constraint = true;
        assert_eq!(a, b);
    }

    #[test]
    fn normalization_renumbers_by_first_occurrence() {
        let x = Term::var(7, SortId::INT);
        let y = Term::var(3, SortId::INT);
        let c = Clause::new(vec![Literal::eq(x.clone(), y.clone())]).with_answer(x).unwrap();
        let n = c.normalized();
        assert_eq!(n.literals[0].atom, Atom::Eq(Term::var(0, SortId::INT), Term::var(1, SortId::INT)));
        assert_eq!(n.answer, Some(Term::var(0, SortId::INT)));
    }

    #[test]
    fn dedup_merges_symmetric_equations() {
        let a = Term::Int(1);
        let x = Term::var(0, SortId::INT);
        let mut c = Clause::new(vec![
            Literal::neq(a.clone(), x.clone()),
            Literal::constraint(x.clone(), a.clone()),
        ]);
        c.dedup_literals();
        assert_eq!(c.literals.len(), 1);
        assert!(c.literals[0].constraint);
    }
}
