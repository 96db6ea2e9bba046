//! Given-clause saturation with answer-literal interception.
//!
//! Every new clause is simplified and then checked for the shape
//! `C[σ̄] ∨ ans(r)` with `C` ground and computable. Such a clause records the
//! program `⟨r[x̄], C₁[x̄] ∧ … ∧ Cᵢ₋₁[x̄] ∧ ¬Cᵢ[x̄]⟩` and continues as `C[σ̄]`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::calculus::{evaluate_ground_theory, is_tautology, subsumes_with, Calculus, Demodulator};
use crate::logic::{show_clause, Atom, Clause, ClauseId, Literal, Rule, Signature, SymId, Term};
use crate::order::KboConfig;
use crate::preprocess::Preprocessed;

/// Resource bounds of one run.
#[derive(Clone, Debug)]
pub struct Limits {
    pub time_limit: Duration,
    /// Upper bound on the number of clauses created.
    pub clause_budget: usize,
    /// Set from another thread to stop the loop at the next check.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { time_limit: Duration::from_secs(60), clause_budget: 1_000_000, cancel: None }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub limits: Limits,
    /// Keep one trace line per created clause.
    pub trace: bool,
    pub ordering_seed: u64,
    /// Whether an answer clause may only be subsumed by one whose answer
    /// generalizes its own. Defaults to true exactly when the signature has
    /// uncomputable symbols.
    pub answer_subsumption: Option<bool>,
}

/// Some non-answer symbol may not appear in programs.
pub fn has_uncomputable(sig: &Signature) -> bool {
    sig.symbols().any(|(_, s)| !s.computable && !s.is_answer())
}

/// A guarded branch: `term` is a correct output whenever every clause of
/// `prior` holds and `condition` is false. Both range over input symbols.
#[derive(Clone, Debug)]
pub struct ProgramWithConditions {
    pub term: Term,
    pub prior: Vec<Clause>,
    pub condition: Clause,
    /// The clause left after the answer literal was removed.
    pub origin: ClauseId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Refutation(ClauseId),
    /// Passive queue ran empty without a refutation.
    Saturated,
    TimeLimit,
    ClauseBudget,
    Cancelled,
}

#[derive(Clone, Debug, Default)]
pub struct Stats {
    pub created: usize,
    pub activated: usize,
    pub deleted_tautology: usize,
    pub deleted_subsumed: usize,
    pub deleted_duplicate: usize,
    pub demodulated: usize,
    pub evaluated: usize,
    pub intercepted: usize,
    /// Clauses that broke an answer-literal invariant; zero on a correct run.
    pub invariant_violations: usize,
    pub elapsed: Duration,
}

pub struct SynthesisResult {
    pub outcome: Outcome,
    /// Every recorded program, in recording order.
    pub programs: Vec<ProgramWithConditions>,
    /// Programs whose condition clause is an ancestor of the empty clause.
    pub used: Vec<ProgramWithConditions>,
    pub stats: Stats,
    pub trace: Vec<String>,
    /// Every created clause, indexed by id.
    pub clauses: Vec<Clause>,
}

impl SynthesisResult {
    pub fn refuted(&self) -> bool {
        matches!(self.outcome, Outcome::Refutation(_))
    }

    /// Ancestors of the empty clause in creation order, as trace lines.
    pub fn proof(&self, sig: &Signature) -> Vec<String> {
        let Outcome::Refutation(empty) = self.outcome else { return vec![] };
        let mut ids: Vec<ClauseId> = ancestors(&self.clauses, empty).into_iter().collect();
        ids.sort();
        ids.iter().map(|id| trace_line(&self.clauses[id.0 as usize], sig)).collect()
    }
}

pub fn trace_line(c: &Clause, sig: &Signature) -> String {
    let parents: Vec<String> = c.parents.iter().map(|p| p.to_string()).collect();
    if parents.is_empty() {
        format!("{}. {} [{}]", c.id, show_clause(c, sig), c.rule)
    } else {
        format!("{}. {} [{} {}]", c.id, show_clause(c, sig), c.rule, parents.join(", "))
    }
}

fn ancestors(clauses: &[Clause], root: ClauseId) -> HashSet<ClauseId> {
    let mut seen = HashSet::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if seen.insert(id) {
            stack.extend(clauses[id.0 as usize].parents.iter().copied());
        }
    }
    seen
}

/// Keep the programs whose condition clause was used to derive `empty`,
/// preserving recording order.
pub fn extract_used_programs(
    programs: &[ProgramWithConditions],
    clauses: &[Clause],
    empty: ClauseId,
) -> Vec<ProgramWithConditions> {
    let used = ancestors(clauses, empty);
    programs.iter().filter(|p| used.contains(&p.origin)).cloned().collect()
}

/// Replace each input skolem constant by its input symbol.
pub fn skolems_to_inputs(t: &Term, skolems: &[SymId], inputs: &[SymId]) -> Term {
    skolems
        .iter()
        .zip(inputs)
        .fold(t.clone(), |t, (s, x)| t.replace_term(&Term::constant(*s), &Term::constant(*x)))
}

fn clause_to_inputs(c: &Clause, skolems: &[SymId], inputs: &[SymId]) -> Clause {
    let literals = c
        .literals
        .iter()
        .map(|l| Literal {
            atom: l.atom.map_terms(|t| skolems_to_inputs(t, skolems, inputs)),
            selected: false,
            ..l.clone()
        })
        .collect();
    Clause { literals, answer: None, ..c.clone() }
}

type DedupKey = (Vec<Literal>, Option<Term>);

/// Variants are duplicates. Without answer matching, any answer term is
/// replaced by a marker so only the literals are compared.
fn dedup_key(c: &Clause, match_answers: bool) -> DedupKey {
    let n = c.normalized();
    let answer = if match_answers { n.answer } else { n.answer.map(|_| Term::Int(0)) };
    (n.literals, answer)
}

struct Passive {
    by_age: BinaryHeap<Reverse<u32>>,
    by_weight: BinaryHeap<Reverse<(usize, u32)>>,
    clauses: HashMap<u32, Clause>,
    tick: usize,
}

/// One pick by age for every four picks by weight.
const AGE_EVERY: usize = 5;

impl Passive {
    fn new() -> Self {
        Passive { by_age: BinaryHeap::new(), by_weight: BinaryHeap::new(), clauses: HashMap::new(), tick: 0 }
    }

    fn push(&mut self, c: Clause) {
        let id = c.id.0;
        self.by_age.push(Reverse(id));
        self.by_weight.push(Reverse((c.weight(), id)));
        self.clauses.insert(id, c);
    }

    fn pop(&mut self) -> Option<Clause> {
        self.tick += 1;
        let by_age = self.tick % AGE_EVERY == 0;
        loop {
            let id = if by_age {
                self.by_age.pop()?.0
            } else {
                self.by_weight.pop()?.0 .1
            };
            // the other heap keeps a stale entry, skipped when it surfaces
            if let Some(c) = self.clauses.remove(&id) {
                return Some(c);
            }
        }
    }
}

/// The mutable state of one run.
struct Saturation<'a> {
    sig: &'a Signature,
    ord: KboConfig,
    skolems: &'a [SymId],
    inputs: &'a [SymId],
    answer_sym: Option<SymId>,
    /// Subsumption and duplicate detection compare answers.
    match_answers: bool,
    clauses: Vec<Clause>,
    passive: Passive,
    active: Vec<Clause>,
    demod: Demodulator,
    seen: HashSet<DedupKey>,
    conditions: Vec<Clause>,
    programs: Vec<ProgramWithConditions>,
    stats: Stats,
    trace: Option<Vec<String>>,
    limits: Limits,
    start: Instant,
}

enum Stop {
    Empty(ClauseId),
    Limit(Outcome),
}

impl<'a> Saturation<'a> {
    fn register(&mut self, mut c: Clause) -> Result<Clause, Stop> {
        c.id = ClauseId(self.clauses.len() as u32);
        for l in &mut c.literals {
            l.selected = false;
        }
        self.stats.created += 1;
        if let Some(t) = &mut self.trace {
            t.push(trace_line(&c, self.sig));
        }
        self.clauses.push(c.clone());
        if self.stats.created > self.limits.clause_budget {
            return Err(Stop::Limit(Outcome::ClauseBudget));
        }
        Ok(c)
    }

    fn check_limits(&self) -> Result<(), Stop> {
        if self.limits.cancel.as_ref().is_some_and(|f| f.load(Ordering::Relaxed)) {
            return Err(Stop::Limit(Outcome::Cancelled));
        }
        if self.start.elapsed() >= self.limits.time_limit {
            return Err(Stop::Limit(Outcome::TimeLimit));
        }
        Ok(())
    }

    /// Answer-literal invariants: the answer predicate never occurs among
    /// the literals or inside the answer, answers stay computable and no
    /// literal carrying the answer predicate is selected.
    fn check_invariants(&mut self, c: &Clause) {
        let ans_inside = |t: &Term| self.answer_sym.is_some_and(|a| t.contains_symbol(a));
        let mut bad = c.answer.as_ref().is_some_and(|r| !r.is_computable(self.sig) || ans_inside(r));
        bad |= c.literals.iter().any(|l| {
            let pred_is_ans = matches!(&l.atom, Atom::Pred(p, _) if Some(*p) == self.answer_sym);
            pred_is_ans || l.atom.terms().into_iter().any(ans_inside)
        });
        if bad {
            self.stats.invariant_violations += 1;
        }
    }

    /// Forward simplification. `None` when the clause is redundant.
    fn simplify(&mut self, c: Clause, against_active: bool) -> Result<Option<Clause>, Stop> {
        let mut c = c;
        loop {
            let Some(e) = evaluate_ground_theory(&c, self.sig) else {
                self.stats.deleted_tautology += 1;
                return Ok(None);
            };
            if e.literals != c.literals || e.answer != c.answer {
                self.stats.evaluated += 1;
                c = self.register(Clause { rule: Rule::Evaluation, parents: vec![c.id], ..e })?;
            }
            if is_tautology(&c) {
                self.stats.deleted_tautology += 1;
                return Ok(None);
            }
            match self.demod.rewrite(&c, &self.ord, self.sig) {
                Some(r) => {
                    self.stats.demodulated += 1;
                    c = self.register(r)?;
                }
                None => break,
            }
        }
        if !self.seen.insert(dedup_key(&c, self.match_answers)) {
            self.stats.deleted_duplicate += 1;
            return Ok(None);
        }
        if against_active && self.active.iter().any(|a| subsumes_with(a, &c, self.sig, self.match_answers)) {
            self.stats.deleted_subsumed += 1;
            return Ok(None);
        }
        Ok(Some(c))
    }

    /// Record a program when `c` has the interceptable shape and return the
    /// clause without its answer literal.
    fn intercept(&mut self, c: Clause) -> Result<Clause, Stop> {
        let Some(r) = &c.answer else { return Ok(c) };
        if !c.is_ground() || !c.literals_computable(self.sig) || !r.is_computable(self.sig) {
            return Ok(c);
        }
        self.stats.intercepted += 1;
        let term = skolems_to_inputs(r, self.skolems, self.inputs);
        let stripped = self.register(Clause::derived(c.literals.clone(), None, Rule::AnswerRemoval, vec![c.id]))?;
        let condition = clause_to_inputs(&stripped, self.skolems, self.inputs);
        self.programs.push(ProgramWithConditions {
            term,
            prior: self.conditions.clone(),
            condition: condition.clone(),
            origin: stripped.id,
        });
        self.conditions.push(condition);
        Ok(stripped)
    }

    /// Simplify, intercept and queue a new clause.
    fn admit(&mut self, c: Clause) -> Result<(), Stop> {
        let Some(c) = self.simplify(c, true)? else { return Ok(()) };
        let c = self.intercept(c)?;
        self.check_invariants(&c);
        if c.is_empty() {
            return Err(Stop::Empty(c.id));
        }
        self.passive.push(c);
        Ok(())
    }

    fn run(&mut self, input: &[Clause]) -> Outcome {
        match self.run_inner(input) {
            Ok(()) => Outcome::Saturated,
            Err(Stop::Empty(id)) => Outcome::Refutation(id),
            Err(Stop::Limit(o)) => o,
        }
    }

    fn run_inner(&mut self, input: &[Clause]) -> Result<(), Stop> {
        for c in input {
            let c = self.register(c.clone())?;
            self.admit(c)?;
        }
        while let Some(given) = self.passive.pop() {
            self.check_limits()?;
            // rules learnt since the clause was queued may simplify it further
            let Some(given) = self.resimplify(given)? else { continue };
            let mut given = given;
            self.ord.select(&mut given);
            self.check_invariants(&given);
            self.stats.activated += 1;
            if self.demod.insert(&given, &self.ord) {
                self.backward_demodulate(&given)?;
            }
            self.active.push(given.clone());
            let active: Vec<&Clause> = self.active.iter().collect();
            let calc = Calculus::new(self.sig, &self.ord);
            let conclusions = calc.generate(&given, &active);
            for (k, c) in conclusions.into_iter().enumerate() {
                if k % 64 == 63 {
                    self.check_limits()?;
                }
                let c = self.register(c)?;
                self.admit(c)?;
            }
        }
        Ok(())
    }

    fn resimplify(&mut self, c: Clause) -> Result<Option<Clause>, Stop> {
        let Some(r) = self.demod.rewrite(&c, &self.ord, self.sig) else {
            if self.active.iter().any(|a| subsumes_with(a, &c, self.sig, self.match_answers)) {
                self.stats.deleted_subsumed += 1;
                return Ok(None);
            }
            return Ok(Some(c));
        };
        self.stats.demodulated += 1;
        let r = self.register(r)?;
        let Some(r) = self.simplify(r, true)? else { return Ok(None) };
        let r = self.intercept(r)?;
        self.check_invariants(&r);
        if r.is_empty() {
            return Err(Stop::Empty(r.id));
        }
        Ok(Some(r))
    }

    /// Active clauses reducible by a new rewrite rule go back to passive in
    /// rewritten form.
    fn backward_demodulate(&mut self, rule: &Clause) -> Result<(), Stop> {
        let mut single = Demodulator::new();
        single.insert(rule, &self.ord);
        let mut keep = Vec::with_capacity(self.active.len());
        let mut rewritten = Vec::new();
        for a in std::mem::take(&mut self.active) {
            match single.rewrite(&a, &self.ord, self.sig) {
                Some(r) => {
                    self.demod.remove(a.id);
                    rewritten.push(r);
                }
                None => keep.push(a),
            }
        }
        self.active = keep;
        for r in rewritten {
            self.stats.demodulated += 1;
            let r = self.register(r)?;
            self.admit(r)?;
        }
        Ok(())
    }
}

/// Run the saturation loop on a preprocessed problem.
pub fn saturate(p: &Preprocessed, opts: &Options) -> SynthesisResult {
    let mut ord = KboConfig::default_for(&p.sig, opts.ordering_seed);
    ord.extend_to(&p.sig);
    let mut st = Saturation {
        sig: &p.sig,
        ord,
        skolems: &p.input_skolems,
        inputs: &p.inputs,
        answer_sym: p.answer,
        match_answers: opts.answer_subsumption.unwrap_or_else(|| has_uncomputable(&p.sig)),
        clauses: Vec::new(),
        passive: Passive::new(),
        active: Vec::new(),
        demod: Demodulator::new(),
        seen: HashSet::new(),
        conditions: Vec::new(),
        programs: Vec::new(),
        stats: Stats::default(),
        trace: opts.trace.then(Vec::new),
        limits: opts.limits.clone(),
        start: Instant::now(),
    };
    let outcome = st.run(&p.clauses);
    st.stats.elapsed = st.start.elapsed();
    let used = match outcome {
        Outcome::Refutation(empty) => extract_used_programs(&st.programs, &st.clauses, empty),
        _ => Vec::new(),
    };
    SynthesisResult {
        outcome,
        programs: st.programs,
        used,
        stats: st.stats,
        trace: st.trace.unwrap_or_default(),
        clauses: st.clauses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_problem;
    use crate::logic::show_term;
    use crate::preprocess::{self, preprocess, Mode};

    const GROUP: &str = "
        (declare-sort G 0)
        (declare-fun * (G G) G)
        (declare-fun i (G) G)
        (declare-const e G)
        (assert (forall ((x G) (y G) (z G)) (= (* (* x y) z) (* x (* y z)))))
        (assert (forall ((x G)) (= (* e x) x)))
        (assert (forall ((x G)) (= (* (i x) x) e)))
    ";

    fn run(text: &str) -> (Preprocessed, SynthesisResult) {
        let prob = parse_problem(text).unwrap();
        let p = preprocess(&prob, Mode::Synthesize, preprocess::Options::default()).unwrap();
        let r = saturate(&p, &Options { trace: true, ..Options::default() });
        (p, r)
    }

    #[test]
    fn right_inverse_is_intercepted() {
        let text = format!("{GROUP} (assert-not (forall ((x G)) (exists ((y G)) (= (* x y) e))))");
        let (p, r) = run(&text);
        assert!(r.refuted(), "{:?}", r.outcome);
        assert_eq!(r.stats.invariant_violations, 0);
        assert_eq!(r.used.len(), 1);
        assert_eq!(show_term(&r.used[0].term, &p.sig), "i(x)");
        assert!(r.used[0].condition.literals.is_empty());
    }

    #[test]
    fn false_assumption_refutes_without_programs() {
        let text = "(declare-sort S 0) (assert false) (assert-not (forall ((x S)) (exists ((y S)) (= x y))))";
        let (_, r) = run(text);
        assert!(r.refuted());
        assert!(r.used.is_empty());
    }

    #[test]
    fn passive_alternates_age_and_weight() {
        let mut q = Passive::new();
        let heavy = |id| Clause { id: ClauseId(id), ..Clause::new(vec![Literal::eq(Term::Int(1), Term::Int(2)); 3]) };
        let light = |id| Clause { id: ClauseId(id), ..Clause::new(vec![]) };
        q.push(heavy(0));
        for id in 1..6 {
            q.push(light(id));
        }
        let order: Vec<u32> = std::iter::from_fn(|| q.pop()).map(|c| c.id.0).collect();
        assert_eq!(order, vec![1, 2, 3, 4, 0, 5]);
    }

    #[test]
    fn trace_lines_have_ids_and_rules() {
        let text = format!("{GROUP} (assert-not (forall ((x G)) (exists ((y G)) (= (* x y) e))))");
        let (_, r) = run(&text);
        assert!(r.trace[0].starts_with("0. "));
        assert!(r.trace.iter().any(|l| l.contains("[answer literal removal ")));
    }
}
