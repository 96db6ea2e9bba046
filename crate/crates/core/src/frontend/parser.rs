use std::collections::BTreeMap;

use super::sexp::{read_all, Sexp, SexpError};
use crate::logic::{
    Atom, Formula, Interp, Signature, SignatureError, SortId, SymId, Term, Var,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error(transparent)]
    Sexp(#[from] SexpError),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown symbol `{name}`")]
    UnknownSymbol { line: usize, name: String },
    #[error("line {line}: unknown sort `{name}`")]
    UnknownSort { line: usize, name: String },
    #[error("line {line}: ill-sorted expression: {msg}")]
    IllSorted { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Signature { line: usize, source: SignatureError },
    #[error("no assert-not command")]
    MissingSpecification,
    #[error("line {line}: second assert-not command")]
    MultipleSpecifications { line: usize },
    #[error("the assert-not body must have the form (forall (..) (exists ((y S)) F))")]
    SpecificationShape,
    #[error("the specification has {0} output variables; exactly one is supported")]
    TupleOutput(usize),
    #[error("`{0}` in the uncomputable list is not a declared uninterpreted symbol")]
    UnknownUncomputable(String),
}

/// The functional specification `∀ inputs. ∃ output. body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spec {
    pub inputs: Vec<Var>,
    pub output: Var,
    pub body: Formula,
}

/// A parsed problem file.
#[derive(Clone, Debug)]
pub struct Problem {
    pub sig: Signature,
    pub assumptions: Vec<Formula>,
    /// Body of the `assert-not` command, if any.
    pub goal: Option<Formula>,
    /// Shape analysis of `goal`; present whenever `goal` has the required shape.
    pub spec: Option<Spec>,
    pub uncomputable: Vec<String>,
    /// Source name of every bound variable.
    pub var_names: BTreeMap<u32, String>,
}

impl Problem {
    pub fn var_name(&self, v: Var) -> String {
        self.var_names.get(&v.id).cloned().unwrap_or_else(|| format!("x{}", v.id))
    }

    /// Source names of the specification inputs.
    pub fn input_names(&self) -> Vec<String> {
        self.spec.as_ref().map(|s| s.inputs.iter().map(|v| self.var_name(*v)).collect()).unwrap_or_default()
    }
}

/// Strict parse: exactly one `assert-not` of shape `∀x̄.∃y.F`.
pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let p = parse_lenient(text)?;
    let Some(goal) = &p.goal else {
        return Err(ParseError::MissingSpecification);
    };
    if p.spec.is_none() {
        return Err(spec_shape(goal).unwrap_err());
    }
    Ok(p)
}

/// At most one `assert-not`, of any shape.
pub fn parse_lenient(text: &str) -> Result<Problem, ParseError> {
    let mut b = Builder { sig: Signature::new(), scope: Vec::new(), next_var: 0, names: BTreeMap::new() };
    let mut assumptions = Vec::new();
    let mut goal = None;
    let mut uncomputable: Vec<(String, usize)> = Vec::new();

    for cmd in read_all(text)? {
        let line = cmd.line();
        let items = cmd.as_list().ok_or_else(|| syntax(line, "expected a command"))?;
        let head = items.first().and_then(Sexp::as_atom).ok_or_else(|| syntax(line, "expected a command"))?;
        let args = &items[1..];
        match head {
            "set-logic" | "set-info" | "check-sat" | "check-synth" | "exit" | "get-model" => {}
            "declare-sort" => {
                let name = atom(args.first(), line, "sort name")?;
                if let Some(arity) = args.get(1) {
                    if arity.as_atom() != Some("0") {
                        return Err(syntax(line, "only 0-ary sorts are supported"));
                    }
                }
                b.sig.declare_sort(name).map_err(|source| ParseError::Signature { line, source })?;
            }
            "declare-fun" => {
                if args.len() != 3 {
                    return Err(syntax(line, "declare-fun takes a name, argument sorts and a result sort"));
                }
                let name = atom(args.first(), line, "symbol name")?;
                let arg_sorts = args[1]
                    .as_list()
                    .ok_or_else(|| syntax(line, "expected a list of argument sorts"))?
                    .iter()
                    .map(|s| b.sort(s))
                    .collect::<Result<Vec<_>, _>>()?;
                let result = b.sort(&args[2])?;
                b.sig.declare(name, arg_sorts, result).map_err(|source| ParseError::Signature { line, source })?;
            }
            "declare-const" => {
                if args.len() != 2 {
                    return Err(syntax(line, "declare-const takes a name and a sort"));
                }
                let name = atom(args.first(), line, "constant name")?;
                let result = b.sort(&args[1])?;
                b.sig.declare(name, vec![], result).map_err(|source| ParseError::Signature { line, source })?;
            }
            "set-option" => {
                if args.first().and_then(Sexp::as_atom) == Some(":uncomputable") {
                    let names = args
                        .get(1)
                        .and_then(Sexp::as_list)
                        .ok_or_else(|| syntax(line, ":uncomputable expects a list of symbols"))?;
                    for n in names {
                        uncomputable.push((atom(Some(n), line, "symbol")?.to_string(), line));
                    }
                }
            }
            "assert" | "assert-not" => {
                let body = args.first().filter(|_| args.len() == 1).ok_or_else(|| syntax(line, "expected one formula"))?;
                let f = b.formula(body)?;
                if head == "assert" {
                    assumptions.push(f);
                } else if goal.is_some() {
                    return Err(ParseError::MultipleSpecifications { line });
                } else {
                    goal = Some(f);
                }
            }
            other => return Err(syntax(line, &format!("unsupported command `{other}`"))),
        }
    }

    let mut names = Vec::new();
    for (name, _) in &uncomputable {
        let ids = b.sig.declared_by_name(name);
        if ids.is_empty() {
            return Err(ParseError::UnknownUncomputable(name.clone()));
        }
        for id in ids {
            b.sig.set_computable(id, false).expect("declared symbols are uninterpreted");
        }
        if !names.contains(name) {
            names.push(name.clone());
        }
    }
    let spec = goal.as_ref().and_then(|g| spec_shape(g).ok());
    Ok(Problem { sig: b.sig, assumptions, goal, spec, uncomputable: names, var_names: b.names })
}

fn spec_shape(goal: &Formula) -> Result<Spec, ParseError> {
    let mut inputs = Vec::new();
    let mut f = goal;
    while let Formula::Forall(vs, body) = f {
        inputs.extend(vs.iter().copied());
        f = body;
    }
    match f {
        Formula::Exists(vs, body) if vs.len() == 1 => {
            Ok(Spec { inputs, output: vs[0], body: (**body).clone() })
        }
        Formula::Exists(vs, _) => Err(ParseError::TupleOutput(vs.len())),
        _ => Err(ParseError::SpecificationShape),
    }
}

fn syntax(line: usize, msg: &str) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn atom<'a>(s: Option<&'a Sexp>, line: usize, what: &str) -> Result<&'a str, ParseError> {
    s.and_then(Sexp::as_atom).ok_or_else(|| syntax(line, &format!("expected {what}")))
}

/// A parsed subexpression: either a term or a formula.
enum Parsed {
    Term(Term),
    Formula(Formula),
}

struct Builder {
    sig: Signature,
    scope: Vec<(String, Var)>,
    next_var: u32,
    names: BTreeMap<u32, String>,
}

impl Builder {
    fn sort(&self, s: &Sexp) -> Result<SortId, ParseError> {
        let name = s.as_atom().ok_or_else(|| syntax(s.line(), "expected a sort name"))?;
        self.sig
            .sort_by_name(name)
            .ok_or_else(|| ParseError::UnknownSort { line: s.line(), name: name.into() })
    }

    fn formula(&mut self, s: &Sexp) -> Result<Formula, ParseError> {
        match self.any(s)? {
            Parsed::Formula(f) => Ok(f),
            Parsed::Term(_) => Err(ParseError::IllSorted { line: s.line(), msg: format!("`{s}` is not a formula") }),
        }
    }

    fn term(&mut self, s: &Sexp) -> Result<Term, ParseError> {
        match self.any(s)? {
            Parsed::Term(t) => Ok(t),
            Parsed::Formula(_) => Err(ParseError::IllSorted { line: s.line(), msg: format!("`{s}` is a formula, a term was expected") }),
        }
    }

    fn ill_sorted(&self, s: &Sexp) -> ParseError {
        ParseError::IllSorted { line: s.line(), msg: format!("in `{s}`") }
    }

    fn any(&mut self, s: &Sexp) -> Result<Parsed, ParseError> {
        let line = s.line();
        match s {
            Sexp::Atom(a, _) => {
                if a == "true" {
                    return Ok(Parsed::Formula(Formula::True));
                }
                if a == "false" {
                    return Ok(Parsed::Formula(Formula::False));
                }
                if let Ok(n) = a.parse::<i64>() {
                    return Ok(Parsed::Term(Term::Int(n)));
                }
                if let Some((_, v)) = self.scope.iter().rev().find(|(n, _)| n == a) {
                    return Ok(Parsed::Term(Term::Var(*v)));
                }
                let id = self
                    .sig
                    .lookup(a, &[])
                    .ok_or_else(|| ParseError::UnknownSymbol { line, name: a.clone() })?;
                Ok(self.application(id, vec![]))
            }
            Sexp::List(items, _) => {
                let head = items.first().ok_or_else(|| syntax(line, "empty application"))?;
                let head = head.as_atom().ok_or_else(|| syntax(line, "expected a symbol in head position"))?;
                let args = &items[1..];
                match head {
                    "not" => {
                        if args.len() != 1 {
                            return Err(syntax(line, "not takes one argument"));
                        }
                        Ok(Parsed::Formula(Formula::not(self.formula(&args[0])?)))
                    }
                    "and" | "or" => {
                        let fs = args.iter().map(|a| self.formula(a)).collect::<Result<Vec<_>, _>>()?;
                        Ok(Parsed::Formula(if head == "and" { Formula::and(fs) } else { Formula::or(fs) }))
                    }
                    "=>" => {
                        if args.len() < 2 {
                            return Err(syntax(line, "=> takes at least two arguments"));
                        }
                        // right associative
                        let mut fs = args.iter().map(|a| self.formula(a)).collect::<Result<Vec<_>, _>>()?;
                        let mut acc = fs.pop().unwrap();
                        while let Some(f) = fs.pop() {
                            acc = Formula::Implies(Box::new(f), Box::new(acc));
                        }
                        Ok(Parsed::Formula(acc))
                    }
                    "=" | "distinct" => {
                        if args.len() < 2 {
                            return Err(syntax(line, &format!("{head} takes at least two arguments")));
                        }
                        let parts = args.iter().map(|a| self.any(a)).collect::<Result<Vec<_>, _>>()?;
                        let mut pairs = Vec::new();
                        let indices: Vec<(usize, usize)> = if head == "=" {
                            (1..parts.len()).map(|j| (j - 1, j)).collect()
                        } else {
                            (0..parts.len()).flat_map(|i| (i + 1..parts.len()).map(move |j| (i, j))).collect()
                        };
                        for (i, j) in indices {
                            let f = match (&parts[i], &parts[j]) {
                                (Parsed::Term(a), Parsed::Term(b)) => {
                                    if a.sort(&self.sig) != b.sort(&self.sig) {
                                        return Err(self.ill_sorted(s));
                                    }
                                    Formula::eq(a.clone(), b.clone())
                                }
                                (Parsed::Formula(a), Parsed::Formula(b)) => {
                                    Formula::Iff(Box::new(a.clone()), Box::new(b.clone()))
                                }
                                _ => return Err(self.ill_sorted(s)),
                            };
                            pairs.push(if head == "=" { f } else { Formula::not(f) });
                        }
                        Ok(Parsed::Formula(Formula::and(pairs)))
                    }
                    "ite" => {
                        if args.len() != 3 {
                            return Err(syntax(line, "ite takes three arguments"));
                        }
                        let guard = self.formula(&args[0])?;
                        match (self.any(&args[1])?, self.any(&args[2])?) {
                            (Parsed::Term(a), Parsed::Term(b)) => {
                                if a.sort(&self.sig) != b.sort(&self.sig) || !guard.is_quantifier_free() {
                                    return Err(self.ill_sorted(s));
                                }
                                Ok(Parsed::Term(Term::ite(guard, a, b)))
                            }
                            (Parsed::Formula(a), Parsed::Formula(b)) => Ok(Parsed::Formula(Formula::or(vec![
                                Formula::and(vec![guard.clone(), a]),
                                Formula::and(vec![Formula::not(guard), b]),
                            ]))),
                            _ => Err(self.ill_sorted(s)),
                        }
                    }
                    "forall" | "exists" => {
                        if args.len() != 2 {
                            return Err(syntax(line, &format!("{head} takes a binder list and a body")));
                        }
                        let binders = args[0].as_list().ok_or_else(|| syntax(line, "expected a binder list"))?;
                        let mark = self.scope.len();
                        let mut vars = Vec::new();
                        for bnd in binders {
                            let pair = bnd.as_list().filter(|p| p.len() == 2).ok_or_else(|| syntax(bnd.line(), "expected (name Sort)"))?;
                            let name = atom(pair.first(), bnd.line(), "variable name")?;
                            let sort = self.sort(&pair[1])?;
                            if sort == SortId::BOOL {
                                return Err(syntax(bnd.line(), "boolean variables are not supported"));
                            }
                            let v = Var::new(self.next_var, sort);
                            self.next_var += 1;
                            self.names.insert(v.id, name.to_string());
                            self.scope.push((name.to_string(), v));
                            vars.push(v);
                        }
                        let body = self.formula(&args[1]);
                        self.scope.truncate(mark);
                        let body = Box::new(body?);
                        if vars.is_empty() {
                            return Ok(Parsed::Formula(*body));
                        }
                        Ok(Parsed::Formula(if head == "forall" { Formula::Forall(vars, body) } else { Formula::Exists(vars, body) }))
                    }
                    _ => {
                        let terms = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                        let sorts: Vec<SortId> = terms.iter().map(|t| t.sort(&self.sig)).collect();
                        let int = SortId::INT;
                        if let Some(id) = self.sig.lookup(head, &sorts) {
                            return Ok(self.application(id, terms));
                        }
                        // integer conveniences: unary minus and n-ary + and *
                        if sorts.iter().all(|s| *s == int) {
                            if head == "-" && terms.len() == 1 {
                                return Ok(Parsed::Term(match &terms[0] {
                                    Term::Int(n) => Term::Int(-n),
                                    t => Term::app(self.sig.interp(Interp::Sub), vec![Term::Int(0), t.clone()]),
                                }));
                            }
                            let op = match head {
                                "+" => Some(Interp::Add),
                                "*" => Some(Interp::Mul),
                                "-" => Some(Interp::Sub),
                                _ => None,
                            };
                            if let (Some(op), true) = (op, terms.len() > 2) {
                                let f = self.sig.interp(op);
                                let mut it = terms.into_iter();
                                let first = it.next().unwrap();
                                return Ok(Parsed::Term(it.fold(first, |acc, t| Term::app(f, vec![acc, t]))));
                            }
                        }
                        if self.sig.by_name(head).is_empty() {
                            Err(ParseError::UnknownSymbol { line, name: head.into() })
                        } else {
                            Err(self.ill_sorted(s))
                        }
                    }
                }
            }
        }
    }

    fn application(&self, id: SymId, args: Vec<Term>) -> Parsed {
        if self.sig.symbol(id).is_predicate() {
            Parsed::Formula(Formula::Atom(Atom::pred(id, args)))
        } else {
            Parsed::Term(Term::app(id, args))
        }
    }
}
