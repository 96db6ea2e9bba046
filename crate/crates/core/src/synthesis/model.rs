//! Finite interpretations read from JSON fixtures.
//!
//! ```json
//! { "sorts": { "G": ["e", "a", "b"] },
//!   "functions": { "e": 0, "i": [0, 2, 1], "*": [[0, 1, 2], [1, 2, 0], [2, 0, 1]] },
//!   "int_range": [-3, 3] }
//! ```
//!
//! Elements of a sort are `0..n`, given as a count or as a list of names.
//! Tables are nested arrays indexed by argument values; predicates use
//! booleans. Integers are interpreted natively and quantify over `int_range`.

use std::collections::HashMap;

use serde::Deserialize;

use crate::logic::{Atom, Formula, Interp, Signature, SortId, SymId, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("malformed model: {0}")]
    Json(String),
    #[error("model names unknown sort `{0}`")]
    UnknownSort(String),
    #[error("model names unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("table of `{0}` has the wrong shape or out-of-range entries")]
    BadTable(String),
    #[error("sort `{0}` needs at least one element")]
    EmptySort(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("symbol `{0}` has no interpretation")]
    Uninterpreted(String),
    #[error("integer overflow")]
    Overflow,
    #[error("unbound variable")]
    Unbound,
    #[error("cannot quantify over sort `{0}`")]
    Unbounded(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SortSpec {
    Count(usize),
    Names(Vec<String>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(default)]
    sorts: HashMap<String, SortSpec>,
    #[serde(default)]
    functions: HashMap<String, serde_json::Value>,
    int_range: Option<(i64, i64)>,
}

/// Values are integers for `Int`, element indices for finite sorts and
/// `0`/`1` for booleans.
pub type Value = i64;

#[derive(Clone, Debug)]
pub struct FiniteModel {
    sizes: HashMap<SortId, usize>,
    names: HashMap<SortId, Vec<String>>,
    /// Flattened row-major tables.
    tables: HashMap<SymId, Vec<Value>>,
    pub int_range: Option<(i64, i64)>,
}

/// Assignment of values to variables and to extra constants such as inputs.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub vars: HashMap<Var, Value>,
    pub consts: HashMap<SymId, Value>,
}

impl FiniteModel {
    pub fn from_json(text: &str, sig: &Signature) -> Result<Self, ModelError> {
        let raw: RawModel = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        let mut sizes = HashMap::new();
        let mut names = HashMap::new();
        for (name, spec) in raw.sorts {
            let id = sig.sort_by_name(&name).ok_or_else(|| ModelError::UnknownSort(name.clone()))?;
            let n = match spec {
                SortSpec::Count(n) => n,
                SortSpec::Names(ns) => {
                    let n = ns.len();
                    names.insert(id, ns);
                    n
                }
            };
            if n == 0 {
                return Err(ModelError::EmptySort(name));
            }
            sizes.insert(id, n);
        }
        let mut model = FiniteModel { sizes, names, tables: HashMap::new(), int_range: raw.int_range };
        for (name, value) in raw.functions {
            let id = sig
                .declared_by_name(&name)
                .into_iter()
                .find(|&id| sig.symbol(id).arg_sorts.iter().all(|s| model.sizes.contains_key(s)))
                .ok_or_else(|| ModelError::UnknownSymbol(name.clone()))?;
            let sym = sig.symbol(id);
            let mut flat = Vec::new();
            let dims: Vec<usize> = sym.arg_sorts.iter().map(|s| model.sizes[s]).collect();
            if !flatten(&value, &dims, &mut flat) {
                return Err(ModelError::BadTable(name));
            }
            let ok = flat.iter().all(|&v| model.in_sort(v, sym.result));
            if !ok {
                return Err(ModelError::BadTable(name));
            }
            model.tables.insert(id, flat);
        }
        Ok(model)
    }

    fn in_sort(&self, v: Value, sort: SortId) -> bool {
        match sort {
            SortId::BOOL => v == 0 || v == 1,
            SortId::INT => true,
            s => self.sizes.get(&s).is_some_and(|&n| (0..n as i64).contains(&v)),
        }
    }

    /// Every value of `sort`. Integers range over `int_range`, smallest
    /// magnitude first and positive before negative.
    pub fn domain(&self, sort: SortId, sig: &Signature) -> Result<Vec<Value>, EvalError> {
        match sort {
            SortId::BOOL => Ok(vec![0, 1]),
            SortId::INT => {
                let (lo, hi) = self.int_range.ok_or_else(|| EvalError::Unbounded("Int".into()))?;
                let mut vals: Vec<Value> = (lo..=hi).collect();
                vals.sort_by_key(|&v| (v.unsigned_abs(), v < 0));
                Ok(vals)
            }
            s => match self.sizes.get(&s) {
                Some(&n) => Ok((0..n as i64).collect()),
                None => Err(EvalError::Unbounded(sig.sort(s).name.clone())),
            },
        }
    }

    pub fn show_value(&self, v: Value, sort: SortId) -> String {
        match (sort, self.names.get(&sort)) {
            (SortId::BOOL, _) => (v != 0).to_string(),
            (_, Some(ns)) => ns.get(v as usize).cloned().unwrap_or_else(|| v.to_string()),
            _ => v.to_string(),
        }
    }

    pub fn eval_term(&self, t: &Term, env: &Env, sig: &Signature) -> Result<Value, EvalError> {
        match t {
            Term::Var(v) => env.vars.get(v).copied().ok_or(EvalError::Unbound),
            Term::Int(n) => Ok(*n),
            Term::Ite(ite) => {
                if self.eval_formula(&ite.guard, env, sig)? {
                    self.eval_term(&ite.then, env, sig)
                } else {
                    self.eval_term(&ite.els, env, sig)
                }
            }
            Term::App(f, args) => {
                if let Some(&v) = env.consts.get(f) {
                    return Ok(v);
                }
                let vals = args.iter().map(|a| self.eval_term(a, env, sig)).collect::<Result<Vec<_>, _>>()?;
                self.apply(*f, &vals, sig)
            }
        }
    }

    fn apply(&self, f: SymId, vals: &[Value], sig: &Signature) -> Result<Value, EvalError> {
        let sym = sig.symbol(f);
        if let Some(op) = sym.interpreted {
            let (a, b) = (vals[0], vals[1]);
            return match op {
                Interp::Add => a.checked_add(b).ok_or(EvalError::Overflow),
                Interp::Sub => a.checked_sub(b).ok_or(EvalError::Overflow),
                Interp::Mul => a.checked_mul(b).ok_or(EvalError::Overflow),
                Interp::Lt => Ok((a < b) as Value),
                Interp::Le => Ok((a <= b) as Value),
                Interp::Gt => Ok((a > b) as Value),
                Interp::Ge => Ok((a >= b) as Value),
            };
        }
        let table = self.tables.get(&f).ok_or_else(|| EvalError::Uninterpreted(sym.name.clone()))?;
        let mut index = 0usize;
        for (v, s) in vals.iter().zip(&sym.arg_sorts) {
            index = index * self.sizes[s] + *v as usize;
        }
        Ok(table[index])
    }

    pub fn eval_atom(&self, a: &Atom, env: &Env, sig: &Signature) -> Result<bool, EvalError> {
        match a {
            Atom::Eq(l, r) => Ok(self.eval_term(l, env, sig)? == self.eval_term(r, env, sig)?),
            Atom::Pred(p, args) => {
                if let Some(&v) = env.consts.get(p) {
                    return Ok(v != 0);
                }
                let vals = args.iter().map(|t| self.eval_term(t, env, sig)).collect::<Result<Vec<_>, _>>()?;
                Ok(self.apply(*p, &vals, sig)? != 0)
            }
        }
    }

    pub fn eval_formula(&self, f: &Formula, env: &Env, sig: &Signature) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => self.eval_atom(a, env, sig)?,
            Formula::Not(g) => !self.eval_formula(g, env, sig)?,
            Formula::And(gs) => {
                for g in gs {
                    if !self.eval_formula(g, env, sig)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(gs) => {
                for g in gs {
                    if self.eval_formula(g, env, sig)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.eval_formula(a, env, sig)? || self.eval_formula(b, env, sig)?,
            Formula::Iff(a, b) => self.eval_formula(a, env, sig)? == self.eval_formula(b, env, sig)?,
            Formula::Forall(vs, body) => self.quantify(vs, body, env, sig, true)?,
            Formula::Exists(vs, body) => self.quantify(vs, body, env, sig, false)?,
        })
    }

    fn quantify(&self, vs: &[Var], body: &Formula, env: &Env, sig: &Signature, all: bool) -> Result<bool, EvalError> {
        let Some((v, rest)) = vs.split_first() else { return self.eval_formula(body, env, sig) };
        let mut env = env.clone();
        for value in self.domain(v.sort, sig)? {
            env.vars.insert(*v, value);
            if self.quantify(rest, body, &env, sig, all)? != all {
                return Ok(!all);
            }
        }
        Ok(all)
    }
}

fn flatten(v: &serde_json::Value, dims: &[usize], out: &mut Vec<Value>) -> bool {
    match dims.split_first() {
        None => match v {
            serde_json::Value::Bool(b) => {
                out.push(*b as Value);
                true
            }
            serde_json::Value::Number(n) => n.as_i64().map(|n| out.push(n)).is_some(),
            _ => false,
        },
        Some((&n, rest)) => match v.as_array() {
            Some(items) if items.len() == n => items.iter().all(|item| flatten(item, rest, out)),
            _ => false,
        },
    }
}
