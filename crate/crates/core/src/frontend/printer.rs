use std::collections::BTreeMap;
use std::fmt::Write;

use super::parser::Problem;
use crate::logic::{Atom, BuiltinSort, Formula, Signature, SortId, SymbolRole, Term, Var};

fn quote(name: &str) -> String {
    let plain = !name.is_empty()
        && name.chars().all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c))
        && !name.starts_with(|c: char| c.is_ascii_digit());
    if plain {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

struct Printer<'a> {
    sig: &'a Signature,
    names: Option<&'a BTreeMap<u32, String>>,
}

impl Printer<'_> {
    fn var(&self, v: Var) -> String {
        match self.names.and_then(|n| n.get(&v.id)) {
            Some(n) => quote(n),
            None => format!("x{}", v.id),
        }
    }

    fn sort(&self, s: SortId) -> String {
        quote(&self.sig.sort(s).name)
    }

    fn term(&self, out: &mut String, t: &Term) {
        match t {
            Term::Var(v) => out.push_str(&self.var(*v)),
            Term::Int(n) if *n < 0 => {
                let _ = write!(out, "(- {})", n.unsigned_abs());
            }
            Term::Int(n) => {
                let _ = write!(out, "{n}");
            }
            Term::App(f, args) => self.app(out, &self.sig.symbol(*f).name, args),
            Term::Ite(ite) => {
                out.push_str("(ite ");
                self.formula(out, &ite.guard);
                out.push(' ');
                self.term(out, &ite.then);
                out.push(' ');
                self.term(out, &ite.els);
                out.push(')');
            }
        }
    }

    fn app(&self, out: &mut String, name: &str, args: &[Term]) {
        if args.is_empty() {
            out.push_str(&quote(name));
            return;
        }
        out.push('(');
        out.push_str(&quote(name));
        for a in args {
            out.push(' ');
            self.term(out, a);
        }
        out.push(')');
    }

    fn formula(&self, out: &mut String, f: &Formula) {
        let nary = |out: &mut String, op: &str, parts: &[&Formula]| {
            out.push('(');
            out.push_str(op);
            for p in parts {
                out.push(' ');
                self.formula(out, p);
            }
            out.push(')');
        };
        match f {
            Formula::True => out.push_str("true"),
            Formula::False => out.push_str("false"),
            Formula::Atom(Atom::Eq(l, r)) => {
                out.push_str("(= ");
                self.term(out, l);
                out.push(' ');
                self.term(out, r);
                out.push(')');
            }
            Formula::Atom(Atom::Pred(p, args)) => self.app(out, &self.sig.symbol(*p).name, args),
            Formula::Not(g) => nary(out, "not", &[g]),
            Formula::And(gs) => nary(out, "and", &gs.iter().collect::<Vec<_>>()),
            Formula::Or(gs) => nary(out, "or", &gs.iter().collect::<Vec<_>>()),
            Formula::Implies(a, b) => nary(out, "=>", &[a, b]),
            Formula::Iff(a, b) => nary(out, "=", &[a, b]),
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                out.push_str(if matches!(f, Formula::Forall(..)) { "(forall (" } else { "(exists (" });
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    let _ = write!(out, "({} {})", self.var(*v), self.sort(v.sort));
                }
                out.push_str(") ");
                self.formula(out, g);
                out.push(')');
            }
        }
    }
}

/// S-expression rendering of a term; variables print as `x<id>`.
pub fn print_term(t: &Term, sig: &Signature) -> String {
    let mut s = String::new();
    Printer { sig, names: None }.term(&mut s, t);
    s
}

/// S-expression rendering with source variable names.
pub fn print_term_named(t: &Term, sig: &Signature, names: &BTreeMap<u32, String>) -> String {
    let mut s = String::new();
    Printer { sig, names: Some(names) }.term(&mut s, t);
    s
}

pub fn print_formula(f: &Formula, sig: &Signature) -> String {
    let mut s = String::new();
    Printer { sig, names: None }.formula(&mut s, f);
    s
}

pub fn print_formula_named(f: &Formula, sig: &Signature, names: &BTreeMap<u32, String>) -> String {
    let mut s = String::new();
    Printer { sig, names: Some(names) }.formula(&mut s, f);
    s
}

/// Render a problem back into the input format.
pub fn print_problem(p: &Problem) -> String {
    let pr = Printer { sig: &p.sig, names: Some(&p.var_names) };
    let mut out = String::new();
    for (_, sort) in p.sig.sorts() {
        if sort.builtin == BuiltinSort::Uninterpreted {
            let _ = writeln!(out, "(declare-sort {} 0)", quote(&sort.name));
        }
    }
    for (_, sym) in p.sig.symbols() {
        if sym.interpreted.is_some() || sym.role != SymbolRole::Declared {
            continue;
        }
        let args: Vec<String> = sym.arg_sorts.iter().map(|s| pr.sort(*s)).collect();
        let _ = writeln!(out, "(declare-fun {} ({}) {})", quote(&sym.name), args.join(" "), pr.sort(sym.result));
    }
    if !p.uncomputable.is_empty() {
        let names: Vec<String> = p.uncomputable.iter().map(|n| quote(n)).collect();
        let _ = writeln!(out, "(set-option :uncomputable ({}))", names.join(" "));
    }
    for a in &p.assumptions {
        out.push_str("(assert ");
        pr.formula(&mut out, a);
        out.push_str(")\n");
    }
    if let Some(g) = &p.goal {
        out.push_str("(assert-not ");
        pr.formula(&mut out, g);
        out.push_str(")\n");
    }
    out
}
