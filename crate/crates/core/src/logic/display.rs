//! Human-readable infix rendering used by traces and error messages.

use super::clause::{Clause, Literal};
use super::formula::{Atom, Formula};
use super::signature::Signature;
use super::term::Term;

fn is_operator(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| !c.is_alphanumeric() && c != '_')
}

fn write_term(out: &mut String, t: &Term, sig: &Signature, nested: bool) {
    match t {
        Term::Var(v) => out.push_str(&var_name(v.id)),
        Term::Int(n) => out.push_str(&n.to_string()),
        Term::App(f, args) => {
            let name = &sig.symbol(*f).name;
            if args.len() == 2 && is_operator(name) {
                if nested {
                    out.push('(');
                }
                write_term(out, &args[0], sig, true);
                out.push_str(name);
                write_term(out, &args[1], sig, true);
                if nested {
                    out.push(')');
                }
            } else {
                out.push_str(name);
                if !args.is_empty() {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        write_term(out, a, sig, false);
                    }
                    out.push(')');
                }
            }
        }
        Term::Ite(ite) => {
            out.push_str("ite(");
            write_formula(out, &ite.guard, sig);
            out.push_str(", ");
            write_term(out, &ite.then, sig, false);
            out.push_str(", ");
            write_term(out, &ite.els, sig, false);
            out.push(')');
        }
    }
}

fn var_name(id: u32) -> String {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    match NAMES.get(id as usize) {
        Some(n) => n.to_string(),
        None => format!("x{id}"),
    }
}

fn write_atom(out: &mut String, a: &Atom, positive: bool, sig: &Signature) {
    match a {
        Atom::Eq(l, r) => {
            write_term(out, l, sig, false);
            out.push_str(if positive { " = " } else { " != " });
            write_term(out, r, sig, false);
        }
        Atom::Pred(p, args) => {
            if !positive {
                out.push('~');
            }
            let name = &sig.symbol(*p).name;
            if args.len() == 2 && is_operator(name) {
                write_term(out, &args[0], sig, true);
                out.push_str(name);
                write_term(out, &args[1], sig, true);
            } else {
                write_term(out, &Term::App(*p, args.clone()), sig, false);
            }
        }
    }
}

fn write_formula(out: &mut String, f: &Formula, sig: &Signature) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(a) => write_atom(out, a, true, sig),
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => write_atom(out, a, false, sig),
            _ => {
                out.push_str("~(");
                write_formula(out, g, sig);
                out.push(')');
            }
        },
        Formula::And(gs) | Formula::Or(gs) => {
            let sep = if matches!(f, Formula::And(_)) { " & " } else { " | " };
            out.push('(');
            for (i, g) in gs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                write_formula(out, g, sig);
            }
            out.push(')');
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let sep = if matches!(f, Formula::Implies(..)) { " => " } else { " <=> " };
            out.push('(');
            write_formula(out, a, sig);
            out.push_str(sep);
            write_formula(out, b, sig);
            out.push(')');
        }
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            out.push_str(if matches!(f, Formula::Forall(..)) { "![" } else { "?[" });
            let names: Vec<String> = vs.iter().map(|v| var_name(v.id)).collect();
            out.push_str(&names.join(","));
            out.push_str("]: ");
            write_formula(out, g, sig);
        }
    }
}

pub fn show_term(t: &Term, sig: &Signature) -> String {
    let mut s = String::new();
    write_term(&mut s, t, sig, false);
    s
}

pub fn show_formula(f: &Formula, sig: &Signature) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, sig);
    s
}

pub fn show_literal(l: &Literal, sig: &Signature) -> String {
    let mut s = String::new();
    write_atom(&mut s, &l.atom, l.positive, sig);
    s
}

/// `lit | lit | ans(r)`, or `$false` for the empty clause.
pub fn show_clause(c: &Clause, sig: &Signature) -> String {
    let mut parts: Vec<String> = c.literals.iter().map(|l| show_literal(l, sig)).collect();
    if let Some(r) = &c.answer {
        parts.push(format!("ans({})", show_term(r, sig)));
    }
    if parts.is_empty() {
        "$false".to_string()
    } else {
        parts.join(" | ")
    }
}
