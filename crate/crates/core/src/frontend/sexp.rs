use std::fmt;

/// A parsed s-expression with the line it starts on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    pub fn line(&self) -> usize {
        match self {
            Sexp::Atom(_, l) | Sexp::List(_, l) => *l,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            Sexp::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(xs, _) => Some(xs),
            Sexp::Atom(..) => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a, _) => write!(f, "{a}"),
            Sexp::List(xs, _) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct SexpError {
    pub line: usize,
    pub msg: String,
}

/// Read every top-level s-expression. `;` starts a comment; `|...|` quotes a
/// symbol, with the bars stripped.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, SexpError> {
    let mut stack: Vec<(Vec<Sexp>, usize)> = Vec::new();
    let mut top = Vec::new();
    let mut line = 1;
    let mut chars = text.chars().peekable();
    let err = |line, msg: &str| SexpError { line, msg: msg.into() };

    fn push(stack: &mut [(Vec<Sexp>, usize)], top: &mut Vec<Sexp>, e: Sexp) {
        match stack.last_mut() {
            Some((xs, _)) => xs.push(e),
            None => top.push(e),
        }
    }

    while let Some(c) = chars.next() {
        match c {
            '\n' => line += 1,
            c if c.is_whitespace() => {}
            ';' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        break;
                    }
                }
            }
            '(' => stack.push((Vec::new(), line)),
            ')' => {
                let (xs, start) = stack.pop().ok_or_else(|| err(line, "unbalanced `)`"))?;
                push(&mut stack, &mut top, Sexp::List(xs, start));
            }
            '|' => {
                let start = line;
                let mut name = String::new();
                loop {
                    match chars.next() {
                        Some('|') => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            name.push(c);
                        }
                        None => return Err(err(start, "unterminated `|` symbol")),
                    }
                }
                push(&mut stack, &mut top, Sexp::Atom(name, start));
            }
            '"' => {
                let start = line;
                let mut s = String::from('"');
                loop {
                    match chars.next() {
                        Some('"') => {
                            // "" is an escaped quote
                            if chars.peek() == Some(&'"') {
                                chars.next();
                                s.push('"');
                            } else {
                                break;
                            }
                        }
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                        None => return Err(err(start, "unterminated string")),
                    }
                }
                s.push('"');
                push(&mut stack, &mut top, Sexp::Atom(s, start));
            }
            c => {
                let mut atom = String::from(c);
                while let Some(&n) = chars.peek() {
                    if n.is_whitespace() || matches!(n, '(' | ')' | ';' | '|' | '"') {
                        break;
                    }
                    atom.push(n);
                    chars.next();
                }
                push(&mut stack, &mut top, Sexp::Atom(atom, line));
            }
        }
    }
    if let Some((_, start)) = stack.last() {
        return Err(err(*start, "unbalanced `(`"));
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_and_comments() {
        let xs = read_all("; header\n(assert (= (* x y) e)) ; tail\n(check-synth)").unwrap();
        assert_eq!(xs.len(), 2);
        assert_eq!(xs[0].to_string(), "(assert (= (* x y) e))");
        assert_eq!(xs[0].line(), 2);
        assert_eq!(xs[1].line(), 3);
    }

    #[test]
    fn quoted_symbols_lose_their_bars() {
        let xs = read_all("(f |a b|)").unwrap();
        assert_eq!(xs[0].as_list().unwrap()[1].as_atom(), Some("a b"));
    }

    #[test]
    fn unbalanced_input_is_reported() {
        assert_eq!(read_all("(a (b)").unwrap_err().line, 1);
        assert_eq!(read_all("a)\n").unwrap_err().msg, "unbalanced `)`");
    }
}
