use std::collections::HashMap;
use std::fmt;

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SortId(pub u32);

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SymId(pub u32);

impl SortId {
    pub const INT: SortId = SortId(0);
    pub const BOOL: SortId = SortId(1);
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum BuiltinSort {
    Integer,
    Boolean,
    Uninterpreted,
}

#[derive(Clone, Debug)]
pub struct Sort {
    pub name: String,
    pub builtin: BuiltinSort,
}

/// Integer operations with a fixed meaning.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Interp {
    Add,
    Sub,
    Mul,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Interp {
    pub fn name(self) -> &'static str {
        match self {
            Interp::Add => "+",
            Interp::Sub => "-",
            Interp::Mul => "*",
            Interp::Lt => "<",
            Interp::Le => "<=",
            Interp::Gt => ">",
            Interp::Ge => ">=",
        }
    }

    pub fn is_predicate(self) -> bool {
        matches!(self, Interp::Lt | Interp::Le | Interp::Gt | Interp::Ge)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum SymbolRole {
    #[default]
    Declared,
    /// Skolem constant standing for a program input.
    InputSkolem,
    /// Skolem function introduced while clausifying an assumption.
    Skolem,
    /// The input variable a program reads; replaces its skolem constant in programs.
    Input,
    Answer,
}

#[derive(Clone, Debug)]
pub struct Symbol {
    pub name: String,
    pub arg_sorts: Vec<SortId>,
    pub result: SortId,
    pub interpreted: Option<Interp>,
    pub computable: bool,
    pub role: SymbolRole,
}

impl Symbol {
    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }

    pub fn is_predicate(&self) -> bool {
        self.result == SortId::BOOL
    }

    pub fn is_skolem(&self) -> bool {
        matches!(self.role, SymbolRole::InputSkolem | SymbolRole::Skolem)
    }

    pub fn is_answer(&self) -> bool {
        self.role == SymbolRole::Answer
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("sort `{0}` is already declared")]
    DuplicateSort(String),
    #[error("symbol `{0}` is already declared with the same argument sorts")]
    DuplicateSymbol(String),
    #[error("a second answer predicate `{0}` was requested")]
    SecondAnswerPredicate(String),
    #[error("interpreted symbol `{0}` cannot be uncomputable")]
    UncomputableInterpreted(String),
}

/// Sorts and symbols of one problem.
///
/// Sort 0 is the integer sort and sort 1 the boolean sort; the integer
/// operations are present in every signature. Names may be overloaded by
/// argument sorts (a declared `*` over a group sort coexists with integer `*`).
#[derive(Clone, Debug)]
pub struct Signature {
    sorts: Vec<Sort>,
    symbols: Vec<Symbol>,
    sort_names: HashMap<String, SortId>,
    by_name: HashMap<String, Vec<SymId>>,
    answer: Option<SymId>,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    pub fn new() -> Self {
        let mut sig = Signature {
            sorts: Vec::new(),
            symbols: Vec::new(),
            sort_names: HashMap::new(),
            by_name: HashMap::new(),
            answer: None,
        };
        sig.sorts.push(Sort { name: "Int".into(), builtin: BuiltinSort::Integer });
        sig.sorts.push(Sort { name: "Bool".into(), builtin: BuiltinSort::Boolean });
        sig.sort_names.insert("Int".into(), SortId::INT);
        sig.sort_names.insert("Bool".into(), SortId::BOOL);
        let int = SortId::INT;
        for op in [Interp::Add, Interp::Sub, Interp::Mul] {
            sig.push(Symbol {
                name: op.name().into(),
                arg_sorts: vec![int, int],
                result: int,
                interpreted: Some(op),
                computable: true,
                role: SymbolRole::Declared,
            });
        }
        for op in [Interp::Lt, Interp::Le, Interp::Gt, Interp::Ge] {
            sig.push(Symbol {
                name: op.name().into(),
                arg_sorts: vec![int, int],
                result: SortId::BOOL,
                interpreted: Some(op),
                computable: true,
                role: SymbolRole::Declared,
            });
        }
        sig
    }

    fn push(&mut self, sym: Symbol) -> SymId {
        let id = SymId(self.symbols.len() as u32);
        self.by_name.entry(sym.name.clone()).or_default().push(id);
        self.symbols.push(sym);
        id
    }

    pub fn declare_sort(&mut self, name: &str) -> Result<SortId, SignatureError> {
        if self.sort_names.contains_key(name) {
            return Err(SignatureError::DuplicateSort(name.into()));
        }
        let id = SortId(self.sorts.len() as u32);
        self.sorts.push(Sort { name: name.into(), builtin: BuiltinSort::Uninterpreted });
        self.sort_names.insert(name.into(), id);
        Ok(id)
    }

    /// Declares an uninterpreted symbol, computable until marked otherwise.
    pub fn declare(
        &mut self,
        name: &str,
        arg_sorts: Vec<SortId>,
        result: SortId,
    ) -> Result<SymId, SignatureError> {
        self.declare_with_role(name, arg_sorts, result, SymbolRole::Declared, true)
    }

    pub fn declare_with_role(
        &mut self,
        name: &str,
        arg_sorts: Vec<SortId>,
        result: SortId,
        role: SymbolRole,
        computable: bool,
    ) -> Result<SymId, SignatureError> {
        if self.lookup(name, &arg_sorts).is_some() {
            return Err(SignatureError::DuplicateSymbol(name.into()));
        }
        if role == SymbolRole::Answer {
            if let Some(prev) = self.answer {
                return Err(SignatureError::SecondAnswerPredicate(self.symbol(prev).name.clone()));
            }
        }
        let id = self.push(Symbol {
            name: name.into(),
            arg_sorts,
            result,
            interpreted: None,
            computable,
            role,
        });
        if role == SymbolRole::Answer {
            self.answer = Some(id);
        }
        Ok(id)
    }

    /// A name not used by any symbol or sort, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        if !self.by_name.contains_key(base) && !self.sort_names.contains_key(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}_{i}"))
            .find(|n| !self.by_name.contains_key(n) && !self.sort_names.contains_key(n))
            .expect("unbounded search")
    }

    pub fn set_computable(&mut self, id: SymId, computable: bool) -> Result<(), SignatureError> {
        let sym = &mut self.symbols[id.0 as usize];
        if sym.interpreted.is_some() && !computable {
            return Err(SignatureError::UncomputableInterpreted(sym.name.clone()));
        }
        sym.computable = computable;
        Ok(())
    }

    pub fn symbol(&self, id: SymId) -> &Symbol {
        &self.symbols[id.0 as usize]
    }

    pub fn sort(&self, id: SortId) -> &Sort {
        &self.sorts[id.0 as usize]
    }

    pub fn sort_by_name(&self, name: &str) -> Option<SortId> {
        self.sort_names.get(name).copied()
    }

    pub fn sorts(&self) -> impl Iterator<Item = (SortId, &Sort)> {
        self.sorts.iter().enumerate().map(|(i, s)| (SortId(i as u32), s))
    }

    pub fn symbols(&self) -> impl DoubleEndedIterator<Item = (SymId, &Symbol)> {
        self.symbols.iter().enumerate().map(|(i, s)| (SymId(i as u32), s))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// All symbols carrying `name`, in declaration order.
    pub fn by_name(&self, name: &str) -> &[SymId] {
        self.by_name.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The symbol named `name` taking exactly `args`.
    pub fn lookup(&self, name: &str, args: &[SortId]) -> Option<SymId> {
        self.by_name(name)
            .iter()
            .copied()
            .find(|&id| self.symbol(id).arg_sorts == args)
    }

    /// The user-declared (non-interpreted) symbols with this name.
    pub fn declared_by_name(&self, name: &str) -> Vec<SymId> {
        self.by_name(name)
            .iter()
            .copied()
            .filter(|&id| self.symbol(id).interpreted.is_none())
            .collect()
    }

    pub fn interp(&self, op: Interp) -> SymId {
        self.by_name(op.name())
            .iter()
            .copied()
            .find(|&id| self.symbol(id).interpreted == Some(op))
            .expect("integer operations are always present")
    }

    pub fn answer_symbol(&self) -> Option<SymId> {
        self.answer
    }

    pub fn is_computable(&self, id: SymId) -> bool {
        self.symbol(id).computable
    }
}

impl fmt::Display for SortId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sort#{}", self.0)
    }
}
