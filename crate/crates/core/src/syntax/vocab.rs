use std::collections::HashMap;

use super::{Formula, FormulaKind, SyntaxError, Term};
use crate::kernel::parse_rational;

/// Words the surface syntax reserves; no symbol may use them.
pub const RESERVED: &[&str] = &[
    "sup", "inf", "neg", "dotminus", "dotplus", "min", "max", "half", "absdiff",
];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Predicate(usize),
    Function(usize),
    Constant(usize),
}

/// Predicate, function and constant symbols in declaration order.
#[derive(Clone, Debug, Default)]
pub struct Vocabulary {
    predicates: Vec<Symbol>,
    functions: Vec<Symbol>,
    constants: Vec<String>,
    index: HashMap<String, SymbolKind>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.predicates == other.predicates
            && self.functions == other.functions
            && self.constants == other.constants
    }
}

impl Eq for Vocabulary {}

/// Checks that `name` can be written as a single token and is not a keyword or literal.
pub fn validate_symbol_name(name: &str) -> Result<(), SyntaxError> {
    let bad = name.is_empty()
        || name.starts_with('#')
        || name
            .chars()
            .any(|c| c.is_whitespace() || c == '(' || c == ')' || c == ';')
        || RESERVED.contains(&name)
        || parse_rational(name).is_ok();
    if bad {
        Err(SyntaxError::InvalidName(name.to_string()))
    } else {
        Ok(())
    }
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    fn claim(&mut self, name: &str, kind: SymbolKind) -> Result<(), SyntaxError> {
        validate_symbol_name(name)?;
        if self.index.contains_key(name) {
            return Err(SyntaxError::DuplicateSymbol(name.to_string()));
        }
        self.index.insert(name.to_string(), kind);
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        if arity == 0 {
            return Err(SyntaxError::ZeroArity(name.to_string()));
        }
        self.claim(name, SymbolKind::Predicate(self.predicates.len()))?;
        self.predicates.push(Symbol {
            name: name.to_string(),
            arity,
        });
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        if arity == 0 {
            return Err(SyntaxError::ZeroArity(name.to_string()));
        }
        self.claim(name, SymbolKind::Function(self.functions.len()))?;
        self.functions.push(Symbol {
            name: name.to_string(),
            arity,
        });
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SyntaxError> {
        self.claim(name, SymbolKind::Constant(self.constants.len()))?;
        self.constants.push(name.to_string());
        Ok(())
    }

    /// Convenience constructor for relational vocabularies.
    pub fn relational<'a>(
        predicates: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self, SyntaxError> {
        let mut v = Self::new();
        for (name, arity) in predicates {
            v.add_predicate(name, arity)?;
        }
        Ok(v)
    }

    pub fn predicates(&self) -> &[Symbol] {
        &self.predicates
    }

    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolKind> {
        self.index.get(name).copied()
    }

    pub fn predicate_index(&self, name: &str) -> Option<usize> {
        match self.lookup(name) {
            Some(SymbolKind::Predicate(i)) => Some(i),
            _ => None,
        }
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        match self.lookup(name) {
            Some(SymbolKind::Function(i)) => Some(i),
            _ => None,
        }
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        match self.lookup(name) {
            Some(SymbolKind::Constant(i)) => Some(i),
            _ => None,
        }
    }

    pub fn is_relational(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Same symbols with the predicate list reversed.
    pub fn with_reversed_predicates(&self) -> Self {
        let mut v = Self::new();
        for p in self.predicates.iter().rev() {
            v.add_predicate(&p.name, p.arity).unwrap();
        }
        for f in &self.functions {
            v.add_function(&f.name, f.arity).unwrap();
        }
        for c in &self.constants {
            v.add_constant(c).unwrap();
        }
        v
    }

    pub fn check_term(&self, t: &Term) -> Result<(), SyntaxError> {
        match t {
            Term::Var(_) | Term::Elem(_) => Ok(()),
            Term::Const(c) => match self.lookup(c) {
                Some(SymbolKind::Constant(_)) => Ok(()),
                _ => Err(SyntaxError::UnknownSymbol(c.clone())),
            },
            Term::App(f, args) => {
                let i = self
                    .function_index(f)
                    .ok_or_else(|| SyntaxError::UnknownSymbol(f.clone()))?;
                let expected = self.functions[i].arity;
                if expected != args.len() {
                    return Err(SyntaxError::ArityMismatch {
                        symbol: f.clone(),
                        expected,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    /// Verifies every symbol in `f` is declared with a matching arity.
    pub fn check_formula(&self, f: &Formula) -> Result<(), SyntaxError> {
        match f.kind() {
            FormulaKind::Atom { predicate, args } => {
                let i = self
                    .predicate_index(predicate)
                    .ok_or_else(|| SyntaxError::UnknownSymbol(predicate.clone()))?;
                let expected = self.predicates[i].arity;
                if expected != args.len() {
                    return Err(SyntaxError::ArityMismatch {
                        symbol: predicate.clone(),
                        expected,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            FormulaKind::Apply { args, .. } => args.iter().try_for_each(|a| self.check_formula(a)),
            FormulaKind::Quant { body, .. } => self.check_formula(body),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_across_kinds() {
        let mut v = Vocabulary::new();
        v.add_predicate("P", 1).unwrap();
        assert!(matches!(
            v.add_constant("P"),
            Err(SyntaxError::DuplicateSymbol(_))
        ));
        assert!(matches!(
            v.add_function("sup", 1),
            Err(SyntaxError::InvalidName(_))
        ));
        assert!(matches!(
            v.add_constant("1/2"),
            Err(SyntaxError::InvalidName(_))
        ));
        assert!(matches!(
            v.add_predicate("R", 0),
            Err(SyntaxError::ZeroArity(_))
        ));
    }

    #[test]
    fn declaration_order_is_kept() {
        let v = Vocabulary::relational([("Q", 2), ("P", 1)]).unwrap();
        let names: Vec<_> = v.predicates().iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, ["Q", "P"]);
        let r = v.with_reversed_predicates();
        let names: Vec<_> = r.predicates().iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, ["P", "Q"]);
    }
}
