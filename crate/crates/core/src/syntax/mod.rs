//! Vocabularies, terms, formulas, theories and formula sequences.

mod formula;
mod sequence;
mod term;
mod vocab;

use thiserror::Error;

pub use formula::{fresh_name, Formula, FormulaKind, Quantifier};
pub use sequence::{check_cauchy, CauchyReport, CauchyWitness, FormulaSequence, Schedule, Theory};
pub use term::Term;
pub use vocab::{validate_symbol_name, Symbol, SymbolKind, Vocabulary, RESERVED};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("`{0}` is not a usable symbol name")]
    InvalidName(String),
    #[error("symbol `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("theory member {0} has free variables")]
    NotASentence(String),
    #[error("formula {formula} has free variables outside the frame ({frame})")]
    OutsideFrame { formula: String, frame: String },
}
