//! Text formats for vocabularies, structures, formulas, theories, formula
//! sequences and interpretations, plus JSON reports.
//!
//! Everything is an s-expression. Serialization is canonical: formulas are
//! alpha-normalized, tables are listed in lexicographic tuple order and
//! rationals are reduced, so equal objects always print identically.

mod parse;
mod render;
mod report;
mod sexpr;

use std::fmt;
use std::path::Path;

use serde::Serialize;

pub use parse::{
    parse_formula, parse_interpretation, parse_sequence, parse_structure, parse_term, parse_theory,
    parse_value, parse_vocabulary,
};
pub use render::{serialize, Render};
pub use report::{Report, Status, SCHEMA_VERSION};
pub use sexpr::{parse_all, parse_one, Pos, Sexp};

/// Stable diagnostic codes; each malformed-input class has its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagCode {
    Syntax,
    UnknownSymbol,
    ArityMismatch,
    Unbalanced,
    OutOfRange,
    BadLiteral,
    IncompleteTable,
    DuplicateEntry,
    ForeignElement,
    InvalidDeclaration,
    NotASentence,
    Frame,
    InterpretationShape,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::Syntax => "syntax",
            DiagCode::UnknownSymbol => "unknown-symbol",
            DiagCode::ArityMismatch => "arity-mismatch",
            DiagCode::Unbalanced => "unbalanced",
            DiagCode::OutOfRange => "out-of-range",
            DiagCode::BadLiteral => "bad-literal",
            DiagCode::IncompleteTable => "incomplete-table",
            DiagCode::DuplicateEntry => "duplicate-entry",
            DiagCode::ForeignElement => "foreign-element",
            DiagCode::InvalidDeclaration => "invalid-declaration",
            DiagCode::NotASentence => "not-a-sentence",
            DiagCode::Frame => "frame",
            DiagCode::InterpretationShape => "interpretation-shape",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn at(code: DiagCode, pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: [{}] {}",
            self.line, self.column, self.code, self.message
        )
    }
}

impl std::error::Error for Diagnostic {}

/// Kinds of source document, each with its own file extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    Vocabulary,
    Structure,
    Formula,
    Theory,
    Interpretation,
    Sequence,
}

impl SourceKind {
    pub fn extension(self) -> &'static str {
        match self {
            SourceKind::Vocabulary => "cmlv",
            SourceKind::Structure => "cmls",
            SourceKind::Formula => "cmlf",
            SourceKind::Theory => "cmlt",
            SourceKind::Interpretation => "cmli",
            SourceKind::Sequence => "cmlq",
        }
    }

    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?;
        [
            SourceKind::Vocabulary,
            SourceKind::Structure,
            SourceKind::Formula,
            SourceKind::Theory,
            SourceKind::Interpretation,
            SourceKind::Sequence,
        ]
        .into_iter()
        .find(|k| k.extension() == ext)
    }

    /// Guesses the kind from the head of the first expression. Anything that
    /// is not a recognised document head is taken to be a formula.
    pub fn detect(text: &str) -> Result<Self, Diagnostic> {
        let first = parse_all(text)?;
        let head = first.first().and_then(Sexp::head);
        Ok(match head {
            Some("vocabulary") => SourceKind::Vocabulary,
            Some("structure") => SourceKind::Structure,
            Some("theory") => SourceKind::Theory,
            Some("interpretation") => SourceKind::Interpretation,
            Some("sequence") => SourceKind::Sequence,
            _ => SourceKind::Formula,
        })
    }
}

#[cfg(test)]
mod tests;
