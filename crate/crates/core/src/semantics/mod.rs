//! Finite general structures, evaluation, Leibniz reduction and comparisons.

mod compare;
mod eval;
pub mod family;
mod leibniz;
mod structure;

use thiserror::Error;

use crate::syntax::SyntaxError;

pub use compare::{
    distinguish, distinguish_in, is_embedding, is_model, is_model_within, Distinction,
    EmbeddingReport, ModelCheck,
};
pub use eval::{evaluate, evaluate_labels, Evaluator};
pub use family::{generate_family, FamilyConfig};
pub use leibniz::{leibniz_partition, reduce, Partition, Reduction};
pub use structure::{decode_index, encode_tuple, tuples, Element, GeneralStructure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("element `{0}` is not in the universe")]
    ForeignElement(String),
    #[error("universe must be non-empty")]
    EmptyUniverse,
    #[error("element `{0}` listed twice")]
    DuplicateElement(String),
    #[error("incomplete table {0}")]
    IncompleteTable(String),
    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),
    #[error("map is not total on the universe")]
    NotTotal,
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
