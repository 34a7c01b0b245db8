//! Pre-metric expansions: synthesis of a distance predicate from a relational
//! vocabulary, exact verification of its pseudo-metric and modulus
//! properties, and the formula-sequence transforms used along the way.

mod checks;
mod morley;
mod synth;
mod transforms;

use thiserror::Error;

use crate::semantics::SemanticsError;
use crate::syntax::SyntaxError;

pub use checks::{
    check_modulus, check_modulus_grid, check_pseudometric, check_uniform_equivalence,
    distance_table, met_axioms, DistanceSource, ModulusReport, ModulusWitness, PseudometricReport,
    PseudometricViolation, UniformEquivalenceReport,
};
pub use morley::{morleyize, MorleyVocabulary};
pub use synth::{
    enumerate_patterns, eval_distance, expand_structure, synthesize_distance, ApproximateDistance,
    AtomicPattern, MetricSignature, Modulus, Slot, Synthesis,
};
pub use transforms::{
    check_steps, force_convergence, force_convergence_with, pseudometrize, StepReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpansionError {
    #[error("vocabulary has function symbols; morleyize it first")]
    FunctionSymbols,
    #[error("atomic formula {formula} nests terms to depth {depth}, beyond the limit {limit}")]
    DepthExceeded {
        formula: String,
        depth: usize,
        limit: usize,
    },
    #[error("Morleyization depth must be at least 1")]
    ZeroDepth,
    #[error("distance formulas must have free variables among x, y; got {0:?}")]
    BadFrame(Vec<String>),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("distance table has {got} entries, expected {expected}")]
    BadTable { expected: usize, got: usize },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
