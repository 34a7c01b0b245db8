//! Exact computation on finite `[0,1]`-valued structures: formula evaluation,
//! Leibniz reduction, ultraproducts over finite index sets, synthesis and
//! verification of pre-metric expansions, and upgrades of two-valued
//! structures through positive interpretations.
//!
//! Truth values follow the continuous-logic convention: 0 is "true".

pub mod expansion;
pub mod gen;
pub mod interp;
pub mod kernel;
pub mod semantics;
pub mod syntax;
pub mod textio;
pub mod ultra;

pub use kernel::{Connective, Rational, TruthValue};
pub use semantics::{Element, GeneralStructure, Partition};
pub use syntax::{Formula, FormulaSequence, Schedule, Term, Theory, Vocabulary};
