use std::collections::BTreeMap;

use serde::Serialize;

use super::family::{generate_family, FamilyConfig};
use super::{tuples, Element, Evaluator, GeneralStructure, SemanticsError};
use crate::kernel::TruthValue;
use crate::syntax::{Formula, Theory};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelCheck {
    pub holds: bool,
    /// Index and value of the first sentence above the tolerance.
    pub first_failure: Option<(usize, TruthValue)>,
    pub values: Vec<TruthValue>,
}

/// Whether every sentence of `theory` evaluates to 0 in `m`.
pub fn is_model(m: &GeneralStructure, theory: &Theory) -> Result<ModelCheck, SemanticsError> {
    is_model_within(m, theory, &TruthValue::zero())
}

/// Like [`is_model`] but accepts values up to `tolerance`.
pub fn is_model_within(
    m: &GeneralStructure,
    theory: &Theory,
    tolerance: &TruthValue,
) -> Result<ModelCheck, SemanticsError> {
    let mut ev = Evaluator::new(m);
    let values = theory
        .sentences()
        .iter()
        .map(|s| Ok(ev.table(s)?[0].clone()))
        .collect::<Result<Vec<_>, SemanticsError>>()?;
    let first_failure = values
        .iter()
        .enumerate()
        .find(|(_, v)| *v > tolerance)
        .map(|(i, v)| (i, v.clone()));
    Ok(ModelCheck {
        holds: first_failure.is_none(),
        first_failure,
        values,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub embedding: bool,
    /// First atomic condition that fails, described for reports.
    pub violation: Option<String>,
    /// `Some(true)` if no formula in the bounded family separates the two
    /// sides; only computed when `embedding` holds.
    pub elementary: Option<bool>,
    pub elementary_witness: Option<String>,
}

fn check_vocab(m: &GeneralStructure, n: &GeneralStructure) -> Result<(), SemanticsError> {
    if m.vocab() != n.vocab() {
        return Err(SemanticsError::VocabularyMismatch(
            "structures have different vocabularies".into(),
        ));
    }
    Ok(())
}

/// Checks that `h` is an embedding of `m` into `n`, and whether it preserves
/// every formula in the family of depth at most `depth_budget`.
pub fn is_embedding(
    h: &[Element],
    m: &GeneralStructure,
    n: &GeneralStructure,
    depth_budget: usize,
) -> Result<EmbeddingReport, SemanticsError> {
    check_vocab(m, n)?;
    if h.len() != m.size() {
        return Err(SemanticsError::NotTotal);
    }
    if let Some(&bad) = h.iter().find(|&&e| e >= n.size()) {
        return Err(SemanticsError::ForeignElement(format!("#{bad}")));
    }
    let vocab = m.vocab();
    let map = |t: &[Element]| t.iter().map(|&e| h[e]).collect::<Vec<_>>();
    let show = |t: &[Element]| t.iter().map(|&e| m.label(e)).collect::<Vec<_>>().join(" ");
    let mut violation = None;
    'outer: {
        for (ci, c) in vocab.constants().iter().enumerate() {
            if h[m.constant(ci)] != n.constant(ci) {
                violation = Some(format!("constant {c}"));
                break 'outer;
            }
        }
        for (fi, f) in vocab.functions().iter().enumerate() {
            for t in tuples(m.size(), f.arity) {
                if h[m.function_value(fi, &t)] != n.function_value(fi, &map(&t)) {
                    violation = Some(format!("({} {})", f.name, show(&t)));
                    break 'outer;
                }
            }
        }
        for (pi, p) in vocab.predicates().iter().enumerate() {
            for t in tuples(m.size(), p.arity) {
                if m.predicate_value(pi, &t) != n.predicate_value(pi, &map(&t)) {
                    violation = Some(format!("({} {})", p.name, show(&t)));
                    break 'outer;
                }
            }
        }
    }
    if violation.is_some() {
        return Ok(EmbeddingReport {
            embedding: false,
            violation,
            elementary: None,
            elementary_witness: None,
        });
    }

    let family = generate_family(vocab, &FamilyConfig::new(depth_budget));
    let mut em = Evaluator::new(m);
    let mut en = Evaluator::new(n);
    for f in &family {
        let vars = f.free_vars();
        let tm = em.table(f)?;
        let tn = en.table(f)?;
        for (i, t) in tuples(m.size(), vars.len()).enumerate() {
            let j = super::encode_tuple(&map(&t), n.size());
            if tm[i] != tn[j] {
                let assignment: BTreeMap<_, _> = vars
                    .iter()
                    .zip(&t)
                    .map(|(v, &e)| (v.clone(), m.label(e).to_string()))
                    .collect();
                return Ok(EmbeddingReport {
                    embedding: true,
                    violation: None,
                    elementary: Some(false),
                    elementary_witness: Some(format!("{} at {:?}", f.canonical(), assignment)),
                });
            }
        }
    }
    Ok(EmbeddingReport {
        embedding: true,
        violation: None,
        elementary: Some(true),
        elementary_witness: None,
    })
}

/// A sentence separating two structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distinction {
    pub sentence: Formula,
    pub gap: TruthValue,
    pub left: TruthValue,
    pub right: TruthValue,
}

/// Searches the sentences of the bounded family for one with maximal
/// `|phi^M - phi^N|`; ties go to the first in generation order.
pub fn distinguish(
    m: &GeneralStructure,
    n: &GeneralStructure,
    depth_budget: usize,
) -> Result<Option<Distinction>, SemanticsError> {
    distinguish_in(m, n, &FamilyConfig::new(depth_budget))
}

pub fn distinguish_in(
    m: &GeneralStructure,
    n: &GeneralStructure,
    cfg: &FamilyConfig,
) -> Result<Option<Distinction>, SemanticsError> {
    check_vocab(m, n)?;
    let mut em = Evaluator::new(m);
    let mut en = Evaluator::new(n);
    let mut best: Option<Distinction> = None;
    for f in generate_family(m.vocab(), cfg)
        .into_iter()
        .filter(Formula::is_sentence)
    {
        let left = em.table(&f)?[0].clone();
        let right = en.table(&f)?[0].clone();
        let gap = left.absdiff(&right);
        if gap.is_zero() {
            continue;
        }
        if best.as_ref().map_or(true, |b| gap > b.gap) {
            best = Some(Distinction {
                sentence: f.canonical(),
                gap,
                left,
                right,
            });
        }
    }
    Ok(best)
}
