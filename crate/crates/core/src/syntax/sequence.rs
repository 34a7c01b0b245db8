use serde::Serialize;

use super::{Formula, SyntaxError};
use crate::kernel::TruthValue;
use crate::semantics::{Evaluator, GeneralStructure, SemanticsError};

/// A set of sentences.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Theory {
    sentences: Vec<Formula>,
}

impl Theory {
    pub fn new(sentences: Vec<Formula>) -> Result<Self, SyntaxError> {
        if let Some(bad) = sentences.iter().find(|s| !s.is_sentence()) {
            return Err(SyntaxError::NotASentence(bad.to_string()));
        }
        Ok(Theory { sentences })
    }

    pub fn sentences(&self) -> &[Formula] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Rate functions for Cauchy checks and for forced-convergence step sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// `2^{-m}`
    Exponential,
    /// `2^{-(m+1)}`
    Lemma,
    /// `3 * 2^{-m}`, capped at 1
    Stability,
}

impl Schedule {
    pub fn keyword(self) -> &'static str {
        match self {
            Schedule::Exponential => "exponential",
            Schedule::Lemma => "lemma",
            Schedule::Stability => "stability",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "exponential" => Some(Schedule::Exponential),
            "lemma" => Some(Schedule::Lemma),
            "stability" => Some(Schedule::Stability),
            _ => None,
        }
    }

    /// The bound at index `m`. Values above 1 are capped, which changes
    /// nothing for quantities that already live in `[0,1]`.
    pub fn bound(self, m: usize) -> TruthValue {
        let pow = |e: usize| (0..e).fold(TruthValue::one(), |acc, _| acc.half());
        match self {
            Schedule::Exponential => pow(m),
            Schedule::Lemma => pow(m + 1),
            Schedule::Stability => {
                let t = pow(m);
                t.dotplus(&t).dotplus(&t)
            }
        }
    }
}

/// Formulas sharing a free-variable frame, with a claimed convergence rate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaSequence {
    frame: Vec<String>,
    entries: Vec<Formula>,
    schedule: Schedule,
}

impl FormulaSequence {
    pub fn new(
        frame: Vec<String>,
        entries: Vec<Formula>,
        schedule: Schedule,
    ) -> Result<Self, SyntaxError> {
        for e in &entries {
            if e.free_vars().iter().any(|v| !frame.contains(v)) {
                return Err(SyntaxError::OutsideFrame {
                    formula: e.to_string(),
                    frame: frame.join(" "),
                });
            }
        }
        Ok(FormulaSequence {
            frame,
            entries,
            schedule,
        })
    }

    pub fn frame(&self) -> &[String] {
        &self.frame
    }

    pub fn entries(&self) -> &[Formula] {
        &self.entries
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last(&self) -> Option<&Formula> {
        self.entries.last()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CauchyWitness {
    pub m: usize,
    pub k: usize,
    pub structure: usize,
    /// Element labels assigned to the frame variables, in frame order.
    pub assignment: Vec<String>,
    pub gap: TruthValue,
    pub bound: TruthValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CauchyReport {
    pub passed: bool,
    /// The pair with the largest gap relative to its bound; the first such in
    /// (structure, m, k, assignment) order.
    pub worst: Option<CauchyWitness>,
}

/// Checks `|phi_m - phi_k| <= schedule(m)` for all `m <= k` on every witness
/// structure and every assignment of the frame. A falsifier, not a proof.
pub fn check_cauchy(
    seq: &FormulaSequence,
    witnesses: &[GeneralStructure],
) -> Result<CauchyReport, SemanticsError> {
    let mut worst: Option<(num_rational::BigRational, CauchyWitness)> = None;
    for (si, m_struct) in witnesses.iter().enumerate() {
        let mut ev = Evaluator::new(m_struct);
        let tables = seq
            .entries
            .iter()
            .map(|f| ev.table_over(f, &seq.frame))
            .collect::<Result<Vec<_>, _>>()?;
        let n = m_struct.size();
        for m in 0..tables.len() {
            let bound = seq.schedule.bound(m);
            let bound_q = bound.to_rational();
            for k in m + 1..tables.len() {
                for (idx, (a, b)) in tables[m].iter().zip(&tables[k]).enumerate() {
                    let gap = a.absdiff(b);
                    let excess = gap.to_rational() - &bound_q;
                    if worst.as_ref().map_or(true, |(w, _)| excess > *w) {
                        let assignment = crate::semantics::decode_index(idx, n, seq.frame.len())
                            .into_iter()
                            .map(|e| m_struct.label(e).to_string())
                            .collect();
                        worst = Some((
                            excess,
                            CauchyWitness {
                                m,
                                k,
                                structure: si,
                                assignment,
                                gap,
                                bound: bound.clone(),
                            },
                        ));
                    }
                }
            }
        }
    }
    Ok(match worst {
        Some((excess, w)) => CauchyReport {
            passed: excess <= num_rational::BigRational::from_integer(0.into()),
            worst: Some(w),
        },
        None => CauchyReport {
            passed: true,
            worst: None,
        },
    })
}
