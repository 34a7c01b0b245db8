use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeMap;
use serde::Serialize;

use super::ExpansionError;
use crate::kernel::{format_rational, Rational, TruthValue};
use crate::semantics::{Element, Evaluator, GeneralStructure};
use crate::syntax::{fresh_name, Formula, FormulaSequence, Schedule, Term, Vocabulary};

/// A slot of an atomic pattern: the distinguished variable or a numbered
/// parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    U,
    Z(usize),
}

/// `P(s_1, ..., s_k)` with slots over `u, z1, z2, ...`; at least one `u`, and
/// parameters numbered by first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AtomicPattern {
    pub predicate: String,
    pub slots: Vec<Slot>,
}

impl AtomicPattern {
    pub fn parameters(&self) -> usize {
        self.slots
            .iter()
            .filter_map(|s| match s {
                Slot::Z(i) => Some(*i),
                Slot::U => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// `u` in exactly one position and pairwise distinct parameters elsewhere.
    pub fn is_single_u(&self) -> bool {
        let us = self.slots.iter().filter(|s| **s == Slot::U).count();
        us == 1 && self.parameters() == self.slots.len() - 1
    }

    /// The atom with `u` replaced by `u_var` and `z_i` by `zi`.
    pub fn instantiate(&self, u_var: &str) -> Formula {
        Formula::atom(
            &self.predicate,
            self.slots
                .iter()
                .map(|s| match s {
                    Slot::U => Term::var(u_var),
                    Slot::Z(i) => Term::Var(format!("z{i}")),
                })
                .collect(),
        )
    }

    /// `sup_z |alpha(x, z) - alpha(y, z)|`.
    pub fn beta(&self) -> Formula {
        let zs: Vec<String> = (1..=self.parameters()).map(|i| format!("z{i}")).collect();
        Formula::sup_many(
            &zs,
            Formula::absdiff(self.instantiate("x"), self.instantiate("y")),
        )
    }
}

impl fmt::Display for AtomicPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for s in &self.slots {
            match s {
                Slot::U => f.write_str(" u")?,
                Slot::Z(i) => write!(f, " z{i}")?,
            }
        }
        f.write_str(")")
    }
}

fn slot_tuples(k: usize) -> Vec<Vec<Slot>> {
    fn go(k: usize, cur: &mut Vec<Slot>, used: usize, out: &mut Vec<Vec<Slot>>) {
        if cur.len() == k {
            if cur.contains(&Slot::U) {
                out.push(cur.clone());
            }
            return;
        }
        cur.push(Slot::U);
        go(k, cur, used, out);
        cur.pop();
        for i in 1..=used + 1 {
            cur.push(Slot::Z(i));
            go(k, cur, used.max(i), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, &mut Vec::with_capacity(k), 0, &mut out);
    out
}

/// Patterns by predicate declaration order, then slot tuples in
/// lexicographic order with `u < z1 < z2 < ...`.
pub fn enumerate_patterns(vocab: &Vocabulary) -> Result<Vec<AtomicPattern>, ExpansionError> {
    if !vocab.functions().is_empty() {
        return Err(ExpansionError::FunctionSymbols);
    }
    Ok(vocab
        .predicates()
        .iter()
        .flat_map(|p| {
            slot_tuples(p.arity).into_iter().map(|slots| AtomicPattern {
                predicate: p.name.clone(),
                slots,
            })
        })
        .collect())
}

/// `max_m 2^-m beta_m(x, y)` as an explicit finite list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximateDistance {
    terms: Vec<(TruthValue, Formula)>,
}

impl ApproximateDistance {
    pub fn new(betas: Vec<Formula>) -> Self {
        let mut w = TruthValue::one();
        let mut terms = Vec::with_capacity(betas.len());
        for b in betas {
            terms.push((w.clone(), b));
            w = w.half();
        }
        ApproximateDistance { terms }
    }

    pub fn terms(&self) -> &[(TruthValue, Formula)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn weighted(m: usize, beta: &Formula) -> Formula {
        (0..m).fold(beta.clone(), |acc, _| Formula::half(acc))
    }

    /// The single formula `D(x, y)`.
    pub fn formula(&self) -> Formula {
        Formula::max_all(
            self.terms
                .iter()
                .enumerate()
                .map(|(m, (_, b))| Self::weighted(m, b)),
        )
    }

    /// `d_0 = beta_0`, `d_m = max(d_{m-1}, 2^-m beta_m)`; `[0]` when empty.
    pub fn sequence(&self) -> FormulaSequence {
        let mut entries = Vec::with_capacity(self.terms.len().max(1));
        for (m, (_, b)) in self.terms.iter().enumerate() {
            let w = Self::weighted(m, b);
            entries.push(match entries.last() {
                None => w,
                Some(prev) => Formula::max(Formula::clone(prev), w),
            });
        }
        if entries.is_empty() {
            entries.push(Formula::zero());
        }
        FormulaSequence::new(vec!["x".into(), "y".into()], entries, Schedule::Exponential)
            .expect("betas only use x and y freely")
    }

    /// `n x n` table of distances, row-major.
    pub fn table(&self, m: &GeneralStructure) -> Result<Vec<TruthValue>, ExpansionError> {
        let n = m.size();
        let mut out = vec![TruthValue::zero(); n * n];
        let mut ev = Evaluator::new(m);
        let frame = ["x".to_string(), "y".to_string()];
        for (w, b) in &self.terms {
            let t = ev.table_over(b, &frame)?;
            for (o, v) in out.iter_mut().zip(t.iter()) {
                let scaled = TruthValue::new(w.to_rational() * v.to_rational())
                    .expect("product of values in [0,1]");
                if scaled > *o {
                    *o = scaled;
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    pub symbol: String,
    pub arity: usize,
    /// `c` in the linear modulus `eps / c`.
    pub coefficient: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSignature {
    pub distance_symbol: String,
    pub moduli: Vec<Modulus>,
}

impl MetricSignature {
    pub fn coefficient(&self, symbol: &str) -> Option<&Rational> {
        self.moduli
            .iter()
            .find(|m| m.symbol == symbol)
            .map(|m| &m.coefficient)
    }
}

/// Serialized as `{symbol: "coefficient"}` in declaration order.
impl Serialize for MetricSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.moduli.len()))?;
        for m in &self.moduli {
            map.serialize_entry(&m.symbol, &format_rational(&m.coefficient))?;
        }
        map.end()
    }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub patterns: Vec<AtomicPattern>,
    pub distance: ApproximateDistance,
    pub signature: MetricSignature,
    pub sequence: FormulaSequence,
}

/// Builds `D` from the patterns of `vocab` and derives linear moduli
/// `c_P = 2^m k`, where `m` is the largest index among the single-`u`
/// patterns of `P`. Changing one argument at a time gives
/// `|P(a) - P(b)| <= sum_i beta_{m_i}(a_i, b_i) <= k 2^m max_i D(a_i, b_i)`.
pub fn synthesize_distance(vocab: &Vocabulary) -> Result<Synthesis, ExpansionError> {
    let patterns = enumerate_patterns(vocab)?;
    let distance = ApproximateDistance::new(patterns.iter().map(AtomicPattern::beta).collect());
    let mut moduli = Vec::new();
    for p in vocab.predicates() {
        let m = patterns
            .iter()
            .enumerate()
            .filter(|(_, a)| a.predicate == p.name && a.is_single_u())
            .map(|(i, _)| i)
            .max();
        if let Some(m) = m {
            moduli.push(Modulus {
                symbol: p.name.clone(),
                arity: p.arity,
                coefficient: Rational::from_integer((num_bigint::BigInt::from(1) << m) * p.arity),
            });
        }
    }
    let used: BTreeSet<String> = vocab
        .predicates()
        .iter()
        .map(|p| p.name.clone())
        .chain(vocab.functions().iter().map(|f| f.name.clone()))
        .chain(vocab.constants().iter().cloned())
        .collect();
    let distance_symbol = if used.contains("D") {
        fresh_name("D", &used)
    } else {
        "D".to_string()
    };
    let sequence = distance.sequence();
    Ok(Synthesis {
        patterns,
        distance,
        signature: MetricSignature {
            distance_symbol,
            moduli,
        },
        sequence,
    })
}

pub fn eval_distance(
    m: &GeneralStructure,
    d: &ApproximateDistance,
    a: Element,
    b: Element,
) -> Result<TruthValue, ExpansionError> {
    for e in [a, b] {
        if e >= m.size() {
            return Err(crate::semantics::SemanticsError::ForeignElement(format!("#{e}")).into());
        }
    }
    let mut ev = Evaluator::new(m);
    let assignment = [("x".to_string(), a), ("y".to_string(), b)]
        .into_iter()
        .collect();
    let mut best = TruthValue::zero();
    for (w, beta) in d.terms() {
        let v = ev.eval(beta, &assignment)?;
        let scaled = TruthValue::new(w.to_rational() * v.to_rational()).expect("in range");
        best = best.max_of(&scaled);
    }
    Ok(best)
}

/// `m` with the synthesized distance added as a binary predicate.
pub fn expand_structure(
    m: &GeneralStructure,
    synthesis: &Synthesis,
) -> Result<GeneralStructure, ExpansionError> {
    let table = synthesis.distance.table(m)?;
    Ok(m.with_predicate(&synthesis.signature.distance_symbol, 2, table)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m0() -> GeneralStructure {
        crate::textio::parse_structure("(structure (universe a b) (predicate P 1 (a 1/4) (b 3/4)))")
            .unwrap()
    }

    #[test]
    fn pattern_examples() {
        let v = Vocabulary::relational([("P", 1)]).unwrap();
        let shown: Vec<String> = enumerate_patterns(&v)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(shown, ["(P u)"]);
        let v = Vocabulary::relational([("Q", 2)]).unwrap();
        let shown: Vec<String> = enumerate_patterns(&v)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(shown, ["(Q u u)", "(Q u z1)", "(Q z1 u)"]);
        assert!(enumerate_patterns(&Vocabulary::new()).unwrap().is_empty());
        let mut f = Vocabulary::new();
        f.add_function("F", 1).unwrap();
        assert_eq!(enumerate_patterns(&f), Err(ExpansionError::FunctionSymbols));
    }

    #[test]
    fn ternary_patterns_are_canonical() {
        let v = Vocabulary::relational([("R", 3)]).unwrap();
        let pats = enumerate_patterns(&v).unwrap();
        // choose j parameter slots (j <= 2), then a set partition of them:
        // 1 + 3 * 1 + 3 * 2
        let all: Vec<Vec<Slot>> = pats.iter().map(|p| p.slots.clone()).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(all.len(), 10);
    }

    #[test]
    fn unary_distance_on_m0() {
        let v = Vocabulary::relational([("P", 1)]).unwrap();
        let s = synthesize_distance(&v).unwrap();
        assert_eq!(s.distance.formula().to_string(), "(absdiff (P x) (P y))");
        let m = m0();
        assert_eq!(
            eval_distance(&m, &s.distance, 0, 1).unwrap(),
            TruthValue::half_value()
        );
        assert_eq!(
            eval_distance(&m, &s.distance, 0, 0).unwrap(),
            TruthValue::zero()
        );
        assert_eq!(
            s.signature.coefficient("P"),
            Some(&Rational::from_integer(1.into()))
        );
    }

    #[test]
    fn binary_distance_shape() {
        let v = Vocabulary::relational([("Q", 2)]).unwrap();
        let s = synthesize_distance(&v).unwrap();
        let weights: Vec<String> = s
            .distance
            .terms()
            .iter()
            .map(|(w, _)| w.to_string())
            .collect();
        assert_eq!(weights, ["1", "1/2", "1/4"]);
        assert_eq!(
            s.signature.coefficient("Q"),
            Some(&Rational::from_integer(8.into()))
        );
        assert_eq!(s.sequence.len(), 3);
    }

    #[test]
    fn empty_vocabulary_gives_zero_distance() {
        let s = synthesize_distance(&Vocabulary::new()).unwrap();
        assert!(s.distance.is_empty());
        assert_eq!(s.distance.formula(), Formula::zero());
        assert_eq!(s.sequence.entries(), [Formula::zero()]);
    }
}
