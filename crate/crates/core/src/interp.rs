//! Positive interpretations: building `[0,1]`-valued structures from finite
//! two-valued ones.
//!
//! Two-valued structures use the same convention as everywhere else, so a
//! predicate entry of 0 means the tuple is in the relation. Under that
//! convention `max` is conjunction, `min` is disjunction, `sup` is the
//! universal quantifier and `inf` the existential one. The constant 0 is the
//! empty conjunction ("true").
//!
//! Intervals live on the dyadic grid `{ j / 2^g }`. For a predicate `P` and a
//! grid point `r`, `lower(P, r)` describes the tuples with value in `[0, r]`
//! and `upper(P, r)` those with value in `[r, 1]`. Countable conjunctions
//! over a finite structure collapse to finite ones, so every entry is a
//! single positive formula.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{Connective, TruthValue};
use crate::semantics::{
    decode_index, encode_tuple, tuples, Evaluator, GeneralStructure, Partition, SemanticsError,
};
use crate::syntax::{Formula, FormulaKind, Symbol, Vocabulary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error("formula {0} uses a connective outside min/max/sup/inf")]
    NotPositive(String),
    #[error("structure is not two-valued: {0}")]
    NotClassical(String),
    #[error("grid denominator must be a power of two, got {0}")]
    BadGrid(String),
    #[error("{0} is not on the grid")]
    OffGrid(String),
    #[error("predicate `{0}` is not declared in the interpretation")]
    UnknownPredicate(String),
    #[error("predicate `{0}` is interpreted twice with different arities")]
    ArityConflict(String),
    #[error("entry ({bound} {predicate} {r}) given twice")]
    Duplicate {
        bound: &'static str,
        predicate: String,
        r: String,
    },
    #[error("missing entry ({bound} {predicate} {r})")]
    Missing {
        bound: &'static str,
        predicate: String,
        r: String,
    },
    #[error("parameters {params:?} do not cover the free variables of {formula}")]
    BadParams {
        params: Vec<String>,
        formula: String,
    },
    #[error("structure has function symbols; positive types are computed for relational structures only")]
    FunctionsUnsupported,
    #[error("sup X = {sup} but inf Y = {inf} for {predicate} at ({tuple})")]
    Inconsistent {
        predicate: String,
        tuple: String,
        sup: String,
        inf: String,
    },
    #[error("no grid point satisfies the {bound} formulas of {predicate} at ({tuple})")]
    EmptyBounds {
        bound: &'static str,
        predicate: String,
        tuple: String,
    },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// Whether `f` is built from atoms, the constants 0 and 1, `min`, `max`,
/// `sup` and `inf` only.
pub fn is_positive(f: &Formula) -> bool {
    match f.kind() {
        FormulaKind::Atom { .. } => true,
        FormulaKind::Apply {
            conn: Connective::Const(r),
            ..
        } => r.is_zero() || r.is_one(),
        FormulaKind::Apply {
            conn: Connective::Min | Connective::Max,
            args,
        } => args.iter().all(is_positive),
        FormulaKind::Apply { .. } => false,
        FormulaKind::Quant { body, .. } => is_positive(body),
    }
}

/// A positive formula whose free variables are named by `params`, one per
/// argument position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveFormula {
    params: Vec<String>,
    formula: Formula,
}

impl PositiveFormula {
    pub fn new(params: Vec<String>, formula: Formula) -> Result<Self, InterpError> {
        if !is_positive(&formula) {
            return Err(InterpError::NotPositive(formula.to_string()));
        }
        let distinct: BTreeSet<_> = params.iter().collect();
        if distinct.len() != params.len() || formula.free_vars().iter().any(|v| !params.contains(v))
        {
            return Err(InterpError::BadParams {
                params,
                formula: formula.to_string(),
            });
        }
        Ok(PositiveFormula { params, formula })
    }

    /// The empty conjunction over `arity` parameters.
    pub fn truth(arity: usize) -> Self {
        PositiveFormula {
            params: default_params(arity),
            formula: Formula::zero(),
        }
    }

    /// `(P x1 ... xk)` with the default parameter names.
    pub fn atomic(predicate: &str, arity: usize) -> Self {
        let params = default_params(arity);
        let formula = Formula::atom(
            predicate,
            params
                .iter()
                .map(|p| crate::syntax::Term::Var(p.clone()))
                .collect(),
        );
        PositiveFormula { params, formula }
    }

    /// Finite conjunction (`max` under the 0-is-true convention).
    pub fn conjunction(arity: usize, parts: &[PositiveFormula]) -> Result<Self, InterpError> {
        let params = default_params(arity);
        let mut acc: Option<Formula> = None;
        for p in parts {
            let renamed = p.instantiate(&params);
            acc = Some(match acc {
                None => renamed,
                Some(a) => Formula::max(a, renamed),
            });
        }
        Self::new(params, acc.unwrap_or_else(Formula::zero))
    }

    fn instantiate(&self, names: &[String]) -> Formula {
        let binding = self
            .params
            .iter()
            .zip(names)
            .map(|(p, n)| (p.clone(), crate::syntax::Term::Var(n.clone())))
            .collect();
        self.formula.substitute(&binding)
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// Truth set over all `params`-tuples of `k`, in lexicographic order.
    pub fn extension(&self, k: &GeneralStructure) -> Result<Vec<bool>, InterpError> {
        let mut ev = Evaluator::new(k);
        Ok(ev
            .table_over(&self.formula, &self.params)?
            .iter()
            .map(TruthValue::is_zero)
            .collect())
    }
}

pub fn default_params(arity: usize) -> Vec<String> {
    (1..=arity).map(|i| format!("x{i}")).collect()
}

/// Assigns positive formulas to every (predicate, grid interval) pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    grid_exponent: u32,
    predicates: Vec<Symbol>,
    lower: BTreeMap<(String, u64), PositiveFormula>,
    upper: BTreeMap<(String, u64), PositiveFormula>,
}

impl Interpretation {
    /// An interpretation on the grid of denominator `2^grid_exponent`.
    pub fn new(grid_exponent: u32) -> Self {
        Interpretation {
            grid_exponent,
            predicates: Vec::new(),
            lower: BTreeMap::new(),
            upper: BTreeMap::new(),
        }
    }

    /// Parses a denominator such as 4 into its exponent.
    pub fn exponent_of(denominator: u64) -> Result<u32, InterpError> {
        if denominator == 0 || !denominator.is_power_of_two() {
            return Err(InterpError::BadGrid(denominator.to_string()));
        }
        Ok(denominator.trailing_zeros())
    }

    pub fn grid_exponent(&self) -> u32 {
        self.grid_exponent
    }

    pub fn denominator(&self) -> u64 {
        1u64 << self.grid_exponent
    }

    pub fn grid_point(&self, j: u64) -> TruthValue {
        TruthValue::dyadic(j, self.grid_exponent).expect("grid index in range")
    }

    /// Grid index of `r`, if `r` is on the grid.
    pub fn grid_index(&self, r: &TruthValue) -> Result<u64, InterpError> {
        let scaled = r.to_rational() * crate::Rational::from_integer(self.denominator().into());
        if !scaled.is_integer() {
            return Err(InterpError::OffGrid(r.to_string()));
        }
        Ok(num_traits::ToPrimitive::to_u64(&scaled.to_integer()).expect("bounded by denominator"))
    }

    pub fn predicates(&self) -> &[Symbol] {
        &self.predicates
    }

    pub fn declare(&mut self, predicate: &str, arity: usize) -> Result<(), InterpError> {
        match self.predicates.iter().find(|p| p.name == predicate) {
            Some(p) if p.arity != arity => Err(InterpError::ArityConflict(predicate.into())),
            Some(_) => Ok(()),
            None => {
                crate::syntax::validate_symbol_name(predicate)
                    .map_err(|_| InterpError::UnknownPredicate(predicate.into()))?;
                self.predicates.push(Symbol {
                    name: predicate.to_string(),
                    arity,
                });
                Ok(())
            }
        }
    }

    fn set(
        &mut self,
        lower: bool,
        predicate: &str,
        r: &TruthValue,
        f: PositiveFormula,
    ) -> Result<(), InterpError> {
        self.declare(predicate, f.params.len())?;
        let j = self.grid_index(r)?;
        let (map, bound) = if lower {
            (&mut self.lower, "lower")
        } else {
            (&mut self.upper, "upper")
        };
        if map.insert((predicate.to_string(), j), f).is_some() {
            return Err(InterpError::Duplicate {
                bound,
                predicate: predicate.into(),
                r: r.to_string(),
            });
        }
        Ok(())
    }

    pub fn set_lower(
        &mut self,
        predicate: &str,
        r: &TruthValue,
        f: PositiveFormula,
    ) -> Result<(), InterpError> {
        self.set(true, predicate, r, f)
    }

    pub fn set_upper(
        &mut self,
        predicate: &str,
        r: &TruthValue,
        f: PositiveFormula,
    ) -> Result<(), InterpError> {
        self.set(false, predicate, r, f)
    }

    /// Formula for `[0, r_j]`; `lower(P, 1)` defaults to the empty conjunction.
    pub fn lower(&self, predicate: &str, j: u64) -> Result<PositiveFormula, InterpError> {
        self.entry(true, predicate, j)
    }

    /// Formula for `[r_j, 1]`; `upper(P, 0)` defaults to the empty conjunction.
    pub fn upper(&self, predicate: &str, j: u64) -> Result<PositiveFormula, InterpError> {
        self.entry(false, predicate, j)
    }

    fn entry(&self, lower: bool, predicate: &str, j: u64) -> Result<PositiveFormula, InterpError> {
        let sym = self
            .predicates
            .iter()
            .find(|p| p.name == predicate)
            .ok_or_else(|| InterpError::UnknownPredicate(predicate.into()))?;
        let (map, default_at, bound) = if lower {
            (&self.lower, self.denominator(), "lower")
        } else {
            (&self.upper, 0, "upper")
        };
        match map.get(&(predicate.to_string(), j)) {
            Some(f) => Ok(f.clone()),
            None if j == default_at => Ok(PositiveFormula::truth(sym.arity)),
            None => Err(InterpError::Missing {
                bound,
                predicate: predicate.into(),
                r: self.grid_point(j).to_string(),
            }),
        }
    }

    /// Checks that every grid entry is present.
    pub fn validate(&self) -> Result<(), InterpError> {
        for p in &self.predicates {
            for j in 0..=self.denominator() {
                self.lower(&p.name, j)?;
                self.upper(&p.name, j)?;
            }
        }
        Ok(())
    }

    /// Explicit entries, for serialization: (bound, predicate, r, formula).
    pub fn entries(&self) -> Vec<(&'static str, &str, TruthValue, &PositiveFormula)> {
        let mut out = Vec::new();
        for p in &self.predicates {
            for ((name, j), f) in &self.lower {
                if *name == p.name {
                    out.push(("lower", name.as_str(), self.grid_point(*j), f));
                }
            }
            for ((name, j), f) in &self.upper {
                if *name == p.name {
                    out.push(("upper", name.as_str(), self.grid_point(*j), f));
                }
            }
        }
        out
    }

    /// The complement-pair interpretation: `lower(P, r) = P` for `r < 1` and
    /// `upper(P, r) = complement` for `r > 0`.
    pub fn complement_pair(
        grid_exponent: u32,
        pairs: &[(&str, &str, usize)],
    ) -> Result<Self, InterpError> {
        let mut i = Interpretation::new(grid_exponent);
        let top = i.denominator();
        for &(p, comp, arity) in pairs {
            i.declare(p, arity)?;
            for j in 0..top {
                let r = i.grid_point(j);
                i.set_lower(p, &r, PositiveFormula::atomic(p, arity))?;
            }
            for j in 1..=top {
                let r = i.grid_point(j);
                i.set_upper(p, &r, PositiveFormula::atomic(comp, arity))?;
            }
        }
        Ok(i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionWitness {
    pub predicate: String,
    pub r: TruthValue,
    pub s: TruthValue,
    pub tuple: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionStatus {
    pub holds: bool,
    pub witness: Option<ConditionWitness>,
}

/// Monotonicity (a), disjointness (b) and covering (c), each with the first
/// violation in (predicate, r, s, tuple) order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionsReport {
    pub monotone: ConditionStatus,
    pub disjoint: ConditionStatus,
    pub covering: ConditionStatus,
}

impl ConditionsReport {
    pub fn holds(&self) -> bool {
        self.monotone.holds && self.disjoint.holds && self.covering.holds
    }
}

struct Extensions {
    lower: Vec<Vec<bool>>,
    upper: Vec<Vec<bool>>,
}

fn check_classical(k: &GeneralStructure) -> Result<(), InterpError> {
    for (pi, p) in k.vocab().predicates().iter().enumerate() {
        if let Some(v) = k
            .predicate_table(pi)
            .iter()
            .find(|v| !v.is_zero() && !v.is_one())
        {
            return Err(InterpError::NotClassical(format!(
                "{} takes value {v}",
                p.name
            )));
        }
    }
    Ok(())
}

fn extensions(
    i: &Interpretation,
    k: &GeneralStructure,
    p: &Symbol,
) -> Result<Extensions, InterpError> {
    let top = i.denominator();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for j in 0..=top {
        lower.push(i.lower(&p.name, j)?.extension(k)?);
        upper.push(i.upper(&p.name, j)?.extension(k)?);
    }
    Ok(Extensions { lower, upper })
}

pub fn check_interpretation_conditions(
    i: &Interpretation,
    k: &GeneralStructure,
) -> Result<ConditionsReport, InterpError> {
    check_classical(k)?;
    i.validate()?;
    let n = k.size();
    let mut first: [Option<ConditionWitness>; 3] = [None, None, None];
    for p in i.predicates() {
        let ext = extensions(i, k, p)?;
        let top = i.denominator() as usize;
        for r in 0..=top {
            for s in r + 1..=top {
                for t in 0..n.pow(p.arity as u32) {
                    let violated = [
                        (ext.lower[r][t] && !ext.lower[s][t])
                            || (ext.upper[s][t] && !ext.upper[r][t]),
                        ext.lower[r][t] && ext.upper[s][t],
                        !(ext.upper[r][t] || ext.lower[s][t]),
                    ];
                    for (slot, bad) in first.iter_mut().zip(violated) {
                        if bad && slot.is_none() {
                            *slot = Some(ConditionWitness {
                                predicate: p.name.clone(),
                                r: i.grid_point(r as u64),
                                s: i.grid_point(s as u64),
                                tuple: decode_index(t, n, p.arity)
                                    .into_iter()
                                    .map(|e| k.label(e).to_string())
                                    .collect(),
                            });
                        }
                    }
                }
            }
        }
    }
    let [a, b, c] = first;
    let status = |w: Option<ConditionWitness>| ConditionStatus {
        holds: w.is_none(),
        witness: w,
    };
    Ok(ConditionsReport {
        monotone: status(a),
        disjoint: status(b),
        covering: status(c),
    })
}

/// Builds the `[0,1]`-valued structure: same universe, functions and
/// constants as `k`, and `P(b) = sup { r : b satisfies upper(P, r) }`, which
/// must coincide with `inf { s : b satisfies lower(P, s) }`.
pub fn upgrade(i: &Interpretation, k: &GeneralStructure) -> Result<GeneralStructure, InterpError> {
    check_classical(k)?;
    i.validate()?;
    let n = k.size();
    let mut vocab = Vocabulary::new();
    for p in i.predicates() {
        vocab
            .add_predicate(&p.name, p.arity)
            .map_err(|e| InterpError::Semantics(e.into()))?;
    }
    for f in k.vocab().functions() {
        vocab
            .add_function(&f.name, f.arity)
            .map_err(|e| InterpError::Semantics(e.into()))?;
    }
    for c in k.vocab().constants() {
        vocab
            .add_constant(c)
            .map_err(|e| InterpError::Semantics(e.into()))?;
    }
    let mut tables = Vec::new();
    for p in i.predicates() {
        let ext = extensions(i, k, p)?;
        let top = i.denominator() as usize;
        let mut table = Vec::with_capacity(n.pow(p.arity as u32));
        for t in 0..n.pow(p.arity as u32) {
            let show = || {
                decode_index(t, n, p.arity)
                    .into_iter()
                    .map(|e| k.label(e).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let sup_x = (0..=top).rev().find(|&j| ext.upper[j][t]);
            let inf_y = (0..=top).find(|&j| ext.lower[j][t]);
            let (Some(sx), Some(iy)) = (sup_x, inf_y) else {
                return Err(InterpError::EmptyBounds {
                    bound: if sup_x.is_none() { "upper" } else { "lower" },
                    predicate: p.name.clone(),
                    tuple: show(),
                });
            };
            if sx != iy {
                return Err(InterpError::Inconsistent {
                    predicate: p.name.clone(),
                    tuple: show(),
                    sup: i.grid_point(sx as u64).to_string(),
                    inf: i.grid_point(iy as u64).to_string(),
                });
            }
            table.push(i.grid_point(sx as u64));
        }
        tables.push(table);
    }
    let functions = (0..k.vocab().functions().len())
        .map(|f| k.function_table(f).to_vec())
        .collect();
    Ok(GeneralStructure::from_tables(
        vocab,
        k.universe().to_vec(),
        tables,
        functions,
        k.constants().to_vec(),
    )?)
}

/// For `len`-tuples, `leq[a * total + b]` says every positive formula of
/// quantifier rank `<= rank` true at `a` is true at `b`.
fn positive_preorder(k: &GeneralStructure, len: usize, rank: usize) -> Vec<bool> {
    let n = k.size();
    let total = n.pow(len as u32);
    if rank == 0 {
        // atoms over the tuple positions and the constants
        let vocab = k.vocab();
        let slots = len + vocab.constants().len();
        let resolve = |tuple: &[usize], choice: &[usize]| -> Vec<usize> {
            choice
                .iter()
                .map(|&c| {
                    if c < len {
                        tuple[c]
                    } else {
                        k.constant(c - len)
                    }
                })
                .collect()
        };
        let truths: Vec<Vec<bool>> = (0..total)
            .map(|a| {
                let ta = decode_index(a, n, len);
                let mut out = Vec::new();
                for (pi, p) in vocab.predicates().iter().enumerate() {
                    for choice in tuples(slots, p.arity) {
                        out.push(k.predicate_value(pi, &resolve(&ta, &choice)).is_zero());
                    }
                }
                out
            })
            .collect();
        let mut leq = vec![false; total * total];
        for a in 0..total {
            for b in 0..total {
                leq[a * total + b] = truths[a].iter().zip(&truths[b]).all(|(&x, &y)| !x || y);
            }
        }
        return leq;
    }
    let below = positive_preorder(k, len + 1, rank - 1);
    let same = positive_preorder(k, len, rank - 1);
    let wide = total * n;
    let ext = |t: usize, e: usize| t * n + e;
    let mut leq = vec![false; total * total];
    for a in 0..total {
        for b in 0..total {
            if !same[a * total + b] {
                continue;
            }
            // existential: every extension of a is matched by one of b
            let forth = (0..n).all(|c| (0..n).any(|d| below[ext(a, c) * wide + ext(b, d)]));
            // universal: every extension of b is matched from one of a
            let back = (0..n).all(|d| (0..n).any(|c| below[ext(a, c) * wide + ext(b, d)]));
            leq[a * total + b] = forth && back;
        }
    }
    leq
}

/// Class index of every `len`-tuple under agreement on all positive formulas
/// of quantifier rank at most `depth`.
pub fn positive_type_classes(
    k: &GeneralStructure,
    len: usize,
    depth: usize,
) -> Result<Vec<usize>, InterpError> {
    check_classical(k)?;
    if !k.vocab().is_relational() {
        return Err(InterpError::FunctionsUnsupported);
    }
    let total = k.size().pow(len as u32);
    let leq = positive_preorder(k, len, depth);
    Ok((0..total)
        .map(|a| {
            (0..total)
                .find(|&b| leq[a * total + b] && leq[b * total + a])
                .unwrap()
        })
        .collect())
}

/// Elements grouped by their bounded positive type.
pub fn positive_type_partition(
    k: &GeneralStructure,
    depth: usize,
) -> Result<Partition, InterpError> {
    Ok(Partition::from_keys(positive_type_classes(k, 1, depth)?))
}

/// Flat index of a tuple, re-exported for callers pairing tuples with classes.
pub fn tuple_index(tuple: &[usize], n: usize) -> usize {
    encode_tuple(tuple, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term;
    use crate::textio::parse_structure;

    // R = {a}, S = {b, c} is its complement, T = {a, b}
    fn k3() -> GeneralStructure {
        parse_structure(
            "(structure (universe a b c)
               (predicate R 1 (a 0) (b 1) (c 1))
               (predicate S 1 (a 1) (b 0) (c 0))
               (predicate T 1 (a 0) (b 0) (c 1))
               (predicate U 1 (a 1) (b 1) (c 0))
               (predicate E 1 (a 1) (b 1) (c 1)))",
        )
        .unwrap()
    }

    fn pf(p: &str) -> PositiveFormula {
        PositiveFormula::atomic(p, 1)
    }

    fn uniform(lower: &str, upper: &str, g: u32) -> Interpretation {
        let mut i = Interpretation::new(g);
        let top = i.denominator();
        for j in 0..top {
            let r = i.grid_point(j);
            i.set_lower("P", &r, pf(lower)).unwrap();
        }
        for j in 1..=top {
            let r = i.grid_point(j);
            i.set_upper("P", &r, pf(upper)).unwrap();
        }
        i
    }

    #[test]
    fn complement_pair_passes_and_round_trips() {
        let k = k3();
        let i = Interpretation::complement_pair(2, &[("R", "S", 1), ("T", "U", 1)]).unwrap();
        assert!(check_interpretation_conditions(&i, &k).unwrap().holds());
        let m = upgrade(&i, &k).unwrap();
        assert_eq!(m.predicate_table(0), k.predicate_table(0));
        assert_eq!(m.predicate_table(1), k.predicate_table(2));
    }

    #[test]
    fn same_set_fails_disjointness() {
        let r = check_interpretation_conditions(&uniform("R", "R", 1), &k3()).unwrap();
        assert!(!r.disjoint.holds);
        let w = r.disjoint.witness.unwrap();
        assert_eq!(
            (w.predicate.as_str(), w.tuple.as_slice()),
            ("P", ["a".to_string()].as_slice())
        );
    }

    #[test]
    fn gap_fails_covering() {
        // upper sets empty: b and c are covered by nothing strictly inside the grid
        let r = check_interpretation_conditions(&uniform("R", "E", 2), &k3()).unwrap();
        assert!(r.disjoint.holds);
        assert!(!r.covering.holds);
        assert_eq!(r.covering.witness.unwrap().tuple, ["b"]);
    }

    #[test]
    fn coarse_grid_gap_is_reported_by_upgrade() {
        // with one interior point the covering pairs all involve a default
        // entry, so the conditions hold while sup X < inf Y at b
        let i = uniform("R", "E", 1);
        assert!(check_interpretation_conditions(&i, &k3()).unwrap().holds());
        assert!(matches!(
            upgrade(&i, &k3()),
            Err(InterpError::Inconsistent { .. })
        ));
    }

    #[test]
    fn all_true_lower_sets_force_zero() {
        let mut i = Interpretation::new(1);
        i.set_lower("P", &TruthValue::zero(), PositiveFormula::truth(1))
            .unwrap();
        i.set_lower("P", &TruthValue::half_value(), PositiveFormula::truth(1))
            .unwrap();
        i.set_upper("P", &TruthValue::half_value(), pf("E"))
            .unwrap();
        i.set_upper("P", &TruthValue::one(), pf("E")).unwrap();
        assert!(check_interpretation_conditions(&i, &k3()).unwrap().holds());
        let m = upgrade(&i, &k3()).unwrap();
        assert!(m.predicate_table(0).iter().all(TruthValue::is_zero));
    }

    #[test]
    fn three_levels() {
        // R ⊂ T; complements S ⊃ U
        let mut i = Interpretation::new(1);
        let half = TruthValue::half_value();
        i.set_lower("P", &TruthValue::zero(), pf("R")).unwrap();
        i.set_lower("P", &half, pf("T")).unwrap();
        i.set_upper("P", &half, pf("S")).unwrap();
        i.set_upper("P", &TruthValue::one(), pf("U")).unwrap();
        let k = k3();
        assert!(check_interpretation_conditions(&i, &k).unwrap().holds());
        let m = upgrade(&i, &k).unwrap();
        let shown: Vec<String> = m.predicate_table(0).iter().map(|v| v.to_string()).collect();
        assert_eq!(shown, ["0", "1/2", "1"]);
    }

    #[test]
    fn negation_is_rejected() {
        let f = Formula::neg(Formula::atom("R", vec![Term::var("x1")]));
        assert!(matches!(
            PositiveFormula::new(vec!["x1".into()], f),
            Err(InterpError::NotPositive(_))
        ));
        let half = Formula::constant(TruthValue::half_value());
        assert!(PositiveFormula::new(vec![], half).is_err());
    }

    #[test]
    fn positive_type_examples() {
        let total =
            parse_structure("(structure (universe a b c) (predicate R 1 (a 0) (b 0) (c 0)))")
                .unwrap();
        assert_eq!(positive_type_partition(&total, 2).unwrap().len(), 1);
        let single =
            parse_structure("(structure (universe a b c) (predicate R 1 (a 0) (b 1) (c 1)))")
                .unwrap();
        let p = positive_type_partition(&single, 1).unwrap();
        assert_eq!(p.blocks(), [vec![0], vec![1, 2]]);
    }

    #[test]
    fn quantifiers_separate_elements() {
        // a has an E-successor, b does not; no unary predicates tell them apart
        let k = parse_structure(
            "(structure (universe a b c)
               (predicate E 2 (a a 1) (a b 1) (a c 0) (b a 1) (b b 1) (b c 1) (c a 1) (c b 1) (c c 1)))",
        )
        .unwrap();
        let p0 = positive_type_partition(&k, 0).unwrap();
        let p1 = positive_type_partition(&k, 1).unwrap();
        assert!(p0.same_block(0, 1));
        assert!(!p1.same_block(0, 1));
    }
}
