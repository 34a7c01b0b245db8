use std::collections::BTreeSet;

use serde::Serialize;

use super::synth::MetricSignature;
use super::ExpansionError;
use crate::kernel::{format_rational, Rational, TruthValue};
use crate::semantics::{decode_index, tuples, Evaluator, GeneralStructure};
use crate::syntax::{Formula, Term, Theory};

/// Where a binary distance comes from.
#[derive(Clone, Debug)]
pub enum DistanceSource {
    /// Row-major `n x n` table.
    Table(Vec<TruthValue>),
    /// Formula with free variables among `x`, `y`.
    Formula(Formula),
    /// A binary predicate of the structure.
    Predicate(String),
}

/// Row-major `n x n` table of `d` on `m`.
pub fn distance_table(
    m: &GeneralStructure,
    d: &DistanceSource,
) -> Result<Vec<TruthValue>, ExpansionError> {
    let n = m.size();
    match d {
        DistanceSource::Table(t) => {
            if t.len() != n * n {
                return Err(ExpansionError::BadTable {
                    expected: n * n,
                    got: t.len(),
                });
            }
            Ok(t.clone())
        }
        DistanceSource::Formula(f) => {
            if f.free_vars().iter().any(|v| v != "x" && v != "y") {
                return Err(ExpansionError::BadFrame(f.free_vars().to_vec()));
            }
            Ok(Evaluator::new(m).table_over(f, &["x".to_string(), "y".to_string()])?)
        }
        DistanceSource::Predicate(p) => {
            let i = m
                .vocab()
                .predicate_index(p)
                .filter(|&i| m.vocab().predicates()[i].arity == 2)
                .ok_or_else(|| ExpansionError::UnknownPredicate(p.clone()))?;
            Ok(m.predicate_table(i).to_vec())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PseudometricViolation {
    /// `reflexivity`, `symmetry` or `triangle`.
    pub axiom: &'static str,
    pub elements: Vec<String>,
    pub values: Vec<TruthValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PseudometricReport {
    pub passed: bool,
    pub violation: Option<PseudometricViolation>,
}

/// Checks `d(a,a) = 0`, `d(a,b) = d(b,a)` and `d(a,c) <= d(a,b) + d(b,c)`
/// over all elements, in that order; the first violation in lexicographic
/// order is reported.
pub fn check_pseudometric(
    m: &GeneralStructure,
    d: &DistanceSource,
) -> Result<PseudometricReport, ExpansionError> {
    let n = m.size();
    let t = distance_table(m, d)?;
    let at = |a: usize, b: usize| &t[a * n + b];
    let labels = |es: &[usize]| {
        es.iter()
            .map(|&e| m.label(e).to_string())
            .collect::<Vec<_>>()
    };
    let fail = |axiom, es: &[usize], values: Vec<TruthValue>| PseudometricReport {
        passed: false,
        violation: Some(PseudometricViolation {
            axiom,
            elements: labels(es),
            values,
        }),
    };
    for a in 0..n {
        if !at(a, a).is_zero() {
            return Ok(fail("reflexivity", &[a], vec![at(a, a).clone()]));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if at(a, b) != at(b, a) {
                return Ok(fail(
                    "symmetry",
                    &[a, b],
                    vec![at(a, b).clone(), at(b, a).clone()],
                ));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let sum = at(a, b).to_rational() + at(b, c).to_rational();
                if at(a, c).to_rational() > sum {
                    return Ok(fail(
                        "triangle",
                        &[a, b, c],
                        vec![at(a, c).clone(), at(a, b).clone(), at(b, c).clone()],
                    ));
                }
            }
        }
    }
    Ok(PseudometricReport {
        passed: true,
        violation: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulusWitness {
    pub left: Vec<String>,
    pub right: Vec<String>,
    /// `|P(left) - P(right)|`.
    pub difference: TruthValue,
    /// `max_i D(left_i, right_i)`.
    pub distance: TruthValue,
    /// Set by the grid variant.
    pub epsilon: Option<TruthValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulusReport {
    pub predicate: String,
    pub coefficient: String,
    pub passed: bool,
    /// Largest `difference / distance` over pairs at positive distance, or
    /// `unbounded` if some pair at distance 0 has different values.
    pub worst_ratio: Option<String>,
    pub witness: Option<ModulusWitness>,
}

struct PairScan {
    n: usize,
    arity: usize,
    values: Vec<TruthValue>,
    dist: Vec<TruthValue>,
}

impl PairScan {
    fn new(
        m: &GeneralStructure,
        predicate: &str,
        d: &[TruthValue],
    ) -> Result<Self, ExpansionError> {
        let n = m.size();
        if d.len() != n * n {
            return Err(ExpansionError::BadTable {
                expected: n * n,
                got: d.len(),
            });
        }
        let pi = m
            .vocab()
            .predicate_index(predicate)
            .ok_or_else(|| ExpansionError::UnknownPredicate(predicate.into()))?;
        Ok(PairScan {
            n,
            arity: m.vocab().predicates()[pi].arity,
            values: m.predicate_table(pi).to_vec(),
            dist: d.to_vec(),
        })
    }

    /// Visits `(i, j, |P_i - P_j|, max_k D(a_k, b_k))` in lexicographic order
    /// until `f` returns false.
    fn scan(&self, mut f: impl FnMut(usize, usize, TruthValue, &TruthValue) -> bool) {
        let total = self.n.pow(self.arity as u32);
        let decoded: Vec<Vec<usize>> = (0..total)
            .map(|i| decode_index(i, self.n, self.arity))
            .collect();
        for i in 0..total {
            for j in 0..total {
                let diff = self.values[i].absdiff(&self.values[j]);
                let dist = decoded[i]
                    .iter()
                    .zip(&decoded[j])
                    .map(|(&a, &b)| &self.dist[a * self.n + b])
                    .max()
                    .cloned()
                    .unwrap_or_else(TruthValue::zero);
                if !f(i, j, diff, &dist) {
                    return;
                }
            }
        }
    }

    fn witness(
        &self,
        m: &GeneralStructure,
        i: usize,
        j: usize,
        diff: TruthValue,
        dist: TruthValue,
    ) -> ModulusWitness {
        let show = |t: usize| {
            decode_index(t, self.n, self.arity)
                .into_iter()
                .map(|e| m.label(e).to_string())
                .collect()
        };
        ModulusWitness {
            left: show(i),
            right: show(j),
            difference: diff,
            distance: dist,
            epsilon: None,
        }
    }
}

/// Verifies `|P(a) - P(b)| <= c * max_i D(a_i, b_i)` for all tuple pairs.
pub fn check_modulus(
    m: &GeneralStructure,
    predicate: &str,
    coefficient: &Rational,
    d: &[TruthValue],
) -> Result<ModulusReport, ExpansionError> {
    let scan = PairScan::new(m, predicate, d)?;
    let mut witness = None;
    let mut worst: Option<Rational> = None;
    let mut unbounded = false;
    scan.scan(|i, j, diff, dist| {
        let lhs = diff.to_rational();
        let rhs = coefficient * dist.to_rational();
        if lhs > rhs && witness.is_none() {
            witness = Some(scan.witness(m, i, j, diff.clone(), dist.clone()));
        }
        if dist.is_zero() {
            unbounded |= !diff.is_zero();
        } else {
            let ratio = lhs / dist.to_rational();
            if worst.as_ref().map_or(true, |w| ratio > *w) {
                worst = Some(ratio);
            }
        }
        true
    });
    Ok(ModulusReport {
        predicate: predicate.to_string(),
        coefficient: format_rational(coefficient),
        passed: witness.is_none(),
        worst_ratio: if unbounded {
            Some("unbounded".into())
        } else {
            worst.as_ref().map(format_rational)
        },
        witness,
    })
}

/// The discretized form: for every `eps = j / 2^g`, `max_i D(a_i, b_i) < eps / c`
/// implies `|P(a) - P(b)| <= eps`.
pub fn check_modulus_grid(
    m: &GeneralStructure,
    predicate: &str,
    coefficient: &Rational,
    d: &[TruthValue],
    grid_exponent: u32,
) -> Result<ModulusReport, ExpansionError> {
    let scan = PairScan::new(m, predicate, d)?;
    let eps: Vec<TruthValue> = (1..=1u64 << grid_exponent)
        .map(|j| TruthValue::dyadic(j, grid_exponent).expect("grid point"))
        .collect();
    let mut witness = None;
    scan.scan(|i, j, diff, dist| {
        let hit = eps
            .iter()
            .find(|e| diff > **e && dist.to_rational() * coefficient < e.to_rational());
        if let Some(e) = hit {
            let mut w = scan.witness(m, i, j, diff.clone(), dist.clone());
            w.epsilon = Some(e.clone());
            witness = Some(w);
            return false;
        }
        true
    });
    Ok(ModulusReport {
        predicate: predicate.to_string(),
        coefficient: format_rational(coefficient),
        passed: witness.is_none(),
        worst_ratio: None,
        witness,
    })
}

fn atom(p: &str, vars: &[&str]) -> Formula {
    Formula::atom(p, vars.iter().map(|v| Term::var(v)).collect())
}

/// Sentences that a structure with distance symbol `D` satisfies exactly when
/// `D` is a pseudo-metric and every modulus holds on the `2^-g` grid:
/// reflexivity, symmetry, triangle, then for each symbol and each grid `eps`
/// `sup_{x,y} min(|P(x) - P(y)| -. eps, eps/c -. max_i D(x_i, y_i))`.
pub fn met_axioms(sig: &MetricSignature, grid_exponent: u32) -> Theory {
    let d = sig.distance_symbol.as_str();
    let v = |s: &str| s.to_string();
    let mut out = vec![
        Formula::sup("x", atom(d, &["x", "x"])),
        Formula::sup_many(
            &[v("x"), v("y")],
            Formula::absdiff(atom(d, &["x", "y"]), atom(d, &["y", "x"])),
        ),
        Formula::sup_many(
            &[v("x"), v("y"), v("z")],
            Formula::dotminus(
                atom(d, &["x", "z"]),
                Formula::dotplus(atom(d, &["x", "y"]), atom(d, &["y", "z"])),
            ),
        ),
    ];
    for modulus in &sig.moduli {
        let k = modulus.arity;
        let xs: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
        let ys: Vec<String> = (1..=k).map(|i| format!("y{i}")).collect();
        let px = Formula::atom(
            &modulus.symbol,
            xs.iter().map(|x| Term::Var(x.clone())).collect(),
        );
        let py = Formula::atom(
            &modulus.symbol,
            ys.iter().map(|y| Term::Var(y.clone())).collect(),
        );
        let diff = Formula::absdiff(px, py);
        let spread = Formula::max_all(
            xs.iter()
                .zip(&ys)
                .map(|(x, y)| Formula::atom(d, vec![Term::Var(x.clone()), Term::Var(y.clone())])),
        );
        let bound: Vec<String> = xs.iter().chain(&ys).cloned().collect();
        for j in 1..=1u64 << grid_exponent {
            let eps = TruthValue::dyadic(j, grid_exponent).expect("grid point");
            let scaled = TruthValue::new(eps.to_rational() / &modulus.coefficient)
                .expect("coefficients are at least 1");
            let body = Formula::min(
                Formula::dotminus(diff.clone(), Formula::constant(eps)),
                Formula::dotminus(Formula::constant(scaled), spread.clone()),
            );
            out.push(Formula::sup_many(&bound, body));
        }
    }
    Theory::new(out).expect("all axioms are sentences")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformEquivalenceReport {
    pub zero_sets_equal: bool,
    /// A pair at distance 0 for exactly one of the two distances.
    pub witness: Option<(String, String)>,
    /// For each value `v` taken by the first distance, the largest value of
    /// the second over pairs with first distance at most `v`.
    pub forward: Vec<(TruthValue, TruthValue)>,
    pub backward: Vec<(TruthValue, TruthValue)>,
}

fn modulus_table(a: &[TruthValue], b: &[TruthValue]) -> Vec<(TruthValue, TruthValue)> {
    let levels: BTreeSet<&TruthValue> = a.iter().collect();
    levels
        .into_iter()
        .map(|v| {
            let top = a
                .iter()
                .zip(b)
                .filter(|(x, _)| *x <= v)
                .map(|(_, y)| y)
                .max()
                .cloned()
                .unwrap_or_else(TruthValue::zero);
            (v.clone(), top)
        })
        .collect()
}

pub fn check_uniform_equivalence(
    m: &GeneralStructure,
    d1: &DistanceSource,
    d2: &DistanceSource,
) -> Result<UniformEquivalenceReport, ExpansionError> {
    let a = distance_table(m, d1)?;
    let b = distance_table(m, d2)?;
    let n = m.size();
    let witness = tuples(n, 2)
        .zip(a.iter().zip(&b))
        .find(|(_, (x, y))| x.is_zero() != y.is_zero())
        .map(|(t, _)| (m.label(t[0]).to_string(), m.label(t[1]).to_string()));
    Ok(UniformEquivalenceReport {
        zero_sets_equal: witness.is_none(),
        witness,
        forward: modulus_table(&a, &b),
        backward: modulus_table(&b, &a),
    })
}
