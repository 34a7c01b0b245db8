//! Seeded random generation of vocabularies, structures and formulas.
//!
//! Everything takes an explicit RNG so that runs are reproducible; use
//! [`rng`] to get one from a seed.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{Connective, TruthValue};
use crate::semantics::{decode_index, GeneralStructure};
use crate::syntax::{Formula, Quantifier, Term, Vocabulary};

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bounds for random relational structures.
#[derive(Clone, Debug)]
pub struct RelationalBounds {
    pub max_predicates: usize,
    pub max_arity: usize,
    pub max_size: usize,
    /// Values are `j / denominator`.
    pub denominator: u64,
}

impl Default for RelationalBounds {
    fn default() -> Self {
        RelationalBounds {
            max_predicates: 4,
            max_arity: 3,
            max_size: 6,
            denominator: 16,
        }
    }
}

pub fn random_value(rng: &mut GenRng, denominator: u64) -> TruthValue {
    let j = rng.random_range(0..=denominator);
    TruthValue::from_ratio(j as i64, denominator as i64).expect("j <= denominator")
}

pub fn random_relational_vocabulary(
    rng: &mut GenRng,
    max_predicates: usize,
    max_arity: usize,
) -> Vocabulary {
    let mut v = Vocabulary::new();
    for i in 0..rng.random_range(1..=max_predicates) {
        v.add_predicate(&format!("P{}", i + 1), rng.random_range(1..=max_arity))
            .expect("fresh names");
    }
    v
}

/// A structure over `vocab`. Predicate values come from a small palette per
/// predicate, and with probability 1/2 the tables are lifted from a random
/// quotient, so that nontrivial Leibniz classes are common.
pub fn random_structure(
    rng: &mut GenRng,
    vocab: &Vocabulary,
    size: usize,
    denominator: u64,
) -> GeneralStructure {
    let classes: Vec<usize> = if rng.random_bool(0.5) {
        let k = rng.random_range(1..=size);
        (0..size)
            .map(|e| if e < k { e } else { rng.random_range(0..k) })
            .collect()
    } else {
        (0..size).collect()
    };
    let palettes: Vec<Vec<TruthValue>> = vocab
        .predicates()
        .iter()
        .map(|_| {
            let width = rng.random_range(1..=4);
            (0..width).map(|_| random_value(rng, denominator)).collect()
        })
        .collect();
    let mut pred_tables = Vec::new();
    for (pi, p) in vocab.predicates().iter().enumerate() {
        let class_table: Vec<TruthValue> = (0..size.pow(p.arity as u32))
            .map(|_| palettes[pi].choose(rng).unwrap().clone())
            .collect();
        let table = (0..size.pow(p.arity as u32))
            .map(|t| {
                let lifted: Vec<usize> = decode_index(t, size, p.arity)
                    .into_iter()
                    .map(|e| classes[e])
                    .collect();
                class_table[crate::semantics::encode_tuple(&lifted, size)].clone()
            })
            .collect();
        pred_tables.push(table);
    }
    let mut func_tables = Vec::new();
    for f in vocab.functions() {
        let class_table: Vec<usize> = (0..size.pow(f.arity as u32))
            .map(|_| rng.random_range(0..size))
            .collect();
        let table = (0..size.pow(f.arity as u32))
            .map(|t| {
                let lifted: Vec<usize> = decode_index(t, size, f.arity)
                    .into_iter()
                    .map(|e| classes[e])
                    .collect();
                class_table[crate::semantics::encode_tuple(&lifted, size)]
            })
            .collect();
        func_tables.push(table);
    }
    let constants = vocab
        .constants()
        .iter()
        .map(|_| rng.random_range(0..size))
        .collect();
    let universe = (0..size).map(|e| format!("e{e}")).collect();
    GeneralStructure::from_tables(vocab.clone(), universe, pred_tables, func_tables, constants)
        .expect("generated tables are complete")
}

pub fn random_relational(rng: &mut GenRng, bounds: &RelationalBounds) -> GeneralStructure {
    let vocab = random_relational_vocabulary(rng, bounds.max_predicates, bounds.max_arity);
    let size = rng.random_range(1..=bounds.max_size);
    random_structure(rng, &vocab, size, bounds.denominator)
}

/// A two-valued structure with predicates `R1, R2, ...` and their complements
/// `S1, S2, ...`, in that order.
pub fn random_two_valued(
    rng: &mut GenRng,
    pairs: usize,
    max_arity: usize,
    size: usize,
) -> GeneralStructure {
    let mut vocab = Vocabulary::new();
    let arities: Vec<usize> = (0..pairs)
        .map(|_| rng.random_range(1..=max_arity))
        .collect();
    for (i, &a) in arities.iter().enumerate() {
        vocab.add_predicate(&format!("R{}", i + 1), a).unwrap();
    }
    for (i, &a) in arities.iter().enumerate() {
        vocab.add_predicate(&format!("S{}", i + 1), a).unwrap();
    }
    let mut tables: Vec<Vec<TruthValue>> = arities
        .iter()
        .map(|&a| {
            (0..size.pow(a as u32))
                .map(|_| {
                    if rng.random_bool(0.5) {
                        TruthValue::zero()
                    } else {
                        TruthValue::one()
                    }
                })
                .collect()
        })
        .collect();
    let complements: Vec<Vec<TruthValue>> = tables
        .iter()
        .map(|t| t.iter().map(TruthValue::neg).collect())
        .collect();
    tables.extend(complements);
    let universe = (0..size).map(|e| format!("e{e}")).collect();
    GeneralStructure::from_tables(vocab, universe, tables, Vec::new(), Vec::new()).unwrap()
}

fn random_term(rng: &mut GenRng, vocab: &Vocabulary, vars: &[&str], depth: usize) -> Term {
    let funcs = vocab.functions();
    if depth > 0 && !funcs.is_empty() && rng.random_bool(0.3) {
        let f = &funcs[rng.random_range(0..funcs.len())];
        let args = (0..f.arity)
            .map(|_| random_term(rng, vocab, vars, depth - 1))
            .collect();
        return Term::App(f.name.clone(), args);
    }
    let consts = vocab.constants();
    match rng.random_range(0..10) {
        0 if !consts.is_empty() => Term::Const(consts[rng.random_range(0..consts.len())].clone()),
        1 => Term::elem("e0"),
        _ => Term::var(vars[rng.random_range(0..vars.len())]),
    }
}

/// A random formula of depth at most `depth` over `vocab`.
pub fn random_formula(
    rng: &mut GenRng,
    vocab: &Vocabulary,
    vars: &[&str],
    depth: usize,
) -> Formula {
    let preds = vocab.predicates();
    if depth == 0 || rng.random_bool(0.2) {
        if preds.is_empty() || rng.random_bool(0.15) {
            return Formula::constant(random_value(rng, 8));
        }
        let p = &preds[rng.random_range(0..preds.len())];
        let args = (0..p.arity)
            .map(|_| random_term(rng, vocab, vars, 2))
            .collect();
        return Formula::atom(&p.name, args);
    }
    match rng.random_range(0..4) {
        0 => {
            let q = if rng.random_bool(0.5) {
                Quantifier::Sup
            } else {
                Quantifier::Inf
            };
            let v = vars[rng.random_range(0..vars.len())];
            Formula::quant(q, v, random_formula(rng, vocab, vars, depth - 1))
        }
        _ => {
            let ops = Connective::operators();
            let c = ops[rng.random_range(0..ops.len())].clone();
            let args = (0..c.arity())
                .map(|_| random_formula(rng, vocab, vars, depth - 1))
                .collect();
            Formula::apply(c, args)
        }
    }
}

/// A vocabulary with functions and constants, for round-trip tests.
pub fn random_vocabulary(rng: &mut GenRng) -> Vocabulary {
    let mut v = random_relational_vocabulary(rng, 3, 3);
    for i in 0..rng.random_range(0..=2) {
        v.add_function(&format!("F{}", i + 1), rng.random_range(1..=2))
            .unwrap();
    }
    for i in 0..rng.random_range(0..=2) {
        v.add_constant(&format!("c{}", i + 1)).unwrap();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_seeded() {
        let a = random_relational(&mut rng(7), &RelationalBounds::default());
        let b = random_relational(&mut rng(7), &RelationalBounds::default());
        assert_eq!(a, b);
        let t = random_two_valued(&mut rng(3), 2, 2, 3);
        assert!(t.is_two_valued());
        assert_eq!(t.vocab().predicates().len(), 4);
    }
}
