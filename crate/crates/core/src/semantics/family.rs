//! Canonical generation of bounded formula families.
//!
//! Level 0 holds constants and atoms. Level `d` holds every formula whose
//! outermost operator is applied to arguments of level `< d`, with at least one
//! argument at level `d - 1`. The candidate list at each level is enumerated in
//! a fixed order (operator, then argument positions) and thinned to at most
//! `width` members by even striding, so the family is deterministic and covers
//! every operator.

use crate::kernel::{Connective, TruthValue};
use crate::syntax::{Formula, Quantifier, Term, Vocabulary};

#[derive(Clone, Debug)]
pub struct FamilyConfig {
    pub variables: Vec<String>,
    pub max_depth: usize,
    /// Upper bound on the number of formulas kept per level above 0.
    pub width: usize,
    pub constants: Vec<TruthValue>,
}

impl FamilyConfig {
    pub fn new(max_depth: usize) -> Self {
        FamilyConfig {
            variables: vec!["x".into(), "y".into()],
            max_depth,
            width: 128,
            constants: vec![
                TruthValue::zero(),
                TruthValue::half_value(),
                TruthValue::one(),
            ],
        }
    }

    pub fn with_width(mut self, width: usize) -> Self {
        self.width = width;
        self
    }

    pub fn with_variables(mut self, vars: &[&str]) -> Self {
        self.variables = vars.iter().map(|v| v.to_string()).collect();
        self
    }
}

enum Op {
    Unary(Connective),
    Quant(Quantifier, String),
    Binary(Connective),
}

fn level_zero(vocab: &Vocabulary, cfg: &FamilyConfig) -> Vec<Formula> {
    let mut out: Vec<Formula> = cfg
        .constants
        .iter()
        .cloned()
        .map(Formula::constant)
        .collect();
    let mut pool: Vec<Term> = cfg.variables.iter().map(|v| Term::Var(v.clone())).collect();
    pool.extend(vocab.constants().iter().map(|c| Term::Const(c.clone())));
    let base = pool.clone();
    for f in vocab.functions() {
        for args in crate::semantics::tuples(base.len(), f.arity) {
            pool.push(Term::App(
                f.name.clone(),
                args.iter().map(|&i| base[i].clone()).collect(),
            ));
        }
    }
    for p in vocab.predicates() {
        for args in crate::semantics::tuples(pool.len(), p.arity) {
            out.push(Formula::atom(
                &p.name,
                args.iter().map(|&i| pool[i].clone()).collect(),
            ));
        }
    }
    out
}

/// Generates the family; formulas are ordered by level, then canonical order.
pub fn generate_family(vocab: &Vocabulary, cfg: &FamilyConfig) -> Vec<Formula> {
    let mut ops = vec![Op::Unary(Connective::Neg), Op::Unary(Connective::Half)];
    for q in [Quantifier::Sup, Quantifier::Inf] {
        for v in &cfg.variables {
            ops.push(Op::Quant(q, v.clone()));
        }
    }
    for c in [
        Connective::DotMinus,
        Connective::DotPlus,
        Connective::Min,
        Connective::Max,
        Connective::AbsDiff,
    ] {
        ops.push(Op::Binary(c));
    }

    let mut all = level_zero(vocab, cfg);
    let mut prev_start = 0;
    for _ in 1..=cfg.max_depth {
        let prev_end = all.len();
        let last = prev_end - prev_start;
        let older = prev_start;
        // pairs over all earlier formulas with at least one from the last level
        let pairs = prev_end * prev_end - older * older;
        let mut counts = Vec::with_capacity(ops.len());
        for op in &ops {
            counts.push(match op {
                Op::Unary(_) | Op::Quant(..) => last,
                Op::Binary(_) => pairs,
            });
        }
        let total: usize = counts.iter().sum();
        let keep = cfg.width.min(total);
        let mut level = Vec::with_capacity(keep);
        for t in 0..keep {
            let mut idx = (t as u128 * total as u128 / keep as u128) as usize;
            let mut op_i = 0;
            while idx >= counts[op_i] {
                idx -= counts[op_i];
                op_i += 1;
            }
            let f = match &ops[op_i] {
                Op::Unary(c) => Formula::apply(c.clone(), vec![all[prev_start + idx].clone()]),
                Op::Quant(q, v) => Formula::quant(*q, v, all[prev_start + idx].clone()),
                Op::Binary(c) => {
                    let (i, j) = decode_pair(idx, prev_start, prev_end);
                    Formula::apply(c.clone(), vec![all[i].clone(), all[j].clone()])
                }
            };
            level.push(f);
        }
        prev_start = prev_end;
        all.extend(level);
    }
    all
}

/// The `idx`-th pair `(i, j)` over `0..end` in lexicographic order, skipping
/// pairs with both coordinates below `start`.
fn decode_pair(idx: usize, start: usize, end: usize) -> (usize, usize) {
    // rows below `start` contribute only columns in start..end
    let narrow = end - start;
    if idx < start * narrow {
        (idx / narrow, start + idx % narrow)
    } else {
        let r = idx - start * narrow;
        (start + r / end, r % end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_decoding_enumerates_the_right_pairs() {
        let (start, end) = (2, 5);
        let got: Vec<_> = (0..end * end - start * start)
            .map(|i| decode_pair(i, start, end))
            .collect();
        let want: Vec<_> = (0..end)
            .flat_map(|i| (0..end).map(move |j| (i, j)))
            .filter(|&(i, j)| i >= start || j >= start)
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn family_is_deterministic_and_bounded() {
        let v = Vocabulary::relational([("P", 1), ("Q", 2)]).unwrap();
        let cfg = FamilyConfig::new(3).with_width(100);
        let a = generate_family(&v, &cfg);
        let b = generate_family(&v, &cfg);
        assert_eq!(a, b);
        // 3 constants + 2 + 4 atoms, then 100 per level
        assert_eq!(a.len(), 9 + 300);
        assert!(a.iter().all(|f| f.depth() <= 3));
        assert!(a.iter().any(|f| f.depth() == 3));
    }
}
