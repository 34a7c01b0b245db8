//! Reference implementations used as oracles. Each one recomputes a quantity
//! from its definition with no shared code beyond the data model.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use contlog::gen::{self, GenRng, RelationalBounds};
use contlog::kernel::Connective;
use contlog::semantics::GeneralStructure;
use contlog::syntax::{FormulaKind, Quantifier};
use contlog::{Formula, Rational, Term};
use num_traits::{One, Signed, Zero};

pub fn q(s: &str) -> Rational {
    contlog::kernel::parse_rational(s).unwrap()
}

fn term(m: &GeneralStructure, t: &Term, env: &BTreeMap<String, usize>) -> usize {
    match t {
        Term::Var(v) => env[v],
        Term::Const(c) => m.constant(m.vocab().constant_index(c).unwrap()),
        Term::Elem(l) => m.element(l).unwrap(),
        Term::App(f, args) => {
            let idx = m.vocab().function_index(f).unwrap();
            let vals: Vec<usize> = args.iter().map(|a| term(m, a, env)).collect();
            m.function_value(idx, &vals)
        }
    }
}

/// Top-down evaluation straight from the truth conditions, in plain
/// rationals, re-walking shared subformulas every time.
pub fn naive_eval(m: &GeneralStructure, f: &Formula, env: &BTreeMap<String, usize>) -> Rational {
    match f.kind() {
        FormulaKind::Atom { predicate, args } => {
            let vals: Vec<usize> = args.iter().map(|a| term(m, a, env)).collect();
            m.predicate_named(predicate, &vals).unwrap().to_rational()
        }
        FormulaKind::Apply { conn, args } => {
            let v: Vec<Rational> = args.iter().map(|a| naive_eval(m, a, env)).collect();
            let zero = Rational::zero();
            let one = Rational::one();
            match conn {
                Connective::Const(c) => c.to_rational(),
                Connective::Neg => &one - &v[0],
                Connective::Half => &v[0] / Rational::from_integer(2.into()),
                Connective::DotMinus => (&v[0] - &v[1]).max(zero),
                Connective::DotPlus => (&v[0] + &v[1]).min(one),
                Connective::Min => v[0].clone().min(v[1].clone()),
                Connective::Max => v[0].clone().max(v[1].clone()),
                Connective::AbsDiff => (&v[0] - &v[1]).abs(),
            }
        }
        FormulaKind::Quant { q, var, body } => {
            let vals = (0..m.size()).map(|e| {
                let mut inner = env.clone();
                inner.insert(var.clone(), e);
                naive_eval(m, body, &inner)
            });
            match q {
                Quantifier::Sup => vals.max().unwrap(),
                Quantifier::Inf => vals.min().unwrap(),
            }
        }
    }
}

/// All assignments of `vars`, first variable most significant.
pub fn assignments(n: usize, vars: &[String]) -> Vec<BTreeMap<String, usize>> {
    let mut out = vec![BTreeMap::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|env| {
                (0..n).map(move |e| {
                    let mut next = env.clone();
                    next.insert(v.clone(), e);
                    next
                })
            })
            .collect();
    }
    out
}

pub fn naive_table(m: &GeneralStructure, f: &Formula, vars: &[String]) -> Vec<Rational> {
    assignments(m.size(), vars)
        .iter()
        .map(|env| naive_eval(m, f, env))
        .collect()
}

pub fn xy() -> Vec<String> {
    vec!["x".to_string(), "y".to_string()]
}

/// Leibniz equality of a relational structure by brute force: `a` and `b` are
/// equal iff every atomic formula `P(t1..tk)`, where each `ti` is either the
/// distinguished variable or a parameter, takes the same value at `a` and `b`.
/// Returns the least equal element of each element.
pub fn brute_leibniz(m: &GeneralStructure) -> Vec<usize> {
    let n = m.size();
    let equal = |a: usize, b: usize| {
        m.vocab().predicates().iter().enumerate().all(|(pi, p)| {
            (1u32..1 << p.arity).all(|mask| {
                let mut params = vec![0usize; p.arity];
                loop {
                    let fill = |x: usize| -> Vec<usize> {
                        (0..p.arity)
                            .map(|i| if mask >> i & 1 == 1 { x } else { params[i] })
                            .collect()
                    };
                    if m.predicate_value(pi, &fill(a)) != m.predicate_value(pi, &fill(b)) {
                        return false;
                    }
                    // advance over the parameter positions only
                    let mut i = 0;
                    loop {
                        if i == p.arity {
                            return true;
                        }
                        if mask >> i & 1 == 0 {
                            params[i] += 1;
                            if params[i] < n {
                                break;
                            }
                            params[i] = 0;
                        }
                        i += 1;
                    }
                }
            })
        })
    };
    (0..n)
        .map(|a| (0..=a).find(|&b| equal(a, b)).unwrap())
        .collect()
}

/// Least element at distance 0 from each element.
pub fn zero_classes(table: &[Rational], n: usize) -> Vec<usize> {
    (0..n)
        .map(|a| (0..=a).find(|&b| table[a * n + b].is_zero()).unwrap())
        .collect()
}

/// First failure of reflexivity, symmetry or the triangle inequality.
pub fn pseudometric_failure(t: &[Rational], n: usize) -> Option<(usize, usize, usize)> {
    for a in 0..n {
        if !t[a * n + a].is_zero() {
            return Some((a, a, a));
        }
        for b in 0..n {
            if t[a * n + b] != t[b * n + a] {
                return Some((a, b, a));
            }
            for c in 0..n {
                if t[a * n + c] > &t[a * n + b] + &t[b * n + c] {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

pub fn corpus(seed: u64, count: usize) -> Vec<GeneralStructure> {
    let mut rng = gen::rng(seed);
    (0..count)
        .map(|_| gen::random_relational(&mut rng, &RelationalBounds::default()))
        .collect()
}

pub fn small_relational(
    rng: &mut GenRng,
    preds: usize,
    arity: usize,
    size: usize,
) -> GeneralStructure {
    let v = gen::random_relational_vocabulary(rng, preds, arity);
    gen::random_structure(rng, &v, size, 8)
}

/// Generators of the lattice of element sets definable by positive formulas
/// of quantifier rank at most `depth` in one free variable, over a classical
/// relational structure. Sets of assignments to `depth + 1` variables start
/// from the atomic ones; each rank quantifies away the last variable. Since
/// `exists` distributes over unions and `forall` over intersections, it is
/// enough to quantify the meet-closure and the join-closure of the
/// generators, never the whole lattice. Two elements agree on every set of
/// the lattice iff they agree on its generators.
pub fn positive_definable_generators(k: &GeneralStructure, depth: usize) -> HashSet<u64> {
    let n = k.size();
    let atomic = |vars: usize| -> Vec<u64> {
        let total = n.pow(vars as u32);
        assert!(total <= 64);
        let full = if total == 64 {
            u64::MAX
        } else {
            (1u64 << total) - 1
        };
        let mut out = vec![full, 0];
        for (pi, p) in k.vocab().predicates().iter().enumerate() {
            for choice in 0..vars.pow(p.arity as u32) {
                let slots: Vec<usize> = (0..p.arity)
                    .map(|i| choice / vars.pow(i as u32) % vars)
                    .collect();
                let mut set = 0u64;
                for a in 0..total {
                    let asg: Vec<usize> = (0..vars)
                        .map(|v| a / n.pow((vars - 1 - v) as u32) % n)
                        .collect();
                    let args: Vec<usize> = slots.iter().map(|&s| asg[s]).collect();
                    if k.predicate_value(pi, &args).is_zero() {
                        set |= 1 << a;
                    }
                }
                out.push(set);
            }
        }
        out
    };
    let close = |gens: &HashSet<u64>, op: fn(u64, u64) -> u64| -> HashSet<u64> {
        let mut all = gens.clone();
        let mut frontier: Vec<u64> = all.iter().copied().collect();
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let c = op(a, g);
                if all.insert(c) {
                    frontier.push(c);
                }
            }
        }
        all
    };
    let mut vars = depth + 1;
    let mut gens: HashSet<u64> = atomic(vars).into_iter().collect();
    while vars > 1 {
        let meets = close(&gens, |a, b| a & b);
        let joins = close(&gens, |a, b| a | b);
        vars -= 1;
        let total = n.pow(vars as u32);
        let block = |s: u64, a: usize| (s >> (a * n)) & ((1u64 << n) - 1);
        let mut next: HashSet<u64> = atomic(vars).into_iter().collect();
        for &s in &meets {
            next.insert(
                (0..total)
                    .filter(|&a| block(s, a) != 0)
                    .fold(0, |acc, a| acc | 1 << a),
            );
        }
        for &s in &joins {
            next.insert(
                (0..total)
                    .filter(|&a| block(s, a) == (1u64 << n) - 1)
                    .fold(0, |acc, a| acc | 1 << a),
            );
        }
        gens = next;
    }
    gens
}

/// Element classes under agreement on the given family of sets.
pub fn classes_from_sets(n: usize, sets: &HashSet<u64>) -> Vec<usize> {
    let same = |a: usize, b: usize| sets.iter().all(|s| (s >> a & 1) == (s >> b & 1));
    (0..n)
        .map(|a| (0..=a).find(|&b| same(a, b)).unwrap())
        .collect()
}
