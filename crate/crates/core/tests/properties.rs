mod common;

use std::collections::BTreeMap;

use common::*;
use contlog::expansion::{check_modulus, synthesize_distance};
use contlog::gen;
use contlog::interp::positive_type_classes;
use contlog::kernel::Connective;
use contlog::semantics::{leibniz_partition, reduce, Evaluator};
use contlog::textio::{parse_formula, parse_structure, serialize};
use contlog::{Term, TruthValue};
use num_traits::Zero;
use proptest::prelude::*;

fn vars() -> [&'static str; 3] {
    ["x", "y", "z"]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn evaluator_matches_naive_semantics(seed in any::<u64>(), size in 1usize..4, depth in 0usize..5) {
        let mut rng = gen::rng(seed);
        let v = gen::random_vocabulary(&mut rng);
        let m = gen::random_structure(&mut rng, &v, size, 8);
        let f = gen::random_formula(&mut rng, &v, &vars(), depth);
        let frame: Vec<String> = f.free_vars().to_vec();
        let fast = Evaluator::new(&m).table_over(&f, &frame).unwrap();
        let slow = naive_table(&m, &f, &frame);
        let fast: Vec<_> = fast.iter().map(TruthValue::to_rational).collect();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn substitution_is_semantic(seed in any::<u64>(), size in 1usize..4) {
        let mut rng = gen::rng(seed);
        let v = gen::random_vocabulary(&mut rng);
        let m = gen::random_structure(&mut rng, &v, size, 8);
        let f = gen::random_formula(&mut rng, &v, &vars(), 4);
        // substitute a term that mentions the other variables, to exercise capture
        let t = if v.functions().is_empty() {
            Term::var("y")
        } else {
            let fsym = &v.functions()[0];
            Term::App(fsym.name.clone(), (0..fsym.arity).map(|i| Term::var(["y", "z"][i % 2])).collect())
        };
        let g = f.substitute(&BTreeMap::from([("x".to_string(), t.clone())]));
        for env in assignments(m.size(), &["x".into(), "y".into(), "z".into()]) {
            let mut shifted = env.clone();
            shifted.insert("x".into(), term_value(&m, &t, &env));
            prop_assert_eq!(naive_eval(&m, &g, &env), naive_eval(&m, &f, &shifted));
        }
    }

    #[test]
    fn canonical_form_is_an_alpha_variant(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let v = gen::random_vocabulary(&mut rng);
        let m = gen::random_structure(&mut rng, &v, 2, 8);
        let f = gen::random_formula(&mut rng, &v, &vars(), 4);
        let c = f.canonical();
        prop_assert!(f.alpha_eq(&c));
        prop_assert_eq!(c.canonical(), c.clone());
        let frame: Vec<String> = f.free_vars().to_vec();
        prop_assert_eq!(naive_table(&m, &f, &frame), naive_table(&m, &c, &frame));
    }

    #[test]
    fn formulas_and_structures_round_trip(seed in any::<u64>(), size in 1usize..4) {
        let mut rng = gen::rng(seed);
        let v = gen::random_vocabulary(&mut rng);
        let m = gen::random_structure(&mut rng, &v, size, 16);
        prop_assert_eq!(parse_structure(&serialize(&m)).unwrap(), m);
        let f = gen::random_formula(&mut rng, &v, &vars(), 4);
        prop_assert_eq!(parse_formula(&serialize(&f), &v).unwrap(), f.canonical());
    }

    #[test]
    fn leibniz_partition_matches_brute_force(seed in any::<u64>()) {
        let m = corpus(seed, 1).pop().unwrap();
        let p = leibniz_partition(&m);
        let oracle = brute_leibniz(&m);
        for a in 0..m.size() {
            prop_assert_eq!(p.same_block(a, oracle[a]), true);
            for b in 0..m.size() {
                prop_assert_eq!(p.same_block(a, b), oracle[a] == oracle[b]);
            }
        }
    }

    #[test]
    fn reduction_preserves_values(seed in any::<u64>(), size in 1usize..5) {
        let mut rng = gen::rng(seed);
        let v = gen::random_vocabulary(&mut rng);
        let m = gen::random_structure(&mut rng, &v, size, 8);
        let red = reduce(&m);
        let f = gen::random_formula(&mut rng, &v, &["x", "y"], 4);
        for env in assignments(m.size(), &xy()) {
            let image: BTreeMap<String, usize> = env.iter().map(|(k, &e)| (k.clone(), red.quotient[e])).collect();
            prop_assert_eq!(naive_eval(&m, &f, &env), naive_eval(&red.structure, &f, &image));
        }
        prop_assert!(leibniz_partition(&red.structure).is_discrete());
    }

    #[test]
    fn synthesized_distance_is_a_pseudometric_with_valid_moduli(seed in any::<u64>()) {
        let m = corpus(seed, 1).pop().unwrap();
        let syn = synthesize_distance(m.vocab()).unwrap();
        let table = naive_table(&m, &syn.distance.formula(), &xy());
        prop_assert_eq!(pseudometric_failure(&table, m.size()), None);
        let tv: Vec<TruthValue> = table.iter().map(|r| TruthValue::new(r.clone()).unwrap()).collect();
        for md in &syn.signature.moduli {
            prop_assert!(check_modulus(&m, &md.symbol, &md.coefficient, &tv).unwrap().passed);
        }
        prop_assert_eq!(zero_classes(&table, m.size()), brute_leibniz(&m));
    }

    #[test]
    fn connectives_match_their_definitions(a in 0i64..=16, b in 0i64..=16) {
        let x = TruthValue::from_ratio(a, 16).unwrap();
        let y = TruthValue::from_ratio(b, 16).unwrap();
        let m = parse_structure("(structure (universe e0))").unwrap();
        for c in Connective::operators() {
            let args: Vec<contlog::Formula> = [&x, &y][..c.arity()]
                .iter()
                .map(|v| contlog::Formula::constant((*v).clone()))
                .collect();
            let f = contlog::Formula::apply(c.clone(), args.clone());
            let direct = c.apply(&[x.clone(), y.clone()][..c.arity()]).unwrap();
            prop_assert_eq!(direct.to_rational(), naive_eval(&m, &f, &BTreeMap::new()));
        }
        // dotminus and dotplus form a Galois connection
        let z = TruthValue::from_ratio((a + b) % 17, 16).unwrap();
        prop_assert_eq!(x.dotminus(&y) <= z, x <= y.dotplus(&z));
    }

    #[test]
    fn positive_types_match_definable_sets(seed in any::<u64>(), size in 1usize..4, depth in 0usize..3) {
        let mut rng = gen::rng(seed);
        let k = gen::random_two_valued(&mut rng, 2, 2, size);
        let sets = positive_definable_generators(&k, depth);
        prop_assert_eq!(positive_type_classes(&k, 1, depth).unwrap(), classes_from_sets(size, &sets));
    }
}

fn term_value(m: &contlog::GeneralStructure, t: &Term, env: &BTreeMap<String, usize>) -> usize {
    match t {
        Term::Var(v) => env[v],
        Term::App(f, args) => {
            let idx = m.vocab().function_index(f).unwrap();
            let vals: Vec<usize> = args.iter().map(|a| term_value(m, a, env)).collect();
            m.function_value(idx, &vals)
        }
        _ => unreachable!("only variables and applications are substituted"),
    }
}

#[test]
fn distance_zero_exactly_on_leibniz_classes_in_a_small_example() {
    let m = parse_structure(
        "(structure (universe a b c)
           (predicate P 1 (a 1/2) (b 1/2) (c 0))
           (predicate Q 2 (a a 0) (a b 0) (a c 1) (b a 0) (b b 0) (b c 1) (c a 1) (c b 1) (c c 1/4)))",
    )
    .unwrap();
    let syn = synthesize_distance(m.vocab()).unwrap();
    let t = naive_table(&m, &syn.distance.formula(), &xy());
    assert!(t[1].is_zero());
    assert!(!t[2].is_zero());
    assert_eq!(brute_leibniz(&m), [0, 0, 2]);
}
