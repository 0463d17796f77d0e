use std::sync::Arc;

use cluster_crystal::chart::ChartCrystal;
use cluster_crystal::crystal_a::{act_ea, act_ea_map, epsilon_a, gamma_a, weights_a_map};
use cluster_crystal::crystal_x::{act_ex, act_ex_map, epsilon_x, gamma_x, weights_x_map};
use cluster_crystal::tori::{
    a_mutation_map, ensemble, ensemble_map, mutate_a_point, mutate_x_point, x_mutation_map, APoint, Structure, XPoint,
};
use cluster_crystal::tropical::random_box_point;
use cluster_crystal::{CartanData, ExprBuilder, NodeId, PositiveRationals, Rational, Seed, TropicalIntegers};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Expression tree evaluated directly, independently of the DAG builder.
#[derive(Debug, Clone)]
enum Tree {
    Var(usize),
    Const(u64),
    Add(Box<Tree>, Box<Tree>),
    Mul(Box<Tree>, Box<Tree>),
    Div(Box<Tree>, Box<Tree>),
    Pow(Box<Tree>, i64),
}

const ARITY: usize = 3;

fn tree() -> impl Strategy<Value = Tree> {
    let leaf = prop_oneof![(0..ARITY).prop_map(Tree::Var), (1u64..4).prop_map(Tree::Const)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Div(Box::new(a), Box::new(b))),
            (inner, -3i64..4).prop_map(|(a, e)| Tree::Pow(Box::new(a), e)),
        ]
    })
}

fn build(b: &mut ExprBuilder, t: &Tree) -> NodeId {
    match t {
        Tree::Var(i) => b.var(*i),
        Tree::Const(n) => b.constant(*n),
        Tree::Add(x, y) => {
            let (x, y) = (build(b, x), build(b, y));
            b.add(x, y)
        }
        Tree::Mul(x, y) => {
            let (x, y) = (build(b, x), build(b, y));
            b.mul(x, y)
        }
        Tree::Div(x, y) => {
            let (x, y) = (build(b, x), build(b, y));
            b.quotient(x, y)
        }
        Tree::Pow(x, e) => {
            let x = build(b, x);
            b.pow(x, *e)
        }
    }
}

fn direct_q(t: &Tree, v: &[Rational]) -> Rational {
    match t {
        Tree::Var(i) => v[*i].clone(),
        Tree::Const(n) => Rational::integer(*n as i64),
        Tree::Add(x, y) => direct_q(x, v) + direct_q(y, v),
        Tree::Mul(x, y) => direct_q(x, v) * direct_q(y, v),
        Tree::Div(x, y) => direct_q(x, v) / direct_q(y, v),
        Tree::Pow(x, e) => direct_q(x, v).checked_pow(*e).unwrap(),
    }
}

fn direct_t(t: &Tree, v: &[i64]) -> i64 {
    match t {
        Tree::Var(i) => v[*i],
        Tree::Const(_) => 0,
        Tree::Add(x, y) => direct_t(x, v).max(direct_t(y, v)),
        Tree::Mul(x, y) => direct_t(x, v) + direct_t(y, v),
        Tree::Div(x, y) => direct_t(x, v) - direct_t(y, v),
        Tree::Pow(x, e) => direct_t(x, v) * e,
    }
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..12, 1i64..12).prop_map(|(p, q)| Rational::new(p, q))
}

type Combine = fn(&mut ExprBuilder, NodeId, NodeId) -> NodeId;
type OnRationals = fn(&Rational, &Rational) -> Rational;
type OnIntegers = fn(i64, i64) -> i64;

fn pair_map(e: &Tree, f: &Tree, op: Combine) -> cluster_crystal::PositiveMap {
    let mut b = ExprBuilder::new();
    let x = build(&mut b, e);
    let y = build(&mut b, f);
    let z = op(&mut b, x, y);
    b.finish(ARITY, vec![x, y, z])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn evaluation_matches_direct_recursion(t in tree(), v in proptest::collection::vec(positive(), ARITY)) {
        let mut b = ExprBuilder::new();
        let root = build(&mut b, &t);
        let map = b.finish(ARITY, vec![root]);
        prop_assert_eq!(map.eval_one(&PositiveRationals, &v).unwrap(), direct_q(&t, &v));
        prop_assert!(map.is_structurally_positive());
    }

    #[test]
    fn tropical_evaluation_matches_direct_recursion(t in tree(), v in proptest::collection::vec(-20i64..21, ARITY)) {
        let mut b = ExprBuilder::new();
        let root = build(&mut b, &t);
        let map = b.finish(ARITY, vec![root]);
        prop_assert_eq!(map.eval_one(&TropicalIntegers, &v).unwrap(), direct_t(&t, &v));
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        e in tree(),
        f in tree(),
        q in proptest::collection::vec(positive(), ARITY),
        z in proptest::collection::vec(-20i64..21, ARITY),
    ) {
        let ops: [(Combine, OnRationals, OnIntegers); 3] = [
            (|b, x, y| b.mul(x, y), |a, b| a * b, |a, b| a + b),
            (|b, x, y| b.add(x, y), |a, b| a + b, i64::max),
            (|b, x, y| b.quotient(x, y), |a, b| a / b, |a, b| a - b),
        ];
        for (op, on_q, on_t) in ops {
            let map = pair_map(&e, &f, op);
            let out = map.eval(&PositiveRationals, &q).unwrap();
            prop_assert_eq!(&out[2], &on_q(&out[0], &out[1]));
            let out = map.eval(&TropicalIntegers, &z).unwrap();
            prop_assert_eq!(out[2], on_t(out[0], out[1]));
        }
    }

    #[test]
    fn tropical_monomials_are_linear(
        exps in proptest::collection::vec(-6i64..7, ARITY),
        z in proptest::collection::vec(-1000i64..1001, ARITY),
    ) {
        let mut b = ExprBuilder::new();
        let factors: Vec<(NodeId, i64)> = exps.iter().enumerate().map(|(i, &a)| (b.var(i), a)).collect();
        let m = b.monomial(&factors);
        let map = b.finish(ARITY, vec![m]);
        let expected: i64 = exps.iter().zip(&z).map(|(a, x)| a * x).sum();
        prop_assert_eq!(map.eval_one(&TropicalIntegers, &z).unwrap(), expected);
    }

    #[test]
    fn rationals_print_and_parse(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = Rational::new(p, q);
        let s = x.to_string();
        prop_assert_eq!(s.parse::<Rational>().unwrap(), x.clone());
        prop_assert_eq!(&x * &Rational::new(q, 1), Rational::integer(p));
    }
}

const TYPES: [(char, usize); 8] = [('A', 1), ('A', 2), ('A', 3), ('B', 2), ('C', 2), ('G', 2), ('B', 3), ('C', 3)];

/// A random reduced word containing every letter, for a type picked by `pick`.
fn random_seed(pick: usize, rng_seed: u64) -> Arc<Seed> {
    let (kind, r) = TYPES[pick % TYPES.len()];
    let cartan = CartanData::of_type(kind, r).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let word = (0..20)
        .find_map(|_| cartan.random_reduced_word(&mut rng, 3 * r))
        .unwrap_or_else(|| (1..=r).collect());
    Arc::new(Seed::from_word(Arc::new(cartan), word).unwrap())
}

fn c_value() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(Rational::integer(2)), Just(Rational::new(1, 3)), Just(Rational::new(5, 7)), positive()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduced_words_are_prefix_closed(pick in 0usize..8, raw in proptest::collection::vec(0usize..100, 0..10)) {
        let (kind, r) = TYPES[pick];
        let cartan = CartanData::of_type(kind, r).unwrap();
        let word: Vec<usize> = raw.iter().map(|x| x % r + 1).collect();
        if cartan.check_reduced(&word) {
            for l in 0..word.len() {
                prop_assert!(cartan.check_reduced(&word[..l]));
            }
        }
    }

    #[test]
    fn fresh_seeds_have_integral_b_tilde(pick in 0usize..8, s in any::<u64>()) {
        let seed = random_seed(pick, s);
        prop_assert!(seed.b_tilde().to_rows().iter().flatten().all(Rational::is_integer));
    }

    #[test]
    fn index_combinatorics(pick in 0usize..8, s in any::<u64>()) {
        let seed = random_seed(pick, s);
        let ix = seed.indexing();
        let n = ix.n() as i64;
        for k in ix.indices() {
            let kp = ix.plus(k);
            if kp <= n {
                prop_assert_eq!(ix.minus(kp), k);
            }
        }
        for j in 1..=ix.rank() {
            let occ = ix.occurrences(j);
            prop_assert_eq!(*occ.last().unwrap(), ix.last_occurrence(j));
        }
    }

    #[test]
    fn seed_mutation_is_an_involution(pick in 0usize..8, s in any::<u64>(), k_pick in any::<usize>()) {
        let seed = random_seed(pick, s);
        let ks = seed.indexing().unfrozen();
        prop_assume!(!ks.is_empty());
        let k = ks[k_pick % ks.len()];
        let back = seed.mutate(k).unwrap().mutate(k).unwrap();
        prop_assert_eq!(back.b_matrix(), seed.b_matrix());
        prop_assert_eq!(back.history(), seed.history());
    }

    #[test]
    fn point_mutation_is_an_involution_and_commutes_with_ensemble(
        pick in 0usize..8,
        s in any::<u64>(),
        k_pick in any::<usize>(),
    ) {
        let seed = random_seed(pick, s);
        let ks = seed.indexing().unfrozen();
        prop_assume!(!ks.is_empty());
        let k = ks[k_pick % ks.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x5eed);
        let a = APoint::random(seed.clone(), &mut rng);
        let x = XPoint::random(seed.clone(), &mut rng);
        let a1 = mutate_a_point(k, &a).unwrap();
        prop_assert_eq!(mutate_a_point(k, &a1).unwrap(), a.clone());
        let x1 = mutate_x_point(k, &x).unwrap();
        prop_assert_eq!(mutate_x_point(k, &x1).unwrap(), x.clone());
        prop_assert_eq!(ensemble(&a1).unwrap(), mutate_x_point(k, &ensemble(&a).unwrap()).unwrap());
    }

    #[test]
    fn tropical_mutation_is_an_involution(
        pick in 0usize..8,
        s in any::<u64>(),
        k_pick in any::<usize>(),
        radius in 0i64..50,
    ) {
        let seed = random_seed(pick, s);
        let ks = seed.indexing().unfrozen();
        prop_assume!(!ks.is_empty());
        let k = ks[k_pick % ks.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let b = random_box_point(seed.len(), radius, &mut rng);
        let mutated = seed.mutate(k).unwrap();
        for (there, back) in [
            (a_mutation_map(&seed, k), a_mutation_map(&mutated, k)),
            (x_mutation_map(&seed, k), x_mutation_map(&mutated, k)),
        ] {
            let b1 = there.eval(&TropicalIntegers, &b).unwrap();
            prop_assert_eq!(back.eval(&TropicalIntegers, &b1).unwrap(), b.clone());
        }
    }

    #[test]
    fn all_formulas_are_subtraction_free(pick in 0usize..8, s in any::<u64>()) {
        let seed = random_seed(pick, s);
        prop_assert!(ensemble_map(&seed).is_structurally_positive());
        prop_assert!(weights_x_map(&seed).is_structurally_positive());
        prop_assert!(weights_a_map(&seed).is_structurally_positive());
        for k in seed.indexing().unfrozen() {
            prop_assert!(a_mutation_map(&seed, k).is_structurally_positive());
            prop_assert!(x_mutation_map(&seed, k).is_structurally_positive());
        }
        for j in 1..=seed.cartan().rank() {
            prop_assert!(act_ex_map(&seed, j).is_structurally_positive());
            prop_assert!(act_ea_map(&seed, j).is_structurally_positive());
        }
    }

    #[test]
    fn x_action_covariance_and_group_law(
        pick in 0usize..8,
        s in any::<u64>(),
        c1 in c_value(),
        c2 in c_value(),
    ) {
        let seed = random_seed(pick, s);
        let cartan = seed.cartan().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let x = XPoint::random(seed.clone(), &mut rng);
        for i in 1..=cartan.rank() {
            let y = act_ex(i, &c1, &x).unwrap();
            for j in 1..=cartan.rank() {
                let scale = c1.checked_pow(cartan.a(i, j)).unwrap();
                prop_assert_eq!(gamma_x(j, &y).unwrap(), scale * gamma_x(j, &x).unwrap());
            }
            prop_assert_eq!(epsilon_x(i, &y).unwrap(), epsilon_x(i, &x).unwrap() / &c1);
            let both = act_ex(i, &c2, &y).unwrap();
            prop_assert_eq!(both, act_ex(i, &(&c1 * &c2), &x).unwrap());
        }
    }

    #[test]
    fn a_action_covariance_and_group_law(
        pick in 0usize..8,
        s in any::<u64>(),
        c1 in c_value(),
        c2 in c_value(),
    ) {
        let seed = random_seed(pick, s);
        let cartan = seed.cartan().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let a = APoint::random(seed.clone(), &mut rng);
        for i in 1..=cartan.rank() {
            let y = act_ea(i, &c1, &a).unwrap();
            for j in 1..=cartan.rank() {
                let scale = c1.checked_pow(cartan.a(i, j)).unwrap();
                prop_assert_eq!(gamma_a(j, &y).unwrap(), scale * gamma_a(j, &a).unwrap());
            }
            prop_assert_eq!(epsilon_a(i, &y).unwrap(), epsilon_a(i, &a).unwrap() / &c1);
            let both = act_ea(i, &c2, &y).unwrap();
            prop_assert_eq!(both, act_ea(i, &(&c1 * &c2), &a).unwrap());
        }
    }

    #[test]
    fn tropical_operators_are_mutually_inverse(
        pick in 0usize..8,
        s in any::<u64>(),
        path_pick in any::<usize>(),
        x_side in any::<bool>(),
    ) {
        let seed = random_seed(pick, s);
        let paths = seed.mutation_paths(2);
        let target = seed.mutate_sequence(&paths[path_pick % paths.len()]).unwrap();
        let st = if x_side { Structure::X } else { Structure::A };
        let chart = ChartCrystal::new(st, &target).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        for _ in 0..10 {
            let b = random_box_point(seed.len(), 30, &mut rng);
            for j in 1..=seed.cartan().rank() {
                let up = chart.act(&TropicalIntegers, j, &1, &b).unwrap();
                prop_assert_eq!(chart.act(&TropicalIntegers, j, &-1, &up).unwrap(), b.clone());
                let down = chart.act(&TropicalIntegers, j, &-1, &b).unwrap();
                prop_assert_eq!(chart.act(&TropicalIntegers, j, &1, &down).unwrap(), b.clone());
                prop_assert_eq!(chart.act(&TropicalIntegers, j, &0, &b).unwrap(), b.clone());
            }
        }
    }

    #[test]
    fn tropicalization_is_functorial_on_a2(s in any::<u64>(), k_pick in any::<bool>(), j in 1usize..3, n in -5i64..6) {
        let seed = Seed::from_word(Arc::new(CartanData::of_type('A', 2).unwrap()), vec![1, 2, 1]).unwrap();
        let k = if k_pick { 1 } else { seed.indexing().unfrozen()[0] };
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let b = random_box_point(seed.len(), 25, &mut rng);
        for (action, mutation) in [
            (act_ea_map(&seed, j), a_mutation_map(&seed, k)),
            (act_ex_map(&seed, j), x_mutation_map(&seed, k)),
        ] {
            let composite = mutation.compose(&action);
            let mut input = vec![n];
            input.extend_from_slice(&b);
            let direct = composite.eval(&TropicalIntegers, &input).unwrap();
            let stepwise = mutation.eval(&TropicalIntegers, &action.eval(&TropicalIntegers, &input).unwrap()).unwrap();
            prop_assert_eq!(direct, stepwise);
        }
    }
}
