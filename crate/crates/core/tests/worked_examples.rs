use std::sync::Arc;

use cluster_crystal::cartan::CartanData;
use cluster_crystal::crystal_x::act_ex;
use cluster_crystal::oracle::{act_e_matrix, embed_x};
use cluster_crystal::seed::SeedIndex;
use cluster_crystal::tori::XPoint;
use cluster_crystal::{Rational, Seed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn a4_longest() -> Arc<Seed> {
    let cartan = Arc::new(CartanData::of_type('A', 4).unwrap());
    Arc::new(Seed::from_word(cartan, vec![1, 2, 3, 4, 1, 2, 3, 1, 2, 1]).unwrap())
}

/// `T_m`: the sum `P1P5P8 + P5P8 + P8 + 1` with its first `m` terms scaled by `c`.
fn partial(x: &XPoint, c: &Rational, m: usize) -> Rational {
    let p = |k: SeedIndex| x.get(k).clone();
    let terms = [p(1) * p(5) * p(8), p(5) * p(8), p(8), Rational::one()];
    terms.iter().enumerate().map(|(i, t)| if i < m { c * t } else { t.clone() }).sum()
}

/// The letter-1 action on the X-torus of `(1,2,3,4,1,2,3,1,2,1)`, as a
/// table of factors `X'_k / X_k`. Index 9 is handled separately.
fn displayed_factors(x: &XPoint, c: &Rational) -> Vec<(SeedIndex, Rational)> {
    let t = |m| partial(x, c, m);
    let one = Rational::one();
    vec![
        (-4, one.clone()),
        (-3, one.clone()),
        (-2, t(0) / t(1)),
        (-1, t(1) / t(0)),
        (1, t(2) / t(0)),
        (2, t(1) / t(2)),
        (3, one.clone()),
        (4, one.clone()),
        (5, t(3) / t(1)),
        (6, t(2) / t(3)),
        (7, one),
        (8, t(4) / t(2)),
        (10, t(4) / t(3)),
    ]
}

#[test]
fn a4_letter_one_action_matches_worked_formulas() {
    let s = a4_longest();
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for trial in 0..25 {
        let x = XPoint::random(s.clone(), &mut rng);
        let c = [Rational::integer(2), Rational::new(1, 3), Rational::new(5, 7)][trial % 3].clone();
        let y = act_ex(1, &c, &x).unwrap();
        for (k, factor) in displayed_factors(&x, &c) {
            assert_eq!(*y.get(k), x.get(k) * &factor, "index {k}, trial {trial}");
        }
    }
}

/// A factor `T_2 / T_1` at index 9 would be the index-2 factor
/// inverted. The other letter-2 indices, and the matrix action, give `T_3 / T_4`.
#[test]
fn a4_index_nine_follows_the_letter_two_pattern() {
    let s = a4_longest();
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    for _ in 0..25 {
        let x = XPoint::random(s.clone(), &mut rng);
        let c = Rational::new(5, 7);
        let y = act_ex(1, &c, &x).unwrap();
        let corrected = partial(&x, &c, 3) / partial(&x, &c, 4);
        let printed = partial(&x, &c, 2) / partial(&x, &c, 1);
        assert_eq!(*y.get(9), x.get(9) * &corrected);
        assert_ne!(*y.get(9), x.get(9) * &printed);

        let mut altered: Vec<Rational> = y.coords().to_vec();
        altered[s.pos(9)] = x.get(9) * &printed;
        let altered = XPoint::new(s.clone(), altered).unwrap();
        let model = act_e_matrix(1, &c, &embed_x(&x).unwrap()).unwrap();
        assert!(embed_x(&y).unwrap().proportionality(&model).is_some());
        assert!(embed_x(&altered).unwrap().proportionality(&model).is_none());
    }
}
