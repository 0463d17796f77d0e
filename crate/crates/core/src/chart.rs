//! Crystal operators on arbitrary charts.
//!
//! The explicit formulas live on the initial seed. On a chart reached by a
//! mutation sequence `k_1, …, k_m` the operators are transported by
//! conjugation: mutate back to the initial seed, act, mutate forward. All
//! pieces are positive maps, so the composite is compiled into one DAG
//! that can be evaluated in any semifield.

use std::sync::Arc;

use crate::crystal_a::{build_act_ea, build_epsilon_a, build_gamma_a};
use crate::crystal_x::{build_act_ex, build_epsilon_x, build_gamma_x, CrystalError};
use crate::expr::{ExprBuilder, NodeId, PositiveMap};
use crate::seed::{Seed, SeedIndex};
use crate::semifield::Semifield;
use crate::tori::{build_a_mutation, build_x_mutation, Structure};

/// `(γ_1, …, γ_r)` and `(ε_1, …, ε_r)`.
pub type Weights<T> = (Vec<T>, Vec<T>);

/// Compiled crystal structure on one chart.
#[derive(Debug, Clone)]
pub struct ChartCrystal {
    structure: Structure,
    /// Seeds along the path from the initial seed to this chart.
    path: Vec<Arc<Seed>>,
    actions: Vec<PositiveMap>,
    weights: PositiveMap,
    to_initial: PositiveMap,
    from_initial: PositiveMap,
}

fn build_mutation(b: &mut ExprBuilder, structure: Structure, seed: &Seed, k: SeedIndex, v: &[NodeId]) -> Vec<NodeId> {
    match structure {
        Structure::A => build_a_mutation(b, seed, k, v),
        Structure::X => build_x_mutation(b, seed, k, v),
    }
}

impl ChartCrystal {
    /// Compiles the operators for the chart of `seed`. The seed's history
    /// is replayed from the initial seed of its word.
    pub fn new(structure: Structure, seed: &Seed) -> Result<ChartCrystal, CrystalError> {
        let initial = Arc::new(seed.fresh());
        let r = initial.cartan().rank();
        for j in 1..=r {
            crate::crystal_x::check_letter(&initial, j)?;
        }
        let mut path = vec![initial];
        for &k in seed.history() {
            let next = path.last().expect("nonempty").mutate(k).map_err(|e| CrystalError::Tori(e.into()))?;
            path.push(Arc::new(next));
        }
        let mut chart = ChartCrystal {
            structure,
            path,
            actions: Vec::new(),
            weights: PositiveMap::identity(0),
            to_initial: PositiveMap::identity(0),
            from_initial: PositiveMap::identity(0),
        };
        let len = seed.len();
        chart.to_initial = chart.compile(len, |ch, b, v| ch.build_to_initial(b, v));
        chart.from_initial = chart.compile(len, |ch, b, v| ch.build_from_initial(b, v));
        chart.actions = (1..=r).map(|j| chart.compile_action(j)).collect();
        chart.weights = chart.compile(len, |ch, b, v| {
            let base = ch.build_to_initial(b, v);
            let init = ch.initial().clone();
            let mut out: Vec<NodeId> = (1..=r).map(|j| ch.build_gamma(b, &init, j, &base)).collect();
            out.extend((1..=r).map(|j| ch.build_epsilon(b, &init, j, &base)));
            out
        });
        Ok(chart)
    }

    fn compile(&self, arity: usize, f: impl FnOnce(&Self, &mut ExprBuilder, &[NodeId]) -> Vec<NodeId>) -> PositiveMap {
        let mut b = ExprBuilder::new();
        let vars: Vec<NodeId> = (0..arity).map(|i| b.var(i)).collect();
        let out = f(self, &mut b, &vars);
        b.finish(arity, out)
    }

    fn compile_action(&self, j: usize) -> PositiveMap {
        let len = self.seed().len();
        let mut b = ExprBuilder::new();
        let c = b.var(0);
        let vars: Vec<NodeId> = (0..len).map(|i| b.var(i + 1)).collect();
        let base = self.build_to_initial(&mut b, &vars);
        let acted = match self.structure {
            Structure::A => build_act_ea(&mut b, self.initial(), j, c, &base),
            Structure::X => build_act_ex(&mut b, self.initial(), j, c, &base),
        };
        let out = self.build_from_initial(&mut b, &acted);
        b.finish(len + 1, out)
    }

    fn build_gamma(&self, b: &mut ExprBuilder, seed: &Seed, j: usize, v: &[NodeId]) -> NodeId {
        match self.structure {
            Structure::A => build_gamma_a(b, seed, j, v),
            Structure::X => build_gamma_x(b, seed, j, v),
        }
    }

    fn build_epsilon(&self, b: &mut ExprBuilder, seed: &Seed, j: usize, v: &[NodeId]) -> NodeId {
        match self.structure {
            Structure::A => build_epsilon_a(b, seed, j, v),
            Structure::X => build_epsilon_x(b, seed, j, v),
        }
    }

    /// Coordinates on this chart → coordinates on the initial seed.
    fn build_to_initial(&self, b: &mut ExprBuilder, v: &[NodeId]) -> Vec<NodeId> {
        let mut cur = v.to_vec();
        for q in (1..self.path.len()).rev() {
            let k = *self.path[q].history().last().expect("mutated seed");
            cur = build_mutation(b, self.structure, &self.path[q], k, &cur);
        }
        cur
    }

    /// Coordinates on the initial seed → coordinates on this chart.
    fn build_from_initial(&self, b: &mut ExprBuilder, v: &[NodeId]) -> Vec<NodeId> {
        let mut cur = v.to_vec();
        for q in 1..self.path.len() {
            let k = *self.path[q].history().last().expect("mutated seed");
            cur = build_mutation(b, self.structure, &self.path[q - 1], k, &cur);
        }
        cur
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn initial(&self) -> &Arc<Seed> {
        &self.path[0]
    }

    /// The seed of this chart.
    pub fn seed(&self) -> &Arc<Seed> {
        self.path.last().expect("nonempty path")
    }

    pub fn rank(&self) -> usize {
        self.initial().cartan().rank()
    }

    /// The action map of letter `j`, inputs `(c, coords…)`.
    pub fn action_map(&self, j: usize) -> &PositiveMap {
        &self.actions[j - 1]
    }

    /// Outputs `(γ_1, …, γ_r, ε_1, …, ε_r)`.
    pub fn weights_map(&self) -> &PositiveMap {
        &self.weights
    }

    pub fn to_initial_map(&self) -> &PositiveMap {
        &self.to_initial
    }

    pub fn from_initial_map(&self) -> &PositiveMap {
        &self.from_initial
    }

    fn check_letter(&self, j: usize) -> Result<(), CrystalError> {
        if j == 0 || j > self.rank() {
            Err(CrystalError::LetterOutOfRange(j))
        } else {
            Ok(())
        }
    }

    /// `e_j^c` evaluated in the semifield `sf`.
    pub fn act<S: Semifield>(&self, sf: &S, j: usize, c: &S::Elem, coords: &[S::Elem]) -> Result<Vec<S::Elem>, CrystalError> {
        self.check_letter(j)?;
        let mut inputs = Vec::with_capacity(coords.len() + 1);
        inputs.push(c.clone());
        inputs.extend_from_slice(coords);
        Ok(self.actions[j - 1].eval(sf, &inputs)?)
    }

    /// `(γ, ε)` for all letters, in the semifield `sf`.
    pub fn weights<S: Semifield>(&self, sf: &S, coords: &[S::Elem]) -> Result<Weights<S::Elem>, CrystalError> {
        let mut all = self.weights.eval(sf, coords)?;
        let eps = all.split_off(self.rank());
        Ok((all, eps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{longest_word_type_a, CartanData};
    use crate::crystal_x::act_ex;
    use crate::rational::Rational;
    use crate::semifield::PositiveRationals;
    use crate::tori::{mutate_x_point, XPoint};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn initial_chart_matches_direct_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = Arc::new(Seed::from_word(Arc::new(CartanData::of_type('A', 2).unwrap()), vec![1, 2, 1]).unwrap());
        let chart = ChartCrystal::new(Structure::X, &s).unwrap();
        let x = XPoint::random(s.clone(), &mut rng);
        let c = Rational::new(2, 3);
        let direct = act_ex(2, &c, &x).unwrap();
        let via = chart.act(&PositiveRationals, 2, &c, x.coords()).unwrap();
        assert_eq!(direct.coords(), via.as_slice());
    }

    #[test]
    fn transported_action_commutes_with_mutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = Arc::new(Seed::from_word(Arc::new(CartanData::of_type('A', 3).unwrap()), longest_word_type_a(3)).unwrap());
        let ks = s.indexing().unfrozen();
        let target = s.mutate(ks[0]).unwrap().mutate(ks[1]).unwrap();
        let chart = ChartCrystal::new(Structure::X, &target).unwrap();
        let x = XPoint::random(s.clone(), &mut rng);
        let c = Rational::new(5, 2);
        for j in 1..=3 {
            let acted = act_ex(j, &c, &x).unwrap();
            let lhs = mutate_x_point(ks[1], &mutate_x_point(ks[0], &acted).unwrap()).unwrap();
            let moved = mutate_x_point(ks[1], &mutate_x_point(ks[0], &x).unwrap()).unwrap();
            let rhs = chart.act(&PositiveRationals, j, &c, moved.coords()).unwrap();
            assert_eq!(lhs.coords(), rhs.as_slice());
        }
    }
}
