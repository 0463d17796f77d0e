//! Cluster A- and X-tori: points, mutations and the ensemble map.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::expr::{ExprBuilder, NodeId, PositiveMap};
use crate::rational::Rational;
use crate::seed::{Seed, SeedError, SeedIndex, SeedJson};
use crate::semifield::{EvalError, PositiveRationals};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToriError {
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error("expected {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coordinate at index {0} is zero")]
    ZeroCoordinate(SeedIndex),
    #[error("mutation at {0} leaves the torus (a coordinate becomes zero or undefined)")]
    ChartBoundary(SeedIndex),
    #[error("coordinate for index {0} is missing")]
    MissingCoordinate(SeedIndex),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
}

/// Which torus a point or operator lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    A,
    X,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structure::A => "a",
            Structure::X => "x",
        })
    }
}

macro_rules! torus_point {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Debug, Clone, PartialEq, Eq)]
        pub struct $name {
            seed: Arc<Seed>,
            coords: Vec<Rational>,
        }

        impl $name {
            /// Coordinates in the seed's index order; all must be nonzero.
            pub fn new(seed: Arc<Seed>, coords: Vec<Rational>) -> Result<$name, ToriError> {
                if coords.len() != seed.len() {
                    return Err(ToriError::LengthMismatch { expected: seed.len(), got: coords.len() });
                }
                if let Some(p) = coords.iter().position(|c| c.is_zero()) {
                    return Err(ToriError::ZeroCoordinate(seed.indexing().index_at(p)));
                }
                Ok($name { seed, coords })
            }

            pub fn seed(&self) -> &Arc<Seed> {
                &self.seed
            }

            pub fn coords(&self) -> &[Rational] {
                &self.coords
            }

            pub fn get(&self, k: SeedIndex) -> &Rational {
                &self.coords[self.seed.pos(k)]
            }

            /// Random point with coordinates `p/q`, `1 ≤ p, q ≤ 9`.
            pub fn random<R: Rng>(seed: Arc<Seed>, rng: &mut R) -> $name {
                let coords = (0..seed.len()).map(|_| random_positive_rational(rng)).collect();
                $name { seed, coords }
            }

            pub fn to_json(&self) -> PointJson<Rational> {
                PointJson::new(&self.seed, &self.coords)
            }

            pub fn from_json(json: &PointJson<Rational>) -> Result<$name, ToriError> {
                let (seed, coords) = json.resolve()?;
                $name::new(seed, coords)
            }
        }
    };
}

torus_point!(APoint, "A point of the cluster A-torus of a seed.");
torus_point!(XPoint, "A point of the cluster X-torus of a seed.");

/// `p/q` with `1 ≤ p, q ≤ 9`.
pub fn random_positive_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(1..=9), rng.gen_range(1..=9))
}

fn unfrozen_exponent(q: &Rational) -> i64 {
    q.to_i64().expect("exchange entries touching an unfrozen index are integers")
}

/// `A′_k = (Π_{b_kj>0} A_j^{b_kj} + Π_{b_kj<0} A_j^{−b_kj}) / A_k`, other coordinates unchanged.
pub fn build_a_mutation(b: &mut ExprBuilder, seed: &Seed, k: SeedIndex, a: &[NodeId]) -> Vec<NodeId> {
    let idx = seed.indices();
    let kk = seed.pos(k);
    let mut pos_part = Vec::new();
    let mut neg_part = Vec::new();
    for (p, &j) in idx.iter().enumerate() {
        let e = unfrozen_exponent(seed.b(k, j));
        if e > 0 {
            pos_part.push((a[p], e));
        } else if e < 0 {
            neg_part.push((a[p], -e));
        }
    }
    let plus = b.monomial(&pos_part);
    let minus = b.monomial(&neg_part);
    let num = b.add(plus, minus);
    let mut out = a.to_vec();
    out[kk] = b.quotient(num, a[kk]);
    out
}

/// `X′_k = X_k^{-1}`, `X′_i = X_i X_k^{[b_ik]_+} (1 + X_k)^{−b_ik}`.
pub fn build_x_mutation(b: &mut ExprBuilder, seed: &Seed, k: SeedIndex, x: &[NodeId]) -> Vec<NodeId> {
    let idx = seed.indices();
    let kk = seed.pos(k);
    let one = b.one();
    let one_plus = b.add(one, x[kk]);
    idx.iter()
        .enumerate()
        .map(|(p, &i)| {
            if p == kk {
                return b.pow(x[kk], -1);
            }
            let e = unfrozen_exponent(seed.b(i, k));
            b.monomial(&[(x[p], 1), (x[kk], e.max(0)), (one_plus, -e)])
        })
        .collect()
}

/// `X_i = Π_j A_j^{B̃_ij}`.
pub fn build_ensemble(b: &mut ExprBuilder, seed: &Seed, a: &[NodeId]) -> Vec<NodeId> {
    let bt = seed.b_tilde_int();
    bt.iter()
        .map(|row| {
            let factors: Vec<(NodeId, i64)> = row.iter().enumerate().map(|(q, &e)| (a[q], e)).collect();
            b.monomial(&factors)
        })
        .collect()
}

fn map_over(seed: &Seed, build: impl FnOnce(&mut ExprBuilder, &[NodeId]) -> Vec<NodeId>) -> PositiveMap {
    let mut b = ExprBuilder::new();
    let vars: Vec<NodeId> = (0..seed.len()).map(|i| b.var(i)).collect();
    let out = build(&mut b, &vars);
    b.finish(seed.len(), out)
}

pub fn a_mutation_map(seed: &Seed, k: SeedIndex) -> PositiveMap {
    map_over(seed, |b, v| build_a_mutation(b, seed, k, v))
}

pub fn x_mutation_map(seed: &Seed, k: SeedIndex) -> PositiveMap {
    map_over(seed, |b, v| build_x_mutation(b, seed, k, v))
}

pub fn ensemble_map(seed: &Seed) -> PositiveMap {
    map_over(seed, |b, v| build_ensemble(b, seed, v))
}

fn boundary_checked(k: SeedIndex, vals: Result<Vec<Rational>, EvalError>) -> Result<Vec<Rational>, ToriError> {
    match vals {
        Ok(v) if v.iter().any(|x| x.is_zero()) => Err(ToriError::ChartBoundary(k)),
        Ok(v) => Ok(v),
        Err(EvalError::DivisionByZero) => Err(ToriError::ChartBoundary(k)),
        Err(e) => Err(e.into()),
    }
}

/// A-mutation of a point; the result lives on the mutated seed.
pub fn mutate_a_point(k: SeedIndex, a: &APoint) -> Result<APoint, ToriError> {
    let target = Arc::new(a.seed.mutate(k)?);
    let vals = boundary_checked(k, a_mutation_map(&a.seed, k).eval(&PositiveRationals, &a.coords))?;
    APoint::new(target, vals)
}

/// X-mutation of a point; the result lives on the mutated seed.
pub fn mutate_x_point(k: SeedIndex, x: &XPoint) -> Result<XPoint, ToriError> {
    let target = Arc::new(x.seed.mutate(k)?);
    let vals = boundary_checked(k, x_mutation_map(&x.seed, k).eval(&PositiveRationals, &x.coords))?;
    XPoint::new(target, vals)
}

/// The ensemble map `p: A_Σ → X_Σ`.
pub fn ensemble(a: &APoint) -> Result<XPoint, ToriError> {
    let vals = ensemble_map(&a.seed).eval(&PositiveRationals, &a.coords)?;
    XPoint::new(a.seed.clone(), vals)
}

/// Coordinates keyed by seed index, serialized in index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordMap<T>(pub Vec<(SeedIndex, T)>);

impl<T: Serialize> Serialize for CoordMap<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(&k.to_string(), v)?;
        }
        m.end()
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for CoordMap<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<CoordMap<T>, D::Error> {
        struct V<T>(std::marker::PhantomData<T>);
        impl<'de, T: Deserialize<'de>> Visitor<'de> for V<T> {
            type Value = CoordMap<T>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from seed indices to values")
            }
            fn visit_map<M: MapAccess<'de>>(self, mut m: M) -> Result<CoordMap<T>, M::Error> {
                let mut out = BTreeMap::new();
                while let Some((k, v)) = m.next_entry::<String, T>()? {
                    let idx: SeedIndex = k.trim().parse().map_err(|_| de::Error::custom(format!("bad index {k:?}")))?;
                    if out.insert(idx, v).is_some() {
                        return Err(de::Error::custom(format!("duplicate index {idx}")));
                    }
                }
                Ok(CoordMap(out.into_iter().collect()))
            }
        }
        d.deserialize_map(V(std::marker::PhantomData))
    }
}

/// `{"seed": {…}, "coords": {"-2": "1/3", …}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson<T> {
    pub seed: SeedJson,
    pub coords: CoordMap<T>,
}

impl<T: Clone> PointJson<T> {
    pub fn new(seed: &Seed, values: &[T]) -> PointJson<T> {
        PointJson {
            seed: seed.to_json(),
            coords: CoordMap(seed.indices().into_iter().zip(values.iter().cloned()).collect()),
        }
    }

    /// The seed and coordinates in index order.
    pub fn resolve(&self) -> Result<(Arc<Seed>, Vec<T>), ToriError> {
        let seed = Arc::new(Seed::from_json(&self.seed)?);
        let map: BTreeMap<SeedIndex, &T> = self.coords.0.iter().map(|(k, v)| (*k, v)).collect();
        if let Some(extra) = map.keys().find(|k| !seed.indexing().contains(**k)) {
            return Err(ToriError::Seed(SeedError::UnknownIndex(*extra)));
        }
        let mut values = Vec::with_capacity(seed.len());
        for k in seed.indices() {
            values.push((*map.get(&k).ok_or(ToriError::MissingCoordinate(k))?).clone());
        }
        Ok((seed, values))
    }
}
