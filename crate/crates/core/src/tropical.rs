//! Tropical points, Kashiwara operators and crystal-axiom checking.
//!
//! Everything here evaluates the same positive maps as the classical side,
//! over [`TropicalIntegers`]. `ẽ_j` is the action at `n = 1`, `f̃_j` at
//! `n = -1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chart::{ChartCrystal, Weights};
use crate::crystal_x::CrystalError;
use crate::seed::{Seed, SeedIndex};
use crate::semifield::TropicalIntegers;
use crate::tori::{a_mutation_map, x_mutation_map, PointJson, Structure, ToriError};

/// An integer point of one chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropPoint {
    structure: Structure,
    seed: Arc<Seed>,
    coords: Vec<i64>,
}

/// `{"structure": "a", "seed": {…}, "coords": {"-1": 3, …}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropPointJson {
    pub structure: Structure,
    #[serde(flatten)]
    pub point: PointJson<i64>,
}

impl TropPoint {
    pub fn new(structure: Structure, seed: Arc<Seed>, coords: Vec<i64>) -> Result<TropPoint, ToriError> {
        if coords.len() != seed.len() {
            return Err(ToriError::LengthMismatch { expected: seed.len(), got: coords.len() });
        }
        Ok(TropPoint { structure, seed, coords })
    }

    /// Uniform random point in `[-radius, radius]^I`.
    pub fn random<R: Rng>(structure: Structure, seed: Arc<Seed>, radius: i64, rng: &mut R) -> TropPoint {
        let coords = random_box_point(seed.len(), radius, rng);
        TropPoint { structure, seed, coords }
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn seed(&self) -> &Arc<Seed> {
        &self.seed
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn get(&self, k: SeedIndex) -> i64 {
        self.coords[self.seed.pos(k)]
    }

    pub fn to_json(&self) -> TropPointJson {
        TropPointJson { structure: self.structure, point: PointJson::new(&self.seed, &self.coords) }
    }

    pub fn from_json(json: &TropPointJson) -> Result<TropPoint, ToriError> {
        let (seed, coords) = json.point.resolve()?;
        TropPoint::new(json.structure, seed, coords)
    }
}

pub fn random_box_point<R: Rng>(len: usize, radius: i64, rng: &mut R) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(-radius..=radius)).collect()
}

fn check_chart(chart: &ChartCrystal, b: &TropPoint) -> Result<(), CrystalError> {
    if chart.structure() != b.structure || **chart.seed() != *b.seed {
        return Err(CrystalError::Internal("point does not live on this chart".into()));
    }
    Ok(())
}

/// `ẽ_j^n b` on the chart of `b`.
pub fn trop_act(chart: &ChartCrystal, j: usize, n: i64, b: &TropPoint) -> Result<TropPoint, CrystalError> {
    check_chart(chart, b)?;
    let coords = chart.act(&TropicalIntegers, j, &n, &b.coords)?;
    Ok(TropPoint { coords, ..b.clone() })
}

/// Per-letter `(wt_j, ε_j, φ_j)` with `φ = ε + wt`.
pub fn trop_wt_eps_phi(chart: &ChartCrystal, b: &TropPoint) -> Result<Vec<(i64, i64, i64)>, CrystalError> {
    check_chart(chart, b)?;
    let (wt, eps) = chart.weights(&TropicalIntegers, &b.coords)?;
    Ok(wt.into_iter().zip(eps).map(|(w, e)| (w, e, e + w)).collect())
}

/// Tropical mutation at `k`; the result lives on the mutated seed.
pub fn trop_mutate(k: SeedIndex, b: &TropPoint) -> Result<TropPoint, ToriError> {
    let target = Arc::new(b.seed.mutate(k)?);
    let map = match b.structure {
        Structure::A => a_mutation_map(&b.seed, k),
        Structure::X => x_mutation_map(&b.seed, k),
    };
    let coords = map.eval(&TropicalIntegers, &b.coords)?;
    Ok(TropPoint { structure: b.structure, seed: target, coords })
}

/// Pass/fail tally for one axiom.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomTally {
    pub checked: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub axiom: String,
    pub letters: Vec<usize>,
    pub point: Vec<i64>,
    pub detail: String,
}

/// Result of checking crystal axioms (or a crystal isomorphism) on a sample.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalReport {
    pub points: u64,
    pub axioms: BTreeMap<String, AxiomTally>,
    pub first_counterexample: Option<Counterexample>,
}

impl CrystalReport {
    pub fn passed(&self) -> bool {
        self.first_counterexample.is_none() && self.axioms.values().all(|t| t.failed == 0)
    }

    pub fn failures(&self) -> u64 {
        self.axioms.values().map(|t| t.failed).sum()
    }

    fn record(&mut self, axiom: &str, ok: bool, letters: &[usize], point: &[i64], detail: impl FnOnce() -> String) {
        let t = self.axioms.entry(axiom.to_string()).or_default();
        t.checked += 1;
        if !ok {
            t.failed += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(Counterexample {
                    axiom: axiom.to_string(),
                    letters: letters.to_vec(),
                    point: point.to_vec(),
                    detail: detail(),
                });
            }
        }
    }

    /// Adds the tallies of `other`; the earliest counterexample wins.
    pub fn merge(&mut self, other: CrystalReport) {
        self.points += other.points;
        for (k, t) in other.axioms {
            let e = self.axioms.entry(k).or_default();
            e.checked += t.checked;
            e.failed += t.failed;
        }
        if self.first_counterexample.is_none() {
            self.first_counterexample = other.first_counterexample;
        }
    }
}

fn weights_of(chart: &ChartCrystal, b: &[i64]) -> Result<Weights<i64>, CrystalError> {
    chart.weights(&TropicalIntegers, b)
}

/// Checks the crystal axioms at every sample point for the given letters.
///
/// Axioms, for `b` in the sample and letters `i`, `j`:
/// 1. `φ_i = ε_i + wt_i` (`phi`), which holds by construction of `φ`;
/// 2. `wt_j(ẽ_i b) = wt_j(b) + a(i, j)` and the `f̃` counterpart (`weight`);
/// 3. `ε_i(ẽ_i b) = ε_i(b) − 1`, `φ_i(ẽ_i b) = φ_i(b) + 1` (`raise`);
/// 4. `ε_i(f̃_i b) = ε_i(b) + 1`, `φ_i(f̃_i b) = φ_i(b) − 1` (`lower`);
/// 5. `ẽ_i f̃_i b = b = f̃_i ẽ_i b` (`inverse`);
/// 6. `φ_i` never equals −∞ on integer points, so `ẽ_i`, `f̃_i` are total (`free`).
///
/// Additionally `ε_j(ẽ_i b) = ε_j(b)` whenever `a(i, j) = a(j, i) = 0` (`orthogonal`).
pub fn crystal_check(chart: &ChartCrystal, sample: &[Vec<i64>], letters: &[usize]) -> Result<CrystalReport, CrystalError> {
    let cartan = chart.initial().cartan().clone();
    let r = chart.rank();
    let mut report = CrystalReport::default();
    for b in sample {
        report.points += 1;
        let (wt, eps) = weights_of(chart, b)?;
        for &i in letters {
            let ii = i - 1;
            let phi = eps[ii] + wt[ii];
            report.record("phi", phi - eps[ii] == wt[ii], &[i], b, || "φ ≠ ε + wt".into());
            let up = chart.act(&TropicalIntegers, i, &1, b)?;
            let down = chart.act(&TropicalIntegers, i, &-1, b)?;
            report.record("free", true, &[i], b, String::new);
            let (wt_up, eps_up) = weights_of(chart, &up)?;
            let (wt_down, eps_down) = weights_of(chart, &down)?;
            for j in 1..=r {
                let jj = j - 1;
                let a = cartan.a(i, j);
                let ok = wt_up[jj] == wt[jj] + a && wt_down[jj] == wt[jj] - a;
                report.record("weight", ok, &[i, j], b, || {
                    format!("wt_{j}: {} → ẽ {} / f̃ {}, expected shift ±{a}", wt[jj], wt_up[jj], wt_down[jj])
                });
                if j != i && a == 0 && cartan.a(j, i) == 0 {
                    let ok = eps_up[jj] == eps[jj] && eps_down[jj] == eps[jj];
                    report.record("orthogonal", ok, &[i, j], b, || format!("ε_{j} moved under letter {i}"));
                }
            }
            let phi_up = eps_up[ii] + wt_up[ii];
            let phi_down = eps_down[ii] + wt_down[ii];
            report.record("raise", eps_up[ii] == eps[ii] - 1 && phi_up == phi + 1, &[i], b, || {
                format!("ε {} → {}, φ {} → {}", eps[ii], eps_up[ii], phi, phi_up)
            });
            report.record("lower", eps_down[ii] == eps[ii] + 1 && phi_down == phi - 1, &[i], b, || {
                format!("ε {} → {}, φ {} → {}", eps[ii], eps_down[ii], phi, phi_down)
            });
            let back_up = chart.act(&TropicalIntegers, i, &-1, &up)?;
            let back_down = chart.act(&TropicalIntegers, i, &1, &down)?;
            report.record("inverse", back_up == *b && back_down == *b, &[i], b, || "ẽ f̃ ≠ id".into());
        }
    }
    Ok(report)
}

/// Checks that the coordinate change from `source` to `target` is a crystal
/// isomorphism on the sample (points of `source`): it intertwines `ẽ_i`,
/// `f̃_i` and preserves `wt`, `ε`, `φ`. Both charts must share the initial
/// seed; the identification is the tropical mutation chain between them.
pub fn glue_check(source: &ChartCrystal, target: &ChartCrystal, sample: &[Vec<i64>], letters: &[usize]) -> Result<CrystalReport, CrystalError> {
    if source.structure() != target.structure() || **source.initial() != **target.initial() {
        return Err(CrystalError::Internal("charts belong to different seeds".into()));
    }
    let transfer = |b: &[i64]| -> Result<Vec<i64>, CrystalError> {
        let base = source.to_initial_map().eval(&TropicalIntegers, b)?;
        Ok(target.from_initial_map().eval(&TropicalIntegers, &base)?)
    };
    let mut report = CrystalReport::default();
    for b in sample {
        report.points += 1;
        let mb = transfer(b)?;
        let (wt, eps) = weights_of(source, b)?;
        let (wt2, eps2) = weights_of(target, &mb)?;
        report.record("weights", wt == wt2 && eps == eps2, &[], b, || format!("{wt:?}/{eps:?} vs {wt2:?}/{eps2:?}"));
        for &i in letters {
            for n in [1, -1] {
                let lhs = transfer(&source.act(&TropicalIntegers, i, &n, b)?)?;
                let rhs = target.act(&TropicalIntegers, i, &n, &mb)?;
                report.record("intertwine", lhs == rhs, &[i], b, || format!("n = {n}: {lhs:?} vs {rhs:?}"));
            }
        }
    }
    Ok(report)
}

/// All points of `[-radius, radius]^len` in lexicographic order.
pub fn box_points(len: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * radius + 1) as u64;
    let total = side.checked_pow(len as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut code| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = (code % side) as i64 - radius;
            code /= side;
        }
        v
    })
}

/// Largest box the DOT exporter will enumerate.
pub const MAX_GRAPH_VERTICES: u64 = 200_000;

/// The crystal graph on the box `[-radius, radius]^I`: edges `b → f̃_i b`
/// labelled `i`, kept when the target stays inside the box.
pub fn emit_dot(chart: &ChartCrystal, radius: i64, letters: &[usize]) -> Result<String, CrystalError> {
    if radius < 0 {
        return Err(CrystalError::Internal("box radius must be nonnegative".into()));
    }
    let len = chart.seed().len();
    let side = (2 * radius + 1) as u64;
    match side.checked_pow(len as u32) {
        Some(n) if n <= MAX_GRAPH_VERTICES => {}
        _ => return Err(CrystalError::Internal(format!("box of radius {radius} in dimension {len} exceeds {MAX_GRAPH_VERTICES} vertices"))),
    }
    let name = |v: &[i64]| {
        let parts: Vec<String> = v.iter().map(i64::to_string).collect();
        format!("\"({})\"", parts.join(","))
    };
    let mut out = String::from("digraph crystal {\n");
    let labels: Vec<String> = chart.seed().indices().iter().map(i64::to_string).collect();
    let _ = writeln!(out, "  // coordinates ordered by index {}", labels.join(","));
    let points: Vec<Vec<i64>> = box_points(len, radius).collect();
    for p in &points {
        let _ = writeln!(out, "  {};", name(p));
    }
    for p in &points {
        for &i in letters {
            let q = chart.act(&TropicalIntegers, i, &-1, p)?;
            if q.iter().all(|x| x.abs() <= radius) {
                let _ = writeln!(out, "  {} -> {} [label=\"{i}\"];", name(p), name(&q));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}
