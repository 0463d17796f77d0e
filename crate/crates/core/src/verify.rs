//! Randomized cross-checks of the coordinate formulas against the matrix
//! model and against each other.
//!
//! Every check draws its own points from a seeded generator, so a suite run
//! is reproducible from `(seed, trials, rng_seed)`.

use std::fmt::Display;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan::longest_word_type_a;
use crate::chart::ChartCrystal;
use crate::crystal_a::{act_ea, act_ea_type_a, epsilon_a, gamma_a, longest_word_position};
use crate::crystal_x::{act_ex, epsilon_x, gamma_x};
use crate::matrix::QMatrix;
use crate::oracle::*;
use crate::rational::Rational;
use crate::seed::{Seed, SeedIndex};
use crate::semifield::PositiveRationals;
use crate::tori::{ensemble, random_positive_rational, APoint, Structure, XPoint};

/// Outcome of one named identity over a batch of random trials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub trials: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CheckResult {
    fn new(name: &str) -> CheckResult {
        CheckResult { name: name.to_string(), trials: 0, failures: 0, skipped: None, first_failure: None }
    }

    fn skip(name: &str, why: &str) -> CheckResult {
        CheckResult { skipped: Some(why.to_string()), ..CheckResult::new(name) }
    }

    /// A skipped check counts as passed.
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, outcome: Result<bool, String>, context: impl FnOnce() -> String) {
        self.trials += 1;
        let failure = match outcome {
            Ok(true) => return,
            Ok(false) => context(),
            Err(e) => format!("{}: {e}", context()),
        };
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(failure);
        }
    }
}

fn s<E: Display>(e: E) -> String {
    e.to_string()
}

/// The crystal parameters used by the checks.
pub fn sample_c<R: Rng>(rng: &mut R) -> Rational {
    const C: [(i64, i64); 3] = [(2, 1), (1, 3), (5, 7)];
    let (p, q) = C[rng.gen_range(0..C.len())];
    Rational::new(p, q)
}

fn letters(seed: &Seed) -> Vec<usize> {
    let mut v = seed.word().to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn type_a_skip(seed: &Seed, name: &str) -> Option<CheckResult> {
    (!seed.cartan().is_type_a()).then(|| CheckResult::skip(name, "the matrix model covers type A only"))
}

fn is_longest_word(seed: &Seed) -> bool {
    seed.cartan().is_type_a() && seed.word() == longest_word_type_a(seed.cartan().rank()).as_slice()
}

/// X-action formulas vs `e_j^c` on matrices, up to scalars.
pub fn check_x_action<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "x-action-vs-matrix";
    if let Some(r) = type_a_skip(seed, name) {
        return r;
    }
    let mut res = CheckResult::new(name);
    for _ in 0..trials {
        let x = XPoint::random(seed.clone(), rng);
        for j in letters(seed) {
            let c = sample_c(rng);
            let out = (|| {
                let lhs = embed_x(&act_ex(j, &c, &x).map_err(s)?).map_err(s)?;
                let rhs = act_e_matrix(j, &c, &embed_x(&x).map_err(s)?).map_err(s)?;
                Ok(lhs.proportionality(&rhs).is_some())
            })();
            res.record(out, || format!("j={j} c={c} at {:?}", x.coords()));
        }
    }
    res
}

/// A-action formulas vs minors of `twist⁻¹ ∘ e_j^c ∘ twist`.
pub fn check_a_action<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "a-action-vs-twisted-matrix";
    if let Some(r) = type_a_skip(seed, name) {
        return r;
    }
    let mut res = CheckResult::new(name);
    let word = seed.word();
    for _ in 0..trials {
        let g = random_cell_matrix(seed.cartan(), word, rng).matrix;
        for j in letters(seed) {
            let c = sample_c(rng);
            let out = (|| {
                let a = minors_a(seed, &g).map_err(s)?;
                let h = act_e_matrix(j, &c, &twist(word, &g).map_err(s)?).map_err(s)?;
                let expect = minors_a(seed, &twist_inverse(word, &h).map_err(s)?).map_err(s)?;
                Ok(act_ea(j, &c, &a).map_err(s)? == expect)
            })();
            res.record(out, || format!("j={j} c={c}"));
        }
    }
    res
}

/// The longest-word closed form vs the general A-action.
pub fn check_type_a_closed_form<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "a-action-closed-form";
    if !is_longest_word(seed) {
        return CheckResult::skip(name, "needs type A and the word (1,…,r, …, 1, 2, 1)");
    }
    let mut res = CheckResult::new(name);
    for _ in 0..trials {
        let a = APoint::random(seed.clone(), rng);
        for j in letters(seed) {
            let c = sample_c(rng);
            let out = (|| Ok(act_ea_type_a(j, &c, &a).map_err(s)? == act_ea(j, &c, &a).map_err(s)?))();
            res.record(out, || format!("j={j} c={c} at {:?}", a.coords()));
        }
    }
    res
}

/// `p ∘ e_A = e_X ∘ p`, and `γ, ε` of the A-structure factor through `p`.
pub fn check_ensemble_intertwines<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let mut res = CheckResult::new("ensemble-intertwines-actions");
    for _ in 0..trials {
        let a = APoint::random(seed.clone(), rng);
        for j in letters(seed) {
            let c = sample_c(rng);
            let out = (|| {
                let p = ensemble(&a).map_err(s)?;
                let lhs = ensemble(&act_ea(j, &c, &a).map_err(s)?).map_err(s)?;
                let rhs = act_ex(j, &c, &p).map_err(s)?;
                let weights = gamma_a(j, &a).map_err(s)? == gamma_x(j, &p).map_err(s)?
                    && epsilon_a(j, &a).map_err(s)? == epsilon_x(j, &p).map_err(s)?;
                Ok(lhs == rhs && weights)
            })();
            res.record(out, || format!("j={j} c={c} at {:?}", a.coords()));
        }
    }
    res
}

/// `p(minors(g))` embeds to the twist of `g`, up to scalars.
pub fn check_ensemble_twist<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "ensemble-vs-twist";
    if let Some(r) = type_a_skip(seed, name) {
        return r;
    }
    let mut res = CheckResult::new(name);
    for _ in 0..trials {
        let g = random_cell_matrix(seed.cartan(), seed.word(), rng).matrix;
        let out = (|| {
            let x = ensemble(&minors_a(seed, &g).map_err(s)?).map_err(s)?;
            let h = twist(seed.word(), &g).map_err(s)?;
            Ok(embed_x(&x).map_err(s)?.proportionality(&h).is_some())
        })();
        res.record(out, String::new);
    }
    res
}

/// `γ_j`, `ε_j` of both structures vs the minors of the matrix they represent.
pub fn check_weights_vs_matrix<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "weights-vs-matrix";
    if let Some(r) = type_a_skip(seed, name) {
        return r;
    }
    let mut res = CheckResult::new(name);
    for _ in 0..trials {
        let x = XPoint::random(seed.clone(), rng);
        let g = random_cell_matrix(seed.cartan(), seed.word(), rng).matrix;
        for j in letters(seed) {
            let out = (|| {
                let (eps, gamma, _) = eps_gamma_phi_matrix(j, &embed_x(&x).map_err(s)?).map_err(s)?;
                let x_ok = gamma == gamma_x(j, &x).map_err(s)? && eps == epsilon_x(j, &x).map_err(s)?;
                let a = minors_a(seed, &g).map_err(s)?;
                let (eps, gamma, _) = eps_gamma_phi_matrix(j, &twist(seed.word(), &g).map_err(s)?).map_err(s)?;
                let a_ok = gamma == gamma_a(j, &a).map_err(s)? && eps == epsilon_a(j, &a).map_err(s)?;
                Ok(x_ok && a_ok)
            })();
            res.record(out, || format!("j={j}"));
        }
    }
    res
}

fn random_coords<R: Rng>(len: usize, rng: &mut R) -> Vec<Rational> {
    (0..len).map(|_| random_positive_rational(rng)).collect()
}

/// Covariance of `γ`, `ε` under `e_i^c`, orthogonal invariance of `ε`, the
/// group law `e^{c₁} e^{c₂} = e^{c₁c₂}` and `e^1 = id`.
///
/// `γ_j(e_i^c x) = c^{a(i,j)} γ_j(x)` with `a(i, j) = ⟨α_i^∨, α_j⟩`.
pub fn check_geometric_axioms<R: Rng>(chart: &ChartCrystal, trials: usize, rng: &mut R) -> CheckResult {
    let mut res = CheckResult::new(&format!("geometric-axioms-{}", chart.structure()));
    let cartan = chart.initial().cartan().clone();
    let r = chart.rank();
    let sf = PositiveRationals;
    for _ in 0..trials {
        let x = random_coords(chart.seed().len(), rng);
        for i in 1..=r {
            let c = sample_c(rng);
            let c2 = sample_c(rng);
            let out = (|| {
                let (gamma, eps) = chart.weights(&sf, &x).map_err(s)?;
                let y = chart.act(&sf, i, &c, &x).map_err(s)?;
                let (gamma_y, eps_y) = chart.weights(&sf, &y).map_err(s)?;
                let mut ok = true;
                for j in 1..=r {
                    let scale = c.checked_pow(cartan.a(i, j)).ok_or("c = 0")?;
                    ok &= gamma_y[j - 1] == &gamma[j - 1] * &scale;
                    if j != i && cartan.a(i, j) == 0 && cartan.a(j, i) == 0 {
                        ok &= eps_y[j - 1] == eps[j - 1];
                    }
                }
                ok &= eps_y[i - 1] == &eps[i - 1] / &c;
                let twice = chart.act(&sf, i, &c2, &y).map_err(s)?;
                ok &= twice == chart.act(&sf, i, &(&c * &c2), &x).map_err(s)?;
                ok &= chart.act(&sf, i, &Rational::one(), &x).map_err(s)? == x;
                Ok(ok)
            })();
            res.record(out, || format!("i={i} c={c} at {x:?}"));
        }
    }
    res
}

/// Order of `s_i s_j` from the Cartan entries, for the finite cases.
fn braid_length(p: i64) -> Option<usize> {
    match p {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    }
}

/// `e_𝐢(t) = e_{i_1}^{α^{(1)}(t)} ⋯ e_{i_n}^{α^{(n)}(t)}` with
/// `α^{(k)} = s_{i_n} ⋯ s_{i_{k+1}}(α_{i_k})`, and `t = Π_m α_m^∨(t_m)`.
pub fn verma_action(chart: &ChartCrystal, word: &[usize], t: &[Rational], x: &[Rational]) -> Result<Vec<Rational>, String> {
    let cartan = chart.initial().cartan();
    let r = cartan.rank();
    let mut cur = x.to_vec();
    for k in (0..word.len()).rev() {
        let mut root = cartan.simple_root(word[k]);
        for &i in &word[k + 1..] {
            cartan.reflect(i, &mut root);
        }
        let mut value = Rational::one();
        for m in 1..=r {
            let e: i64 = (1..=r).map(|q| root[q - 1] * cartan.a(m, q)).sum();
            value = value * t[m - 1].checked_pow(e).ok_or("t = 0")?;
        }
        cur = chart.act(&PositiveRationals, word[k], &value, &cur).map_err(s)?;
    }
    Ok(cur)
}

/// Braid (Verma) relations for every pair of letters with a finite braid.
pub fn check_verma<R: Rng>(chart: &ChartCrystal, trials: usize, rng: &mut R) -> CheckResult {
    let mut res = CheckResult::new(&format!("verma-relations-{}", chart.structure()));
    let cartan = chart.initial().cartan().clone();
    let r = cartan.rank();
    for _ in 0..trials {
        let x = random_coords(chart.seed().len(), rng);
        let t = random_coords(r, rng);
        for i in 1..=r {
            for j in i + 1..=r {
                let Some(m) = braid_length(cartan.a(i, j) * cartan.a(j, i)) else { continue };
                let w1: Vec<usize> = (0..m).map(|q| if q % 2 == 0 { i } else { j }).collect();
                let w2: Vec<usize> = (0..m).map(|q| if q % 2 == 0 { j } else { i }).collect();
                let out = (|| Ok(verma_action(chart, &w1, &t, &x)? == verma_action(chart, &w2, &t, &x)?))();
                res.record(out, || format!("letters {i},{j} t={t:?}"));
            }
        }
    }
    res
}

/// `Δ_{wΛ_i,Λ_i}(twist g) = Δ_{uΛ_i,wΛ_i}(g)` for prefixes `w` of the word
/// and for a random reduced word.
pub fn check_twist_minors<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "twist-minor-identity";
    if let Some(r) = type_a_skip(seed, name) {
        return r;
    }
    let mut res = CheckResult::new(name);
    let word = seed.word();
    let cartan = seed.cartan();
    let r = cartan.rank();
    for _ in 0..trials {
        let g = random_cell_matrix(cartan, word, rng).matrix;
        let mut ws: Vec<Vec<usize>> = (0..=word.len()).map(|k| word[..k].to_vec()).collect();
        if let Some(w) = cartan.random_reduced_word(rng, r * (r + 1) / 2) {
            ws.push(w);
        }
        let h = match twist(word, &g) {
            Ok(h) => h,
            Err(e) => {
                res.record(Err(s(e)), String::new);
                continue;
            }
        };
        for w in &ws {
            for i in 1..=r {
                let ok = generalized_minor(w, &[], i, &h) == generalized_minor(word, w, i, &g);
                res.record(Ok(ok), || format!("w={w:?} i={i}"));
            }
        }
    }
    res
}

/// `twist⁻¹ ∘ twist = id` on the cell.
pub fn check_twist_biregular<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "twist-round-trip";
    if let Some(r) = type_a_skip(seed, name) {
        return r;
    }
    let mut res = CheckResult::new(name);
    for _ in 0..trials {
        let g = random_cell_matrix(seed.cartan(), seed.word(), rng).matrix;
        let out = (|| Ok(twist_inverse(seed.word(), &twist(seed.word(), &g).map_err(s)?).map_err(s)? == g))();
        res.record(out, String::new);
    }
    res
}

/// Pullback of column-initial minors under `e_j^c`: for rows `J ∋ j` with
/// `j + 1 ∉ J`, `D_J ↦ D_J + (c − 1) φ_j D_{J − j + (j+1)}`; otherwise `D_J` is fixed.
pub fn check_minor_pullback<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "minor-pullback";
    if let Some(r) = type_a_skip(seed, name) {
        return r;
    }
    let mut res = CheckResult::new(name);
    let r = seed.cartan().rank();
    let n = r + 1;
    for _ in 0..trials {
        let g = random_cell_matrix(seed.cartan(), seed.word(), rng).matrix;
        for j in letters(seed) {
            let c = sample_c(rng);
            let (moved, phi) = match act_e_matrix(j, &c, &g).and_then(|m| Ok((m, eps_gamma_phi_matrix(j, &g)?.2))) {
                Ok(v) => v,
                Err(e) => {
                    res.record(Err(s(e)), || format!("j={j}"));
                    continue;
                }
            };
            let jj = j - 1;
            for mask in 1u32..(1 << n) {
                let rows: Vec<usize> = (0..n).filter(|b| mask & (1 << b) != 0).collect();
                if rows.len() > r {
                    continue;
                }
                let base = column_initial_minor(&g, &rows);
                let expect = if rows.contains(&jj) && !rows.contains(&(jj + 1)) {
                    let shifted: Vec<usize> = rows.iter().map(|&q| if q == jj { jj + 1 } else { q }).collect();
                    &base + &(&(&c - &Rational::one()) * &phi) * &column_initial_minor(&g, &shifted)
                } else {
                    base
                };
                let ok = column_initial_minor(&moved, &rows) == expect;
                res.record(Ok(ok), || format!("j={j} rows={rows:?}"));
            }
        }
    }
    res
}

/// The `t`-coordinate action and `ε`, `γ` formulas vs the matrix action.
pub fn check_tcoords<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "t-coordinate-action";
    if let Some(r) = type_a_skip(seed, name) {
        return r;
    }
    let mut res = CheckResult::new(name);
    let word = seed.word();
    let cartan = seed.cartan();
    for _ in 0..trials {
        let sample = random_cell_matrix(cartan, word, rng);
        let tc = &sample.tcoords;
        res.record(Ok(tc.matrix(word) == sample.matrix), || "parametrizations disagree".into());
        for j in letters(seed) {
            let c = sample_c(rng);
            let out = (|| {
                let moved = act_e_on_tcoords(cartan, word, j, &c, tc).matrix(word);
                let (eps, gamma, _) = eps_gamma_phi_matrix(j, &sample.matrix).map_err(s)?;
                Ok(moved == act_e_matrix(j, &c, &sample.matrix).map_err(s)?
                    && eps == epsilon_tcoords(cartan, word, j, tc)
                    && gamma == gamma_tcoords(cartan, word, j, tc))
            })();
            res.record(out, || format!("j={j} c={c}"));
        }
    }
    res
}

/// Coordinate changes between `X`, `ȳ` and `t`: round trips, and (type A)
/// `embed_x(X) = (torus part) · Π α_{i_k}^∨(t_k) · Π y_{i_k}(t_k) α_{i_k}^∨(t_k⁻¹)`.
pub fn check_coordinate_changes<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let mut res = CheckResult::new("coordinate-changes");
    let word = seed.word();
    let cartan = seed.cartan();
    let type_a = cartan.is_type_a();
    for _ in 0..trials {
        let ybar = random_coords(word.len(), rng);
        let t = ybar_to_t(cartan, word, &ybar);
        res.record(Ok(t_to_ybar(cartan, word, &t) == ybar), || format!("ȳ={ybar:?}"));
        let x = XPoint::random(seed.clone(), rng);
        let xi = x_to_ybar(&x);
        let positive: Vec<Rational> = (1..=word.len() as SeedIndex).map(|k| x.get(k).clone()).collect();
        res.record(Ok(ybar_to_x(word, &xi) == positive), || format!("X={:?}", x.coords()));
        if type_a {
            let out = (|| {
                let n = cartan.rank() + 1;
                let t = ybar_to_t(cartan, word, &xi);
                let mut g = x_torus_part(&x).map_err(s)?;
                for (&i, tk) in word.iter().zip(&t) {
                    g = &g * &coroot(n, i, tk);
                }
                let tc = TCoords { h: vec![Rational::one(); n], t };
                Ok(&g * &tc.matrix(word) == embed_x(&x).map_err(s)?)
            })();
            res.record(out, || format!("X={:?}", x.coords()));
        }
    }
    res
}

/// On the longest word: `ε_j = g_{j+1,j+1} / g_{j+1,j}` and `γ_j = g_{j,j} / g_{j+1,j+1}`
/// for lower triangular `g`.
pub fn check_entry_weights<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "weights-from-entries";
    if !is_longest_word(seed) {
        return CheckResult::skip(name, "needs type A and the word (1,…,r, …, 1, 2, 1)");
    }
    let mut res = CheckResult::new(name);
    for _ in 0..trials {
        let g = random_cell_matrix(seed.cartan(), seed.word(), rng).matrix;
        for j in 1..=seed.cartan().rank() {
            let out = (|| {
                let (eps, gamma, _) = eps_gamma_phi_matrix(j, &g).map_err(s)?;
                Ok(eps == &g[(j, j)] / &g[(j, j - 1)] && gamma == &g[(j - 1, j - 1)] / &g[(j, j)])
            })();
            res.record(out, || format!("j={j}"));
        }
    }
    res
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..=b).map(|q| q - 1).collect()
}

/// The minor expression for `A′_{m,d}` under `e_d^c`:
/// `[D_{[m+1,r+1], [1,d] ∪ [m+d+1,r+1]} + (c−1) (D_{[r−d+2,r+1],[1,d]} / D_{[r−d+2,r+1],[1,d−1]∪{d+1}}) D_{[m+1,r+1], [1,d−1]∪{d+1}∪[m+d+1,r+1]}] / D_{[m+d+1,r+1],[m+d+1,r+1]}`,
/// all indices 1-based.
pub fn closed_form_minor_expression(g: &QMatrix, r: usize, m: usize, d: usize, c: &Rational) -> Rational {
    let rows = range(m + 1, r + 1);
    let mut cols = range(1, d);
    cols.extend(range(m + d + 1, r + 1));
    let mut cols_shift = range(1, d - 1);
    cols_shift.push(d);
    cols_shift.extend(range(m + d + 1, r + 1));
    let bottom = range(r - d + 2, r + 1);
    let mut bottom_shift = range(1, d - 1);
    bottom_shift.push(d);
    let ratio = &g.minor(&bottom, &range(1, d)) / &g.minor(&bottom, &bottom_shift);
    let num = &g.minor(&rows, &cols) + &(&(&(c - &Rational::one()) * &ratio) * &g.minor(&rows, &cols_shift));
    let tail = range(m + d + 1, r + 1);
    &num / &g.minor(&tail, &tail)
}

/// On the longest word: `A_{m,d} = D_{[m+1,m+d],[1,d]}(g)`, and the closed
/// form equals the minor expression of `A′_{m,d}` at the same `g`.
pub fn check_closed_form_minors<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "closed-form-vs-minors";
    if !is_longest_word(seed) {
        return CheckResult::skip(name, "needs type A and the word (1,…,r, …, 1, 2, 1)");
    }
    let mut res = CheckResult::new(name);
    let r = seed.cartan().rank();
    for _ in 0..trials {
        let g = random_cell_matrix(seed.cartan(), seed.word(), rng).matrix;
        let a = match minors_a(seed, &g) {
            Ok(a) => a,
            Err(e) => {
                res.record(Err(s(e)), String::new);
                continue;
            }
        };
        for d in 1..=r {
            for m in 1..=r - d + 1 {
                let k = longest_word_position(r, m, d);
                let ok = *a.get(k) == g.minor(&range(m + 1, m + d), &range(1, d));
                res.record(Ok(ok), || format!("A_{{{m},{d}}} is not the expected minor"));
            }
            let c = sample_c(rng);
            let moved = match act_ea_type_a(d, &c, &a) {
                Ok(v) => v,
                Err(e) => {
                    res.record(Err(s(e)), || format!("d={d}"));
                    continue;
                }
            };
            for m in 1..=r - d + 1 {
                let k = longest_word_position(r, m, d);
                let ok = *moved.get(k) == closed_form_minor_expression(&g, r, m, d, &c);
                res.record(Ok(ok), || format!("m={m} d={d} c={c}"));
            }
        }
    }
    res
}

/// On the longest word, for `x = a · Π_{i=1}^{r} y_r(t_{i,r}) ⋯ y_i(t_{i,i})`:
/// `p(A(x))_{s,d} = t_{d,s+d} / t_{d+1,s+d}`.
pub fn check_p_factorization<R: Rng>(seed: &Arc<Seed>, trials: usize, rng: &mut R) -> CheckResult {
    let name = "ensemble-factorization";
    if !is_longest_word(seed) {
        return CheckResult::skip(name, "needs type A and the word (1,…,r, …, 1, 2, 1)");
    }
    let mut res = CheckResult::new(name);
    let r = seed.cartan().rank();
    let n = r + 1;
    for _ in 0..trials {
        let mut diag: Vec<Rational> = random_coords(r, rng);
        let prod: Rational = diag.iter().cloned().product();
        diag.push(prod.checked_recip().expect("positive"));
        // t[i][k] = t_{i,k} for 1 ≤ i ≤ k ≤ r
        let mut t = vec![vec![Rational::one(); r + 1]; r + 2];
        let mut x = QMatrix::diagonal(&diag);
        for i in 1..=r {
            for k in (i..=r).rev() {
                t[i][k] = random_positive_rational(rng);
                x = &x * &y_elem(n, k, &t[i][k]);
            }
        }
        let out = (|| {
            let p = ensemble(&minors_a(seed, &x).map_err(s)?).map_err(s)?;
            let mut ok = true;
            for d in 1..=r {
                for sidx in 1..=r - d {
                    let k = longest_word_position(r, sidx, d);
                    ok &= *p.get(k) == &t[d][sidx + d] / &t[d + 1][sidx + d];
                }
            }
            Ok(ok)
        })();
        res.record(out, String::new);
    }
    res
}

/// Runs every check that applies to `seed` with `trials` random trials each.
pub fn run_suite(seed: &Arc<Seed>, trials: usize, rng_seed: u64) -> Vec<CheckResult> {
    type Check = fn(&Arc<Seed>, usize, &mut ChaCha8Rng) -> CheckResult;
    let checks: [Check; 14] = [
        check_x_action,
        check_a_action,
        check_type_a_closed_form,
        check_ensemble_intertwines,
        check_ensemble_twist,
        check_weights_vs_matrix,
        check_twist_minors,
        check_twist_biregular,
        check_minor_pullback,
        check_tcoords,
        check_coordinate_changes,
        check_entry_weights,
        check_closed_form_minors,
        check_p_factorization,
    ];
    let mut out: Vec<CheckResult> = checks
        .iter()
        .enumerate()
        .map(|(q, check)| check(seed, trials, &mut ChaCha8Rng::seed_from_u64(rng_seed.wrapping_add(q as u64))))
        .collect();
    for (q, st) in [Structure::A, Structure::X].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed.wrapping_add(100 + q as u64));
        match ChartCrystal::new(st, seed) {
            Ok(chart) => {
                out.push(check_geometric_axioms(&chart, trials, &mut rng));
                out.push(check_verma(&chart, trials, &mut rng));
            }
            Err(e) => out.push(CheckResult::skip(&format!("geometric-axioms-{st}"), &e.to_string())),
        }
    }
    out
}
