//! Geometric crystal on the A-torus of the initial seed.
//!
//! The action is recovered from the X-side one through the ensemble map
//! `p`: writing `P = p(A)` and `X̄ = e_j^c(P)`, for `1 ≤ k ≤ n`
//!
//! `A′_{k⁻} = A_{k⁻} · c^{D_{[k,n],((k+1)⁻,…,n⁻,j_max)}} · Π_{l=k}^{n} (P_l / X̄_l)^{D_{[k,l−1],((k+1)⁻,…,l⁻)}}`
//!
//! where `D_{R,C}` is the determinant of `B̃` on rows `R` and columns `C`
//! in the listed order (the empty minor is 1). The last occurrence of each
//! letter `i` is scaled by `c^{δ_{ij}}`.

use std::sync::Arc;

use crate::cartan::{integer_det, longest_word_type_a};
use crate::crystal_x::{build_act_ex, build_epsilon_x, build_gamma_x, check_letter, CrystalError};
use crate::expr::{ExprBuilder, NodeId, PositiveMap};
use crate::rational::Rational;
use crate::seed::{Seed, SeedIndex};
use crate::semifield::PositiveRationals;
use crate::tori::{build_ensemble, APoint};

/// Determinant of `B̃` restricted to `rows × cols` in the given order.
pub fn b_tilde_minor(bt: &[Vec<i64>], seed: &Seed, rows: &[SeedIndex], cols: &[SeedIndex]) -> i64 {
    assert_eq!(rows.len(), cols.len(), "minor needs a square index list");
    let sub: Vec<Vec<i64>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| bt[seed.pos(r)][seed.pos(c)]).collect())
        .collect();
    i64::try_from(integer_det(&sub)).expect("exponent fits in i64")
}

/// Exponent of `c` in `A′_{k⁻}`.
pub fn c_exponent(bt: &[Vec<i64>], seed: &Seed, j: usize, k: SeedIndex) -> i64 {
    let ix = seed.indexing();
    let n = ix.n() as i64;
    let rows: Vec<SeedIndex> = (k..=n).collect();
    let mut cols: Vec<SeedIndex> = (k + 1..=n).map(|l| ix.minus(l)).collect();
    cols.push(ix.last_occurrence(j));
    b_tilde_minor(bt, seed, &rows, &cols)
}

/// Exponent of `P_l / X̄_l` in `A′_{k⁻}`, for `k ≤ l`.
pub fn ratio_exponent(bt: &[Vec<i64>], seed: &Seed, k: SeedIndex, l: SeedIndex) -> i64 {
    let ix = seed.indexing();
    let rows: Vec<SeedIndex> = (k..l).collect();
    let cols: Vec<SeedIndex> = (k + 1..=l).map(|m| ix.minus(m)).collect();
    b_tilde_minor(bt, seed, &rows, &cols)
}

/// Builds `e_j^c` on the A-torus of the initial seed.
pub fn build_act_ea(b: &mut ExprBuilder, seed: &Seed, j: usize, c: NodeId, a: &[NodeId]) -> Vec<NodeId> {
    let ix = seed.indexing();
    let n = ix.n() as i64;
    let r = ix.rank();
    let bt = seed.b_tilde_int();
    let p = build_ensemble(b, seed, a);
    let xbar = build_act_ex(b, seed, j, c, &p);

    let ratios: Vec<NodeId> = (1..=n)
        .map(|l| {
            let pos = seed.pos(l);
            b.quotient(p[pos], xbar[pos])
        })
        .collect();

    let mut out: Vec<Option<NodeId>> = vec![None; seed.len()];
    let assign = |target: SeedIndex, node: NodeId, out: &mut Vec<Option<NodeId>>| {
        let slot = &mut out[seed.pos(target)];
        assert!(slot.is_none(), "index {target} assigned twice");
        *slot = Some(node);
    };

    for k in 1..=n {
        let target = ix.minus(k);
        let mut factors = vec![(a[seed.pos(target)], 1), (c, c_exponent(&bt, seed, j, k))];
        for l in k..=n {
            factors.push((ratios[(l - 1) as usize], ratio_exponent(&bt, seed, k, l)));
        }
        let node = b.monomial(&factors);
        assign(target, node, &mut out);
    }
    for i in 1..=r {
        let last = ix.last_occurrence(i);
        let node = if i == j { b.mul(c, a[seed.pos(last)]) } else { a[seed.pos(last)] };
        assign(last, node, &mut out);
    }
    out.into_iter()
        .enumerate()
        .map(|(p, v)| v.unwrap_or_else(|| panic!("index {} not covered", ix.index_at(p))))
        .collect()
}

/// `γ_j(A) = γ_j(p(A))`.
pub fn build_gamma_a(b: &mut ExprBuilder, seed: &Seed, j: usize, a: &[NodeId]) -> NodeId {
    let p = build_ensemble(b, seed, a);
    build_gamma_x(b, seed, j, &p)
}

/// `ε_j(A) = ε_j(p(A))`.
pub fn build_epsilon_a(b: &mut ExprBuilder, seed: &Seed, j: usize, a: &[NodeId]) -> NodeId {
    let p = build_ensemble(b, seed, a);
    build_epsilon_x(b, seed, j, &p)
}

/// Type `A_r` with the word `(1,…,r, 1,…,r−1, …, 1)`: position of the
/// `d`-th letter of the `m`-th cycle (both 1-based).
pub fn longest_word_position(r: usize, m: usize, d: usize) -> SeedIndex {
    let before: usize = (1..m).map(|mm| r - mm + 1).sum();
    (before + d) as SeedIndex
}

/// Closed form on positive indices for the longest word of type `A_r`:
/// with `R_q = P_{q,j} ⋯ P_{r−j,j}` (`R_{r−j+1} = 1`),
/// `A′_{m,j} = A_{m,j} (c Σ_{q ≤ m} R_q + Σ_{q > m} R_q) / Σ_q R_q` and
/// other positive coordinates fixed. Negative indices use the general formula.
pub fn build_act_ea_type_a(b: &mut ExprBuilder, seed: &Seed, j: usize, c: NodeId, a: &[NodeId]) -> Vec<NodeId> {
    let r = seed.cartan().rank();
    let general = build_act_ea(b, seed, j, c, a);
    let p = build_ensemble(b, seed, a);
    let pnode = |m: usize, d: usize| p[seed.pos(longest_word_position(r, m, d))];
    let len = r - j + 1;
    // R_q for q = 1..=len, stored 0-based
    let mut tails = vec![b.one(); len];
    for q in (0..len - 1).rev() {
        tails[q] = b.mul(pnode(q + 1, j), tails[q + 1]);
    }
    let total = b.sum(tails.clone());
    let mut out = general;
    for m in 1..=len {
        let mut terms = Vec::new();
        let head = b.sum(tails[..m].to_vec());
        terms.push(b.mul(c, head));
        terms.extend_from_slice(&tails[m..]);
        let num = b.sum(terms);
        let ratio = b.quotient(num, total);
        let k = longest_word_position(r, m, j);
        out[seed.pos(k)] = b.mul(a[seed.pos(k)], ratio);
    }
    for k in 1..=seed.indexing().n() as i64 {
        if seed.indexing().letter(k) != j {
            out[seed.pos(k)] = a[seed.pos(k)];
        }
    }
    out
}

fn action_map(seed: &Seed, j: usize, build: fn(&mut ExprBuilder, &Seed, usize, NodeId, &[NodeId]) -> Vec<NodeId>) -> PositiveMap {
    let mut b = ExprBuilder::new();
    let c = b.var(0);
    let a: Vec<NodeId> = (0..seed.len()).map(|i| b.var(i + 1)).collect();
    let out = build(&mut b, seed, j, c, &a);
    b.finish(seed.len() + 1, out)
}

/// The action map with inputs `(c, A_{-r}, …, A_n)`.
pub fn act_ea_map(seed: &Seed, j: usize) -> PositiveMap {
    action_map(seed, j, build_act_ea)
}

pub fn act_ea_type_a_map(seed: &Seed, j: usize) -> PositiveMap {
    action_map(seed, j, build_act_ea_type_a)
}

/// Weight map with outputs `(γ_1, …, γ_r, ε_1, …, ε_r)`.
pub fn weights_a_map(seed: &Seed) -> PositiveMap {
    let mut b = ExprBuilder::new();
    let a: Vec<NodeId> = (0..seed.len()).map(|i| b.var(i)).collect();
    let r = seed.cartan().rank();
    let p = build_ensemble(&mut b, seed, &a);
    let mut out: Vec<NodeId> = (1..=r).map(|j| build_gamma_x(&mut b, seed, j, &p)).collect();
    out.extend((1..=r).map(|j| build_epsilon_x(&mut b, seed, j, &p)));
    b.finish(seed.len(), out)
}

fn run_action(map: PositiveMap, j: usize, c: &Rational, a: &APoint) -> Result<APoint, CrystalError> {
    let seed = a.seed();
    if !seed.is_fresh() {
        return Err(CrystalError::NotFresh);
    }
    check_letter(seed, j)?;
    if c.is_zero() {
        return Err(CrystalError::ZeroParameter);
    }
    let mut inputs = vec![c.clone()];
    inputs.extend_from_slice(a.coords());
    let vals = map.eval(&PositiveRationals, &inputs)?;
    if vals.iter().any(|v| v.is_zero()) {
        return Err(CrystalError::DomainViolation);
    }
    Ok(APoint::new(Arc::clone(seed), vals)?)
}

/// `e_j^c` on an A-point of the initial seed.
pub fn act_ea(j: usize, c: &Rational, a: &APoint) -> Result<APoint, CrystalError> {
    run_action(act_ea_map(a.seed(), j), j, c, a)
}

/// The type A closed form; requires the seed of the word `(1,…,r, …, 1, 2, 1)`.
pub fn act_ea_type_a(j: usize, c: &Rational, a: &APoint) -> Result<APoint, CrystalError> {
    let seed = a.seed();
    if !seed.cartan().is_type_a() || seed.word() != longest_word_type_a(seed.cartan().rank()).as_slice() {
        return Err(CrystalError::Internal("closed form needs type A and the word (1,…,r,…,1,2,1)".into()));
    }
    run_action(act_ea_type_a_map(seed, j), j, c, a)
}

fn eval_scalar(
    a: &APoint,
    j: usize,
    build: fn(&mut ExprBuilder, &Seed, usize, &[NodeId]) -> NodeId,
) -> Result<Rational, CrystalError> {
    let seed = a.seed();
    if !seed.is_fresh() {
        return Err(CrystalError::NotFresh);
    }
    check_letter(seed, j)?;
    let mut b = ExprBuilder::new();
    let vars: Vec<NodeId> = (0..seed.len()).map(|i| b.var(i)).collect();
    let out = build(&mut b, seed, j, &vars);
    Ok(b.finish(seed.len(), vec![out]).eval_one(&PositiveRationals, a.coords())?)
}

pub fn gamma_a(j: usize, a: &APoint) -> Result<Rational, CrystalError> {
    eval_scalar(a, j, build_gamma_a)
}

pub fn epsilon_a(j: usize, a: &APoint) -> Result<Rational, CrystalError> {
    eval_scalar(a, j, build_epsilon_a)
}

pub fn phi_a(j: usize, a: &APoint) -> Result<Rational, CrystalError> {
    Ok(epsilon_a(j, a)? * gamma_a(j, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanData;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn seed(r: usize, word: &[usize]) -> Arc<Seed> {
        Arc::new(Seed::from_word(Arc::new(CartanData::of_type('A', r).unwrap()), word.to_vec()).unwrap())
    }

    #[test]
    fn a1_action_and_weights() {
        let s = seed(1, &[1]);
        let a = APoint::new(s, vec![Rational::new(2, 3), Rational::new(5, 7)]).unwrap();
        let c = Rational::new(7, 4);
        let b = act_ea(1, &c, &a).unwrap();
        assert_eq!(b.coords(), &[Rational::new(2, 3), &c * Rational::new(5, 7)]);
        assert_eq!(gamma_a(1, &a).unwrap(), Rational::new(25, 49));
        assert_eq!(epsilon_a(1, &a).unwrap(), Rational::new(14, 15));
    }

    /// The minors obey `E_k = B̃_{k,j_max} + Σ_{l>k} B̃_{k,l⁻} E_l`, which
    /// is how they arise; checks the row/column ordering.
    #[test]
    fn minor_exponents_follow_recursion() {
        for (r, word) in [(3, longest_word_type_a(3)), (4, longest_word_type_a(4)), (3, vec![2, 1, 3, 2, 1])] {
            let s = seed(r, &word);
            let ix = s.indexing();
            let bt = s.b_tilde_int();
            let n = ix.n() as i64;
            let btv = |a: SeedIndex, b: SeedIndex| bt[s.pos(a)][s.pos(b)];
            for j in 1..=r {
                let mut e = vec![0i64; n as usize + 2];
                for k in (1..=n).rev() {
                    let mut v = btv(k, ix.last_occurrence(j));
                    for l in k + 1..=n {
                        v += btv(k, ix.minus(l)) * e[l as usize];
                    }
                    e[k as usize] = v;
                    assert_eq!(c_exponent(&bt, &s, j, k), v, "c exponent, k={k}, j={j}");
                }
            }
            for m in 1..=n {
                let mut f = vec![0i64; n as usize + 2];
                f[m as usize] = 1;
                for k in (1..m).rev() {
                    f[k as usize] = (k + 1..=m).map(|l| btv(k, ix.minus(l)) * f[l as usize]).sum();
                }
                for k in 1..=m {
                    assert_eq!(ratio_exponent(&bt, &s, k, m), f[k as usize], "k={k}, l={m}");
                }
            }
        }
    }

    #[test]
    fn closed_form_agrees_with_general_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for r in 1..=3 {
            let s = seed(r, &longest_word_type_a(r));
            for j in 1..=r {
                for _ in 0..5 {
                    let a = APoint::random(s.clone(), &mut rng);
                    let c = Rational::new(3, 5);
                    assert_eq!(act_ea(j, &c, &a).unwrap(), act_ea_type_a(j, &c, &a).unwrap());
                }
            }
        }
    }
}
