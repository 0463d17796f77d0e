//! Explicit geometric crystal on the X-torus of the initial seed.
//!
//! For a letter `j` with occurrences `K_1 < … < K_l` in the word, put
//! `S_m = X_{K_m} ⋯ X_{K_{l-1}}` (`S_l = 1`) and
//! `F(a) = c·(S_1 + … + S_a) + S_{a+1} + … + S_l`.
//! Then `e_j^c` multiplies `X_{K_p}` by `F(min(p+1, l)) / F(p−1)`, and a
//! non-`j` position `k` by `(F(γ+s−1) / F(γ−1))^{a_{j,i_k}}` where
//! `K_γ, …, K_{γ+s−1}` are the occurrences of `j` strictly between `k`
//! and `k⁺` (no factor when `s = 0`). Frozen negatives are fixed by the
//! weight condition `γ_i(e_j^c x) = c^{a_{ji}} γ_i(x)`.

use std::sync::Arc;

use crate::expr::{ExprBuilder, NodeId, PositiveMap};
use crate::rational::Rational;
use crate::seed::Seed;
use crate::semifield::{EvalError, PositiveRationals};
use crate::tori::{ToriError, XPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CrystalError {
    #[error("crystal operators are defined on the initial seed; transport them to mutated charts")]
    NotFresh,
    #[error("letter {0} is not a letter of the Cartan matrix")]
    LetterOutOfRange(usize),
    #[error("letter {0} does not occur in the word")]
    MissingLetter(usize),
    #[error("crystal parameter c must be nonzero")]
    ZeroParameter,
    #[error("point lies outside the domain of the operator")]
    DomainViolation,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Tori(#[from] ToriError),
}

impl From<EvalError> for CrystalError {
    fn from(e: EvalError) -> CrystalError {
        match e {
            EvalError::DivisionByZero => CrystalError::DomainViolation,
            other => CrystalError::Tori(ToriError::Eval(other)),
        }
    }
}

/// Checks that `j` is usable as a crystal letter on `seed`.
pub fn check_letter(seed: &Seed, j: usize) -> Result<(), CrystalError> {
    if j == 0 || j > seed.cartan().rank() {
        return Err(CrystalError::LetterOutOfRange(j));
    }
    if !seed.word().contains(&j) {
        return Err(CrystalError::MissingLetter(j));
    }
    Ok(())
}

fn check_fresh_and_letter(seed: &Seed, j: usize) -> Result<(), CrystalError> {
    if !seed.is_fresh() {
        return Err(CrystalError::NotFresh);
    }
    check_letter(seed, j)
}

/// Helper holding the partial products `S_m` for one letter.
struct Telescoping {
    /// `S_1, …, S_l` (0-based storage).
    s: Vec<NodeId>,
    c: NodeId,
}

impl Telescoping {
    fn new(b: &mut ExprBuilder, seed: &Seed, j: usize, c: NodeId, x: &[NodeId]) -> Telescoping {
        let ks = seed.indexing().occurrences(j);
        let l = ks.len();
        let mut s = vec![b.one(); l];
        for m in (0..l.saturating_sub(1)).rev() {
            s[m] = b.mul(x[seed.pos(ks[m])], s[m + 1]);
        }
        Telescoping { s, c }
    }

    fn l(&self) -> usize {
        self.s.len()
    }

    /// `F(a) = c(S_1 + … + S_a) + S_{a+1} + … + S_l`.
    fn f(&self, b: &mut ExprBuilder, a: usize) -> NodeId {
        let a = a.min(self.l());
        let mut terms = Vec::new();
        if a > 0 {
            let head = b.sum(self.s[..a].to_vec());
            terms.push(b.mul(self.c, head));
        }
        terms.extend_from_slice(&self.s[a..]);
        b.sum(terms)
    }

    fn ratio(&self, b: &mut ExprBuilder, num: usize, den: usize) -> NodeId {
        let n = self.f(b, num);
        let d = self.f(b, den);
        b.quotient(n, d)
    }
}

/// Builds `e_j^c` on the X-torus of the initial seed. Returns, for every
/// index in storage order, the node of the new coordinate.
pub fn build_act_ex(b: &mut ExprBuilder, seed: &Seed, j: usize, c: NodeId, x: &[NodeId]) -> Vec<NodeId> {
    let ix = seed.indexing();
    let cartan = seed.cartan();
    let tele = Telescoping::new(b, seed, j, c, x);
    let ks = ix.occurrences(j);
    let l = ks.len();
    let n = ix.n() as i64;

    // factor[k] = X'_k / X_k for positive k
    let mut factor: Vec<Option<NodeId>> = vec![None; ix.n() + 1];
    for k in 1..=n {
        let f = if ix.letter(k) == j {
            let p = ks.iter().position(|&kk| kk == k).expect("occurrence") + 1;
            Some(tele.ratio(b, (p + 1).min(l), p - 1))
        } else {
            let kp = ix.plus(k);
            let between: Vec<usize> = (0..l).filter(|&q| ks[q] > k && ks[q] < kp).collect();
            match between.first() {
                None => None,
                Some(&first) => {
                    let gamma = first + 1;
                    let s = between.len();
                    let r = tele.ratio(b, gamma + s - 1, gamma - 1);
                    let e = cartan.a(j, ix.letter(k));
                    (e != 0).then(|| b.pow(r, e))
                }
            }
        };
        factor[k as usize] = f;
    }

    ix.indices()
        .into_iter()
        .map(|k| {
            let xk = x[seed.pos(k)];
            if k > 0 {
                match factor[k as usize] {
                    Some(f) => b.mul(xk, f),
                    None => xk,
                }
            } else {
                let i = ix.letter(k);
                let mut parts = vec![(xk, 1), (c, cartan.a(j, i))];
                for s in ix.occurrences(i) {
                    if let Some(f) = factor[s as usize] {
                        parts.push((f, -1));
                    }
                }
                b.monomial(&parts)
            }
        })
        .collect()
}

/// `γ_j = X_{−j} Π_{i_k = j} X_k`.
pub fn build_gamma_x(b: &mut ExprBuilder, seed: &Seed, j: usize, x: &[NodeId]) -> NodeId {
    let mut f = vec![x[seed.pos(-(j as i64))]];
    f.extend(seed.indexing().occurrences(j).iter().map(|&k| x[seed.pos(k)]));
    b.product(f)
}

/// `ε_j = (Σ_{p=1}^{l} X_{K_p} ⋯ X_{K_l})^{−1}`.
pub fn build_epsilon_x(b: &mut ExprBuilder, seed: &Seed, j: usize, x: &[NodeId]) -> NodeId {
    let ks = seed.indexing().occurrences(j);
    let mut tails = Vec::with_capacity(ks.len());
    let mut acc = b.one();
    for &k in ks.iter().rev() {
        acc = b.mul(x[seed.pos(k)], acc);
        tails.push(acc);
    }
    let s = b.sum(tails);
    b.pow(s, -1)
}

/// The action map with inputs `(c, X_{-r}, …, X_n)`.
pub fn act_ex_map(seed: &Seed, j: usize) -> PositiveMap {
    let mut b = ExprBuilder::new();
    let c = b.var(0);
    let x: Vec<NodeId> = (0..seed.len()).map(|i| b.var(i + 1)).collect();
    let out = build_act_ex(&mut b, seed, j, c, &x);
    b.finish(seed.len() + 1, out)
}

/// Weight map with outputs `(γ_1, …, γ_r, ε_1, …, ε_r)`.
pub fn weights_x_map(seed: &Seed) -> PositiveMap {
    let mut b = ExprBuilder::new();
    let x: Vec<NodeId> = (0..seed.len()).map(|i| b.var(i)).collect();
    let r = seed.cartan().rank();
    let mut out: Vec<NodeId> = (1..=r).map(|j| build_gamma_x(&mut b, seed, j, &x)).collect();
    out.extend((1..=r).map(|j| build_epsilon_x(&mut b, seed, j, &x)));
    b.finish(seed.len(), out)
}

fn with_c(c: &Rational, coords: &[Rational]) -> Vec<Rational> {
    let mut v = Vec::with_capacity(coords.len() + 1);
    v.push(c.clone());
    v.extend_from_slice(coords);
    v
}

/// `e_j^c` on an X-point of the initial seed.
pub fn act_ex(j: usize, c: &Rational, x: &XPoint) -> Result<XPoint, CrystalError> {
    check_fresh_and_letter(x.seed(), j)?;
    if c.is_zero() {
        return Err(CrystalError::ZeroParameter);
    }
    let vals = act_ex_map(x.seed(), j).eval(&PositiveRationals, &with_c(c, x.coords()))?;
    if vals.iter().any(|v| v.is_zero()) {
        return Err(CrystalError::DomainViolation);
    }
    Ok(XPoint::new(Arc::clone(x.seed()), vals)?)
}

fn eval_scalar(
    seed: &Seed,
    j: usize,
    x: &[Rational],
    build: impl FnOnce(&mut ExprBuilder, &Seed, usize, &[NodeId]) -> NodeId,
) -> Result<Rational, CrystalError> {
    check_fresh_and_letter(seed, j)?;
    let mut b = ExprBuilder::new();
    let vars: Vec<NodeId> = (0..seed.len()).map(|i| b.var(i)).collect();
    let out = build(&mut b, seed, j, &vars);
    Ok(b.finish(seed.len(), vec![out]).eval_one(&PositiveRationals, x)?)
}

pub fn gamma_x(j: usize, x: &XPoint) -> Result<Rational, CrystalError> {
    eval_scalar(x.seed(), j, x.coords(), build_gamma_x)
}

pub fn epsilon_x(j: usize, x: &XPoint) -> Result<Rational, CrystalError> {
    eval_scalar(x.seed(), j, x.coords(), build_epsilon_x)
}

/// `φ_j = ε_j γ_j`.
pub fn phi_x(j: usize, x: &XPoint) -> Result<Rational, CrystalError> {
    Ok(epsilon_x(j, x)? * gamma_x(j, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanData;

    fn seed(r: usize, word: &[usize]) -> Arc<Seed> {
        Arc::new(Seed::from_word(Arc::new(CartanData::of_type('A', r).unwrap()), word.to_vec()).unwrap())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn a1_action_and_weights() {
        let s = seed(1, &[1]);
        let x = XPoint::new(s, vec![q(2, 3), q(5, 7)]).unwrap();
        let c = q(3, 2);
        let y = act_ex(1, &c, &x).unwrap();
        assert_eq!(y.coords(), &[&c * q(2, 3), &c * q(5, 7)]);
        assert_eq!(gamma_x(1, &x).unwrap(), q(10, 21));
        assert_eq!(epsilon_x(1, &x).unwrap(), q(7, 5));
    }

    #[test]
    fn a2_action_matches_closed_form() {
        let s = seed(2, &[1, 2, 1]);
        let (xm2, xm1, x1, x2, x3) = (q(2, 1), q(3, 5), q(7, 2), q(1, 3), q(4, 9));
        let x = XPoint::new(s, vec![xm2.clone(), xm1.clone(), x1.clone(), x2.clone(), x3.clone()]).unwrap();
        let c = q(5, 7);
        let y = act_ex(1, &c, &x).unwrap();
        let one = Rational::one();
        let cx1 = &c * &x1;
        assert_eq!(*y.get(1), &c * &x1);
        assert_eq!(*y.get(3), &x3 * &c * (&x1 + &one) / (&cx1 + &one));
        assert_eq!(*y.get(2), &x2 * (&cx1 + &one) / (&c * (&x1 + &one)));
        assert_eq!(*y.get(-1), &xm1 * (&cx1 + &one) / (&x1 + &one));
        assert_eq!(*y.get(-2), &xm2 * (&x1 + &one) / (&cx1 + &one));
        assert_eq!(epsilon_x(1, &x).unwrap(), one.clone() / (&x1 * &x3 + &x3));
    }

    #[test]
    fn epsilon_at_all_ones_is_reciprocal_multiplicity() {
        let s = seed(3, &[1, 2, 1, 3, 2, 1]);
        let x = XPoint::new(s.clone(), vec![Rational::one(); s.len()]).unwrap();
        assert_eq!(epsilon_x(1, &x).unwrap(), q(1, 3));
        assert_eq!(epsilon_x(2, &x).unwrap(), q(1, 2));
        assert_eq!(epsilon_x(3, &x).unwrap(), q(1, 1));
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = seed(2, &[1, 2, 1]);
        let x = XPoint::new(s.clone(), vec![Rational::one(); 5]).unwrap();
        assert_eq!(act_ex(1, &Rational::zero(), &x), Err(CrystalError::ZeroParameter));
        assert_eq!(act_ex(3, &Rational::one(), &x), Err(CrystalError::LetterOutOfRange(3)));
        let m = Arc::new(s.mutate(1).unwrap());
        let xm = XPoint::new(m, vec![Rational::one(); 5]).unwrap();
        assert_eq!(act_ex(1, &Rational::one(), &xm), Err(CrystalError::NotFresh));
        let partial = seed(2, &[1]);
        let xp = XPoint::new(partial, vec![Rational::one(); 3]).unwrap();
        assert_eq!(act_ex(2, &Rational::one(), &xp), Err(CrystalError::MissingLetter(2)));
    }
}
