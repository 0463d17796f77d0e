//! Matrix model of type `A_r` used as an independent check on the
//! coordinate formulas.
//!
//! Matrices are `(r+1) × (r+1)` over the rationals. `x_i(t) = I + t E_{i,i+1}`,
//! `y_i(t) = I + t E_{i+1,i}`, `α_i^∨(T) = diag(…, T, T⁻¹, …)` at `i, i+1`,
//! and the coweight `T^{Λ_i^∨} = diag(T, …, T, 1, …, 1)` with `i` copies of
//! `T` represents an element of the adjoint group. `s̄_i = x_i(−1) y_i(1) x_i(−1)`.

use std::sync::Arc;

use rand::Rng;

use crate::cartan::CartanData;
use crate::matrix::QMatrix;
use crate::rational::Rational;
use crate::seed::Seed;
use crate::tori::{random_positive_rational, APoint, ToriError, XPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("the matrix model only covers type A")]
    NotTypeA,
    #[error("the matrix is outside the domain: {0}")]
    Singular(&'static str),
    #[error("matrix has size {got}, expected {expected}")]
    WrongSize { expected: usize, got: usize },
    #[error(transparent)]
    Tori(#[from] ToriError),
}

fn q1() -> Rational {
    Rational::one()
}

pub fn x_elem(n: usize, i: usize, t: &Rational) -> QMatrix {
    let mut m = QMatrix::identity(n);
    m[(i - 1, i)] = t.clone();
    m
}

pub fn y_elem(n: usize, i: usize, t: &Rational) -> QMatrix {
    let mut m = QMatrix::identity(n);
    m[(i, i - 1)] = t.clone();
    m
}

/// `α_i^∨(T)`.
pub fn coroot(n: usize, i: usize, t: &Rational) -> QMatrix {
    let mut m = QMatrix::identity(n);
    m[(i - 1, i - 1)] = t.clone();
    m[(i, i)] = t.checked_recip().expect("coroot of zero");
    m
}

/// `T^{Λ_i^∨} = diag(T × i, 1 × (n − i))`.
pub fn coweight(n: usize, i: usize, t: &Rational) -> QMatrix {
    QMatrix::from_fn(n, n, |a, b| {
        if a != b {
            Rational::zero()
        } else if a < i {
            t.clone()
        } else {
            Rational::one()
        }
    })
}

/// `s̄_i`, acting as `[[0, −1], [1, 0]]` on rows/columns `i, i+1`.
pub fn s_bar(n: usize, i: usize) -> QMatrix {
    let m1 = -Rational::one();
    let a = x_elem(n, i, &m1);
    let b = y_elem(n, i, &q1());
    &(&a * &b) * &a
}

/// `w̄ = s̄_{w_1} ⋯ s̄_{w_k}`.
pub fn w_bar(n: usize, word: &[usize]) -> QMatrix {
    word.iter().fold(QMatrix::identity(n), |acc, &i| &acc * &s_bar(n, i))
}

/// `w̄⁻¹ = s̄_{w_k}⁻¹ ⋯ s̄_{w_1}⁻¹`.
pub fn w_bar_inv(n: usize, word: &[usize]) -> QMatrix {
    word.iter().rev().fold(QMatrix::identity(n), |acc, &i| {
        let inv = s_bar(n, i).inverse().expect("s̄ is invertible");
        &acc * &inv
    })
}

/// `Δ_{w′Λ_i, wΛ_i}(g)`: the leading `i × i` minor of `w̄′⁻¹ g w̄`.
pub fn generalized_minor(w_prime: &[usize], w: &[usize], i: usize, g: &QMatrix) -> Rational {
    let n = g.rows();
    let m = &(&w_bar_inv(n, w_prime) * g) * &w_bar(n, w);
    m.leading_minor(i)
}

fn require_type_a(seed: &Seed) -> Result<usize, OracleError> {
    if seed.cartan().is_type_a() {
        Ok(seed.cartan().rank() + 1)
    } else {
        Err(OracleError::NotTypeA)
    }
}

fn check_size(g: &QMatrix, n: usize) -> Result<(), OracleError> {
    if g.rows() != n || g.cols() != n {
        Err(OracleError::WrongSize { expected: n, got: g.rows() })
    } else {
        Ok(())
    }
}

/// The X-torus chart `X_{-r}^{Λ_r^∨} ⋯ X_{-1}^{Λ_1^∨} y_{i_1}(1) X_1^{Λ_{i_1}^∨} ⋯ y_{i_n}(1) X_n^{Λ_{i_n}^∨}`.
pub fn embed_x(x: &XPoint) -> Result<QMatrix, OracleError> {
    let seed = x.seed();
    let n = require_type_a(seed)?;
    let r = n - 1;
    let mut g = QMatrix::identity(n);
    for i in (1..=r).rev() {
        g = &g * &coweight(n, i, x.get(-(i as i64)));
    }
    for (k, &i) in seed.word().iter().enumerate() {
        g = &g * &y_elem(n, i, &q1());
        g = &g * &coweight(n, i, x.get(k as i64 + 1));
    }
    Ok(g)
}

/// Cluster A-coordinates of `g`: `A_{−i} = Δ_{Λ_i,Λ_i}(g)` and
/// `A_k = Δ_{u_{≤k}Λ_{i_k}, Λ_{i_k}}(g)`.
pub fn minors_a(seed: &Arc<Seed>, g: &QMatrix) -> Result<APoint, OracleError> {
    let n = require_type_a(seed)?;
    check_size(g, n)?;
    let ix = seed.indexing();
    let coords = seed
        .indices()
        .into_iter()
        .map(|k| {
            let i = ix.letter(k);
            let prefix = if k < 0 { &seed.word()[..0] } else { &seed.word()[..k as usize] };
            generalized_minor(prefix, &[], i, g)
        })
        .collect();
    Ok(APoint::new(seed.clone(), coords)?)
}

/// `D_{≤k}`, with `D_{≤0} = 1`.
fn lead(g: &QMatrix, k: usize) -> Rational {
    g.leading_minor(k)
}

/// `(ε_j, γ_j, φ_j)` from minors:
/// `φ_j = D_{[1,j],[1,j]} / D_{[1,j−1]∪{j+1},[1,j]}`, `γ_j = D_{≤j}² / (D_{≤j−1} D_{≤j+1})`, `ε_j = φ_j / γ_j`.
pub fn eps_gamma_phi_matrix(j: usize, g: &QMatrix) -> Result<(Rational, Rational, Rational), OracleError> {
    let d_j = lead(g, j);
    let d_below = lead(g, j - 1);
    let d_above = lead(g, j + 1);
    let mut rows: Vec<usize> = (0..j - 1).collect();
    rows.push(j);
    let cols: Vec<usize> = (0..j).collect();
    let shifted = g.minor(&rows, &cols);
    if shifted.is_zero() || d_below.is_zero() || d_above.is_zero() || d_j.is_zero() {
        return Err(OracleError::Singular("a minor defining ε, γ or φ vanishes"));
    }
    let phi = &d_j / &shifted;
    let gamma = &(&d_j * &d_j) / &(&d_below * &d_above);
    let eps = &phi / &gamma;
    Ok((eps, gamma, phi))
}

/// `e_j^c(g) = x_j((c−1)φ_j(g)) · g · x_j((c⁻¹−1)ε_j(g))`.
pub fn act_e_matrix(j: usize, c: &Rational, g: &QMatrix) -> Result<QMatrix, OracleError> {
    let n = g.rows();
    let (eps, _, phi) = eps_gamma_phi_matrix(j, g)?;
    let cinv = c.checked_recip().ok_or(OracleError::Singular("c = 0"))?;
    let left = x_elem(n, j, &((c - q1()) * &phi));
    let right = x_elem(n, j, &((cinv - q1()) * &eps));
    Ok(&(&left * g) * &right)
}

/// `ι ∘ ζ`: `g ↦ ([ū⁻¹g]₀ [ū⁻¹g]₊)ᵀ` for `u` the product of `word`.
pub fn twist(word: &[usize], g: &QMatrix) -> Result<QMatrix, OracleError> {
    let n = g.rows();
    let m = &w_bar_inv(n, word) * g;
    let ldu = m.ldu().ok_or(OracleError::Singular("ū⁻¹g has no Gauss decomposition"))?;
    Ok(&ldu.upper.transpose() * &QMatrix::diagonal(&ldu.diag))
}

/// Inverse of [`twist`]. With `K = hᵀ`, solves the linear conditions on a
/// lower unitriangular `L` in `N⁻ ∩ ū⁻¹Nū` that make `ū L K` lower
/// triangular, and returns `g = ū L K`. Without the restriction to
/// `ū⁻¹Nū` the solution is not unique unless `u` is the longest element.
pub fn twist_inverse(word: &[usize], h: &QMatrix) -> Result<QMatrix, OracleError> {
    let n = h.rows();
    let k = h.transpose();
    if !k.is_upper_triangular() {
        return Err(OracleError::Singular("h is not lower triangular"));
    }
    let u = w_bar(n, word);
    let uk = &u * &k;
    // ū e_c = ±e_{perm[c]}
    let perm: Vec<usize> = (0..n).map(|c| (0..n).find(|&a| !u[(a, c)].is_zero()).expect("signed permutation")).collect();
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|c| (0..c).map(move |d| (c, d)))
        .filter(|&(c, d)| perm[c] < perm[d])
        .collect();
    let conditions: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let system = QMatrix::from_fn(conditions.len(), unknowns.len(), |row, col| {
        let (a, b) = conditions[row];
        let (c, d) = unknowns[col];
        &u[(a, c)] * &k[(d, b)]
    });
    let rhs: Vec<Rational> = conditions.iter().map(|&(a, b)| -&uk[(a, b)]).collect();
    let sol = system.solve_unique(&rhs).ok_or(OracleError::Singular("h is not in the image of the twist"))?;
    let mut l = QMatrix::identity(n);
    for (v, &(c, d)) in sol.into_iter().zip(&unknowns) {
        l[(c, d)] = v;
    }
    let g = &(&u * &l) * &k;
    debug_assert!(g.is_lower_triangular());
    Ok(g)
}

/// Parametrization `h · y_{i_1}(t_1) α_{i_1}^∨(t_1⁻¹) ⋯ y_{i_n}(t_n) α_{i_n}^∨(t_n⁻¹)`
/// of the lower cell, `h` diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TCoords {
    pub h: Vec<Rational>,
    pub t: Vec<Rational>,
}

impl TCoords {
    pub fn matrix(&self, word: &[usize]) -> QMatrix {
        let n = self.h.len();
        let mut g = QMatrix::diagonal(&self.h);
        for (&i, tk) in word.iter().zip(&self.t) {
            g = &g * &y_elem(n, i, tk);
            g = &g * &coroot(n, i, &tk.checked_recip().expect("nonzero t"));
        }
        g
    }
}

/// `α_j(h) = h_j / h_{j+1}`.
fn alpha(h: &[Rational], j: usize) -> Rational {
    &h[j - 1] / &h[j]
}

fn pow(q: &Rational, e: i64) -> Rational {
    q.checked_pow(e).expect("nonzero base")
}

/// `τ_m = t_1^{a_{i_1,j}} ⋯ t_{m−1}^{a_{i_{m−1},j}} t_m`.
fn tau(cartan: &CartanData, word: &[usize], t: &[Rational], j: usize, m: usize) -> Rational {
    let mut acc = t[m].clone();
    for q in 0..m {
        acc = acc * pow(&t[q], cartan.a(word[q], j));
    }
    acc
}

/// `e_j^c` on the `t`-parametrization; `h` is unchanged and
/// `t′_k = t_k (c Σ_{m<k} τ_m + Σ_{m≥k} τ_m) / (c Σ_{m≤k} τ_m + Σ_{m>k} τ_m)`,
/// sums over `i_m = j`.
pub fn act_e_on_tcoords(cartan: &CartanData, word: &[usize], j: usize, c: &Rational, tc: &TCoords) -> TCoords {
    let occ: Vec<usize> = (0..word.len()).filter(|&m| word[m] == j).collect();
    let taus: Vec<Rational> = occ.iter().map(|&m| tau(cartan, word, &tc.t, j, m)).collect();
    let t = (0..word.len())
        .map(|k| {
            if word[k] != j {
                return tc.t[k].clone();
            }
            let mut num = Rational::zero();
            let mut den = Rational::zero();
            for (&m, tm) in occ.iter().zip(&taus) {
                num = num + if m < k { c * tm } else { tm.clone() };
                den = den + if m <= k { c * tm } else { tm.clone() };
            }
            &tc.t[k] * &num / &den
        })
        .collect();
    TCoords { h: tc.h.clone(), t }
}

/// `ε_j = (Σ_{i_m=j} 1 / (t_m t_{m+1}^{a_{i_{m+1},j}} ⋯ t_n^{a_{i_n,j}}))⁻¹`.
pub fn epsilon_tcoords(cartan: &CartanData, word: &[usize], j: usize, tc: &TCoords) -> Rational {
    let mut total = Rational::zero();
    for m in (0..word.len()).filter(|&m| word[m] == j) {
        let mut den = tc.t[m].clone();
        for q in m + 1..word.len() {
            den = den * pow(&tc.t[q], cartan.a(word[q], j));
        }
        total = total + den.checked_recip().expect("nonzero");
    }
    total.checked_recip().expect("nonzero sum")
}

/// `γ_j = α_j(h) / Π_k t_k^{a_{i_k,j}}`.
pub fn gamma_tcoords(cartan: &CartanData, word: &[usize], j: usize, tc: &TCoords) -> Rational {
    let mut den = Rational::one();
    for (&i, tk) in word.iter().zip(&tc.t) {
        den = den * pow(tk, cartan.a(i, j));
    }
    alpha(&tc.h, j) / den
}

/// Converts `y_{i_1}(c_1) ⋯ y_{i_n}(c_n)` into `Π α^∨_{i_k}(t_k) · Π y_{i_k}(t_k) α^∨_{i_k}(t_k⁻¹)`:
/// `t_n = 1/c_n`, `t_s = Π_{m>s} t_m^{−a_{i_m,i_s}} / c_s`.
pub fn ybar_to_t(cartan: &CartanData, word: &[usize], c: &[Rational]) -> Vec<Rational> {
    let n = word.len();
    let mut t = vec![Rational::one(); n];
    for s in (0..n).rev() {
        let mut num = Rational::one();
        for m in s + 1..n {
            num = num * pow(&t[m], -cartan.a(word[m], word[s]));
        }
        t[s] = num / &c[s];
    }
    t
}

/// Inverse of [`ybar_to_t`]: `c_s = Π_{m>s} t_m^{−a_{i_m,i_s}} / t_s`.
pub fn t_to_ybar(cartan: &CartanData, word: &[usize], t: &[Rational]) -> Vec<Rational> {
    let n = word.len();
    (0..n)
        .map(|s| {
            let mut num = Rational::one();
            for m in s + 1..n {
                num = num * pow(&t[m], -cartan.a(word[m], word[s]));
            }
            num / &t[s]
        })
        .collect()
}

/// `ξ_s = Π_{k ≥ s, i_k = i_s} X_k` for positive indices.
pub fn x_to_ybar(x: &XPoint) -> Vec<Rational> {
    let word = x.seed().word();
    (0..word.len())
        .map(|s| (s..word.len()).filter(|&k| word[k] == word[s]).map(|k| x.get(k as i64 + 1).clone()).product())
        .collect()
}

/// Positive X-coordinates from `ξ`: `X_s = ξ_s / ξ_{s⁺}`.
pub fn ybar_to_x(word: &[usize], xi: &[Rational]) -> Vec<Rational> {
    (0..word.len())
        .map(|s| match (s + 1..word.len()).find(|&k| word[k] == word[s]) {
            Some(next) => &xi[s] / &xi[next],
            None => xi[s].clone(),
        })
        .collect()
}

/// The diagonal factor `X_{−r}^{Λ_r^∨} ⋯ X_{−1}^{Λ_1^∨} X_1^{Λ_{i_1}^∨} ⋯ X_n^{Λ_{i_n}^∨}`.
pub fn x_torus_part(x: &XPoint) -> Result<QMatrix, OracleError> {
    let seed = x.seed();
    let n = require_type_a(seed)?;
    let mut g = QMatrix::identity(n);
    for i in (1..n).rev() {
        g = &g * &coweight(n, i, x.get(-(i as i64)));
    }
    for (k, &i) in seed.word().iter().enumerate() {
        g = &g * &coweight(n, i, x.get(k as i64 + 1));
    }
    Ok(g)
}

/// A random element `h · y_{i_1}(c_1) ⋯ y_{i_n}(c_n)` of the lower cell of
/// `word`, with `h` positive diagonal of determinant 1.
#[derive(Debug, Clone)]
pub struct CellSample {
    pub matrix: QMatrix,
    pub torus: Vec<Rational>,
    pub ybar: Vec<Rational>,
    pub tcoords: TCoords,
}

pub fn random_cell_matrix<R: Rng>(cartan: &CartanData, word: &[usize], rng: &mut R) -> CellSample {
    let n = cartan.rank() + 1;
    let mut torus: Vec<Rational> = (0..n - 1).map(|_| random_positive_rational(rng)).collect();
    let prod: Rational = torus.iter().cloned().product();
    torus.push(prod.checked_recip().expect("positive"));
    let ybar: Vec<Rational> = word.iter().map(|_| random_positive_rational(rng)).collect();
    let mut g = QMatrix::diagonal(&torus);
    for (&i, c) in word.iter().zip(&ybar) {
        g = &g * &y_elem(n, i, c);
    }
    let t = ybar_to_t(cartan, word, &ybar);
    let mut h = QMatrix::diagonal(&torus);
    for (&i, tk) in word.iter().zip(&t) {
        h = &h * &coroot(n, i, tk);
    }
    let h = (0..n).map(|a| h[(a, a)].clone()).collect();
    CellSample { matrix: g, torus, ybar, tcoords: TCoords { h, t } }
}

/// Row indices `J` (0-based) and the first `|J|` columns.
pub fn column_initial_minor(g: &QMatrix, rows: &[usize]) -> Rational {
    let cols: Vec<usize> = (0..rows.len()).collect();
    g.minor(rows, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::longest_word_type_a;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn a(r: usize) -> Arc<CartanData> {
        Arc::new(CartanData::of_type('A', r).unwrap())
    }

    #[test]
    fn s_bar_shape() {
        let s = s_bar(2, 1);
        assert_eq!(s, QMatrix::from_i64_rows(&[vec![0, -1], vec![1, 0]]));
        assert_eq!(s.inverse().unwrap(), QMatrix::from_i64_rows(&[vec![0, 1], vec![-1, 0]]));
    }

    #[test]
    fn a1_embedding() {
        let seed = Arc::new(Seed::from_word(a(1), vec![1]).unwrap());
        let x = XPoint::new(seed, vec![q(2, 3), q(5, 7)]).unwrap();
        let g = embed_x(&x).unwrap();
        let expect = QMatrix::from_rows(vec![vec![q(10, 21), q(0, 1)], vec![q(5, 7), q(1, 1)]]);
        assert_eq!(g, expect);
    }

    #[test]
    fn sl2_twist_example() {
        let (am1, a1) = (q(3, 2), q(5, 4));
        let g = QMatrix::from_rows(vec![vec![am1.clone(), q(0, 1)], vec![a1.clone(), am1.checked_recip().unwrap()]]);
        let h = twist(&[1], &g).unwrap();
        let expect = QMatrix::from_rows(vec![
            vec![a1.clone(), q(0, 1)],
            vec![am1.checked_recip().unwrap(), a1.checked_recip().unwrap()],
        ]);
        assert_eq!(h, expect);
        assert_eq!(twist_inverse(&[1], &h).unwrap(), g);
    }

    #[test]
    fn twist_round_trip_on_cells() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for r in 1..=3 {
            let w = longest_word_type_a(r);
            for _ in 0..5 {
                let s = random_cell_matrix(&a(r), &w, &mut rng);
                let h = twist(&w, &s.matrix).unwrap();
                assert_eq!(twist_inverse(&w, &h).unwrap(), s.matrix);
            }
        }
    }

    #[test]
    fn cell_sample_parametrizations_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = a(3);
        let w = vec![1, 2, 1, 3, 2, 1];
        let s = random_cell_matrix(&c, &w, &mut rng);
        assert_eq!(s.tcoords.matrix(&w), s.matrix);
        assert_eq!(t_to_ybar(&c, &w, &s.tcoords.t), s.ybar);
    }

    #[test]
    fn e_action_on_a1_lower_matrix() {
        let (p, qq, s) = (q(2, 1), q(3, 1), q(1, 6));
        let g = QMatrix::from_rows(vec![vec![p.clone(), q(0, 1)], vec![qq.clone(), s.clone()]]);
        let c = q(5, 3);
        let e = act_e_matrix(1, &c, &g).unwrap();
        let expect = QMatrix::from_rows(vec![vec![&c * &p, q(0, 1)], vec![qq, &s / &c]]);
        assert_eq!(e, expect);
    }
}
