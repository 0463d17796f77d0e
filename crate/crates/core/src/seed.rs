//! Seeds attached to a reduced word and their mutations.
//!
//! The index set is `I = {-r, …, -1} ∪ {1, …, n}`, always stored in the
//! order `-r, …, -1, 1, …, n`. Negative index `-j` carries letter `j`;
//! positive index `k` carries letter `i_k`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cartan::{CartanData, CartanSpec, WordError};
use crate::matrix::QMatrix;
use crate::rational::Rational;

/// An element of `I`: a nonzero integer in `-r..=n`.
pub type SeedIndex = i64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeedError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("index {0} is not in the index set")]
    UnknownIndex(SeedIndex),
    #[error("index {0} is frozen and cannot be mutated")]
    MutationAtFrozen(SeedIndex),
    #[error("malformed seed: {0}")]
    Malformed(String),
}

/// Combinatorics of the index set of a word: letters, `k⁺`, `k⁻`, frozen set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordIndexing {
    r: usize,
    word: Vec<usize>,
}

impl WordIndexing {
    pub fn new(r: usize, word: Vec<usize>) -> WordIndexing {
        WordIndexing { r, word }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Word length `n`.
    pub fn n(&self) -> usize {
        self.word.len()
    }

    pub fn len(&self) -> usize {
        self.r + self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, k: SeedIndex) -> bool {
        (k < 0 && -k <= self.r as i64) || (k > 0 && k <= self.n() as i64)
    }

    /// Position of `k` in the storage order.
    pub fn pos(&self, k: SeedIndex) -> usize {
        assert!(self.contains(k), "index {k} not in the index set");
        if k < 0 {
            (k + self.r as i64) as usize
        } else {
            self.r + k as usize - 1
        }
    }

    pub fn index_at(&self, p: usize) -> SeedIndex {
        if p < self.r {
            p as i64 - self.r as i64
        } else {
            (p - self.r + 1) as i64
        }
    }

    pub fn indices(&self) -> Vec<SeedIndex> {
        (0..self.len()).map(|p| self.index_at(p)).collect()
    }

    /// `|i_k|`.
    pub fn letter(&self, k: SeedIndex) -> usize {
        if k < 0 {
            (-k) as usize
        } else {
            self.word[k as usize - 1]
        }
    }

    /// `k⁺`: the next index carrying the same letter, or `n + 1`.
    pub fn plus(&self, k: SeedIndex) -> SeedIndex {
        let letter = self.letter(k);
        let start = k.max(0) as usize;
        self.word[start..]
            .iter()
            .position(|&i| i == letter)
            .map_or(self.n() as i64 + 1, |off| (start + off + 1) as i64)
    }

    /// `k⁻` for `k ≥ 1`: the previous index with the same letter, or `-i_k`.
    pub fn minus(&self, k: SeedIndex) -> SeedIndex {
        assert!(k >= 1, "k⁻ is only defined for positive k");
        let letter = self.letter(k);
        self.word[..k as usize - 1]
            .iter()
            .rposition(|&i| i == letter)
            .map_or(-(letter as i64), |p| p as i64 + 1)
    }

    pub fn is_frozen(&self, k: SeedIndex) -> bool {
        k < 0 || self.plus(k) > self.n() as i64
    }

    pub fn frozen(&self) -> Vec<SeedIndex> {
        self.indices().into_iter().filter(|&k| self.is_frozen(k)).collect()
    }

    pub fn unfrozen(&self) -> Vec<SeedIndex> {
        self.indices().into_iter().filter(|&k| !self.is_frozen(k)).collect()
    }

    /// Positions `1 ≤ k ≤ n` with `i_k = letter`, increasing.
    pub fn occurrences(&self, letter: usize) -> Vec<SeedIndex> {
        (1..=self.n() as i64).filter(|&k| self.word[k as usize - 1] == letter).collect()
    }

    /// Last occurrence of `letter`, or `-letter` if it does not occur.
    pub fn last_occurrence(&self, letter: usize) -> SeedIndex {
        self.occurrences(letter).last().copied().unwrap_or(-(letter as i64))
    }

    /// Every letter `1..=r` occurs in the word.
    pub fn has_all_letters(&self) -> bool {
        (1..=self.r).all(|j| self.word.contains(&j))
    }

    /// `b_{j,k}` of the initial exchange matrix, from the closed formula.
    pub fn initial_b(&self, cartan: &CartanData, j: SeedIndex, k: SeedIndex) -> Rational {
        let n = self.n() as i64;
        let (jp, kp) = (self.plus(j), self.plus(k));
        let ind = |b: bool| b as i64;
        let s = -ind(j == kp) + ind(jp == k) - ind(k < j && j < kp && j > 0) + ind(k < jp && jp < kp && jp <= n)
            + ind(j < k && k < jp && k > 0)
            - ind(j < kp && kp < jp && kp <= n);
        Rational::new(cartan.a(self.letter(k), self.letter(j)) * s, 2)
    }

    /// The correction `M_{j,k}` supported on frozen × frozen.
    pub fn m_entry(&self, cartan: &CartanData, j: SeedIndex, k: SeedIndex) -> Rational {
        let n = self.n() as i64;
        let ind = |b: bool| b as i64;
        let s = ind(self.plus(j) > n && self.plus(k) > n) + ind(j < 0 && k < 0);
        Rational::new(cartan.a(self.letter(k), self.letter(j)) * s, 2)
    }
}

/// A seed: exchange matrix on `I × I` plus the data it was built from.
#[derive(Clone, PartialEq, Eq)]
pub struct Seed {
    cartan: Arc<CartanData>,
    indexing: WordIndexing,
    b: QMatrix,
    history: Vec<SeedIndex>,
}

impl Seed {
    /// The initial seed of a reduced word.
    pub fn from_word(cartan: Arc<CartanData>, word: Vec<usize>) -> Result<Seed, SeedError> {
        cartan.validate_word(&word, false)?;
        let indexing = WordIndexing::new(cartan.rank(), word);
        let idx = indexing.indices();
        let b = QMatrix::from_fn(idx.len(), idx.len(), |p, q| indexing.initial_b(&cartan, idx[p], idx[q]));
        Ok(Seed { cartan, indexing, b, history: Vec::new() })
    }

    pub fn cartan(&self) -> &Arc<CartanData> {
        &self.cartan
    }

    pub fn indexing(&self) -> &WordIndexing {
        &self.indexing
    }

    pub fn word(&self) -> &[usize] {
        self.indexing.word()
    }

    pub fn len(&self) -> usize {
        self.indexing.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indexing.is_empty()
    }

    pub fn indices(&self) -> Vec<SeedIndex> {
        self.indexing.indices()
    }

    pub fn pos(&self, k: SeedIndex) -> usize {
        self.indexing.pos(k)
    }

    pub fn history(&self) -> &[SeedIndex] {
        &self.history
    }

    pub fn is_fresh(&self) -> bool {
        self.history.is_empty()
    }

    pub fn is_frozen(&self, k: SeedIndex) -> bool {
        self.indexing.is_frozen(k)
    }

    /// `d_k = d_{|i_k|}`.
    pub fn d(&self, k: SeedIndex) -> i64 {
        self.cartan.d(self.indexing.letter(k))
    }

    pub fn b(&self, j: SeedIndex, k: SeedIndex) -> &Rational {
        &self.b[(self.pos(j), self.pos(k))]
    }

    pub fn b_matrix(&self) -> &QMatrix {
        &self.b
    }

    /// The frozen correction `M`; it depends on the word only and is
    /// carried unchanged through mutations.
    pub fn m_matrix(&self) -> QMatrix {
        let idx = self.indices();
        QMatrix::from_fn(idx.len(), idx.len(), |p, q| self.indexing.m_entry(&self.cartan, idx[p], idx[q]))
    }

    /// `B̃ = B + M`, which is integral.
    pub fn b_tilde(&self) -> QMatrix {
        let m = self.m_matrix();
        let n = self.len();
        QMatrix::from_fn(n, n, |p, q| &self.b[(p, q)] + &m[(p, q)])
    }

    /// `B̃` as integers; panics if an entry is not integral.
    pub fn b_tilde_int(&self) -> Vec<Vec<i64>> {
        self.b_tilde()
            .to_rows()
            .into_iter()
            .map(|row| row.iter().map(|x| x.to_i64().expect("B̃ has a non-integer entry")).collect())
            .collect()
    }

    /// Matrix mutation in direction `k`. Indices are not relabeled.
    ///
    /// Mutation is an involution, so a repeat of the last step is cancelled
    /// in the history rather than appended.
    pub fn mutate(&self, k: SeedIndex) -> Result<Seed, SeedError> {
        if !self.indexing.contains(k) {
            return Err(SeedError::UnknownIndex(k));
        }
        if self.is_frozen(k) {
            return Err(SeedError::MutationAtFrozen(k));
        }
        let kk = self.pos(k);
        let n = self.len();
        let b = &self.b;
        let two = Rational::integer(2);
        let mutated = QMatrix::from_fn(n, n, |i, j| {
            if i == kk || j == kk {
                -&b[(i, j)]
            } else {
                let (bik, bkj) = (&b[(i, kk)], &b[(kk, j)]);
                &b[(i, j)] + (bik.abs() * bkj + bik * bkj.abs()) / &two
            }
        });
        let mut history = self.history.clone();
        if history.last() == Some(&k) {
            history.pop();
        } else {
            history.push(k);
        }
        Ok(Seed { cartan: self.cartan.clone(), indexing: self.indexing.clone(), b: mutated, history })
    }

    /// Applies mutations left to right.
    pub fn mutate_sequence(&self, ks: &[SeedIndex]) -> Result<Seed, SeedError> {
        let mut s = self.clone();
        for &k in ks {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// Mutation sequences of length at most `depth` with no immediate repeat,
    /// shortest first, starting with the empty sequence.
    pub fn mutation_paths(&self, depth: usize) -> Vec<Vec<SeedIndex>> {
        let ks = self.indexing.unfrozen();
        let mut out = vec![vec![]];
        let mut frontier: Vec<Vec<SeedIndex>> = vec![vec![]];
        for _ in 0..depth {
            let mut next = Vec::new();
            for path in &frontier {
                for &k in ks.iter().filter(|&&k| path.last() != Some(&k)) {
                    let mut p = path.clone();
                    p.push(k);
                    next.push(p);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Hex SHA-256 over the canonical JSON of the seed content.
    pub fn content_hash(&self) -> String {
        let body = SeedBody::from(self);
        let bytes = serde_json::to_vec(&body).expect("seed serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn to_json(&self) -> SeedJson {
        let body = SeedBody::from(self);
        let hash = self.content_hash();
        SeedJson { body, hash: Some(hash) }
    }

    /// Rebuilds a seed from JSON: the initial seed is recomputed from the
    /// word, the history replayed, and the stored matrix compared.
    pub fn from_json(json: &SeedJson) -> Result<Seed, SeedError> {
        let cartan = json.body.cartan.build().map_err(|e| SeedError::Malformed(e.to_string()))?;
        let seed = Seed::from_word(Arc::new(cartan), json.body.word.clone())?;
        let seed = seed.mutate_sequence(&json.body.history)?;
        let rebuilt = SeedBody::from(&seed);
        if rebuilt.b != json.body.b {
            return Err(SeedError::Malformed("exchange matrix does not match word and history".into()));
        }
        if let Some(h) = &json.hash {
            if *h != seed.content_hash() {
                return Err(SeedError::Malformed("content hash mismatch".into()));
            }
        }
        Ok(seed)
    }

    /// The initial seed of the same word.
    pub fn fresh(&self) -> Seed {
        Seed::from_word(self.cartan.clone(), self.word().to_vec()).expect("word already validated")
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Seed")
            .field("word", &self.word())
            .field("history", &self.history)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedBody {
    pub cartan: CartanSpec,
    pub word: Vec<usize>,
    #[serde(rename = "I")]
    pub index_set: Vec<SeedIndex>,
    pub frozen: Vec<SeedIndex>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Rational>>,
    pub d: Vec<i64>,
    pub history: Vec<SeedIndex>,
}

/// `{"cartan","word","I","frozen","B","d","history","hash"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    #[serde(flatten)]
    pub body: SeedBody,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hash: Option<String>,
}

impl From<&Seed> for SeedBody {
    fn from(s: &Seed) -> SeedBody {
        SeedBody {
            cartan: CartanSpec::from(s.cartan.as_ref()),
            word: s.word().to_vec(),
            index_set: s.indices(),
            frozen: s.indexing.frozen(),
            b: s.b.to_rows(),
            d: s.indices().iter().map(|&k| s.d(k)).collect(),
            history: s.history.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::longest_word_type_a;

    fn seed(kind: char, r: usize, word: &[usize]) -> Seed {
        Seed::from_word(Arc::new(CartanData::of_type(kind, r).unwrap()), word.to_vec()).unwrap()
    }

    #[test]
    fn plus_minus_frozen() {
        let s = seed('A', 2, &[1, 2, 1]);
        let ix = s.indexing();
        assert_eq!(ix.indices(), vec![-2, -1, 1, 2, 3]);
        assert_eq!(ix.plus(-1), 1);
        assert_eq!(ix.plus(-2), 2);
        assert_eq!(ix.plus(1), 3);
        assert_eq!(ix.plus(2), 4);
        assert_eq!(ix.plus(3), 4);
        assert_eq!(ix.minus(3), 1);
        assert_eq!(ix.minus(1), -1);
        assert_eq!(ix.minus(2), -2);
        assert_eq!(ix.frozen(), vec![-2, -1, 2, 3]);
        assert_eq!(ix.unfrozen(), vec![1]);
        assert_eq!(ix.last_occurrence(1), 3);
    }

    #[test]
    fn a1_exchange_and_correction() {
        let s = seed('A', 1, &[1]);
        assert_eq!(*s.b(1, -1), -1);
        assert_eq!(*s.b(-1, 1), 1);
        let m = s.m_matrix();
        assert_eq!(m, QMatrix::identity(2));
        assert_eq!(s.b_tilde_int(), vec![vec![1, 1], vec![-1, 1]]);
    }

    #[test]
    fn a2_row_and_correction() {
        let s = seed('A', 2, &[1, 2, 1]);
        let row: Vec<Rational> = [-2, -1, 1, 2, 3].iter().map(|&k| s.b(1, k).clone()).collect();
        let expect: Vec<Rational> = [1, -1, 0, -1, 1].iter().map(|&x| Rational::integer(x)).collect();
        assert_eq!(row, expect);
        let m = s.m_matrix();
        assert_eq!(m[(s.pos(2), s.pos(3))], Rational::new(-1, 2));
        assert_eq!(m[(s.pos(3), s.pos(2))], Rational::new(-1, 2));
    }

    #[test]
    fn skew_symmetrizable_and_integral() {
        for (kind, r) in [('A', 3), ('B', 3), ('C', 3), ('G', 2), ('D', 4)] {
            let c = Arc::new(CartanData::of_type(kind, r).unwrap());
            let mut word = Vec::new();
            // greedy long reduced word cycling through the letters
            'grow: loop {
                for i in 1..=r {
                    if c.extends_reduced(&word, i) {
                        word.push(i);
                        continue 'grow;
                    }
                }
                break;
            }
            let s = Seed::from_word(c.clone(), word).unwrap();
            let idx = s.indices();
            for &j in &idx {
                for &k in &idx {
                    assert_eq!(s.b(j, k) * Rational::integer(s.d(k)), -(s.b(k, j) * Rational::integer(s.d(j))));
                }
            }
            s.b_tilde_int();
            for &k in &s.indexing().unfrozen() {
                for &j in &idx {
                    assert!(s.b(j, k).is_integer() && s.b(k, j).is_integer());
                }
            }
        }
    }

    #[test]
    fn mutation_is_involutive_and_rejects_frozen() {
        let s = seed('A', 3, &longest_word_type_a(3));
        for k in s.indexing().unfrozen() {
            let back = s.mutate(k).unwrap().mutate(k).unwrap();
            assert_eq!(back.b_matrix(), s.b_matrix());
        }
        assert_eq!(s.mutate(-1), Err(SeedError::MutationAtFrozen(-1)));
        assert_eq!(s.mutate(99), Err(SeedError::UnknownIndex(99)));
    }

    #[test]
    fn json_roundtrip_and_hash() {
        let s = seed('A', 2, &[1, 2, 1]).mutate(1).unwrap();
        let j = s.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: SeedJson = serde_json::from_str(&text).unwrap();
        let s2 = Seed::from_json(&back).unwrap();
        assert_eq!(s2, s);
        assert_eq!(s2.content_hash(), s.content_hash());
        assert_ne!(s.content_hash(), s.fresh().content_hash());
    }
}
