//! Generalized Cartan matrices, symmetrizers and reduced words.
//!
//! Letters and rows are 1-based throughout: `a(i, j) = α_j(α_i^∨)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CartanError {
    #[error("matrix is empty or not square")]
    NotSquare,
    #[error("diagonal entry a[{0}][{0}] is not 2")]
    Diagonal(usize),
    #[error("off-diagonal entry a[{0}][{1}] is positive")]
    PositiveOffDiagonal(usize, usize),
    #[error("a[{0}][{1}] and a[{1}][{0}] are not simultaneously zero")]
    ZeroPattern(usize, usize),
    #[error("matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("given symmetrizer does not satisfy d_i a_ij = d_j a_ji")]
    BadSymmetrizer,
    #[error("matrix is degenerate; only full-rank Cartan matrices are supported")]
    Degenerate,
    #[error("unknown Cartan type {0:?}")]
    UnknownType(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("letter {0} is outside 1..={1}")]
    LetterOutOfRange(usize, usize),
    #[error("word is not reduced (fails at position {0})")]
    NotReduced(usize),
    #[error("letter {0} does not occur in the word")]
    MissingLetter(usize),
    #[error("word is empty")]
    Empty,
}

/// A symmetrizable generalized Cartan matrix with its minimal symmetrizer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanData {
    matrix: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    label: Option<String>,
}

impl CartanData {
    /// Validates `matrix` and computes the minimal positive integer symmetrizer.
    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> Result<CartanData, CartanError> {
        validate_gcm(&matrix)?;
        let symmetrizer = minimal_symmetrizer(&matrix)?;
        if integer_det(&matrix) == 0 {
            return Err(CartanError::Degenerate);
        }
        Ok(CartanData { matrix, symmetrizer, label: None })
    }

    /// Like [`from_matrix`](Self::from_matrix) but checks a caller-supplied symmetrizer.
    pub fn with_symmetrizer(matrix: Vec<Vec<i64>>, d: Vec<i64>) -> Result<CartanData, CartanError> {
        let mut c = CartanData::from_matrix(matrix)?;
        let n = c.rank();
        if d.len() != n || d.iter().any(|&x| x <= 0) {
            return Err(CartanError::BadSymmetrizer);
        }
        for i in 0..n {
            for j in 0..n {
                if d[i] * c.matrix[i][j] != d[j] * c.matrix[j][i] {
                    return Err(CartanError::BadSymmetrizer);
                }
            }
        }
        c.symmetrizer = d;
        Ok(c)
    }

    /// Finite type by Bourbaki label, e.g. `('A', 4)`.
    pub fn of_type(kind: char, rank: usize) -> Result<CartanData, CartanError> {
        let bad = || CartanError::UnknownType(format!("{kind}{rank}"));
        let n = rank;
        let mut a = vec![vec![0i64; n]; n];
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i - 1][j - 1] = aij;
            a[j - 1][i - 1] = aji;
        };
        match kind.to_ascii_uppercase() {
            'A' if n >= 1 => (1..n).for_each(|i| link(i, i + 1, -1, -1)),
            'B' if n >= 2 => {
                (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 1, n, -1, -2);
            }
            'C' if n >= 2 => {
                (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 1, n, -2, -1);
            }
            'D' if n >= 4 => {
                (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n, -1, -1);
            }
            'E' if (6..=8).contains(&n) => {
                link(1, 3, -1, -1);
                link(2, 4, -1, -1);
                (3..n).for_each(|i| link(i, i + 1, -1, -1));
            }
            'F' if n == 4 => {
                link(1, 2, -1, -1);
                link(2, 3, -1, -2);
                link(3, 4, -1, -1);
            }
            'G' if n == 2 => link(1, 2, -3, -1),
            _ => return Err(bad()),
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut c = CartanData::from_matrix(a)?;
        c.label = Some(format!("{}{}", kind.to_ascii_uppercase(), n));
        Ok(c)
    }

    /// Parses labels such as `A4` or `G2`.
    pub fn parse_label(s: &str) -> Result<CartanData, CartanError> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(|| CartanError::UnknownType(s.to_string()))?;
        let rank: usize = chars.as_str().parse().map_err(|_| CartanError::UnknownType(s.to_string()))?;
        CartanData::of_type(kind, rank)
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    /// `a_{ij}` for 1-based letters.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.matrix[i - 1][j - 1]
    }

    /// `d_i` for a 1-based letter.
    pub fn d(&self, i: usize) -> i64 {
        self.symmetrizer[i - 1]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// True when this is the type A matrix of its rank.
    pub fn is_type_a(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let expect = if i == j {
                    2
                } else if i.abs_diff(j) == 1 {
                    -1
                } else {
                    0
                };
                self.matrix[i][j] == expect
            })
        })
    }

    /// `s_i(β) = β − β(α_i^∨) α_i` on simple-root coordinates.
    pub fn reflect(&self, i: usize, beta: &mut [i64]) {
        let pairing: i64 = (1..=self.rank()).map(|j| beta[j - 1] * self.a(i, j)).sum();
        beta[i - 1] -= pairing;
    }

    /// `s_{w_1} ⋯ s_{w_k}(β)`.
    pub fn apply_word(&self, word: &[usize], beta: &mut [i64]) {
        for &i in word.iter().rev() {
            self.reflect(i, beta);
        }
    }

    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[i - 1] = 1;
        v
    }

    /// Root-ascent test: every `s_{i_1}⋯s_{i_{k-1}}(α_{i_k})` is a positive root.
    pub fn check_reduced(&self, word: &[usize]) -> bool {
        self.first_non_reduced(word).is_none()
    }

    fn first_non_reduced(&self, word: &[usize]) -> Option<usize> {
        (0..word.len()).find(|&k| !self.extends_reduced(&word[..k], word[k]))
    }

    /// Whether `word · s_i` is reduced, assuming `word` is.
    pub fn extends_reduced(&self, word: &[usize], i: usize) -> bool {
        let mut beta = self.simple_root(i);
        self.apply_word(word, &mut beta);
        beta.iter().all(|&x| x >= 0)
    }

    /// Validates letters and reducedness; with `all_letters`, also that every
    /// letter `1..=rank` occurs.
    pub fn validate_word(&self, word: &[usize], all_letters: bool) -> Result<(), WordError> {
        if word.is_empty() {
            return Err(WordError::Empty);
        }
        let r = self.rank();
        if let Some(&bad) = word.iter().find(|&&i| i == 0 || i > r) {
            return Err(WordError::LetterOutOfRange(bad, r));
        }
        if let Some(k) = self.first_non_reduced(word) {
            return Err(WordError::NotReduced(k + 1));
        }
        if all_letters {
            if let Some(missing) = (1..=r).find(|i| !word.contains(i)) {
                return Err(WordError::MissingLetter(missing));
            }
        }
        Ok(())
    }

    /// Random reduced word containing every letter, of length at most `max_len`.
    ///
    /// Returns `None` if the walk fails to pick up every letter within
    /// `max_len` steps; callers typically retry.
    pub fn random_reduced_word<R: Rng>(&self, rng: &mut R, max_len: usize) -> Option<Vec<usize>> {
        let r = self.rank();
        let target = rng.gen_range(r..=max_len.max(r));
        let mut word: Vec<usize> = Vec::new();
        while word.len() < target {
            let ext: Vec<usize> = (1..=r).filter(|&i| self.extends_reduced(&word, i)).collect();
            if ext.is_empty() {
                break;
            }
            let missing: Vec<usize> = ext.iter().copied().filter(|i| !word.contains(i)).collect();
            let remaining = target - word.len();
            let missing_total = (1..=r).filter(|i| !word.contains(i)).count();
            let pool = if !missing.is_empty() && remaining <= missing_total { &missing } else { &ext };
            word.push(pool[rng.gen_range(0..pool.len())]);
        }
        if (1..=r).all(|i| word.contains(&i)) {
            Some(word)
        } else {
            None
        }
    }
}

/// The reduced word `(1,…,r, 1,…,r−1, …, 1, 2, 1)` of the longest element of type `A_r`.
pub fn longest_word_type_a(r: usize) -> Vec<usize> {
    (0..r).flat_map(|m| 1..=r - m).collect()
}

fn validate_gcm(a: &[Vec<i64>]) -> Result<(), CartanError> {
    let n = a.len();
    if n == 0 || a.iter().any(|row| row.len() != n) {
        return Err(CartanError::NotSquare);
    }
    for i in 0..n {
        if a[i][i] != 2 {
            return Err(CartanError::Diagonal(i + 1));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if a[i][j] > 0 {
                return Err(CartanError::PositiveOffDiagonal(i + 1, j + 1));
            }
            if (a[i][j] == 0) != (a[j][i] == 0) {
                return Err(CartanError::ZeroPattern(i + 1, j + 1));
            }
        }
    }
    Ok(())
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Smallest positive integer `d` with `d_i a_ij = d_j a_ji`, normalized per
/// connected component.
fn minimal_symmetrizer(a: &[Vec<i64>]) -> Result<Vec<i64>, CartanError> {
    let n = a.len();
    // d_i as fractions num/den, filled by BFS over each component
    let mut num = vec![0i64; n];
    let mut den = vec![0i64; n];
    for root in 0..n {
        if num[root] != 0 {
            continue;
        }
        num[root] = 1;
        den[root] = 1;
        let mut component = vec![root];
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                // d_j = d_i a_ij / a_ji
                let (mut p, mut q) = (num[i] * a[i][j], den[i] * a[j][i]);
                if q < 0 {
                    p = -p;
                    q = -q;
                }
                let g = gcd(p, q);
                let (p, q) = (p / g, q / g);
                if num[j] == 0 {
                    num[j] = p;
                    den[j] = q;
                    component.push(j);
                    stack.push(j);
                } else if num[j] * q != p * den[j] {
                    return Err(CartanError::NotSymmetrizable);
                }
            }
        }
        let l = component.iter().fold(1i64, |acc, &i| num_integer::lcm(acc, den[i]));
        let g = component.iter().fold(0i64, |acc, &i| gcd(acc, num[i] * (l / den[i])));
        for &i in &component {
            num[i] = num[i] * (l / den[i]) / g;
            den[i] = 1;
        }
    }
    Ok(num)
}

/// Exact determinant of a small integer matrix (Bareiss elimination).
pub(crate) fn integer_det(a: &[Vec<i64>]) -> i128 {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

/// JSON form: `{"type":"A","rank":4}` or `{"matrix":[[…]],"symmetrizer":[…]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CartanSpec {
    Named {
        #[serde(rename = "type")]
        kind: String,
        rank: usize,
    },
    Explicit {
        matrix: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symmetrizer: Option<Vec<i64>>,
    },
}

impl CartanSpec {
    pub fn build(&self) -> Result<CartanData, CartanError> {
        match self {
            CartanSpec::Named { kind, rank } => {
                let mut chars = kind.chars();
                match (chars.next(), chars.next()) {
                    (Some(k), None) => CartanData::of_type(k, *rank),
                    _ => Err(CartanError::UnknownType(kind.clone())),
                }
            }
            CartanSpec::Explicit { matrix, symmetrizer: None } => CartanData::from_matrix(matrix.clone()),
            CartanSpec::Explicit { matrix, symmetrizer: Some(d) } => {
                CartanData::with_symmetrizer(matrix.clone(), d.clone())
            }
        }
    }
}

impl From<&CartanData> for CartanSpec {
    fn from(c: &CartanData) -> CartanSpec {
        match &c.label {
            Some(l) => CartanSpec::Named { kind: l[..1].to_string(), rank: c.rank() },
            None => CartanSpec::Explicit {
                matrix: c.matrix.clone(),
                symmetrizer: Some(c.symmetrizer.clone()),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn inversions(perm: &[usize]) -> usize {
        let mut count = 0;
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Type A reducedness via permutations: a word is reduced iff its length
    /// equals the inversion count of the product of adjacent transpositions.
    fn reduced_by_permutation(r: usize, word: &[usize]) -> bool {
        let mut perm: Vec<usize> = (0..=r).collect();
        for &i in word {
            perm.swap(i - 1, i);
        }
        inversions(&perm) == word.len()
    }

    #[test]
    fn symmetrizer_examples() {
        let c = CartanData::from_matrix(vec![vec![2, -1], vec![-3, 2]]).unwrap();
        assert_eq!(c.symmetrizer(), &[3, 1]);
        let a3 = CartanData::of_type('A', 3).unwrap();
        assert_eq!(a3.symmetrizer(), &[1, 1, 1]);
        let b3 = CartanData::of_type('B', 3).unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(b3.d(i) * b3.a(i, j), b3.d(j) * b3.a(j, i));
            }
        }
    }

    #[test]
    fn rejects_malformed_matrices() {
        assert_eq!(CartanData::from_matrix(vec![vec![2, 1], vec![-1, 2]]), Err(CartanError::PositiveOffDiagonal(1, 2)));
        assert_eq!(CartanData::from_matrix(vec![vec![2, 0], vec![-1, 2]]), Err(CartanError::ZeroPattern(1, 2)));
        assert_eq!(CartanData::from_matrix(vec![vec![3]]), Err(CartanError::Diagonal(1)));
        assert_eq!(CartanData::from_matrix(vec![vec![2, -2], vec![-2, 2]]), Err(CartanError::Degenerate));
        let cyclic = vec![vec![2, -1, -1], vec![-2, 2, -1], vec![-1, -1, 2]];
        assert_eq!(CartanData::from_matrix(cyclic), Err(CartanError::NotSymmetrizable));
        assert!(CartanData::with_symmetrizer(vec![vec![2, -1], vec![-3, 2]], vec![1, 1]).is_err());
        assert!(CartanData::with_symmetrizer(vec![vec![2, -1], vec![-3, 2]], vec![6, 2]).is_ok());
    }

    #[test]
    fn reduced_word_examples() {
        let a2 = CartanData::of_type('A', 2).unwrap();
        assert!(a2.check_reduced(&[1, 2, 1]));
        assert!(!a2.check_reduced(&[1, 1]));
        let a4 = CartanData::of_type('A', 4).unwrap();
        assert!(a4.check_reduced(&[1, 2, 3, 4, 1, 2, 3, 1, 2, 1]));
        assert_eq!(longest_word_type_a(4), vec![1, 2, 3, 4, 1, 2, 3, 1, 2, 1]);
        let g2 = CartanData::of_type('G', 2).unwrap();
        assert!(g2.check_reduced(&[1, 2, 1, 2, 1, 2]));
        assert!(!g2.check_reduced(&[1, 2, 1, 2, 1, 2, 1]));
    }

    #[test]
    fn validate_word_errors() {
        let a2 = CartanData::of_type('A', 2).unwrap();
        assert_eq!(a2.validate_word(&[1, 3], false), Err(WordError::LetterOutOfRange(3, 2)));
        assert_eq!(a2.validate_word(&[1, 2, 1, 2], false), Err(WordError::NotReduced(4)));
        assert_eq!(a2.validate_word(&[1], true), Err(WordError::MissingLetter(2)));
        assert_eq!(a2.validate_word(&[], false), Err(WordError::Empty));
    }

    #[test]
    fn spec_json_roundtrip() {
        let s: CartanSpec = serde_json::from_str(r#"{"type":"A","rank":4}"#).unwrap();
        assert_eq!(s.build().unwrap(), CartanData::of_type('A', 4).unwrap());
        let s: CartanSpec = serde_json::from_str(r#"{"matrix":[[2,-1],[-3,2]]}"#).unwrap();
        assert_eq!(s.build().unwrap().symmetrizer(), &[3, 1]);
    }

    #[test]
    fn random_words_are_reduced_and_full() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a3 = CartanData::of_type('A', 3).unwrap();
        for _ in 0..50 {
            if let Some(w) = a3.random_reduced_word(&mut rng, 6) {
                assert!(a3.validate_word(&w, true).is_ok(), "{w:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn root_ascent_matches_inversion_count(
            r in 1usize..5,
            raw in proptest::collection::vec(0usize..100, 0..12),
        ) {
            let word: Vec<usize> = raw.iter().map(|x| x % r + 1).collect();
            let a = CartanData::of_type('A', r).unwrap();
            prop_assert_eq!(a.check_reduced(&word), reduced_by_permutation(r, &word));
        }
    }
}
