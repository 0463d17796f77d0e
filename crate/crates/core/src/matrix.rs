//! Dense matrices over exact rationals.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// `x = L·D·U` with `L` lower unitriangular, `D` diagonal, `U` upper unitriangular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ldu {
    pub lower: QMatrix,
    pub diag: Vec<Rational>,
    pub upper: QMatrix,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QMatrix {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> QMatrix {
        QMatrix::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn diagonal(d: &[Rational]) -> QMatrix {
        let n = d.len();
        QMatrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { Rational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> QMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> QMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::integer(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|c| c.to_vec()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// Submatrix on the listed rows and columns, in the listed order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        QMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Determinant by fraction Gaussian elimination with row pivoting.
    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Rational::zero();
            };
            if p != k {
                m.swap_rows(p, k);
                det = -det;
            }
            let pivot = m[(k, k)].clone();
            det = det * &pivot;
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = &m[(i, k)] / &pivot;
                for j in k..n {
                    let v = &m[(k, j)] * &f;
                    m[(i, j)] = &m[(i, j)] - v;
                }
            }
        }
        det
    }

    /// Minor on the listed (0-based) rows and columns, in the listed order.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Rational {
        assert_eq!(rows.len(), cols.len(), "minor needs as many rows as columns");
        if rows.is_empty() {
            return Rational::one();
        }
        self.submatrix(rows, cols).det()
    }

    /// Leading principal `k × k` minor.
    pub fn leading_minor(&self, k: usize) -> Rational {
        let idx: Vec<usize> = (0..k).collect();
        self.minor(&idx, &idx)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss decomposition without pivoting; `None` when a leading principal
    /// minor vanishes.
    pub fn ldu(&self) -> Option<Ldu> {
        assert!(self.is_square(), "Gauss decomposition of a non-square matrix");
        let n = self.rows;
        let mut lower = QMatrix::identity(n);
        let mut work = self.clone();
        for k in 0..n {
            if work[(k, k)].is_zero() {
                return None;
            }
            for i in k + 1..n {
                let f = &work[(i, k)] / &work[(k, k)];
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = &work[(k, j)] * &f;
                    work[(i, j)] = &work[(i, j)] - v;
                }
                lower[(i, k)] = f;
            }
        }
        let diag: Vec<Rational> = (0..n).map(|i| work[(i, i)].clone()).collect();
        let upper = QMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Rational::one()
            } else if j > i {
                &work[(i, j)] / &diag[i]
            } else {
                Rational::zero()
            }
        });
        Some(Ldu { lower, diag, upper })
    }

    /// Solves `self · x = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        assert!(self.is_square() && rhs.len() == self.rows, "shape mismatch in solve");
        let n = self.rows;
        let mut m = QMatrix::from_fn(n, n + 1, |i, j| if j < n { self[(i, j)].clone() } else { rhs[i].clone() });
        for k in 0..n {
            let p = (k..n).find(|&i| !m[(i, k)].is_zero())?;
            m.swap_rows(p, k);
            let pivot = m[(k, k)].clone();
            for j in k..=n {
                m[(k, j)] = &m[(k, j)] / &pivot;
            }
            for i in 0..n {
                if i == k || m[(i, k)].is_zero() {
                    continue;
                }
                let f = m[(i, k)].clone();
                for j in k..=n {
                    let v = &m[(k, j)] * &f;
                    m[(i, j)] = &m[(i, j)] - v;
                }
            }
        }
        Some((0..n).map(|i| m[(i, n)].clone()).collect())
    }

    /// The unique solution of a possibly overdetermined system, or `None` if
    /// the system is inconsistent or has more than one solution.
    pub fn solve_unique(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(rhs.len(), self.rows, "shape mismatch in solve_unique");
        let (rows, cols) = (self.rows, self.cols);
        let mut m = QMatrix::from_fn(rows, cols + 1, |i, j| if j < cols { self[(i, j)].clone() } else { rhs[i].clone() });
        for k in 0..cols {
            let p = (k..rows).find(|&i| !m[(i, k)].is_zero())?;
            m.swap_rows(p, k);
            let pivot = m[(k, k)].clone();
            for j in k..=cols {
                m[(k, j)] = &m[(k, j)] / &pivot;
            }
            for i in 0..rows {
                if i == k || m[(i, k)].is_zero() {
                    continue;
                }
                let f = m[(i, k)].clone();
                for j in k..=cols {
                    let v = &m[(k, j)] * &f;
                    m[(i, j)] = &m[(i, j)] - v;
                }
            }
        }
        if (cols..rows).any(|i| !m[(i, cols)].is_zero()) {
            return None;
        }
        Some((0..cols).map(|i| m[(i, cols)].clone()).collect())
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<Rational> = (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect();
            cols.push(self.solve(&e)?);
        }
        Some(QMatrix::from_fn(n, n, |i, j| cols[j][i].clone()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)].is_zero()))
    }

    /// `Some(λ)` with `self = λ · other` and `λ ≠ 0`, else `None`.
    pub fn proportionality(&self, other: &QMatrix) -> Option<Rational> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        let k = other.data.iter().position(|x| !x.is_zero())?;
        if self.data[k].is_zero() {
            return None;
        }
        let lambda = &self.data[k] / &other.data[k];
        self.data.iter().zip(&other.data).all(|(a, b)| *a == b * &lambda).then_some(lambda)
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul<&QMatrix> for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if rhs[(k, j)].is_zero() {
                        continue;
                    }
                    let v = a * &rhs[(k, j)];
                    out[(i, j)] = &out[(i, j)] + v;
                }
            }
        }
        out
    }
}

impl Mul<QMatrix> for QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: QMatrix) -> QMatrix {
        &self * &rhs
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
