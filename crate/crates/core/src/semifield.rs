//! The two semifields that positive expressions are evaluated in.

use std::fmt;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("no value bound to variable {0}")]
    MissingBinding(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("tropical value overflowed i64")]
    Overflow,
}

/// `(K, ⊕, ⊗, ⊘)` with positive integer constants.
///
/// Subtraction is deliberately absent.
pub trait Semifield {
    type Elem: Clone + PartialEq + fmt::Debug;

    /// Image of the positive integer `n`.
    fn constant(&self, n: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, EvalError>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, EvalError>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, EvalError>;
    fn pow(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem, EvalError>;

    fn one(&self) -> Self::Elem {
        self.constant(1)
    }
}

/// Ordinary `(+, ×, ÷)` on exact rationals.
///
/// Inputs need not be positive; a zero denominator is reported instead of
/// panicking.
#[derive(Debug, Clone, Copy, Default)]
pub struct PositiveRationals;

impl Semifield for PositiveRationals {
    type Elem = Rational;

    fn constant(&self, n: u64) -> Rational {
        Rational::integer(n as i64)
    }

    fn add(&self, a: &Rational, b: &Rational) -> Result<Rational, EvalError> {
        Ok(a + b)
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Result<Rational, EvalError> {
        Ok(a * b)
    }

    fn div(&self, a: &Rational, b: &Rational) -> Result<Rational, EvalError> {
        if b.is_zero() {
            Err(EvalError::DivisionByZero)
        } else {
            Ok(a / b)
        }
    }

    fn pow(&self, a: &Rational, e: i64) -> Result<Rational, EvalError> {
        a.checked_pow(e).ok_or(EvalError::DivisionByZero)
    }
}

/// `(max, +, −)` on integers. Every positive constant maps to `0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TropicalIntegers;

impl Semifield for TropicalIntegers {
    type Elem = i64;

    fn constant(&self, _n: u64) -> i64 {
        0
    }

    fn add(&self, a: &i64, b: &i64) -> Result<i64, EvalError> {
        Ok(*a.max(b))
    }

    fn mul(&self, a: &i64, b: &i64) -> Result<i64, EvalError> {
        a.checked_add(*b).ok_or(EvalError::Overflow)
    }

    fn div(&self, a: &i64, b: &i64) -> Result<i64, EvalError> {
        a.checked_sub(*b).ok_or(EvalError::Overflow)
    }

    fn pow(&self, a: &i64, e: i64) -> Result<i64, EvalError> {
        a.checked_mul(e).ok_or(EvalError::Overflow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tropical_operations() {
        let t = TropicalIntegers;
        assert_eq!(t.add(&3, &-2).unwrap(), 3);
        assert_eq!(t.mul(&3, &-2).unwrap(), 1);
        assert_eq!(t.div(&3, &-2).unwrap(), 5);
        assert_eq!(t.pow(&3, -2).unwrap(), -6);
        assert_eq!(t.constant(7), 0);
    }

    #[test]
    fn rational_division_by_zero() {
        let q = PositiveRationals;
        assert_eq!(
            q.div(&Rational::one(), &Rational::zero()),
            Err(EvalError::DivisionByZero)
        );
        assert_eq!(q.pow(&Rational::zero(), -1), Err(EvalError::DivisionByZero));
    }
}
