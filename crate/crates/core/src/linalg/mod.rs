//! Exact rational matrix arithmetic.
//!
//! Everything downstream decides "general position" through the rank and
//! nullspace routines here, so none of them ever rounds.

mod elim;
mod matrix;

use num_bigint::BigInt;
use thiserror::Error;

pub use elim::{inverse, nullspace, rank, rref, solve_right, RowEchelon};
pub use matrix::RationalMatrix;

/// Exact rational in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
}

/// `p/q` as a rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

impl RationalMatrix {
    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn nullspace(&self) -> RationalMatrix {
        nullspace(self)
    }

    pub fn inverse(&self) -> Result<RationalMatrix, LinalgError> {
        inverse(self)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows()
    }
}
