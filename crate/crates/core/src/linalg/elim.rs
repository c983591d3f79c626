//! Fraction-free Gauss-Jordan elimination.
//!
//! Every row is first scaled to integers; elimination then runs entirely over
//! `BigInt` with the one-step Bareiss update
//! `row_i <- (p_k * row_i - a_ic * row_k) / p_{k-1}`, applied to the rows above
//! the pivot as well as below. Each intermediate entry is a minor of the input,
//! so the division is exact. Pivots are the first nonzero entry in column
//! order; there is no magnitude-based pivoting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{LinalgError, Rational, RationalMatrix};

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon {
    /// Same shape as the input; rows past `rank` are zero.
    pub reduced: RationalMatrix,
    pub pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn integer_rows(m: &RationalMatrix) -> Vec<Vec<BigInt>> {
    m.row_iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
            row.iter()
                .map(|e| e.numer() * (&lcm / e.denom()))
                .collect()
        })
        .collect()
}

/// Runs fraction-free Gauss-Jordan in place. On return every pivot row has
/// the same pivot value (the last pivot) and every pivot column is zero
/// outside its pivot row.
fn gauss_jordan(rows: &mut [Vec<BigInt>], ncols: usize, stop_col: usize) -> (Vec<usize>, BigInt) {
    let nrows = rows.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..stop_col.min(ncols) {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        let (before, rest) = rows.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            let factor = row[c].clone();
            for j in 0..ncols {
                let updated = &pivot * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = updated.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact fraction-free division");
                row[j] = q;
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    (pivots, prev)
}

/// Pivot search restricted to the first `stop_col` columns; columns beyond
/// are carried along (used for augmented systems).
fn echelon_limited(m: &RationalMatrix, stop_col: usize) -> RowEchelon {
    let mut rows = integer_rows(m);
    let (pivots, _) = gauss_jordan(&mut rows, m.cols(), stop_col);
    let mut data = Vec::with_capacity(m.rows() * m.cols());
    for (k, row) in rows.iter().enumerate() {
        match pivots.get(k) {
            Some(&c) => {
                let p = &row[c];
                data.extend(row.iter().map(|e| Rational::new(e.clone(), p.clone())));
            }
            None => {
                debug_assert!(row.iter().all(Zero::is_zero) || stop_col < m.cols());
                data.extend(row.iter().map(|e| Rational::from_integer(e.clone())));
            }
        }
    }
    RowEchelon {
        reduced: RationalMatrix::new(m.rows(), m.cols(), data),
        pivots,
    }
}

pub fn rref(m: &RationalMatrix) -> RowEchelon {
    echelon_limited(m, m.cols())
}

pub fn rank(m: &RationalMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let mut rows = integer_rows(m);
    gauss_jordan(&mut rows, m.cols(), m.cols()).0.len()
}

/// Rows form a basis of `{v : m v^T = 0}`. Each basis vector has a 1 in one
/// free column and zeros in the other free columns.
pub fn nullspace(m: &RationalMatrix) -> RationalMatrix {
    let ech = rref(m);
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    let mut out = RationalMatrix::zeros(free.len(), n);
    for (b, &f) in free.iter().enumerate() {
        out.set(b, f, Rational::one());
        for (k, &pc) in ech.pivots.iter().enumerate() {
            out.set(b, pc, -ech.reduced.get(k, f).clone());
        }
    }
    out
}

pub fn inverse(m: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let aug = RationalMatrix::hstack(&[m, &RationalMatrix::identity(n)]);
    let ech = echelon_limited(&aug, n);
    if ech.rank() < n {
        return Err(LinalgError::Singular);
    }
    Ok(ech.reduced.column_block(n, 2 * n))
}

/// Finds one `x` with `x * a = b`. Free unknowns are set to zero, so the
/// result is deterministic; if `a` is square and invertible it is unique.
pub fn solve_right(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    if a.cols() != b.cols() {
        return Err(LinalgError::ShapeMismatch {
            op: "solve_right",
            left: (a.rows(), a.cols()),
            right: (b.rows(), b.cols()),
        });
    }
    // x a = b  <=>  a^T x^T = b^T
    let unknowns = a.rows();
    let aug = RationalMatrix::hstack(&[&a.transpose(), &b.transpose()]);
    let ech = echelon_limited(&aug, unknowns);
    let rank = ech.rank();
    for k in rank..aug.rows() {
        if ech.reduced.row(k)[unknowns..].iter().any(|e| !e.is_zero()) {
            return Err(LinalgError::NoSolution);
        }
    }
    let mut xt = RationalMatrix::zeros(unknowns, b.rows());
    for (k, &pc) in ech.pivots.iter().enumerate() {
        for j in 0..b.rows() {
            xt.set(pc, j, ech.reduced.get(k, unknowns + j).clone());
        }
    }
    Ok(xt.transpose())
}
