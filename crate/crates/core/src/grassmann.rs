//! Points of the Grassmannian: `(r+1)`-dimensional vector subspaces of
//! `R^(d+1)`, i.e. projective `r`-planes in `P^d`.
//!
//! A [`Subspace`] always stores the reduced row echelon form of its basis, so
//! equality, hashing and serialization are basis-independent.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, int, rat, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: RationalMatrix,
}

impl Subspace {
    /// The span of the rows of `spanning`. Rows may be dependent; the zero
    /// subspace is rejected.
    pub fn span(spanning: &RationalMatrix) -> Result<Subspace> {
        Subspace::try_span(spanning).ok_or(Error::ZeroSubspace)
    }

    /// As [`Subspace::span`], returning `None` for the zero subspace.
    pub fn try_span(spanning: &RationalMatrix) -> Option<Subspace> {
        if spanning.rows() == 0 {
            return None;
        }
        let ech = linalg::rref(spanning);
        let rank = ech.rank();
        if rank == 0 {
            return None;
        }
        Some(Subspace {
            basis: ech.reduced.row_block(0, rank),
        })
    }

    /// Builds a subspace from a basis that must have full row rank.
    pub fn from_basis(basis: &RationalMatrix) -> Result<Subspace> {
        let s = Subspace::span(basis)?;
        if s.dim() != basis.rows() {
            return Err(Error::WrongDimension {
                vertex: None,
                expected: basis.rows().saturating_sub(1),
                found: s.projective_dim(),
            });
        }
        Ok(s)
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Subspace> {
        Subspace::from_basis(&RationalMatrix::from_i64(rows, cols, entries))
    }

    /// The whole of `R^ambient`.
    pub fn full(ambient: usize) -> Subspace {
        Subspace {
            basis: RationalMatrix::identity(ambient),
        }
    }

    /// Canonical (reduced echelon) basis.
    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    /// Vector dimension, `d + 1` for the ambient `R^(d+1)`.
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    /// Vector dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Dimension in the projective sense: one less than the vector dimension.
    pub fn projective_dim(&self) -> usize {
        self.basis.rows() - 1
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim(),
                right: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// True iff `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        let stacked = RationalMatrix::vstack(&[&self.basis, &other.basis]);
        Ok(stacked.rank() == self.dim())
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        join(&[self, other])
    }

    pub fn meet(&self, other: &Subspace) -> Result<Option<Subspace>> {
        meet(self, other)
    }

    /// Affine representative with the identity in the last `dim` columns.
    pub fn to_affine(&self) -> Result<AffineRep> {
        let k = self.dim();
        let n = self.ambient_dim();
        let trailing = self.basis.column_block(n - k, n);
        let inv = trailing.inverse().map_err(|_| Error::NotAffine { vertex: None })?;
        let normalized = &inv * &self.basis;
        Ok(AffineRep {
            block: normalized.column_block(0, n - k),
        })
    }
}

/// Span of the union of the operands.
pub fn join(subspaces: &[&Subspace]) -> Result<Subspace> {
    let first = subspaces.first().ok_or(Error::EmptyJoin)?;
    for s in &subspaces[1..] {
        first.check_ambient(s)?;
    }
    let bases: Vec<&RationalMatrix> = subspaces.iter().map(|s| &s.basis).collect();
    Subspace::span(&RationalMatrix::vstack(&bases))
}

/// Exact intersection. `None` is the zero subspace.
///
/// Solves `alpha * U = beta * V` through the left kernel of the stacked
/// bases; the `alpha` part times `U` spans the intersection.
pub fn meet(u: &Subspace, v: &Subspace) -> Result<Option<Subspace>> {
    u.check_ambient(v)?;
    let stacked = RationalMatrix::vstack(&[&u.basis, &v.basis]);
    let kernel = stacked.transpose().nullspace();
    if kernel.rows() == 0 {
        return Ok(None);
    }
    let alpha = kernel.column_block(0, u.dim());
    Ok(Subspace::try_span(&(&alpha * &u.basis)))
}

/// Intersection of several subspaces, folded left to right.
pub fn meet_all(subspaces: &[&Subspace]) -> Result<Option<Subspace>> {
    let (first, rest) = subspaces.split_first().ok_or(Error::EmptyJoin)?;
    let mut acc = (*first).clone();
    for s in rest {
        match meet(&acc, s)? {
            Some(m) => acc = m,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

/// Projective dimension of an optional subspace; the empty meet counts as -1.
pub fn projective_dim_or_empty(s: &Option<Subspace>) -> i64 {
    s.as_ref().map_or(-1, |s| s.projective_dim() as i64)
}

/// Normalized representative `x = (block | I)` of a subspace whose trailing
/// `(r+1) x (r+1)` block is invertible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineRep {
    block: RationalMatrix,
}

impl AffineRep {
    pub fn from_block(block: RationalMatrix) -> Self {
        AffineRep { block }
    }

    pub fn block(&self) -> &RationalMatrix {
        &self.block
    }

    pub fn rank(&self) -> usize {
        self.block.rows() - 1
    }

    /// Ambient projective dimension `d`.
    pub fn ambient_projective_dim(&self) -> usize {
        self.block.cols() + self.block.rows() - 1
    }

    /// The full `(r+1) x (d+1)` matrix `(block | I)`.
    pub fn expanded(&self) -> RationalMatrix {
        RationalMatrix::hstack(&[&self.block, &RationalMatrix::identity(self.block.rows())])
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace::from_basis(&self.expanded()).expect("affine representative has full rank")
    }
}

/// Seeded source of random integer data in `[-bound, bound]`.
///
/// Uses ChaCha8, so a seed gives the same stream on every platform.
pub struct Sampler {
    rng: ChaCha8Rng,
    bound: i64,
    resamples: u64,
}

impl Sampler {
    pub fn new(seed: u64, bound: i64) -> Self {
        assert!(bound >= 1, "sampling bound must be positive");
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bound,
            resamples: 0,
        }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// How many draws were rejected so far.
    pub fn resamples(&self) -> u64 {
        self.resamples
    }

    pub(crate) fn note_resample(&mut self) {
        self.resamples += 1;
    }

    pub fn int_entry(&mut self) -> i64 {
        self.rng.random_range(-self.bound..=self.bound)
    }

    pub fn int_matrix(&mut self, rows: usize, cols: usize) -> RationalMatrix {
        let data = (0..rows * cols).map(|_| int(self.int_entry())).collect();
        RationalMatrix::new(rows, cols, data)
    }

    /// Entries `p / (2 bound)` with `p` in `[-bound, bound]`, i.e. in `[-1/2, 1/2]`.
    pub fn small_matrix(&mut self, rows: usize, cols: usize) -> RationalMatrix {
        let den = 2 * self.bound;
        let data = (0..rows * cols).map(|_| rat(self.int_entry(), den)).collect();
        RationalMatrix::new(rows, cols, data)
    }

    pub fn invertible_matrix(&mut self, n: usize) -> RationalMatrix {
        loop {
            let m = self.int_matrix(n, n);
            if m.is_invertible() {
                return m;
            }
            self.note_resample();
        }
    }

    /// Random subspace of vector dimension `dim`, full rank and affine-normalizable.
    pub fn subspace(&mut self, ambient: usize, dim: usize) -> Subspace {
        assert!(1 <= dim && dim <= ambient, "need 1 <= dim <= ambient");
        loop {
            let m = self.int_matrix(dim, ambient);
            if let Some(s) = Subspace::try_span(&m) {
                if s.dim() == dim && s.to_affine().is_ok() {
                    return s;
                }
            }
            self.note_resample();
        }
    }

    /// Random element of the span of equal-dimensional `parts`:
    /// `sum_k C_k * parts[k]` with random invertible integer `C_k`, redrawn
    /// until it has full row rank and is affine-normalizable. Invertible
    /// coefficients keep the result out of the span of any proper subset.
    pub fn combination(&mut self, parts: &[&Subspace]) -> Subspace {
        let k = parts[0].dim();
        assert!(parts.iter().all(|p| p.dim() == k), "parts must share a dimension");
        loop {
            let mut acc = RationalMatrix::zeros(k, parts[0].ambient_dim());
            for p in parts {
                let c = self.invertible_matrix(k);
                acc = &acc + &(&c * p.basis());
            }
            if let Some(s) = Subspace::try_span(&acc) {
                if s.dim() == k && s.to_affine().is_ok() {
                    return s;
                }
            }
            self.note_resample();
        }
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Convenience wrapper: one subspace from a fresh seeded sampler.
pub fn random_subspace(ambient: usize, dim: usize, seed: u64, bound: i64) -> Subspace {
    Sampler::new(seed, bound).subspace(ambient, dim)
}

/// `true` iff the trailing block of the rational matrix is the identity.
pub fn has_identity_tail(x: &RationalMatrix) -> bool {
    let k = x.rows();
    let n = x.cols();
    (0..k).all(|i| {
        (0..k).all(|j| {
            let e = x.get(i, n - k + j);
            if i == j {
                e.is_one()
            } else {
                e.is_zero()
            }
        })
    })
}
