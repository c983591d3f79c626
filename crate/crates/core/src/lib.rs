//! Exact-arithmetic Grassmannian Q-nets and Darboux nets.
//!
//! Nets assign projective `r`-planes (points of `G^d_r`) to the vertices or
//! edges of `Z^N`. This crate propagates them cube by cube, verifies their
//! multidimensional consistency, extracts their noncommutative coefficients
//! and evolves the rotation coefficients with the discrete Darboux map. All
//! arithmetic is over exact rationals, so every dimension count is decided
//! without tolerances.

pub mod coefficients;
pub mod darboux;
pub mod darboux_net;
pub mod error;
pub mod exec;
pub mod grassmann;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod mesh;
pub mod qnet;

pub use coefficients::{EdgeField, PlaquetteField};
pub use darboux::DarbouxState;
pub use darboux_net::EdgeNet;
pub use error::{Error, Result};
pub use exec::Execution;
pub use grassmann::{join, meet, AffineRep, Sampler, Subspace};
pub use lattice::{EdgeLoc, Region, SquareLoc, VertexIndex};
pub use linalg::{Rational, RationalMatrix};
pub use qnet::QNet;
