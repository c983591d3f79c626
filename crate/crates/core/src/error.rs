use thiserror::Error;

use crate::lattice::{EdgeLoc, SquareLoc, VertexIndex};
use crate::linalg::LinalgError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every degeneracy is reported with the lattice location where it was
/// detected, when one is known.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("the zero subspace is not a point of any Grassmannian")]
    ZeroSubspace,

    #[error("join of an empty list of subspaces")]
    EmptyJoin,

    #[error("trailing block is singular; no affine representative{}", at_vertex(.vertex))]
    NotAffine { vertex: Option<VertexIndex> },

    #[error("expected projective dimension {expected}, found {found}{}", at_vertex(.vertex))]
    WrongDimension {
        vertex: Option<VertexIndex>,
        expected: usize,
        found: usize,
    },

    #[error("ambient dimension d={d} below the required bound {bound} for {what}")]
    DimensionBound { what: &'static str, d: usize, bound: usize },

    #[error("lattice of dimension {0} is too small for this construction")]
    LatticeTooSmall(usize),

    #[error("missing vertex {0}")]
    MissingVertex(VertexIndex),

    #[error("missing {0}")]
    MissingEdge(EdgeLoc),

    #[error("missing value on {0}")]
    MissingPlaquette(SquareLoc),

    #[error("degenerate input: {condition} has projective dimension {found}, expected {expected}{}", at_cube(.cube))]
    DegenerateInput {
        cube: Option<VertexIndex>,
        condition: String,
        expected: usize,
        found: usize,
    },

    #[error("degenerate intersection: {condition} has dimension {found}, expected {expected}{}", at_cube(.cube))]
    DegenerateIntersection {
        cube: Option<VertexIndex>,
        condition: String,
        expected: usize,
        /// Projective dimension, or -1 for the empty intersection.
        found: i64,
    },

    #[error("coefficient system is under-determined on {0}")]
    UnderDetermined(SquareLoc),

    #[error("{0} violates the planarity condition; no coefficients exist")]
    Inconsistent(SquareLoc),

    #[error("one-form is not closed on {0}")]
    NotClosed(SquareLoc),

    #[error("singular matrix on {0}")]
    Singular(EdgeLoc),

    #[error("I - b^jk b^kj is singular{}", at_square(.square))]
    SingularDenominator { square: Option<SquareLoc> },

    #[error("evolution produced two different values on {0}")]
    InconsistentEvolution(SquareLoc),

    #[error("slice is degenerate at {edge}: meet has projective dimension {found}, expected {expected}")]
    DegenerateSlice {
        edge: EdgeLoc,
        expected: usize,
        found: i64,
    },

    #[error("slicing plane must have vector dimension {expected}, found {found}")]
    PlaneCodimension { expected: usize, found: usize },

    #[error("mesh export needs r = 0 and d = 3, found r = {r}, d = {d}")]
    NotMeshable { r: usize, d: usize },

    #[error("mesh export needs a region with exactly two free axes, found {0}")]
    MeshSlice(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn at_vertex(v: &Option<VertexIndex>) -> String {
    v.as_ref().map(|v| format!(" at vertex {v}")).unwrap_or_default()
}

fn at_cube(v: &Option<VertexIndex>) -> String {
    v.as_ref().map(|v| format!(" in cube at {v}")).unwrap_or_default()
}

fn at_square(s: &Option<SquareLoc>) -> String {
    s.as_ref().map(|s| format!(" on {s}")).unwrap_or_default()
}

impl Error {
    /// Attaches a cube base to degeneracy errors that do not carry one yet.
    pub(crate) fn in_cube(self, base: &VertexIndex) -> Error {
        match self {
            Error::DegenerateInput {
                cube: None,
                condition,
                expected,
                found,
            } => Error::DegenerateInput {
                cube: Some(base.clone()),
                condition,
                expected,
                found,
            },
            Error::DegenerateIntersection {
                cube: None,
                condition,
                expected,
                found,
            } => Error::DegenerateIntersection {
                cube: Some(base.clone()),
                condition,
                expected,
                found,
            },
            other => other,
        }
    }

    pub(crate) fn at_vertex(self, v: &VertexIndex) -> Error {
        match self {
            Error::NotAffine { vertex: None } => Error::NotAffine {
                vertex: Some(v.clone()),
            },
            Error::WrongDimension {
                vertex: None,
                expected,
                found,
            } => Error::WrongDimension {
                vertex: Some(v.clone()),
                expected,
                found,
            },
            other => other,
        }
    }
}
