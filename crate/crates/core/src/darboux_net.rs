//! Edge-valued Grassmannian Darboux nets.
//!
//! The four `r`-planes on the sides of every elementary square lie in a
//! `(2r+1)`-plane, so `x^i(n+e_j) = r^ij x^i + (I - r^ij) x^j` in affine
//! representatives. The `r^ij` factor as `s^i(n+e_j) s^i(n)^{-1}` and, with
//! `y^i = (s^i)^{-1} x^i`, the linear problem `y^i(n+e_j) = y^i + b^ij y^j`
//! holds for `b^ij = ((s^i_j)^{-1} - (s^i)^{-1}) s^j`. These `b^ij` obey the
//! same Darboux map as the rotation coefficients of Q-nets.
//!
//! Darboux nets arise by slicing a Q-net in `P^d` with a plane of
//! codimension `r+1`; sliced nets keep the ambient coordinates of `P^d`.

use std::collections::BTreeMap;

use crate::coefficients::{affine_at, lame_from_a, oriented, EdgeField, PlaquetteField};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grassmann::{join, meet, projective_dim_or_empty, Sampler, Subspace};
use crate::lattice::{EdgeLoc, Region, SquareLoc, VertexIndex};
use crate::linalg::{solve_right, LinalgError, RationalMatrix};
use crate::qnet::{QNet, SquareCheck};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeNet {
    n_axes: usize,
    r: usize,
    d: usize,
    values: BTreeMap<EdgeLoc, Subspace>,
}

impl EdgeNet {
    pub fn new(n_axes: usize, r: usize, d: usize) -> Result<EdgeNet> {
        if n_axes < 2 {
            return Err(Error::LatticeTooSmall(n_axes));
        }
        Ok(EdgeNet {
            n_axes,
            r,
            d,
            values: BTreeMap::new(),
        })
    }

    pub fn n_axes(&self) -> usize {
        self.n_axes
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn insert(&mut self, e: EdgeLoc, x: Subspace) -> Result<()> {
        if e.base.dim() != self.n_axes || e.axis >= self.n_axes {
            return Err(Error::LatticeTooSmall(e.base.dim()));
        }
        if x.ambient_dim() != self.d + 1 {
            return Err(Error::AmbientMismatch {
                left: self.d + 1,
                right: x.ambient_dim(),
            });
        }
        if x.projective_dim() != self.r {
            return Err(Error::WrongDimension {
                vertex: Some(e.base),
                expected: self.r,
                found: x.projective_dim(),
            });
        }
        self.values.insert(e, x);
        Ok(())
    }

    pub fn get(&self, e: &EdgeLoc) -> Option<&Subspace> {
        self.values.get(e)
    }

    pub fn require(&self, n: &VertexIndex, axis: usize) -> Result<&Subspace> {
        let e = EdgeLoc::new(n.clone(), axis);
        self.values.get(&e).ok_or(Error::MissingEdge(e))
    }

    pub fn contains(&self, e: &EdgeLoc) -> bool {
        self.values.contains_key(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EdgeLoc, &Subspace)> {
        self.values.iter()
    }

    /// The four side planes `X^i, X^j, X^i_j, X^j_i` of the square `(n; i, j)`.
    fn sides(&self, n: &VertexIndex, i: usize, j: usize) -> Result<[&Subspace; 4]> {
        Ok([
            self.require(n, i)?,
            self.require(n, j)?,
            self.require(&n.step(j), i)?,
            self.require(&n.step(i), j)?,
        ])
    }

    pub fn edge_square_dim(&self, n: &VertexIndex, i: usize, j: usize) -> Result<usize> {
        Ok(join(&self.sides(n, i, j)?)?.projective_dim())
    }

    /// The defining property: the four side planes lie in a `(2r+1)`-plane.
    pub fn check_edge_square(&self, n: &VertexIndex, i: usize, j: usize) -> Result<bool> {
        Ok(self.edge_square_dim(n, i, j)? <= 2 * self.r + 1)
    }

    /// Every square (`i < j`) whose four side edges are stored.
    pub fn stored_squares(&self) -> Vec<SquareLoc> {
        let mut out = Vec::new();
        let bases: std::collections::BTreeSet<&VertexIndex> = self.values.keys().map(|e| &e.base).collect();
        for v in bases {
            for i in 0..self.n_axes {
                for j in i + 1..self.n_axes {
                    if self.sides(v, i, j).is_ok() {
                        out.push(SquareLoc::new(v.clone(), i, j));
                    }
                }
            }
        }
        out
    }

    pub fn verify_with(&self, exec: Execution) -> Vec<SquareCheck> {
        let bound = 2 * self.r + 1;
        exec.map(&self.stored_squares(), |loc| {
            let dim = self
                .edge_square_dim(&loc.base, loc.i, loc.j)
                .expect("stored square has all sides");
            SquareCheck {
                loc: loc.clone(),
                dim,
                bound,
                pass: dim <= bound,
            }
        })
    }

    /// Projective dimension of the span of the twelve edges of the cube at
    /// `base` on the given axes.
    pub fn cube_span_dim(&self, base: &VertexIndex, axes: [usize; 3]) -> Result<usize> {
        let mut planes = Vec::with_capacity(12);
        for (a, &axis) in axes.iter().enumerate() {
            let others: Vec<usize> = (0..3).filter(|&b| b != a).map(|b| axes[b]).collect();
            for shift in [vec![], vec![others[0]], vec![others[1]], others.clone()] {
                planes.push(self.require(&base.steps(&shift), axis)?);
            }
        }
        Ok(join(&planes)?.projective_dim())
    }
}

/// Solves `x^i_j - x^j = r^ij (x^i - x^j)` on the square `(n; i, j)`.
pub fn extract_r(net: &EdgeNet, n: &VertexIndex, i: usize, j: usize) -> Result<RationalMatrix> {
    let loc = SquareLoc::new(n.clone(), i, j);
    let xi = affine_at(net.require(n, i)?, n)?;
    let xj = affine_at(net.require(n, j)?, n)?;
    let shifted = n.step(j);
    let xij = affine_at(net.require(&shifted, i)?, &shifted)?;
    let diff = &xi - &xj;
    if diff.rank() < net.rank() + 1 {
        return Err(Error::UnderDetermined(loc));
    }
    solve_right(&diff, &(&xij - &xj)).map_err(|e| match e {
        LinalgError::NoSolution => Error::Inconsistent(loc),
        other => Error::Linalg(other),
    })
}

/// `r^ij` and `r^ji` on every listed square.
pub fn extract_r_field(net: &EdgeNet, squares: &[SquareLoc], exec: Execution) -> Result<PlaquetteField> {
    let locs = oriented(squares);
    let values = exec.try_map(&locs, |s| extract_r(net, &s.base, s.i, s.j))?;
    let mut field = PlaquetteField::new(net.n_axes(), net.rank());
    for (s, m) in locs.into_iter().zip(values) {
        field.insert(s, m);
    }
    Ok(field)
}

/// Potentials `s^i` with `r^ij = s^i(n+e_j) s^i(n)^{-1}`, normalized to `I`
/// where `n_j = origin_j` for all `j != i`.
pub fn potentials_s(r_field: &PlaquetteField, region: &Region, exec: Execution) -> Result<EdgeField> {
    lame_from_a(r_field, region, exec)
}

/// `b^ij = ((s^i_j)^{-1} - (s^i)^{-1}) s^j` on both orientations of each square.
pub fn rotation_coeffs_darboux(s: &EdgeField, squares: &[SquareLoc], exec: Execution) -> Result<PlaquetteField> {
    let locs = oriented(squares);
    let values = exec.try_map(&locs, |sq| {
        let inv_at = |n: &VertexIndex, axis: usize| -> Result<RationalMatrix> {
            s.value(n, axis)?
                .inverse()
                .map_err(|_| Error::Singular(EdgeLoc::new(n.clone(), axis)))
        };
        let shifted = inv_at(&sq.base.step(sq.j), sq.i)?;
        let here = inv_at(&sq.base, sq.i)?;
        Ok::<_, Error>(&(&shifted - &here) * s.value(&sq.base, sq.j)?)
    })?;
    let mut b = PlaquetteField::new(s.n_axes(), s.rank());
    for (sq, m) in locs.into_iter().zip(values) {
        b.insert(sq, m);
    }
    Ok(b)
}

/// `y^i = (s^i)^{-1} x^i` on every edge where `s` is stored.
pub fn y_variables_darboux(net: &EdgeNet, s: &EdgeField) -> Result<EdgeField> {
    let mut y = EdgeField::new(net.n_axes(), net.rank());
    for (e, si) in s.iter() {
        let x = affine_at(net.require(&e.base, e.axis)?, &e.base)?;
        let inv = si.inverse().map_err(|_| Error::Singular(e.clone()))?;
        y.insert(e.clone(), &inv * &x);
    }
    Ok(y)
}

/// Rotation coefficients of a Darboux net on its stored squares inside
/// `region`, through the chain `x -> r -> s -> b`.
pub fn edge_net_rotation_coeffs(net: &EdgeNet, region: &Region, exec: Execution) -> Result<PlaquetteField> {
    let squares: Vec<SquareLoc> = net
        .stored_squares()
        .into_iter()
        .filter(|s| region.contains(&s.base) && region.contains(&s.base.steps(&[s.i, s.j])))
        .collect();
    let r = extract_r_field(net, &squares, exec)?;
    let s = potentials_s(&r, region, exec)?;
    rotation_coeffs_darboux(&s, &squares, exec)
}

/// Intersects every edge span `span(X, X_i)` of `net` with `plane`, which
/// must have vector dimension `d - r`.
pub fn slice_qnet(net: &QNet, plane: &Subspace, exec: Execution) -> Result<EdgeNet> {
    let (r, d) = (net.rank(), net.ambient_dim());
    if plane.ambient_dim() != d + 1 {
        return Err(Error::AmbientMismatch {
            left: d + 1,
            right: plane.ambient_dim(),
        });
    }
    if d < r || plane.dim() != d - r {
        return Err(Error::PlaneCodimension {
            expected: d.saturating_sub(r),
            found: plane.dim(),
        });
    }
    let mut edges = Vec::new();
    for (v, _) in net.iter() {
        for axis in 0..net.n_axes() {
            if net.contains(&v.step(axis)) {
                edges.push(EdgeLoc::new(v.clone(), axis));
            }
        }
    }
    let planes = exec.try_map(&edges, |e| {
        let span = join(&[net.require(&e.base)?, net.require(&e.base.step(e.axis))?])?;
        let cut = meet(&span, plane)?;
        let found = projective_dim_or_empty(&cut);
        match cut {
            Some(x) if found == r as i64 => Ok(x),
            _ => Err(Error::DegenerateSlice {
                edge: e.clone(),
                expected: r,
                found,
            }),
        }
    })?;
    let mut out = EdgeNet::new(net.n_axes(), r, d)?;
    for (e, x) in edges.into_iter().zip(planes) {
        out.insert(e, x)?;
    }
    Ok(out)
}

/// A random plane of codimension `r+1` in `P^d`.
pub fn random_slicing_plane(s: &mut Sampler, r: usize, d: usize) -> Subspace {
    s.subspace(d + 1, d - r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{linear_problem_failures, plaquette_closedness, qnet_rotation_coeffs};
    use crate::darboux::{evolve, DarbouxState};
    use crate::linalg::{int, rat};
    use crate::qnet::{propagate_net, random_walls};

    fn point(coords: &[i64]) -> Subspace {
        let mut v = coords.to_vec();
        v.push(1);
        Subspace::from_basis(&RationalMatrix::from_i64(1, v.len(), &v)).unwrap()
    }

    fn o2() -> VertexIndex {
        VertexIndex::origin(2)
    }

    /// Unit square with side points `x^0, x^1, x^0_1, x^1_0` in `P^2`.
    fn square(sides: [&[i64]; 4]) -> EdgeNet {
        let mut net = EdgeNet::new(2, 0, 2).unwrap();
        let keys = [
            EdgeLoc::new(o2(), 0),
            EdgeLoc::new(o2(), 1),
            EdgeLoc::new(VertexIndex::new(vec![0, 1]), 0),
            EdgeLoc::new(VertexIndex::new(vec![1, 0]), 1),
        ];
        for (k, p) in keys.into_iter().zip(sides) {
            net.insert(k, point(p)).unwrap();
        }
        net
    }

    #[test]
    fn collinear_points_pass() {
        let net = square([&[0, 0], &[2, 2], &[1, 1], &[5, 5]]);
        assert!(net.check_edge_square(&o2(), 0, 1).unwrap());
        let skew = square([&[0, 0], &[2, 2], &[1, 0], &[5, 5]]);
        assert!(!skew.check_edge_square(&o2(), 0, 1).unwrap());
        let same = square([&[3, 4], &[3, 4], &[3, 4], &[3, 4]]);
        assert!(same.check_edge_square(&o2(), 0, 1).unwrap());
        let empty = EdgeNet::new(2, 0, 2).unwrap();
        assert!(matches!(empty.check_edge_square(&o2(), 0, 1), Err(Error::MissingEdge(_))));
    }

    #[test]
    fn extract_r_cases() {
        let stay = square([&[1, 2], &[3, 5], &[1, 2], &[0, 0]]);
        assert_eq!(extract_r(&stay, &o2(), 0, 1).unwrap(), RationalMatrix::identity(1));
        let jump = square([&[1, 2], &[3, 5], &[3, 5], &[0, 0]]);
        assert!(extract_r(&jump, &o2(), 0, 1).unwrap().is_zero());
        // x^0_1 = 3 x^0 - 2 x^1 on the line through (0,0) and (2,2)
        let generic = square([&[0, 0], &[2, 2], &[-4, -4], &[5, 5]]);
        let r = extract_r(&generic, &o2(), 0, 1).unwrap();
        assert_eq!(r, RationalMatrix::scalar(1, int(3)));
        let other = extract_r(&generic, &o2(), 1, 0).unwrap();
        // x^1_0 = (5/2) x^1 + (1 - 5/2) x^0
        assert_eq!(other, RationalMatrix::scalar(1, rat(5, 2)));
        let off_line = square([&[0, 0], &[2, 2], &[1, 0], &[5, 5]]);
        assert_eq!(
            extract_r(&off_line, &o2(), 0, 1),
            Err(Error::Inconsistent(SquareLoc::new(o2(), 0, 1)))
        );
        let coincident = square([&[1, 1], &[1, 1], &[1, 1], &[5, 5]]);
        assert_eq!(
            extract_r(&coincident, &o2(), 0, 1),
            Err(Error::UnderDetermined(SquareLoc::new(o2(), 0, 1)))
        );
    }

    #[test]
    fn trivial_potentials_and_rotation() {
        let region = Region::from_extents(vec![2, 2]);
        let mut r = PlaquetteField::new(2, 1);
        for s in oriented(&region.squares()) {
            r.insert(s, RationalMatrix::identity(2));
        }
        let s = potentials_s(&r, &region, Execution::Sequential).unwrap();
        assert!(s.iter().all(|(_, m)| *m == RationalMatrix::identity(2)));
        let b = rotation_coeffs_darboux(&s, &region.squares(), Execution::Sequential).unwrap();
        assert!(b.iter().all(|(_, m)| m.is_zero()));
    }

    #[test]
    fn scalar_chain_telescopes() {
        let region = Region::from_extents(vec![1, 3]);
        let mut r = PlaquetteField::new(2, 0);
        let values = [rat(2, 1), rat(-1, 3), rat(5, 7)];
        for (k, q) in values.iter().enumerate() {
            let n = VertexIndex::new(vec![0, k as i64]);
            r.insert(SquareLoc::new(n, 0, 1), RationalMatrix::scalar(1, q.clone()));
        }
        let s = potentials_s(&r, &region, Execution::Sequential).unwrap();
        let mut acc = int(1);
        for (k, next) in values.iter().map(Some).chain([None]).enumerate() {
            let n = VertexIndex::new(vec![0, k as i64]);
            assert_eq!(s.value(&n, 0).unwrap(), &RationalMatrix::scalar(1, acc.clone()));
            if let Some(q) = next {
                acc = q * &acc;
            }
        }
    }

    fn sliced(seed: u64, r: usize, d: usize) -> (QNet, EdgeNet, Region, Subspace) {
        let region = Region::from_extents(vec![2, 2, 2]);
        let mut s = Sampler::new(seed, 10);
        let walls = random_walls(&mut s, 3, r, d, &region).unwrap();
        let net = propagate_net(&walls, &region).unwrap();
        let plane = random_slicing_plane(&mut s, r, d);
        let edges = slice_qnet(&net, &plane, Execution::default()).unwrap();
        (net, edges, region, plane)
    }

    #[test]
    fn slices_are_darboux_nets() {
        for r in 0..2 {
            let (net, edges, region, plane) = sliced(21 + r as u64, r, 4 * r + 3);
            assert_eq!(edges.len(), region.edges().len());
            let checks = edges.verify_with(Execution::default());
            assert_eq!(checks.len(), 36);
            assert!(checks.iter().all(|c| c.pass && c.dim == 2 * r + 1));
            for sq in region.squares() {
                let face = join(&[
                    net.require(&sq.base).unwrap(),
                    net.require(&sq.base.step(sq.i)).unwrap(),
                    net.require(&sq.base.step(sq.j)).unwrap(),
                ])
                .unwrap();
                let cut = meet(&face, &plane).unwrap().unwrap();
                assert_eq!(cut.projective_dim(), 2 * r + 1);
                let sides = edges.sides(&sq.base, sq.i, sq.j).unwrap();
                assert!(cut.contains(&join(&sides).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn twelve_edges_span_a_face_dimension() {
        for r in 0..2 {
            let (_, edges, _, _) = sliced(31 + r as u64, r, 5 * r + 4);
            let dim = edges.cube_span_dim(&VertexIndex::origin(3), [0, 1, 2]).unwrap();
            assert_eq!(dim, 3 * r + 2);
        }
    }

    #[test]
    fn sliced_pipeline() {
        let exec = Execution::default();
        for r in 0..2 {
            let (_, edges, region, _) = sliced(50 + r as u64, r, 4 * r + 3);
            let squares = region.squares();
            let rf = extract_r_field(&edges, &squares, exec).unwrap();
            assert!(plaquette_closedness(&rf, &region, exec).unwrap().holds());
            let s = potentials_s(&rf, &region, exec).unwrap();
            let b = rotation_coeffs_darboux(&s, &squares, exec).unwrap();
            let y = y_variables_darboux(&edges, &s).unwrap();
            assert!(linear_problem_failures(&y, &b, &squares).unwrap().is_empty());
            assert_eq!(edge_net_rotation_coeffs(&edges, &region, exec).unwrap(), b);
        }
    }

    #[test]
    fn sliced_walls_evolve_to_sliced_net() {
        let exec = Execution::default();
        let region = Region::from_extents(vec![2, 2, 2]);
        for r in 0..2 {
            let mut s = Sampler::new(60 + r as u64, 10);
            let d = 4 * r + 3;
            let walls = random_walls(&mut s, 3, r, d, &region).unwrap();
            let net = propagate_net(&walls, &region).unwrap();
            let plane = random_slicing_plane(&mut s, r, d);
            let full = edge_net_rotation_coeffs(&slice_qnet(&net, &plane, exec).unwrap(), &region, exec).unwrap();
            let initial = edge_net_rotation_coeffs(&slice_qnet(&walls, &plane, exec).unwrap(), &region, exec).unwrap();
            let evolved = evolve(&DarbouxState::from_field(initial).unwrap(), &region).unwrap();
            assert!(evolved.field().differences(&full).is_empty());
            // Darboux-net coefficients differ from the Q-net ones in general
            assert_ne!(qnet_rotation_coeffs(&net, &region, exec).unwrap(), full);
        }
    }

    #[test]
    fn constant_direction_is_degenerate() {
        let mut net = QNet::new(2, 0, 3).unwrap();
        let x = point(&[1, 2, 3]);
        net.insert(o2(), x.clone()).unwrap();
        net.insert(VertexIndex::new(vec![1, 0]), x).unwrap();
        let plane = Subspace::from_i64(3, 4, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1]).unwrap();
        assert_eq!(
            slice_qnet(&net, &plane, Execution::Sequential),
            Err(Error::DegenerateSlice {
                edge: EdgeLoc::new(o2(), 0),
                expected: 0,
                found: -1
            })
        );
        let line = Subspace::from_i64(2, 4, &[1, 0, 0, 0, 0, 1, 0, 1]).unwrap();
        assert_eq!(
            slice_qnet(&net, &line, Execution::Sequential),
            Err(Error::PlaneCodimension { expected: 3, found: 2 })
        );
    }
}
