//! Noncommutative coefficients of a Q-net in affine normalization.
//!
//! Every square of a Q-net satisfies `x_ij = x + a^ij (x_i - x) + a^ji (x_j - x)`
//! with `(r+1) x (r+1)` matrix coefficients. For fixed `i` the family `a^ij`
//! is a closed multiplicative one-form in the remaining directions, so it
//! factors as `a^ij = h^i(n+e_j) h^i(n)^{-1}` (discrete Lamé coefficients).
//! With `x_i - x = h^i y^i` the linear problem reads
//! `y^i(n+e_j) = y^i + b^ij y^j` with `b^ij = (h^i_j)^{-1} (h^j_i - h^j)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grassmann::Subspace;
use crate::lattice::{EdgeLoc, Region, SquareLoc, VertexIndex};
use crate::linalg::{solve_right, LinalgError, RationalMatrix};
use crate::qnet::QNet;

/// Matrices attached to oriented elementary squares: the key `(n, i, j)`
/// carries `a^ij(n)` or `b^ij(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaquetteField {
    n_axes: usize,
    r: usize,
    values: BTreeMap<SquareLoc, RationalMatrix>,
}

impl PlaquetteField {
    pub fn new(n_axes: usize, r: usize) -> Self {
        PlaquetteField {
            n_axes,
            r,
            values: BTreeMap::new(),
        }
    }

    pub fn n_axes(&self) -> usize {
        self.n_axes
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn insert(&mut self, loc: SquareLoc, m: RationalMatrix) {
        assert!(loc.i != loc.j, "plaquette axes must differ");
        assert_eq!(loc.base.dim(), self.n_axes, "plaquette lattice dimension");
        assert!(
            m.rows() == self.r + 1 && m.cols() == self.r + 1,
            "plaquette values are (r+1)x(r+1)"
        );
        self.values.insert(loc, m);
    }

    pub fn get(&self, loc: &SquareLoc) -> Option<&RationalMatrix> {
        self.values.get(loc)
    }

    pub fn value(&self, n: &VertexIndex, i: usize, j: usize) -> Result<&RationalMatrix> {
        let loc = SquareLoc::new(n.clone(), i, j);
        self.values.get(&loc).ok_or(Error::MissingPlaquette(loc))
    }

    pub fn contains(&self, loc: &SquareLoc) -> bool {
        self.values.contains_key(loc)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SquareLoc, &RationalMatrix)> {
        self.values.iter()
    }

    /// Oriented squares whose values differ between two fields, including
    /// squares stored in only one of them.
    pub fn differences(&self, other: &PlaquetteField) -> Vec<SquareLoc> {
        let mut out: Vec<SquareLoc> = self
            .values
            .iter()
            .filter(|(k, v)| other.values.get(*k) != Some(*v))
            .map(|(k, _)| k.clone())
            .collect();
        out.extend(other.values.keys().filter(|k| !self.values.contains_key(*k)).cloned());
        out.sort();
        out
    }

    /// The field restricted to the oriented squares inside `region`.
    pub fn restrict(&self, region: &Region) -> PlaquetteField {
        let values = self
            .values
            .iter()
            .filter(|(k, _)| region.contains(&k.base.steps(&[k.i, k.j])))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        PlaquetteField {
            n_axes: self.n_axes,
            r: self.r,
            values,
        }
    }
}

/// Matrices attached to edges: the key `(n, i)` is the edge `[n, n+e_i]`.
///
/// Lamé coefficients are square; the `y`-variables of the linear problem are
/// stored here as full `(r+1) x (d+1)` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeField {
    n_axes: usize,
    r: usize,
    values: BTreeMap<EdgeLoc, RationalMatrix>,
}

impl EdgeField {
    pub fn new(n_axes: usize, r: usize) -> Self {
        EdgeField {
            n_axes,
            r,
            values: BTreeMap::new(),
        }
    }

    pub fn n_axes(&self) -> usize {
        self.n_axes
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn insert(&mut self, loc: EdgeLoc, m: RationalMatrix) {
        assert_eq!(loc.base.dim(), self.n_axes, "edge lattice dimension");
        assert_eq!(m.rows(), self.r + 1, "edge values have r+1 rows");
        self.values.insert(loc, m);
    }

    pub fn get(&self, loc: &EdgeLoc) -> Option<&RationalMatrix> {
        self.values.get(loc)
    }

    pub fn value(&self, n: &VertexIndex, axis: usize) -> Result<&RationalMatrix> {
        let loc = EdgeLoc::new(n.clone(), axis);
        self.values.get(&loc).ok_or(Error::MissingEdge(loc))
    }

    pub fn contains(&self, loc: &EdgeLoc) -> bool {
        self.values.contains_key(loc)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EdgeLoc, &RationalMatrix)> {
        self.values.iter()
    }
}

/// Matrices attached to vertices: a potential `h(n)`.
pub type VertexField = BTreeMap<VertexIndex, RationalMatrix>;

/// Expanded affine representative of `X(v)`, with the location attached to
/// chart failures.
pub(crate) fn affine_at(x: &Subspace, v: &VertexIndex) -> Result<RationalMatrix> {
    Ok(x.to_affine().map_err(|e| e.at_vertex(v))?.expanded())
}

/// Both orientations of each square.
pub fn oriented(squares: &[SquareLoc]) -> Vec<SquareLoc> {
    squares.iter().flat_map(|s| [s.clone(), s.flipped()]).collect()
}

/// Solves `x_ij - x = a^ij (x_i - x) + a^ji (x_j - x)` on the square `(n; i, j)`.
pub fn extract_a(
    net: &QNet,
    n: &VertexIndex,
    i: usize,
    j: usize,
) -> Result<(RationalMatrix, RationalMatrix)> {
    let loc = SquareLoc::new(n.clone(), i, j);
    let verts = [n.clone(), n.step(i), n.step(j), n.steps(&[i, j])];
    let mut reps = Vec::with_capacity(4);
    for v in &verts {
        reps.push(affine_at(net.require(v)?, v)?);
    }
    let [x, xi, xj, xij] = [&reps[0], &reps[1], &reps[2], &reps[3]];
    let lhs = RationalMatrix::vstack(&[&(xi - x), &(xj - x)]);
    let k = net.rank() + 1;
    if lhs.rank() < 2 * k {
        return Err(Error::UnderDetermined(loc));
    }
    let coeffs = solve_right(&lhs, &(xij - x)).map_err(|e| match e {
        LinalgError::NoSolution => Error::Inconsistent(loc.clone()),
        other => Error::Linalg(other),
    })?;
    Ok((coeffs.column_block(0, k), coeffs.column_block(k, 2 * k)))
}

/// `a^ij` and `a^ji` on every listed square.
pub fn extract_a_field(net: &QNet, squares: &[SquareLoc], exec: Execution) -> Result<PlaquetteField> {
    let pairs = exec.try_map(squares, |s| extract_a(net, &s.base, s.i, s.j))?;
    let mut field = PlaquetteField::new(net.n_axes(), net.rank());
    for (s, (aij, aji)) in squares.iter().zip(pairs) {
        field.insert(s.clone(), aij);
        field.insert(s.flipped(), aji);
    }
    Ok(field)
}

/// `a^j(n+e_k) a^k(n) = a^k(n+e_j) a^j(n)` for an edge one-form.
pub fn check_closedness(a: &EdgeField, n: &VertexIndex, j: usize, k: usize) -> Result<bool> {
    let left = a.value(&n.step(k), j)? * a.value(n, k)?;
    let right = a.value(&n.step(j), k)? * a.value(n, j)?;
    Ok(left == right)
}

/// Ordered triple `(i, j, k)` of distinct axes on the cube at `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeTriple {
    pub base: VertexIndex,
    pub axes: [usize; 3],
}

/// Tally of the plaquette relation `c^ij(n+e_k) c^ik(n) = c^ik(n+e_j) c^ij(n)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosednessReport {
    pub checked: usize,
    pub failures: Vec<CubeTriple>,
}

impl ClosednessReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the plaquette relation on every ordered axis triple of every
/// elementary cube of `region`.
pub fn plaquette_closedness(
    field: &PlaquetteField,
    region: &Region,
    exec: Execution,
) -> Result<ClosednessReport> {
    let n = region.dim();
    let mut triples = Vec::new();
    for v in region.vertices() {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i != j && j != k && i != k && region.contains(&v.steps(&[i, j, k])) {
                        triples.push(CubeTriple {
                            base: v.clone(),
                            axes: [i, j, k],
                        });
                    }
                }
            }
        }
    }
    let outcomes = exec.try_map(&triples, |t| {
        let [i, j, k] = t.axes;
        let n = &t.base;
        let left = field.value(&n.step(k), i, j)? * field.value(n, i, k)?;
        let right = field.value(&n.step(j), i, k)? * field.value(n, i, j)?;
        Ok::<bool, Error>(left == right)
    })?;
    let failures = triples
        .iter()
        .zip(outcomes)
        .filter(|(_, ok)| !ok)
        .map(|(t, _)| t.clone())
        .collect();
    Ok(ClosednessReport {
        checked: triples.len(),
        failures,
    })
}

/// Integrates along whatever edges of `region` carry a value, starting from
/// `h(origin) = h0`. Every square met with two incoming paths is checked.
fn integrate_available(form: &EdgeField, h0: &RationalMatrix, region: &Region) -> Result<VertexField> {
    let origin = region.origin().clone();
    let mut h = VertexField::new();
    h.insert(origin.clone(), h0.clone());
    let mut checked_invertible = std::collections::BTreeSet::new();
    for v in region.vertices() {
        if v == origin {
            continue;
        }
        let rel = region.relative(&v);
        let mut value: Option<(usize, RationalMatrix)> = None;
        for (a, &ra) in rel.iter().enumerate() {
            if ra == 0 {
                continue;
            }
            let p = v.shifted(a, -1);
            let edge = EdgeLoc::new(p.clone(), a);
            let (Some(hp), Some(step)) = (h.get(&p), form.get(&edge)) else {
                continue;
            };
            if checked_invertible.insert(edge.clone()) && !step.is_invertible() {
                return Err(Error::Singular(edge));
            }
            let candidate = step * hp;
            match &value {
                None => value = Some((a, candidate)),
                Some((b, first)) => {
                    if *first != candidate {
                        let base = v.shifted(a, -1).shifted(*b, -1);
                        return Err(Error::NotClosed(SquareLoc::new(base, *b, a)));
                    }
                }
            }
        }
        if let Some((_, m)) = value {
            h.insert(v, m);
        }
    }
    Ok(h)
}

/// Potential of a closed multiplicative one-form: `a^j(n) = h(n+e_j) h(n)^{-1}`
/// with `h(origin) = h0`.
///
/// Every edge of `region` must carry an invertible value. Path independence
/// is checked on every square while integrating.
pub fn integrate_potential(form: &EdgeField, h0: &RationalMatrix, region: &Region) -> Result<VertexField> {
    if !h0.is_invertible() {
        return Err(Error::Linalg(LinalgError::Singular));
    }
    for e in region.edges() {
        if !form.contains(&e) {
            return Err(Error::MissingEdge(e));
        }
    }
    integrate_available(form, h0, region)
}

/// Exact one-form `h(n+e_j) h(n)^{-1}` of a potential on every edge of `region`.
pub fn form_from_potential(h: &VertexField, n_axes: usize, r: usize, region: &Region) -> Result<EdgeField> {
    let mut form = EdgeField::new(n_axes, r);
    for e in region.edges() {
        let end = e.base.step(e.axis);
        let missing = |v: &VertexIndex| Error::MissingVertex(v.clone());
        let h0 = h.get(&e.base).ok_or_else(|| missing(&e.base))?;
        let h1 = h.get(&end).ok_or_else(|| missing(&end))?;
        let inv = h0.inverse().map_err(|_| Error::Singular(e.clone()))?;
        form.insert(e, h1 * &inv);
    }
    Ok(form)
}

/// One lattice step: `(axis, +1)` or `(axis, -1)`.
pub type PathStep = (usize, i64);

/// Carries `h` from `start` along `path` with `h(n+e_a) = a^a(n) h(n)`.
pub fn transport(
    form: &EdgeField,
    start: &VertexIndex,
    h_start: &RationalMatrix,
    path: &[PathStep],
) -> Result<(VertexIndex, RationalMatrix)> {
    let mut v = start.clone();
    let mut h = h_start.clone();
    for &(axis, dir) in path {
        if dir > 0 {
            h = form.value(&v, axis)? * &h;
            v = v.step(axis);
        } else {
            let p = v.shifted(axis, -1);
            let edge = EdgeLoc::new(p.clone(), axis);
            let inv = form.value(&p, axis)?.inverse().map_err(|_| Error::Singular(edge))?;
            h = &inv * &h;
            v = p;
        }
    }
    Ok((v, h))
}

/// Lamé coefficients `h^i`, normalized to `I` where `n_j = origin_j` for all
/// `j != i`.
///
/// For each axis `i` and each slice `n_i = c` the plaquette values
/// `a^ij(n)` are read as the edge form `a^j(n)` of that slice and integrated.
/// Only the part of each slice reachable through stored plaquettes gets a value.
pub fn lame_from_a(a: &PlaquetteField, region: &Region, exec: Execution) -> Result<EdgeField> {
    let mut jobs = Vec::new();
    for i in 0..region.dim() {
        let o = region.origin().coords()[i];
        for c in o..o + i64::from(region.extents()[i]) {
            jobs.push((i, c));
        }
    }
    let identity = RationalMatrix::identity(a.rank() + 1);
    let slices = exec.try_map(&jobs, |&(i, c)| {
        let slice = region.freeze_axis(i, c);
        let mut form = EdgeField::new(a.n_axes(), a.rank());
        for e in slice.edges() {
            if let Some(m) = a.get(&SquareLoc::new(e.base.clone(), i, e.axis)) {
                form.insert(e, m.clone());
            }
        }
        integrate_available(&form, &identity, &slice)
    })?;
    let mut h = EdgeField::new(a.n_axes(), a.rank());
    for ((i, _), slice) in jobs.iter().zip(slices) {
        for (v, m) in slice {
            h.insert(EdgeLoc::new(v, *i), m);
        }
    }
    Ok(h)
}

/// `a^ij(n) = h^i(n+e_j) h^i(n)^{-1}` on both orientations of each square.
pub fn a_from_lame(h: &EdgeField, squares: &[SquareLoc]) -> Result<PlaquetteField> {
    let mut a = PlaquetteField::new(h.n_axes(), h.rank());
    for s in oriented(squares) {
        let hi = h.value(&s.base, s.i)?;
        let inv = hi
            .inverse()
            .map_err(|_| Error::Singular(EdgeLoc::new(s.base.clone(), s.i)))?;
        let value = h.value(&s.base.step(s.j), s.i)? * &inv;
        a.insert(s, value);
    }
    Ok(a)
}

/// Rotation coefficients `b^ij = (h^i_j)^{-1} (h^j_i - h^j)` on both
/// orientations of each square.
pub fn rotation_coeffs(h: &EdgeField, squares: &[SquareLoc], exec: Execution) -> Result<PlaquetteField> {
    let locs = oriented(squares);
    let values = exec.try_map(&locs, |s| {
        let at = s.base.step(s.j);
        let inv = h
            .value(&at, s.i)?
            .inverse()
            .map_err(|_| Error::Singular(EdgeLoc::new(at.clone(), s.i)))?;
        let diff = h.value(&s.base.step(s.i), s.j)? - h.value(&s.base, s.j)?;
        Ok::<_, Error>(&inv * &diff)
    })?;
    let mut b = PlaquetteField::new(h.n_axes(), h.rank());
    for (s, m) in locs.into_iter().zip(values) {
        b.insert(s, m);
    }
    Ok(b)
}

/// `y^i = (h^i)^{-1} (x_i - x)` on every edge where `h` is stored.
pub fn y_variables(net: &QNet, h: &EdgeField) -> Result<EdgeField> {
    let mut y = EdgeField::new(net.n_axes(), net.rank());
    for (e, hi) in h.iter() {
        let end = e.base.step(e.axis);
        let x = affine_at(net.require(&e.base)?, &e.base)?;
        let xi = affine_at(net.require(&end)?, &end)?;
        let inv = hi.inverse().map_err(|_| Error::Singular(e.clone()))?;
        y.insert(e.clone(), &inv * &(&xi - &x));
    }
    Ok(y)
}

/// Oriented squares where `y^i(n+e_j) - y^i(n) - b^ij(n) y^j(n)` is nonzero.
pub fn linear_problem_failures(y: &EdgeField, b: &PlaquetteField, squares: &[SquareLoc]) -> Result<Vec<SquareLoc>> {
    let mut out = Vec::new();
    for s in oriented(squares) {
        let yi = y.value(&s.base, s.i)?;
        let yij = y.value(&s.base.step(s.j), s.i)?;
        let yj = y.value(&s.base, s.j)?;
        let bij = b.value(&s.base, s.i, s.j)?;
        let residual = &(yij - yi) - &(bij * yj);
        if !residual.is_zero() {
            out.push(s);
        }
    }
    Ok(out)
}

/// Rotation coefficients of a Q-net on the squares of `region`, through the
/// chain `x -> a -> h -> b`.
pub fn qnet_rotation_coeffs(net: &QNet, region: &Region, exec: Execution) -> Result<PlaquetteField> {
    let squares: Vec<SquareLoc> = region
        .squares()
        .into_iter()
        .filter(|s| net.contains(&s.base.steps(&[s.i, s.j])) && net.contains(&s.base))
        .filter(|s| net.contains(&s.base.step(s.i)) && net.contains(&s.base.step(s.j)))
        .collect();
    let a = extract_a_field(net, &squares, exec)?;
    let h = lame_from_a(&a, region, exec)?;
    rotation_coeffs(&h, &squares, exec)
}
