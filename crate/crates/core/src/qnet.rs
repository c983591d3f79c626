//! Vertex-valued Grassmannian Q-nets.
//!
//! A map `Z^N -> G^d_r` is a Q-net when the four `r`-planes of every
//! elementary square lie in a common `(3r+2)`-plane. Seven generic planes on
//! a 3-cube determine the eighth as the meet of three `(3r+2)`-planes, and
//! the resulting 3D rule is 4D-consistent.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grassmann::{join, meet, meet_all, projective_dim_or_empty, Sampler, Subspace};
use crate::lattice::{Region, SquareLoc, VertexIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QNet {
    n_axes: usize,
    r: usize,
    d: usize,
    values: BTreeMap<VertexIndex, Subspace>,
}

/// Outcome of the planarity test on one elementary square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareCheck {
    pub loc: SquareLoc,
    /// Projective dimension of the join of the four vertex planes.
    pub dim: usize,
    pub bound: usize,
    pub pass: bool,
}

impl QNet {
    pub fn new(n_axes: usize, r: usize, d: usize) -> Result<QNet> {
        if n_axes < 2 {
            return Err(Error::LatticeTooSmall(n_axes));
        }
        Ok(QNet {
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

    /// Stores `X(v)`, checking the ambient space and the rank.
    pub fn insert(&mut self, v: VertexIndex, x: Subspace) -> Result<()> {
        if v.dim() != self.n_axes {
            return Err(Error::LatticeTooSmall(v.dim()));
        }
        if x.ambient_dim() != self.d + 1 {
            return Err(Error::AmbientMismatch {
                left: self.d + 1,
                right: x.ambient_dim(),
            });
        }
        if x.projective_dim() != self.r {
            return Err(Error::WrongDimension {
                vertex: Some(v),
                expected: self.r,
                found: x.projective_dim(),
            });
        }
        self.values.insert(v, x);
        Ok(())
    }

    pub fn get(&self, v: &VertexIndex) -> Option<&Subspace> {
        self.values.get(v)
    }

    pub fn require(&self, v: &VertexIndex) -> Result<&Subspace> {
        self.values.get(v).ok_or_else(|| Error::MissingVertex(v.clone()))
    }

    pub fn contains(&self, v: &VertexIndex) -> bool {
        self.values.contains_key(v)
    }

    pub fn remove(&mut self, v: &VertexIndex) -> Option<Subspace> {
        self.values.remove(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexIndex, &Subspace)> {
        self.values.iter()
    }

    /// Keeps only vertices with at most two coordinates past the region origin:
    /// the Cauchy data of the 3D system.
    pub fn walls(&self, region: &Region) -> QNet {
        let values = self
            .values
            .iter()
            .filter(|(v, _)| region.contains(v) && region.support(v).len() <= 2)
            .map(|(v, x)| (v.clone(), x.clone()))
            .collect();
        QNet { values, ..self.clone_header() }
    }

    fn clone_header(&self) -> QNet {
        QNet {
            n_axes: self.n_axes,
            r: self.r,
            d: self.d,
            values: BTreeMap::new(),
        }
    }

    /// Projective dimension of `span(X, X_i, X_j, X_ij)`.
    pub fn square_dim(&self, n: &VertexIndex, i: usize, j: usize) -> Result<usize> {
        let x = self.require(n)?;
        let xi = self.require(&n.step(i))?;
        let xj = self.require(&n.step(j))?;
        let xij = self.require(&n.steps(&[i, j]))?;
        Ok(join(&[x, xi, xj, xij])?.projective_dim())
    }

    /// The Q-property on one square: the four planes lie in a `(3r+2)`-plane.
    pub fn check_square(&self, n: &VertexIndex, i: usize, j: usize) -> Result<bool> {
        Ok(self.square_dim(n, i, j)? <= 3 * self.r + 2)
    }

    /// Every elementary square (`i < j`) whose four vertices are stored.
    pub fn stored_squares(&self) -> Vec<SquareLoc> {
        let mut out = Vec::new();
        for v in self.values.keys() {
            for i in 0..self.n_axes {
                for j in i + 1..self.n_axes {
                    if self.contains(&v.step(i))
                        && self.contains(&v.step(j))
                        && self.contains(&v.steps(&[i, j]))
                    {
                        out.push(SquareLoc::new(v.clone(), i, j));
                    }
                }
            }
        }
        out
    }

    pub fn verify(&self) -> Vec<SquareCheck> {
        self.verify_with(Execution::default())
    }

    pub fn verify_with(&self, exec: Execution) -> Vec<SquareCheck> {
        let bound = 3 * self.r + 2;
        exec.map(&self.stored_squares(), |loc| {
            let dim = self
                .square_dim(&loc.base, loc.i, loc.j)
                .expect("stored square has all vertices");
            SquareCheck {
                loc: loc.clone(),
                dim,
                bound,
                pass: dim <= bound,
            }
        })
    }
}

/// Seven planes of an elementary 3-cube: `X`, `X_1, X_2, X_3` and
/// `X_12, X_13, X_23`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeData {
    pub base: Subspace,
    pub singles: [Subspace; 3],
    /// Ordered `X_12, X_13, X_23`.
    pub doubles: [Subspace; 3],
}

const CUBE_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn cube_pair(a: usize, b: usize) -> usize {
    match (a.min(b), a.max(b)) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => panic!("not a cube axis pair: ({a},{b})"),
    }
}

impl CubeData {
    pub fn double(&self, a: usize, b: usize) -> &Subspace {
        &self.doubles[cube_pair(a, b)]
    }

    /// Reads the seven planes of the cube at `base` spanned by `axes`.
    pub fn from_net(net: &QNet, base: &VertexIndex, axes: [usize; 3]) -> Result<CubeData> {
        let [i, j, k] = axes;
        Ok(CubeData {
            base: net.require(base)?.clone(),
            singles: [
                net.require(&base.step(i))?.clone(),
                net.require(&base.step(j))?.clone(),
                net.require(&base.step(k))?.clone(),
            ],
            doubles: [
                net.require(&base.steps(&[i, j]))?.clone(),
                net.require(&base.steps(&[i, k]))?.clone(),
                net.require(&base.steps(&[j, k]))?.clone(),
            ],
        })
    }

    /// Relabels the axes: new axis `a` is old axis `perm[a]`.
    pub fn permuted(&self, perm: [usize; 3]) -> CubeData {
        CubeData {
            base: self.base.clone(),
            singles: perm.map(|p| self.singles[p].clone()),
            doubles: CUBE_PAIRS.map(|(a, b)| self.double(perm[a], perm[b]).clone()),
        }
    }
}

/// Dimension counts observed while propagating one cube. All projective;
/// an empty meet is -1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeLedger {
    pub r: usize,
    /// `span(X, X_1, X_2, X_3)`.
    pub cube_span: usize,
    /// `span(X, X_a, X_b, X_ab)` for the pairs 12, 13, 23.
    pub input_faces: [usize; 3],
    /// `span(X_a, X_ab, X_ac)` for `a = 1, 2, 3`.
    pub face_planes: [usize; 3],
    /// Meets of face planes 1&2, 1&3, 2&3.
    pub pairwise_meets: [i64; 3],
    pub triple_meet: i64,
    /// `span(X_a, X_ab, X_ac, X_123)` for `a = 1, 2, 3`.
    pub output_faces: [usize; 3],
}

impl CubeLedger {
    /// The generic counts for rank `r`: `4r+3`, `3r+2`, `2r+1`, `r`.
    pub fn is_generic(&self) -> bool {
        let r = self.r;
        self.cube_span == 4 * r + 3
            && self.input_faces.iter().all(|&f| f == 3 * r + 2)
            && self.face_planes.iter().all(|&f| f == 3 * r + 2)
            && self.pairwise_meets.iter().all(|&m| m == 2 * r as i64 + 1)
            && self.triple_meet == r as i64
            && self.output_faces.iter().all(|&f| f == 3 * r + 2)
    }
}

fn degenerate_input(condition: String, expected: usize, found: usize) -> Error {
    Error::DegenerateInput {
        cube: None,
        condition,
        expected,
        found,
    }
}

/// The unique eighth plane `X_123`.
pub fn propagate_cube(cube: &CubeData) -> Result<Subspace> {
    propagate_cube_with_ledger(cube).map(|(x, _)| x)
}

/// Propagates one cube, asserting every dimension the construction relies on.
pub fn propagate_cube_with_ledger(cube: &CubeData) -> Result<(Subspace, CubeLedger)> {
    let r = cube.base.projective_dim();
    let d = cube.base.ambient_dim() - 1;
    let inputs = std::iter::once(&cube.base)
        .chain(&cube.singles)
        .chain(&cube.doubles);
    for x in inputs {
        if x.ambient_dim() != d + 1 {
            return Err(Error::AmbientMismatch {
                left: d + 1,
                right: x.ambient_dim(),
            });
        }
        if x.projective_dim() != r {
            return Err(degenerate_input("input r-plane".into(), r, x.projective_dim()));
        }
    }
    if d < 4 * r + 3 {
        return Err(Error::DimensionBound {
            what: "cube propagation",
            d,
            bound: 4 * r + 3,
        });
    }
    let face = 3 * r + 2;

    let mut input_faces = [0; 3];
    for (slot, &(a, b)) in CUBE_PAIRS.iter().enumerate() {
        let three = join(&[&cube.base, &cube.singles[a], &cube.singles[b]])?;
        if three.projective_dim() != face {
            return Err(degenerate_input(
                format!("span(X,X_{},X_{})", a + 1, b + 1),
                face,
                three.projective_dim(),
            ));
        }
        let four = three.join(cube.double(a, b))?;
        if four.projective_dim() != face {
            return Err(degenerate_input(
                format!("span(X,X_{},X_{},X_{}{})", a + 1, b + 1, a + 1, b + 1),
                face,
                four.projective_dim(),
            ));
        }
        input_faces[slot] = four.projective_dim();
    }

    let span = join(&[&cube.base, &cube.singles[0], &cube.singles[1], &cube.singles[2]])?;
    if span.projective_dim() != 4 * r + 3 {
        return Err(degenerate_input(
            "span(X,X_1,X_2,X_3)".into(),
            4 * r + 3,
            span.projective_dim(),
        ));
    }

    let mut planes = Vec::with_capacity(3);
    for a in 0..3 {
        let (b, c) = match a {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let p = join(&[&cube.singles[a], cube.double(a, b), cube.double(a, c)])?;
        if p.projective_dim() != face {
            return Err(degenerate_input(
                format!("face plane at X_{}", a + 1),
                face,
                p.projective_dim(),
            ));
        }
        planes.push(p);
    }

    let mut pairwise = Vec::with_capacity(3);
    for &(a, b) in &CUBE_PAIRS {
        let m = meet(&planes[a], &planes[b])?;
        let dim = projective_dim_or_empty(&m);
        if dim != 2 * r as i64 + 1 {
            return Err(Error::DegenerateIntersection {
                cube: None,
                condition: format!("meet of face planes {} and {}", a + 1, b + 1),
                expected: 2 * r + 1,
                found: dim,
            });
        }
        pairwise.push(m.expect("nonempty pairwise meet"));
    }

    // All three association orders; exact arithmetic makes them agree.
    let t0 = meet(&pairwise[0], &planes[2])?;
    let t1 = meet(&pairwise[1], &planes[1])?;
    let t2 = meet(&pairwise[2], &planes[0])?;
    assert!(t0 == t1 && t1 == t2, "triple meet depends on association order");
    let triple = projective_dim_or_empty(&t0);
    let x123 = match t0 {
        Some(x) if x.projective_dim() == r => x,
        _ => {
            return Err(Error::DegenerateIntersection {
                cube: None,
                condition: "triple meet of face planes".into(),
                expected: r,
                found: triple,
            })
        }
    };

    let mut output_faces = [0; 3];
    for (a, p) in planes.iter().enumerate() {
        let (b, c) = match a {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let f = join(&[&cube.singles[a], cube.double(a, b), cube.double(a, c), &x123])?;
        debug_assert!(p.contains(&x123)?);
        output_faces[a] = f.projective_dim();
    }

    let ledger = CubeLedger {
        r,
        cube_span: span.projective_dim(),
        input_faces,
        face_planes: [
            planes[0].projective_dim(),
            planes[1].projective_dim(),
            planes[2].projective_dim(),
        ],
        pairwise_meets: [0, 1, 2].map(|k| pairwise[k].projective_dim() as i64),
        triple_meet: triple,
        output_faces,
    };
    Ok((x123, ledger))
}

/// Traversal used by [`propagate_net_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FillOrder {
    /// By layer `sum(n - origin)`; cubes within a layer are independent.
    #[default]
    Layered,
    /// Plain lexicographic order of the target vertex, one at a time.
    Lexicographic,
}

/// Which three axes of a vertex's support pick the cube that computes it.
/// Only matters for `N >= 4`, where consistency makes the choice irrelevant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AxisChoice {
    #[default]
    Lowest,
    Highest,
}

impl AxisChoice {
    pub(crate) fn pick3(self, support: &[usize]) -> [usize; 3] {
        match self {
            AxisChoice::Lowest => [support[0], support[1], support[2]],
            AxisChoice::Highest => {
                let n = support.len();
                [support[n - 3], support[n - 2], support[n - 1]]
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PropagateOptions {
    pub order: FillOrder,
    pub axes: AxisChoice,
    pub exec: Execution,
}

/// Fills `region` from its Cauchy data.
///
/// The data are the vertices with at most two coordinates past the region
/// origin (for `N = 3`, the three coordinate walls). Every other vertex is
/// the output of one elementary cube; any value already stored there is
/// replaced.
pub fn propagate_net(walls: &QNet, region: &Region) -> Result<QNet> {
    propagate_net_with(walls, region, PropagateOptions::default())
}

pub fn propagate_net_with(walls: &QNet, region: &Region, opts: PropagateOptions) -> Result<QNet> {
    if walls.n_axes < 3 || region.dim() != walls.n_axes {
        return Err(Error::LatticeTooSmall(region.dim().min(walls.n_axes)));
    }
    let mut net = walls.clone();
    let mut targets = Vec::new();
    for v in region.vertices() {
        if region.support(&v).len() <= 2 {
            net.require(&v)?;
        } else {
            net.remove(&v);
            targets.push(v);
        }
    }

    let solve = |net: &QNet, v: &VertexIndex| -> Result<Subspace> {
        let axes = opts.axes.pick3(&region.support(v));
        let base = v.shifted(axes[0], -1).shifted(axes[1], -1).shifted(axes[2], -1);
        let cube = CubeData::from_net(net, &base, axes)?;
        propagate_cube(&cube).map_err(|e| e.in_cube(&base))
    };

    match opts.order {
        FillOrder::Layered => {
            let mut layers: BTreeMap<i64, Vec<VertexIndex>> = BTreeMap::new();
            for v in targets {
                layers.entry(region.layer(&v)).or_default().push(v);
            }
            for (_, layer) in layers {
                let computed = opts.exec.try_map(&layer, |v| solve(&net, v))?;
                for (v, x) in layer.into_iter().zip(computed) {
                    net.values.insert(v, x);
                }
            }
        }
        FillOrder::Lexicographic => {
            for v in targets {
                let x = solve(&net, &v)?;
                net.values.insert(v, x);
            }
        }
    }
    Ok(net)
}

/// Data on the unit 4-cube: `X`, the four `X_i` and the six `X_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypercubeData {
    pub base: Subspace,
    pub singles: [Subspace; 4],
    /// Ordered 01, 02, 03, 12, 13, 23.
    pub doubles: [Subspace; 6],
}

const HYPER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn hyper_pair(a: usize, b: usize) -> usize {
    let key = (a.min(b), a.max(b));
    HYPER_PAIRS
        .iter()
        .position(|&p| p == key)
        .unwrap_or_else(|| panic!("not a hypercube axis pair: ({a},{b})"))
}

impl HypercubeData {
    pub fn double(&self, a: usize, b: usize) -> &Subspace {
        &self.doubles[hyper_pair(a, b)]
    }

    pub fn from_net(net: &QNet, base: &VertexIndex) -> Result<HypercubeData> {
        if net.n_axes != 4 {
            return Err(Error::LatticeTooSmall(net.n_axes));
        }
        let single = |a: usize| net.require(&base.step(a)).cloned();
        let double = |(a, b): (usize, usize)| net.require(&base.steps(&[a, b])).cloned();
        Ok(HypercubeData {
            base: net.require(base)?.clone(),
            singles: [single(0)?, single(1)?, single(2)?, single(3)?],
            doubles: [
                double(HYPER_PAIRS[0])?,
                double(HYPER_PAIRS[1])?,
                double(HYPER_PAIRS[2])?,
                double(HYPER_PAIRS[3])?,
                double(HYPER_PAIRS[4])?,
                double(HYPER_PAIRS[5])?,
            ],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourDReport {
    /// `X_{ijk}` indexed by the omitted axis.
    pub triples: [Subspace; 4],
    /// `X_1234` from the cube shifted along axis `l`, for `l = 0..4`.
    pub candidates: [Subspace; 4],
    pub consistent: bool,
    /// Meet of the four `(4r+3)`-planes `V_i = span(X_i, X_ij, X_ik, X_il)`.
    pub v_meet: Option<Subspace>,
}

fn others(l: usize) -> [usize; 3] {
    let v: Vec<usize> = (0..4).filter(|&a| a != l).collect();
    [v[0], v[1], v[2]]
}

/// Computes `X_1234` four ways and compares them.
pub fn check_4d_consistency(data: &HypercubeData) -> Result<FourDReport> {
    let r = data.base.projective_dim();
    let d = data.base.ambient_dim() - 1;
    if d < 5 * r + 4 {
        return Err(Error::DimensionBound {
            what: "4D consistency",
            d,
            bound: 5 * r + 4,
        });
    }
    let triple = |omit: usize| -> Result<Subspace> {
        let [a, b, c] = others(omit);
        propagate_cube(&CubeData {
            base: data.base.clone(),
            singles: [data.singles[a].clone(), data.singles[b].clone(), data.singles[c].clone()],
            doubles: [
                data.double(a, b).clone(),
                data.double(a, c).clone(),
                data.double(b, c).clone(),
            ],
        })
    };
    let triples = [triple(0)?, triple(1)?, triple(2)?, triple(3)?];
    // X_{abl} is the triple omitting the fourth axis of {a, b, l}
    let t = |a: usize, b: usize, l: usize| -> &Subspace {
        let omit = (0..4).find(|x| ![a, b, l].contains(x)).expect("four axes");
        &triples[omit]
    };

    let candidate = |l: usize| -> Result<Subspace> {
        let [a, b, c] = others(l);
        propagate_cube(&CubeData {
            base: data.singles[l].clone(),
            singles: [
                data.double(a, l).clone(),
                data.double(b, l).clone(),
                data.double(c, l).clone(),
            ],
            doubles: [t(a, b, l).clone(), t(a, c, l).clone(), t(b, c, l).clone()],
        })
    };
    let candidates = [candidate(0)?, candidate(1)?, candidate(2)?, candidate(3)?];
    let consistent = candidates.iter().all(|c| c == &candidates[0]);

    let mut vs = Vec::with_capacity(4);
    for i in 0..4 {
        let [a, b, c] = others(i);
        vs.push(join(&[
            &data.singles[i],
            data.double(i, a),
            data.double(i, b),
            data.double(i, c),
        ])?);
    }
    let v_meet = meet_all(&vs.iter().collect::<Vec<_>>())?;

    Ok(FourDReport {
        triples,
        candidates,
        consistent,
        v_meet,
    })
}

/// Seven random planes with planar faces: `X_ab` is a random element of
/// `span(X, X_a, X_b)`.
pub fn random_cube_data(s: &mut Sampler, r: usize, d: usize) -> CubeData {
    let base = s.subspace(d + 1, r + 1);
    let singles = [(); 3].map(|_| s.subspace(d + 1, r + 1));
    let doubles = CUBE_PAIRS.map(|(a, b)| s.combination(&[&base, &singles[a], &singles[b]]));
    CubeData {
        base,
        singles,
        doubles,
    }
}

pub fn random_hypercube_data(s: &mut Sampler, r: usize, d: usize) -> HypercubeData {
    let base = s.subspace(d + 1, r + 1);
    let singles = [(); 4].map(|_| s.subspace(d + 1, r + 1));
    let doubles = HYPER_PAIRS.map(|(a, b)| s.combination(&[&base, &singles[a], &singles[b]]));
    HypercubeData {
        base,
        singles,
        doubles,
    }
}

/// Random hypercube data on which every cube propagation of
/// [`check_4d_consistency`] is non-degenerate. Degenerate draws are redrawn
/// and counted by the sampler; whether the four candidates coincide is not
/// part of the filter.
pub fn random_generic_hypercube_data(s: &mut Sampler, r: usize, d: usize) -> Result<HypercubeData> {
    loop {
        let data = random_hypercube_data(s, r, d);
        match check_4d_consistency(&data) {
            Ok(_) => return Ok(data),
            Err(Error::DegenerateInput { .. } | Error::DegenerateIntersection { .. }) => s.note_resample(),
            Err(e) => return Err(e),
        }
    }
}

/// Random Cauchy data on `region`: vertices with support of size 0 or 1 are
/// random planes, those with support `{a, b}` are random elements of
/// `span(X(n - e_a - e_b), X(n - e_a), X(n - e_b))`.
///
/// Redraws until every stored square has the exact dimension `3r+2`.
pub fn random_walls(
    s: &mut Sampler,
    n_axes: usize,
    r: usize,
    d: usize,
    region: &Region,
) -> Result<QNet> {
    loop {
        let mut net = QNet::new(n_axes, r, d)?;
        for v in region.vertices() {
            let support = region.support(&v);
            let x = match support.len() {
                0 | 1 => s.subspace(d + 1, r + 1),
                2 => {
                    let (a, b) = (support[0], support[1]);
                    let p = net.require(&v.shifted(a, -1).shifted(b, -1))?.clone();
                    let pa = net.require(&v.shifted(b, -1))?.clone();
                    let pb = net.require(&v.shifted(a, -1))?.clone();
                    s.combination(&[&p, &pa, &pb])
                }
                _ => continue,
            };
            net.insert(v, x)?;
        }
        if walls_are_generic(&net)? {
            return Ok(net);
        }
        s.note_resample();
    }
}

/// Every stored square spans exactly `3r+2`, and so does every three of its
/// four vertices.
fn walls_are_generic(net: &QNet) -> Result<bool> {
    let face = 3 * net.r + 2;
    for loc in net.stored_squares() {
        let x = net.require(&loc.base)?;
        let xi = net.require(&loc.base.step(loc.i))?;
        let xj = net.require(&loc.base.step(loc.j))?;
        let xij = net.require(&loc.base.steps(&[loc.i, loc.j]))?;
        let quads: [[&Subspace; 3]; 4] = [[x, xi, xj], [x, xi, xij], [x, xj, xij], [xi, xj, xij]];
        for q in quads {
            if join(&q)?.projective_dim() != face {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
