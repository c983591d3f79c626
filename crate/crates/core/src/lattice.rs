//! Integer lattice coordinates, box regions, and square/edge locations.

use std::fmt;

/// A vertex `n` of `Z^N`. Shifts `n + e_i` are written with [`VertexIndex::step`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexIndex(Vec<i64>);

impl VertexIndex {
    pub fn new(coords: Vec<i64>) -> Self {
        VertexIndex(coords)
    }

    pub fn origin(n_axes: usize) -> Self {
        VertexIndex(vec![0; n_axes])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn shifted(&self, axis: usize, delta: i64) -> Self {
        let mut c = self.0.clone();
        c[axis] += delta;
        VertexIndex(c)
    }

    /// `n + e_axis`.
    pub fn step(&self, axis: usize) -> Self {
        self.shifted(axis, 1)
    }

    /// `n + e_a + e_b + ...`.
    pub fn steps(&self, axes: &[usize]) -> Self {
        let mut c = self.0.clone();
        for &a in axes {
            c[a] += 1;
        }
        VertexIndex(c)
    }
}

impl From<Vec<i64>> for VertexIndex {
    fn from(v: Vec<i64>) -> Self {
        VertexIndex(v)
    }
}

impl From<&[i64]> for VertexIndex {
    fn from(v: &[i64]) -> Self {
        VertexIndex(v.to_vec())
    }
}

impl fmt::Debug for VertexIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VertexIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Elementary square with base vertex `base` spanned by the ordered axis pair `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareLoc {
    pub base: VertexIndex,
    pub i: usize,
    pub j: usize,
}

impl SquareLoc {
    pub fn new(base: VertexIndex, i: usize, j: usize) -> Self {
        SquareLoc { base, i, j }
    }

    /// The same square with the axis order swapped.
    pub fn flipped(&self) -> Self {
        SquareLoc::new(self.base.clone(), self.j, self.i)
    }
}

impl fmt::Display for SquareLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "square {} axes ({},{})", self.base, self.i, self.j)
    }
}

/// The edge `[base, base + e_axis]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLoc {
    pub base: VertexIndex,
    pub axis: usize,
}

impl EdgeLoc {
    pub fn new(base: VertexIndex, axis: usize) -> Self {
        EdgeLoc { base, axis }
    }
}

impl fmt::Display for EdgeLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "edge {} axis {}", self.base, self.axis)
    }
}

/// Box of vertices `origin + [0, extents[0]] x ... x [0, extents[N-1]]`.
///
/// An extent of zero collapses that axis, which is how coordinate slices are
/// described.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    origin: VertexIndex,
    extents: Vec<u32>,
}

impl Region {
    pub fn new(origin: VertexIndex, extents: Vec<u32>) -> Self {
        assert_eq!(origin.dim(), extents.len(), "region dimension mismatch");
        Region { origin, extents }
    }

    /// Box anchored at the lattice origin.
    pub fn from_extents(extents: Vec<u32>) -> Self {
        Region::new(VertexIndex::origin(extents.len()), extents)
    }

    /// Unit cube `{0,1}^N`.
    pub fn unit(n_axes: usize) -> Self {
        Region::from_extents(vec![1; n_axes])
    }

    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    pub fn origin(&self) -> &VertexIndex {
        &self.origin
    }

    pub fn extents(&self) -> &[u32] {
        &self.extents
    }

    pub fn contains(&self, v: &VertexIndex) -> bool {
        v.dim() == self.dim()
            && v.coords()
                .iter()
                .zip(self.origin.coords())
                .zip(&self.extents)
                .all(|((&c, &o), &e)| c >= o && c <= o + i64::from(e))
    }

    /// Coordinates relative to the origin. Only meaningful for contained vertices.
    pub fn relative(&self, v: &VertexIndex) -> Vec<i64> {
        v.coords()
            .iter()
            .zip(self.origin.coords())
            .map(|(c, o)| c - o)
            .collect()
    }

    /// Axes along which `v` is strictly past the origin.
    pub fn support(&self, v: &VertexIndex) -> Vec<usize> {
        self.relative(v)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(a, _)| a)
            .collect()
    }

    /// Sum of relative coordinates.
    pub fn layer(&self, v: &VertexIndex) -> i64 {
        self.relative(v).iter().sum()
    }

    /// Largest layer index in the box.
    pub fn max_layer(&self) -> i64 {
        self.extents.iter().map(|&e| i64::from(e)).sum()
    }

    /// All vertices in lexicographic order.
    pub fn vertices(&self) -> Vec<VertexIndex> {
        let mut out = Vec::new();
        let mut cur = self.origin.coords().to_vec();
        let n = self.dim();
        loop {
            out.push(VertexIndex(cur.clone()));
            let mut axis = n;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                let o = self.origin.coords()[axis];
                if cur[axis] < o + i64::from(self.extents[axis]) {
                    cur[axis] += 1;
                    break;
                }
                cur[axis] = o;
            }
        }
    }

    /// Bases of the elementary squares in the `(i, j)` plane, lexicographic.
    pub fn square_bases(&self, i: usize, j: usize) -> Vec<VertexIndex> {
        self.vertices()
            .into_iter()
            .filter(|v| self.contains(&v.steps(&[i, j])))
            .collect()
    }

    /// Every elementary square with `i < j`, ordered by base then axes.
    pub fn squares(&self) -> Vec<SquareLoc> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for i in 0..self.dim() {
                for j in i + 1..self.dim() {
                    if self.contains(&v.steps(&[i, j])) {
                        out.push(SquareLoc::new(v.clone(), i, j));
                    }
                }
            }
        }
        out
    }

    /// Every edge of the box, ordered by base then axis.
    pub fn edges(&self) -> Vec<EdgeLoc> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for a in 0..self.dim() {
                if self.contains(&v.step(a)) {
                    out.push(EdgeLoc::new(v.clone(), a));
                }
            }
        }
        out
    }

    /// The slice through `v` with axis `axis` frozen.
    pub fn freeze_axis(&self, axis: usize, at: i64) -> Region {
        let mut origin = self.origin.coords().to_vec();
        origin[axis] = at;
        let mut extents = self.extents.clone();
        extents[axis] = 0;
        Region::new(VertexIndex(origin), extents)
    }

    /// Box with the extent along `axis` reduced by one (the bases of `axis`-edges).
    pub fn edge_bases(&self, axis: usize) -> Option<Region> {
        if self.extents[axis] == 0 {
            return None;
        }
        let mut extents = self.extents.clone();
        extents[axis] -= 1;
        Some(Region::new(self.origin.clone(), extents))
    }
}

/// Parses `"2,2,2"` (or `"2x2x2"`) into a list of extents.
pub fn parse_extents(s: &str) -> Option<Vec<u32>> {
    s.split([',', 'x'])
        .map(|p| p.trim().parse::<u32>().ok())
        .collect()
}
