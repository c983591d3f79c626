//! Line-oriented text formats for nets and fields.
//!
//! Every file starts with a `grassnet <kind>` line and a header, followed by
//! records. A record is one key line and then one line per matrix row, with
//! entries written as exact rationals `p/q` (or `p`). Blank lines and lines
//! starting with `#` are ignored.
//!
//! ```text
//! grassnet qnet
//! N 3
//! r 0
//! d 3
//! vertex 0 0 0
//! 1 0 -2/3 0
//! ```
//!
//! Edge nets use `edge <coords> axis <i>` records. Fields carry a
//! `kind plaquette|edge` header line and `square <coords> axes <i> <j>` or
//! `edge <coords> axis <i>` records.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::coefficients::{EdgeField, PlaquetteField};
use crate::darboux_net::EdgeNet;
use crate::error::{Error, Result};
use crate::grassmann::Subspace;
use crate::lattice::{EdgeLoc, SquareLoc, VertexIndex};
use crate::linalg::{Rational, RationalMatrix};
use crate::qnet::QNet;

/// A field file holds either kind of field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Field {
    Plaquette(PlaquetteField),
    Edge(EdgeField),
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.parse::<BigInt>().ok()?, q.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if q.is_zero() {
        return None;
    }
    Some(Rational::new(p, q))
}

fn write_matrix(out: &mut String, m: &RationalMatrix) {
    for row in m.row_iter() {
        let parts: Vec<String> = row.iter().map(format_rational).collect();
        let _ = writeln!(out, "{}", parts.join(" "));
    }
}

fn coords(v: &VertexIndex) -> String {
    v.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn header(out: &mut String, kind: &str, n: usize, r: usize) {
    let _ = writeln!(out, "grassnet {kind}");
    let _ = writeln!(out, "N {n}");
    let _ = writeln!(out, "r {r}");
}

pub fn write_qnet(net: &QNet) -> String {
    let mut out = String::new();
    header(&mut out, "qnet", net.n_axes(), net.rank());
    let _ = writeln!(out, "d {}", net.ambient_dim());
    for (v, x) in net.iter() {
        let _ = writeln!(out, "vertex {}", coords(v));
        write_matrix(&mut out, x.basis());
    }
    out
}

pub fn write_edge_net(net: &EdgeNet) -> String {
    let mut out = String::new();
    header(&mut out, "edgenet", net.n_axes(), net.rank());
    let _ = writeln!(out, "d {}", net.ambient_dim());
    for (e, x) in net.iter() {
        let _ = writeln!(out, "edge {} axis {}", coords(&e.base), e.axis);
        write_matrix(&mut out, x.basis());
    }
    out
}

pub fn write_plaquette_field(field: &PlaquetteField) -> String {
    let mut out = String::new();
    header(&mut out, "field", field.n_axes(), field.rank());
    let _ = writeln!(out, "kind plaquette");
    for (s, m) in field.iter() {
        let _ = writeln!(out, "square {} axes {} {}", coords(&s.base), s.i, s.j);
        write_matrix(&mut out, m);
    }
    out
}

pub fn write_edge_field(field: &EdgeField) -> String {
    let mut out = String::new();
    header(&mut out, "field", field.n_axes(), field.rank());
    let _ = writeln!(out, "kind edge");
    for (e, m) in field.iter() {
        let _ = writeln!(out, "edge {} axis {}", coords(&e.base), e.axis);
        write_matrix(&mut out, m);
    }
    out
}

pub fn write_field(field: &Field) -> String {
    match field {
        Field::Plaquette(f) => write_plaquette_field(f),
        Field::Edge(f) => write_edge_field(f),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(k, l)| (k + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Lines {
            inner: it.peekable(),
            last: 0,
        }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((k, l)) => {
                self.last = k;
                Ok((k, l))
            }
            None => Err(self.err(self.last + 1, "unexpected end of file")),
        }
    }

    fn done(&mut self) -> bool {
        self.inner.peek().is_none()
    }

    fn expect_exact(&mut self, want: &str) -> Result<()> {
        let (k, l) = self.next()?;
        if l.split_whitespace().collect::<Vec<_>>().join(" ") != want {
            return Err(self.err(k, format!("expected `{want}`")));
        }
        Ok(())
    }

    fn keyed_usize(&mut self, key: &str) -> Result<usize> {
        let (k, l) = self.next()?;
        let mut parts = l.split_whitespace();
        match (parts.next(), parts.next().and_then(|p| p.parse().ok()), parts.next()) {
            (Some(w), Some(v), None) if w == key => Ok(v),
            _ => Err(self.err(k, format!("expected `{key} <count>`"))),
        }
    }

    fn keyed_word(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (k, l) = self.next()?;
        let mut parts = l.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(w), Some(v), None) if w == key => Ok((k, v)),
            _ => Err(self.err(k, format!("expected `{key} <value>`"))),
        }
    }

    /// `rows` lines of the same number of rationals.
    fn matrix(&mut self, rows: usize) -> Result<RationalMatrix> {
        let mut data = Vec::with_capacity(rows);
        let mut cols = None;
        for _ in 0..rows {
            let (k, l) = self.next()?;
            let row: Option<Vec<Rational>> = l.split_whitespace().map(parse_rational).collect();
            let row = row.ok_or_else(|| self.err(k, "malformed rational entry"))?;
            if row.is_empty() || cols.is_some_and(|c| c != row.len()) {
                return Err(self.err(k, "matrix rows must be non-empty and of equal length"));
            }
            cols = Some(row.len());
            data.push(row);
        }
        Ok(RationalMatrix::from_rows(data))
    }
}

/// Parses `<word> c_1 ... c_N [tail...]` and returns the coordinates and tail.
fn record<'a>(lines: &Lines<'a>, k: usize, l: &'a str, word: &str, n: usize) -> Result<(VertexIndex, Vec<&'a str>)> {
    let parts: Vec<&str> = l.split_whitespace().collect();
    if parts.first() != Some(&word) || parts.len() < n + 1 {
        return Err(lines.err(k, format!("expected `{word}` record with {n} coordinates")));
    }
    let c: Option<Vec<i64>> = parts[1..=n].iter().map(|p| p.parse().ok()).collect();
    let c = c.ok_or_else(|| lines.err(k, "malformed coordinate"))?;
    Ok((VertexIndex::new(c), parts[n + 1..].to_vec()))
}

fn parse_axis(lines: &Lines, k: usize, tail: &[&str], n: usize) -> Result<EdgeLoc> {
    match tail {
        ["axis", a] => match a.parse::<usize>() {
            Ok(a) if a < n => Ok(EdgeLoc::new(VertexIndex::origin(n), a)),
            _ => Err(lines.err(k, "axis out of range")),
        },
        _ => Err(lines.err(k, "expected `axis <i>`")),
    }
}

fn subspace_at(lines: &Lines, k: usize, m: &RationalMatrix, d: usize, r: usize) -> Result<Subspace> {
    if m.cols() != d + 1 {
        return Err(lines.err(k, format!("expected {} columns, found {}", d + 1, m.cols())));
    }
    Subspace::from_basis(m).map_err(|_| lines.err(k, format!("basis rows do not span an {r}-plane")))
}

pub fn parse_qnet(text: &str) -> Result<QNet> {
    let mut lines = Lines::new(text);
    lines.expect_exact("grassnet qnet")?;
    let n = lines.keyed_usize("N")?;
    let r = lines.keyed_usize("r")?;
    let d = lines.keyed_usize("d")?;
    let mut net = QNet::new(n, r, d)?;
    while !lines.done() {
        let (k, l) = lines.next()?;
        let (v, tail) = record(&lines, k, l, "vertex", n)?;
        if !tail.is_empty() {
            return Err(lines.err(k, "trailing tokens after vertex coordinates"));
        }
        let m = lines.matrix(r + 1)?;
        let x = subspace_at(&lines, k, &m, d, r)?;
        net.insert(v, x).map_err(|e| lines.err(k, e.to_string()))?;
    }
    Ok(net)
}

pub fn parse_edge_net(text: &str) -> Result<EdgeNet> {
    let mut lines = Lines::new(text);
    lines.expect_exact("grassnet edgenet")?;
    let n = lines.keyed_usize("N")?;
    let r = lines.keyed_usize("r")?;
    let d = lines.keyed_usize("d")?;
    let mut net = EdgeNet::new(n, r, d)?;
    while !lines.done() {
        let (k, l) = lines.next()?;
        let (v, tail) = record(&lines, k, l, "edge", n)?;
        let axis = parse_axis(&lines, k, &tail, n)?.axis;
        let m = lines.matrix(r + 1)?;
        let x = subspace_at(&lines, k, &m, d, r)?;
        net.insert(EdgeLoc::new(v, axis), x).map_err(|e| lines.err(k, e.to_string()))?;
    }
    Ok(net)
}

pub fn parse_field(text: &str) -> Result<Field> {
    let mut lines = Lines::new(text);
    lines.expect_exact("grassnet field")?;
    let n = lines.keyed_usize("N")?;
    let r = lines.keyed_usize("r")?;
    let (k, kind) = lines.keyed_word("kind")?;
    match kind {
        "plaquette" => {
            let mut field = PlaquetteField::new(n, r);
            while !lines.done() {
                let (k, l) = lines.next()?;
                let (v, tail) = record(&lines, k, l, "square", n)?;
                let (i, j) = match tail.as_slice() {
                    ["axes", i, j] => match (i.parse::<usize>(), j.parse::<usize>()) {
                        (Ok(i), Ok(j)) if i < n && j < n && i != j => (i, j),
                        _ => return Err(lines.err(k, "axes must be two distinct axes in range")),
                    },
                    _ => return Err(lines.err(k, "expected `axes <i> <j>`")),
                };
                let m = lines.matrix(r + 1)?;
                if m.cols() != r + 1 {
                    return Err(lines.err(k, "plaquette values must be square"));
                }
                field.insert(SquareLoc::new(v, i, j), m);
            }
            Ok(Field::Plaquette(field))
        }
        "edge" => {
            let mut field = EdgeField::new(n, r);
            while !lines.done() {
                let (k, l) = lines.next()?;
                let (v, tail) = record(&lines, k, l, "edge", n)?;
                let axis = parse_axis(&lines, k, &tail, n)?.axis;
                let m = lines.matrix(r + 1)?;
                field.insert(EdgeLoc::new(v, axis), m);
            }
            Ok(Field::Edge(field))
        }
        _ => Err(lines.err(k, "kind must be `plaquette` or `edge`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{extract_a_field, lame_from_a};
    use crate::darboux_net::{random_slicing_plane, slice_qnet};
    use crate::exec::Execution;
    use crate::grassmann::Sampler;
    use crate::lattice::Region;
    use crate::linalg::rat;
    use crate::qnet::random_walls;
    use proptest::prelude::*;

    #[test]
    fn rationals() {
        assert_eq!(format_rational(&rat(-4, 6)), "-2/3");
        assert_eq!(format_rational(&rat(5, 1)), "5");
        assert_eq!(parse_rational("6/-4"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let text = "grassnet qnet\nN 2\nr 0\nd 2\n\nvertex 0 0\n1 2\n";
        assert_eq!(
            parse_qnet(text),
            Err(Error::Parse {
                line: 6,
                message: "expected 3 columns, found 2".into()
            })
        );
        assert!(matches!(parse_qnet("grassnet field\n"), Err(Error::Parse { line: 1, .. })));
        let truncated = "grassnet qnet\nN 2\nr 1\nd 3\nvertex 0 0\n1 0 0 0\n";
        assert!(matches!(parse_qnet(truncated), Err(Error::Parse { line: 7, .. })));
        let rank_deficient = "grassnet qnet\nN 2\nr 1\nd 3\nvertex 0 0\n1 0 0 0\n2 0 0 0\n";
        assert!(matches!(parse_qnet(rank_deficient), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn comments_are_ignored() {
        let text = "# walls\ngrassnet qnet\nN 2\nr 0\nd 2\n# origin\nvertex 0 0\n2 4 2\n";
        let net = parse_qnet(text).unwrap();
        assert_eq!(net.len(), 1);
        assert_eq!(write_qnet(&net), "grassnet qnet\nN 2\nr 0\nd 2\nvertex 0 0\n1 2 1\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn round_trips(seed in any::<u64>(), r in 0usize..2) {
            let region = Region::from_extents(vec![1, 1, 1]);
            let mut s = Sampler::new(seed, 10);
            let d = 4 * r + 3;
            let walls = random_walls(&mut s, 3, r, d, &region).unwrap();
            prop_assert_eq!(parse_qnet(&write_qnet(&walls)).unwrap(), walls.clone());

            let plane = random_slicing_plane(&mut s, r, d);
            let edges = slice_qnet(&walls, &plane, Execution::Sequential).unwrap();
            prop_assert_eq!(parse_edge_net(&write_edge_net(&edges)).unwrap(), edges);

            let a = extract_a_field(&walls, &walls.stored_squares(), Execution::Sequential).unwrap();
            let text = write_plaquette_field(&a);
            prop_assert_eq!(parse_field(&text).unwrap(), Field::Plaquette(a.clone()));
            let h = lame_from_a(&a, &region, Execution::Sequential).unwrap();
            prop_assert_eq!(parse_field(&write_edge_field(&h)).unwrap(), Field::Edge(h));
        }
    }
}
