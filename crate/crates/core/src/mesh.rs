//! Wavefront OBJ export of a 2D slice of a point net in `P^3`.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::coefficients::affine_at;
use crate::error::{Error, Result};
use crate::lattice::Region;
use crate::qnet::QNet;

/// Quad mesh of the vertices of `slice`, which must have exactly two axes of
/// positive extent. Vertices use the affine chart `x_3 = 1`.
pub fn export_obj(net: &QNet, slice: &Region) -> Result<String> {
    if net.rank() != 0 || net.ambient_dim() != 3 {
        return Err(Error::NotMeshable {
            r: net.rank(),
            d: net.ambient_dim(),
        });
    }
    let free: Vec<usize> = (0..slice.dim()).filter(|&a| slice.extents()[a] > 0).collect();
    if free.len() != 2 {
        return Err(Error::MeshSlice(free.len()));
    }
    let (a, b) = (free[0], free[1]);
    let vertices = slice.vertices();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# grassnet mesh {}x{}",
        slice.extents()[a] + 1,
        slice.extents()[b] + 1
    );
    for v in &vertices {
        let x = affine_at(net.require(v)?, v)?;
        let c: Vec<String> = (0..3)
            .map(|k| x.get(0, k).to_f64().unwrap_or(f64::NAN).to_string())
            .collect();
        let _ = writeln!(out, "v {}", c.join(" "));
    }
    let index = |v: &crate::lattice::VertexIndex| vertices.iter().position(|w| w == v).map(|p| p + 1);
    for v in &vertices {
        let corners = [v.clone(), v.step(a), v.steps(&[a, b]), v.step(b)];
        let ids: Option<Vec<usize>> = corners.iter().map(index).collect();
        if let Some(ids) = ids {
            let _ = writeln!(out, "f {} {} {} {}", ids[0], ids[1], ids[2], ids[3]);
        }
    }
    Ok(out)
}
