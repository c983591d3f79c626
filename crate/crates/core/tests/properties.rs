use proptest::prelude::*;

use grassnet::coefficients::extract_a_field;
use grassnet::io::{parse_qnet, write_qnet};
use grassnet::qnet::{propagate_net, random_walls};
use grassnet::{Execution, QNet, RationalMatrix, Region, Sampler, Subspace};

fn transformed(net: &QNet, m: &RationalMatrix) -> QNet {
    let mut out = QNet::new(net.n_axes(), net.rank(), net.ambient_dim()).unwrap();
    for (v, x) in net.iter() {
        out.insert(v.clone(), Subspace::span(&(x.basis() * m)).unwrap()).unwrap();
    }
    out
}

/// `[[A, 0], [B, I]]`: acts on row vectors and keeps the last `r+1`
/// coordinates of an affine representative equal to the identity.
fn chart_preserving(s: &mut Sampler, r: usize, d: usize) -> RationalMatrix {
    let k = d - r;
    let a = s.invertible_matrix(k);
    let b = s.int_matrix(r + 1, k);
    let top = RationalMatrix::hstack(&[&a, &RationalMatrix::zeros(k, r + 1)]);
    let bottom = RationalMatrix::hstack(&[&b, &RationalMatrix::identity(r + 1)]);
    RationalMatrix::vstack(&[&top, &bottom])
}

fn net(seed: u64, r: usize) -> (QNet, QNet, Region, Sampler) {
    let region = Region::from_extents(vec![2, 2, 2]);
    let mut s = Sampler::new(seed, 10);
    let walls = random_walls(&mut s, 3, r, 4 * r + 3, &region).unwrap();
    let full = propagate_net(&walls, &region).unwrap();
    (walls, full, region, s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn propagation_commutes_with_projective_maps(seed in any::<u64>(), r in 0usize..2) {
        let (walls, full, region, mut s) = net(seed, r);
        let m = s.invertible_matrix(4 * r + 4);
        let moved = propagate_net(&transformed(&walls, &m), &region).unwrap();
        prop_assert_eq!(moved, transformed(&full, &m));
    }

    #[test]
    fn coefficients_are_invariant_under_chart_preserving_maps(seed in any::<u64>(), r in 0usize..2) {
        let (_, full, region, mut s) = net(seed, r);
        let m = chart_preserving(&mut s, r, 4 * r + 3);
        let squares = region.squares();
        let a = extract_a_field(&full, &squares, Execution::Sequential).unwrap();
        let b = extract_a_field(&transformed(&full, &m), &squares, Execution::Sequential).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn propagated_nets_round_trip(seed in any::<u64>(), r in 0usize..3) {
        let (_, full, _, _) = net(seed, r);
        let text = write_qnet(&full);
        let back = parse_qnet(&text).unwrap();
        prop_assert_eq!(write_qnet(&back), text);
        prop_assert_eq!(back, full);
    }
}
