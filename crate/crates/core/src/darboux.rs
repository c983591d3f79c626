//! The noncommutative discrete Darboux system
//! `b^ij(n+e_k) = (b^ij + b^ik b^kj) (I - b^jk b^kj)^{-1}`
//! acting on rotation coefficients attached to oriented plaquettes.

use std::collections::BTreeMap;

use crate::coefficients::PlaquetteField;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grassmann::Sampler;
use crate::lattice::{Region, SquareLoc, VertexIndex};
use crate::linalg::RationalMatrix;
use crate::qnet::{AxisChoice, FillOrder};

/// `(b_ij + b_ik b_kj) (I - b_jk b_kj)^{-1}`.
pub fn darboux_map(
    b_ij: &RationalMatrix,
    b_ik: &RationalMatrix,
    b_kj: &RationalMatrix,
    b_jk: &RationalMatrix,
) -> Result<RationalMatrix> {
    let identity = RationalMatrix::identity(b_ij.rows());
    let denominator = &identity - &(b_jk * b_kj);
    let inv = denominator
        .inverse()
        .map_err(|_| Error::SingularDenominator { square: None })?;
    Ok(&(b_ij + &(b_ik * b_kj)) * &inv)
}

fn map_at(state: &PlaquetteField, n: &VertexIndex, i: usize, j: usize, k: usize) -> Result<RationalMatrix> {
    darboux_map(
        state.value(n, i, j)?,
        state.value(n, i, k)?,
        state.value(n, k, j)?,
        state.value(n, j, k)?,
    )
    .map_err(|e| match e {
        Error::SingularDenominator { square: None } => Error::SingularDenominator {
            square: Some(SquareLoc::new(n.clone(), j, k)),
        },
        other => other,
    })
}

/// Rotation coefficients on the plaquettes of `Z^N`, `N >= 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxState {
    field: PlaquetteField,
}

impl DarbouxState {
    pub fn new(n_axes: usize, r: usize) -> Result<Self> {
        DarbouxState::from_field(PlaquetteField::new(n_axes, r))
    }

    pub fn from_field(field: PlaquetteField) -> Result<Self> {
        if field.n_axes() < 3 {
            return Err(Error::LatticeTooSmall(field.n_axes()));
        }
        Ok(DarbouxState { field })
    }

    pub fn field(&self) -> &PlaquetteField {
        &self.field
    }

    pub fn into_field(self) -> PlaquetteField {
        self.field
    }

    pub fn n_axes(&self) -> usize {
        self.field.n_axes()
    }

    pub fn rank(&self) -> usize {
        self.field.rank()
    }

    pub fn insert(&mut self, loc: SquareLoc, m: RationalMatrix) {
        self.field.insert(loc, m);
    }

    pub fn value(&self, n: &VertexIndex, i: usize, j: usize) -> Result<&RationalMatrix> {
        self.field.value(n, i, j)
    }
}

/// Output of one elementary cube: the six shifted coefficients
/// `b^pq(n + e_m)` for the ordered pairs `(p, q)` of the cube's axes.
pub fn step_cube(state: &DarbouxState, base: &VertexIndex, axes: [usize; 3]) -> Result<Vec<(SquareLoc, RationalMatrix)>> {
    let mut out = BTreeMap::new();
    for (p, q, m) in ordered_triples(axes) {
        let v = map_at(&state.field, base, p, q, m)?;
        out.insert((p, q), (SquareLoc::new(base.step(m), p, q), v));
    }
    for (i, j, k) in ordered_triples(axes) {
        let get = |a: usize, b: usize| state.value(base, a, b).expect("inputs were read above");
        assert!(
            coupled_relations_hold(
                get(i, j),
                get(i, k),
                get(j, k),
                get(k, j),
                &out[&(i, j)].1,
                &out[&(i, k)].1,
            ),
            "coupled relations fail on the cube at {base}"
        );
    }
    Ok(out.into_values().collect())
}

/// `b^ij_k - b^ik_j b^kj = b^ij` and `-b^ij_k b^jk + b^ik_j = b^ik`.
pub fn coupled_relations_hold(
    b_ij: &RationalMatrix,
    b_ik: &RationalMatrix,
    b_jk: &RationalMatrix,
    b_kj: &RationalMatrix,
    b_ij_k: &RationalMatrix,
    b_ik_j: &RationalMatrix,
) -> bool {
    &(b_ij_k - &(b_ik_j * b_kj)) == b_ij && &(b_ik_j - &(b_ij_k * b_jk)) == b_ik
}

/// `(p, q, m)` over the six orderings of three axes.
fn ordered_triples(axes: [usize; 3]) -> [(usize, usize, usize); 6] {
    let [a, b, c] = axes;
    [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvolveOptions {
    pub order: FillOrder,
    /// Which shift axis produces a plaquette that several cubes could produce.
    pub axes: AxisChoice,
    pub exec: Execution,
    /// Computes every such plaquette from all its cubes and requires agreement.
    pub cross_check: bool,
}

/// Initial data for [`evolve`]: the oriented plaquettes `(n; i, j)` of `region`
/// with `n_k` at the origin for every `k` other than `i, j`.
pub fn initial_plaquettes(region: &Region) -> Vec<SquareLoc> {
    oriented_squares(region)
        .into_iter()
        .filter(|s| shift_axes(region, s).is_empty())
        .collect()
}

fn oriented_squares(region: &Region) -> Vec<SquareLoc> {
    region.squares().into_iter().flat_map(|s| [s.clone(), s.flipped()]).collect()
}

/// Axes `k` outside the plaquette along which it sits past the origin.
fn shift_axes(region: &Region, s: &SquareLoc) -> Vec<usize> {
    region
        .relative(&s.base)
        .iter()
        .enumerate()
        .filter(|&(k, &c)| k != s.i && k != s.j && c > 0)
        .map(|(k, _)| k)
        .collect()
}

pub fn evolve(state: &DarbouxState, region: &Region) -> Result<DarbouxState> {
    evolve_with(state, region, EvolveOptions::default())
}

/// Fills every oriented plaquette of `region` from the initial data.
/// Values already stored on non-initial plaquettes are replaced.
pub fn evolve_with(state: &DarbouxState, region: &Region, opts: EvolveOptions) -> Result<DarbouxState> {
    if region.dim() != state.n_axes() {
        return Err(Error::LatticeTooSmall(region.dim()));
    }
    let mut targets = Vec::new();
    for s in oriented_squares(region) {
        let ks = shift_axes(region, &s);
        if ks.is_empty() {
            state.field.value(&s.base, s.i, s.j)?;
        } else {
            targets.push((s, ks));
        }
    }

    let solve = |field: &PlaquetteField, (s, ks): &(SquareLoc, Vec<usize>)| -> Result<RationalMatrix> {
        let k = match opts.axes {
            AxisChoice::Lowest => ks[0],
            AxisChoice::Highest => ks[ks.len() - 1],
        };
        let value = map_at(field, &s.base.shifted(k, -1), s.i, s.j, k)?;
        if opts.cross_check {
            for &other in ks {
                if map_at(field, &s.base.shifted(other, -1), s.i, s.j, other)? != value {
                    return Err(Error::InconsistentEvolution(s.clone()));
                }
            }
        }
        Ok(value)
    };

    let mut field = state.field.clone();
    match opts.order {
        FillOrder::Layered => {
            let mut layers: BTreeMap<i64, Vec<(SquareLoc, Vec<usize>)>> = BTreeMap::new();
            for t in targets {
                layers.entry(region.layer(&t.0.base)).or_default().push(t);
            }
            for (_, layer) in layers {
                let values = opts.exec.try_map(&layer, |t| solve(&field, t))?;
                for ((s, _), v) in layer.into_iter().zip(values) {
                    field.insert(s, v);
                }
            }
        }
        FillOrder::Lexicographic => {
            targets.sort_by(|a, b| a.0.cmp(&b.0));
            for t in targets {
                let v = solve(&field, &t)?;
                field.insert(t.0, v);
            }
        }
    }
    Ok(DarbouxState { field })
}

/// Both evolution orders of the twelve plaquettes of a 4-cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapConsistency {
    /// `(i, j, k, l)`: `b^ij` shifted by `k` then `l`, compared with `l` then `k`.
    pub compared: Vec<[usize; 4]>,
    pub mismatches: Vec<[usize; 4]>,
}

impl MapConsistency {
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Evolves each `b^ij` at `base` to `b^ij(n + e_k + e_l)` along both orders,
/// using the twelve plaquettes on axes `0..4`.
pub fn check_map_4d_consistency(state: &DarbouxState, base: &VertexIndex) -> Result<MapConsistency> {
    if state.n_axes() < 4 {
        return Err(Error::LatticeTooSmall(state.n_axes()));
    }
    let mut once = PlaquetteField::new(state.n_axes(), state.rank());
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if i != j && j != k && i != k {
                    once.insert(SquareLoc::new(base.step(k), i, j), map_at(&state.field, base, i, j, k)?);
                }
            }
        }
    }
    let mut compared = Vec::new();
    let mut mismatches = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let others: Vec<usize> = (0..4).filter(|&a| a != i && a != j).collect();
            let (k, l) = (others[0], others[1]);
            let kl = map_at(&once, &base.step(k), i, j, l)?;
            let lk = map_at(&once, &base.step(l), i, j, k)?;
            compared.push([i, j, k, l]);
            if kl != lk {
                mismatches.push([i, j, k, l]);
            }
        }
    }
    Ok(MapConsistency { compared, mismatches })
}

/// Random initial data on `region` with entries in `[-1/2, 1/2]`.
pub fn random_state(s: &mut Sampler, n_axes: usize, r: usize, region: &Region) -> Result<DarbouxState> {
    let mut state = DarbouxState::new(n_axes, r)?;
    for loc in initial_plaquettes(region) {
        state.insert(loc, s.small_matrix(r + 1, r + 1));
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{extract_a_field, lame_from_a, qnet_rotation_coeffs, rotation_coeffs};
    use crate::linalg::{int, rat, Rational};
    use crate::qnet::{propagate_net, random_walls};
    use proptest::prelude::*;

    fn scalar(q: Rational) -> RationalMatrix {
        RationalMatrix::scalar(1, q)
    }

    #[test]
    fn scalar_example() {
        let out = darboux_map(&scalar(rat(1, 2)), &scalar(rat(1, 3)), &scalar(rat(1, 4)), &scalar(rat(1, 5))).unwrap();
        assert_eq!(out, scalar(rat(35, 57)));
    }

    #[test]
    fn trivial_inputs() {
        let z = RationalMatrix::zeros(2, 2);
        assert!(darboux_map(&z, &z, &z, &z).unwrap().is_zero());
        let b = RationalMatrix::from_i64(2, 2, &[1, 2, 3, 4]);
        let c = RationalMatrix::from_i64(2, 2, &[5, 6, 7, 8]);
        assert_eq!(darboux_map(&b, &c, &z, &z).unwrap(), b);
    }

    #[test]
    fn singular_denominator() {
        let one = scalar(int(1));
        assert_eq!(
            darboux_map(&one, &one, &one, &one),
            Err(Error::SingularDenominator { square: None })
        );
        let region = Region::unit(3);
        let mut state = DarbouxState::new(3, 0).unwrap();
        for loc in initial_plaquettes(&region) {
            state.insert(loc, scalar(rat(1, 3)));
        }
        // I - b^12 b^21 = 0 on the (1,2) plaquette
        let o = VertexIndex::origin(3);
        state.insert(SquareLoc::new(o.clone(), 1, 2), scalar(int(2)));
        state.insert(SquareLoc::new(o.clone(), 2, 1), scalar(rat(1, 2)));
        let err = evolve_with(
            &state,
            &region,
            EvolveOptions {
                order: FillOrder::Lexicographic,
                ..Default::default()
            },
        )
        .unwrap_err();
        // the first target in lexicographic order is b^01 at (0,0,1)
        assert_eq!(
            err,
            Error::SingularDenominator {
                square: Some(SquareLoc::new(o, 1, 2))
            }
        );
    }

    #[test]
    fn zero_state_stays_zero() {
        let region = Region::from_extents(vec![2, 2, 2]);
        let mut state = DarbouxState::new(3, 1).unwrap();
        for loc in initial_plaquettes(&region) {
            state.insert(loc, RationalMatrix::zeros(2, 2));
        }
        let out = evolve(&state, &region).unwrap();
        assert_eq!(out.field().len(), 72);
        assert!(out.field().iter().all(|(_, m)| m.is_zero()));
    }

    #[test]
    fn single_cube_matches_step() {
        let mut s = Sampler::new(2, 10);
        let region = Region::unit(3);
        let state = random_state(&mut s, 3, 1, &region).unwrap();
        let out = evolve(&state, &region).unwrap();
        let step = step_cube(&state, &VertexIndex::origin(3), [0, 1, 2]).unwrap();
        assert_eq!(step.len(), 6);
        for (loc, m) in step {
            assert_eq!(out.field().get(&loc), Some(&m));
        }
    }

    #[test]
    fn fill_orders_agree() {
        for r in 0..3 {
            let mut s = Sampler::new(10 + r as u64, 10);
            let region = Region::from_extents(vec![2, 2, 2]);
            let state = random_state(&mut s, 3, r, &region).unwrap();
            let layered = evolve(&state, &region).unwrap();
            let lex = evolve_with(
                &state,
                &region,
                EvolveOptions {
                    order: FillOrder::Lexicographic,
                    exec: Execution::Sequential,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(layered, lex);
        }
    }

    #[test]
    fn four_d_evolution_is_consistent() {
        let mut s = Sampler::new(4, 10);
        let region = Region::from_extents(vec![1, 1, 1, 2]);
        let state = random_state(&mut s, 4, 1, &region).unwrap();
        let low = evolve(&state, &region).unwrap();
        let high = evolve_with(
            &state,
            &region,
            EvolveOptions {
                axes: AxisChoice::Highest,
                cross_check: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(low, high);
    }

    #[test]
    fn map_consistency() {
        let o = VertexIndex::origin(4);
        let mut zero = DarbouxState::new(4, 0).unwrap();
        for loc in initial_plaquettes(&Region::unit(4)) {
            zero.insert(loc, RationalMatrix::zeros(1, 1));
        }
        assert!(check_map_4d_consistency(&zero, &o).unwrap().consistent());
        for r in 0..3 {
            let mut s = Sampler::new(70 + r as u64, 10);
            let state = random_state(&mut s, 4, r, &Region::unit(4)).unwrap();
            assert_eq!(state.field().len(), 12);
            let report = check_map_4d_consistency(&state, &o).unwrap();
            assert_eq!(report.compared.len(), 12);
            assert!(report.consistent());
        }
    }

    #[test]
    fn geometry_and_algebra_agree() {
        let exec = Execution::default();
        let region = Region::from_extents(vec![2, 2, 2]);
        for r in 0..2 {
            let mut s = Sampler::new(90 + r as u64, 10);
            let walls = random_walls(&mut s, 3, r, 4 * r + 3, &region).unwrap();
            let net = propagate_net(&walls, &region).unwrap();
            let full = qnet_rotation_coeffs(&net, &region, exec).unwrap();

            let wall_squares = walls.stored_squares();
            let a = extract_a_field(&walls, &wall_squares, exec).unwrap();
            let h = lame_from_a(&a, &region, exec).unwrap();
            let initial = rotation_coeffs(&h, &wall_squares, exec).unwrap();
            let state = DarbouxState::from_field(initial).unwrap();
            let evolved = evolve(&state, &region).unwrap();
            assert_eq!(evolved.field().len(), 72);
            assert!(evolved.field().differences(&full).is_empty());
        }
    }

    fn arb_scalar() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=20).prop_map(|(p, q)| rat(p, q))
    }

    fn arb_matrix(k: usize) -> impl Strategy<Value = RationalMatrix> {
        proptest::collection::vec(-5i64..=5, k * k).prop_map(move |v| {
            RationalMatrix::new(k, k, v.into_iter().map(|x| rat(x, 10)).collect())
        })
    }

    proptest! {
        #[test]
        fn scalar_oracle(a in arb_scalar(), b in arb_scalar(), c in arb_scalar(), d in arb_scalar()) {
            let den = Rational::from_integer(1.into()) - &d * &c;
            let out = darboux_map(&scalar(a.clone()), &scalar(b.clone()), &scalar(c.clone()), &scalar(d.clone()));
            if den == Rational::from_integer(0.into()) {
                prop_assert!(out.is_err());
            } else {
                prop_assert_eq!(out.unwrap(), scalar((a + b * c) / den));
            }
        }

        #[test]
        fn scalar_embedding_commutes(a in arb_scalar(), b in arb_scalar(), c in arb_scalar(), d in arb_scalar(), k in 1usize..4) {
            let small = darboux_map(&scalar(a.clone()), &scalar(b.clone()), &scalar(c.clone()), &scalar(d.clone()));
            let big = darboux_map(
                &RationalMatrix::scalar(k, a), &RationalMatrix::scalar(k, b),
                &RationalMatrix::scalar(k, c), &RationalMatrix::scalar(k, d));
            match (small, big) {
                (Ok(s), Ok(m)) => prop_assert_eq!(m, RationalMatrix::scalar(k, s.get(0, 0).clone())),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "scalar and matrix paths disagree on singularity"),
            }
        }

        #[test]
        fn conjugation_covariance(ms in proptest::collection::vec(arb_matrix(2), 4), seed in any::<u64>()) {
            let g = Sampler::new(seed, 5).invertible_matrix(2);
            let gi = g.inverse().unwrap();
            let conj = |m: &RationalMatrix| &(&g * m) * &gi;
            if let Ok(out) = darboux_map(&ms[0], &ms[1], &ms[2], &ms[3]) {
                let c = darboux_map(&conj(&ms[0]), &conj(&ms[1]), &conj(&ms[2]), &conj(&ms[3])).unwrap();
                prop_assert_eq!(c, conj(&out));
            }
        }

        #[test]
        fn step_cube_relations(seed in any::<u64>(), r in 0usize..3) {
            let mut s = Sampler::new(seed, 10);
            let state = random_state(&mut s, 3, r, &Region::unit(3)).unwrap();
            // relations are asserted inside step_cube
            if let Ok(out) = step_cube(&state, &VertexIndex::origin(3), [0, 1, 2]) {
                prop_assert_eq!(out.len(), 6);
            }
        }
    }
}
