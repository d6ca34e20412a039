use proptest::prelude::*;

use super::*;
use crate::builders::grid_complex;
use crate::rings::NormKind;

fn zabs() -> NormedRing {
    NormedRing::integers(NormKind::Absolute)
}

fn q(n: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(n.into())
}

fn triangle() -> Complex {
    Complex::from_simplices(3, [[0u32, 1, 2]]).unwrap()
}

#[test]
fn boundary_of_a_triangle() {
    let cx = triangle();
    let c = Chain::from_i64(zabs(), 2, [(0, 1)]);
    let b = cx.boundary(&c).unwrap();
    let e = |u, v| cx.find(&[u, v]).unwrap();
    let want = Chain::from_i64(zabs(), 1, [(e(1, 2), 1), (e(0, 2), -1), (e(0, 1), 1)]);
    assert_eq!(b, want);
    assert!(cx.boundary(&b).unwrap().is_zero());
    assert!(cx.boundary(&Chain::zero(zabs(), 0)).is_err());
}

#[test]
fn two_squares_bound_the_outer_loop() {
    let (cx, _) = grid_complex(2, 1).unwrap();
    assert_eq!(cx.n_cells(2), 4);
    let outer = cx.path_chain(&[0, 1, 2, 5, 4, 3, 0], zabs()).unwrap();
    assert_eq!(outer.support_len(), 6);
    assert!(cx.is_cycle(&outer).unwrap());
    // all sign patterns on the four triangles
    let hits: Vec<Chain> = (0..16u32)
        .map(|mask| Chain::from_i64(zabs(), 2, (0..4).map(|t| (t, if mask >> t & 1 == 1 { 1 } else { -1 }))))
        .filter(|c| cx.boundary(c).unwrap() == outer)
        .collect();
    assert_eq!(hits.len(), 1);
}

#[test]
fn norms() {
    let z = zabs();
    assert_eq!(Chain::zero(z, 1).l1_norm(), q(0));
    let d = NormedRing::integers(NormKind::Discrete);
    assert_eq!(Chain::from_i64(d, 1, [(0, 3)]).l1_norm(), q(1));
    assert_eq!(Chain::from_i64(z, 1, [(0, 2), (1, -1)]).l1_norm(), q(3));
}

#[test]
fn cycles_and_non_cycles() {
    let (cx, _) = grid_complex(3, 3).unwrap();
    let edge = Chain::from_i64(zabs(), 1, [(0, 1)]);
    assert!(!cx.is_cycle(&edge).unwrap());
    let square = cx.path_chain(&[0, 1, 5, 4, 0], zabs()).unwrap();
    assert!(cx.is_cycle(&square).unwrap());
    assert!(cx.path_chain(&[0, 2], zabs()).is_err());
    let bad = Chain::from_i64(zabs(), 1, [(10_000, 1)]);
    assert!(cx.boundary(&bad).is_err());
}

#[test]
fn hulls() {
    let cx = triangle();
    let h = cx.hull([(2, 0)]);
    assert_eq!((h.n_cells(0), h.n_cells(1), h.n_cells(2)), (3, 3, 1));
    assert_eq!(cx.hull(std::iter::empty()), Subcomplex::empty());
    assert_eq!(cx.hull(h.cells(1).map(|e| (1, e)).chain(h.cells(2).map(|t| (2, t)))), h);

    let (g, _) = grid_complex(3, 3).unwrap();
    let e1 = g.find(&[0, 1]).unwrap();
    let e2 = g.find(&[14, 15]).unwrap();
    let h = g.hull([(1, e1), (1, e2)]);
    assert_eq!((h.n_cells(0), h.n_cells(1)), (4, 2));
    let (sub, emb) = h.to_complex(&g);
    assert_eq!(sub.connected_components(), 2);
    assert_eq!(emb[1], vec![e1, e2]);
}

#[test]
fn neighbourhoods() {
    let (g, _) = grid_complex(3, 3).unwrap();
    // an interior vertex of the triangulated grid meets six edges
    let v = 5;
    let star = g.expand_neighborhood(&g.hull([(0, v)]));
    assert_eq!(star.n_cells(1), g.cofaces(0, v).count());
    assert_eq!(star.n_cells(1), 6);
    assert_eq!(star.n_cells(0), 7);
    assert_eq!(star.n_cells(2), 0);
    let full = Subcomplex::full(&g);
    assert_eq!(g.expand_neighborhood(&full), full);
    assert!(g.expand_neighborhood(&Subcomplex::empty()).is_empty());
}

#[test]
fn far_apart_loops_split() {
    let (g, _) = grid_complex(6, 3).unwrap();
    let a = g.path_chain(&[0, 1, 8, 7, 0], zabs()).unwrap();
    let b = g.path_chain(&[19, 20, 27, 26, 19], zabs()).unwrap();
    let z = a.add(&b);
    let parts = g.split_connected_support(&z).unwrap();
    assert_eq!(parts, vec![a.clone(), b.clone()]);
    assert_eq!(parts[0].l1_norm() + parts[1].l1_norm(), z.l1_norm());
    assert_eq!(g.split_connected_support(&a).unwrap(), vec![a]);
    assert!(g.split_connected_support(&Chain::zero(zabs(), 1)).unwrap().is_empty());
    assert!(g.split_connected_support(&Chain::from_i64(zabs(), 1, [(0, 1)])).is_err());
}

fn grid_two_chain() -> impl Strategy<Value = Vec<(u32, i64)>> {
    // grid(3,3) has 18 triangles
    prop::collection::vec((0u32..18, -3i64..=3), 0..12)
}

proptest! {
    #[test]
    fn boundary_squares_to_zero(terms in prop::collection::vec((0u32..27, -4i64..=4), 0..10)) {
        let (g, _) = grid_complex(3, 3).unwrap();
        let b = g.boundary(&Chain::from_i64(zabs(), 2, terms.iter().map(|&(t, x)| (t % 18, x)))).unwrap();
        prop_assert!(g.boundary(&b).unwrap().is_zero());
    }

    #[test]
    fn boundary_is_linear(a in grid_two_chain(), b in grid_two_chain(), k in -3i64..=3) {
        let (g, _) = grid_complex(3, 3).unwrap();
        let ca = Chain::from_i64(zabs(), 2, a);
        let cb = Chain::from_i64(zabs(), 2, b);
        let lhs = g.boundary(&ca.scale(&zabs().from_i64(k)).add(&cb)).unwrap();
        let rhs = g.boundary(&ca).unwrap().scale(&zabs().from_i64(k)).add(&g.boundary(&cb).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn split_parts_are_disjoint_cycles(a in grid_two_chain()) {
        let (g, _) = grid_complex(3, 3).unwrap();
        let z = g.boundary(&Chain::from_i64(zabs(), 2, a)).unwrap();
        let parts = g.split_connected_support(&z).unwrap();
        let mut sum = Chain::zero(zabs(), 1);
        let mut norm = num_rational::BigRational::from_integer(0.into());
        for p in &parts {
            prop_assert!(g.is_cycle(p).unwrap());
            prop_assert!(p.support().all(|e| sum.get(e).is_none()));
            sum = sum.add(p);
            norm += p.l1_norm();
        }
        prop_assert_eq!(norm, z.l1_norm());
        prop_assert_eq!(sum, z);
    }

    #[test]
    fn neighbourhood_contains_and_hull_is_stable(cells in prop::collection::vec(0u32..33, 0..6)) {
        let (g, _) = grid_complex(3, 3).unwrap();
        let h = g.hull(cells.iter().map(|&e| (1, e)));
        let again = g.hull((0..=2).flat_map(|k| h.cells(k).map(move |c| (k, c))).collect::<Vec<_>>());
        prop_assert_eq!(&again, &h);
        prop_assert!(h.is_subset_of(&g.expand_neighborhood(&h)));
    }
}
