mod common;

use common::*;
use homfill::builders::grid_complex;
use homfill::profiler::cycles;
use homfill::solver::{exact_filling, Budget, Filler, FillingStatus};
use homfill::{Chain, NormKind};
use proptest::prelude::*;

#[test]
fn grid_2x2_cycles_match_brute_force() {
    let (cx, _) = grid_complex(2, 2).unwrap();
    let all: Vec<u32> = (0..cx.n_cells(2) as u32).collect();
    for ring in [zabs(), zdisc()] {
        let f = Filler::new(&cx).with_budget(Budget::nodes(1_000_000));
        let zs = unit_cycles(&cx, 6, ring);
        assert!(zs.len() > 20);
        for z in &zs {
            let r = f.fill(z).unwrap();
            assert_eq!(r.status, FillingStatus::Optimal);
            assert_eq!(cx.boundary(&r.filling).unwrap(), *z);
            let b = brute_force_fill(&cx, z, &all, 1, ring.norm_kind()).unwrap();
            assert_eq!(r.norm, int(b), "{z:?}");
        }
    }
}

#[test]
fn big_square_needs_eight_triangles() {
    let (cx, _) = grid_complex(2, 2).unwrap();
    let z = cx.path_chain(&cycles::grid_rectangle(2, 0, 0, 2, 2), zabs()).unwrap();
    let all: Vec<u32> = (0..8).collect();
    assert_eq!(brute_force_fill(&cx, &z, &all, 2, NormKind::Absolute), Some(8));
    let r = exact_filling(&cx, &z, Budget::nodes(100_000)).unwrap();
    assert_eq!((r.norm, r.status), (int(8), FillingStatus::Optimal));
}

#[test]
fn backtracking_has_zero_area() {
    let (cx, _) = grid_complex(2, 2).unwrap();
    let f = Filler::new(&cx);
    let r = f.area(&[0, 1, 0], zabs()).unwrap();
    assert_eq!((r.norm, r.status), (int(0), FillingStatus::Optimal));
    assert!(f.area(&[0, 1], zabs()).is_err());
    assert_eq!(f.area(&[0, 1, 4, 3, 0], zabs()).unwrap().norm, int(2));
}

fn boundary_of(terms: &[(u32, i64)]) -> Chain {
    let (cx, _) = grid_complex(3, 3).unwrap();
    cx.boundary(&Chain::from_i64(zabs(), 2, terms.iter().map(|&(t, x)| (t % 18, x)))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fillings_bound_and_discrete_is_smaller(terms in prop::collection::vec((0u32..18, -2i64..=2), 1..6)) {
        let (cx, _) = grid_complex(3, 3).unwrap();
        let z = boundary_of(&terms);
        let f = Filler::new(&cx).with_budget(Budget::nodes(2_000_000));
        let abs = f.fill(&z).unwrap();
        let disc = f.fill(&z.convert(zdisc())).unwrap();
        prop_assert_eq!(cx.boundary(&abs.filling).unwrap(), z.clone());
        prop_assert_eq!(abs.status, FillingStatus::Optimal);
        prop_assert!(disc.norm <= abs.norm);
        // subadditivity over connected pieces
        let parts = cx.split_connected_support(&z).unwrap();
        let sum = parts.iter().map(|p| f.fill(p).unwrap().norm).fold(int(0), |a, b| a + b);
        prop_assert!(abs.norm <= sum);
    }

    #[test]
    fn larger_region_never_costs_more(terms in prop::collection::vec((0u32..18, -1i64..=1), 1..5)) {
        let (cx, _) = grid_complex(3, 3).unwrap();
        let z = boundary_of(&terms).convert(zdisc());
        let hull = cx.support_hull(&z);
        let near = cx.expand_neighborhood(&hull);
        let far = cx.expand_neighborhood(&near);
        let fill_in = |sub: &homfill::Subcomplex| {
            let cells: Vec<u32> = sub.cells(2).collect();
            brute_force_fill(&cx, &z, &cells, 1, NormKind::Discrete)
        };
        if let (Some(a), Some(b)) = (fill_in(&near), fill_in(&far)) {
            prop_assert!(b <= a);
        }
    }
}
