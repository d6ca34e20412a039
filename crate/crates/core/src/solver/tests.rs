use super::*;
use crate::builders::grid_complex;
use crate::rings::{NormKind, NormedRing, RingKind};

fn rect_path(w: u32, n: u32, m: u32) -> Vec<u32> {
    let id = |x: u32, y: u32| y * (w + 1) + x;
    let mut p = Vec::new();
    for x in 0..n {
        p.push(id(x, 0));
    }
    for y in 0..m {
        p.push(id(n, y));
    }
    for x in (1..=n).rev() {
        p.push(id(x, m));
    }
    for y in (1..=m).rev() {
        p.push(id(0, y));
    }
    p.push(id(0, 0));
    p
}

fn rings() -> Vec<NormedRing> {
    vec![
        NormedRing::integers(NormKind::Discrete),
        NormedRing::integers(NormKind::Absolute),
        NormedRing::rationals(NormKind::Absolute),
        NormedRing::new(RingKind::IntegersMod(2), NormKind::Discrete).unwrap(),
        NormedRing::new(RingKind::IntegersMod(6), NormKind::Discrete).unwrap(),
    ]
}

#[test]
fn rectangles_in_grid() {
    let (cx, _) = grid_complex(4, 4).unwrap();
    for ring in rings() {
        for (n, m) in [(1, 1), (2, 1), (2, 3), (3, 3)] {
            let r = area(&cx, &rect_path(4, n, m), ring, Budget::nodes(1_000_000)).unwrap();
            assert_eq!(r.status, FillingStatus::Optimal, "{ring:?} {n}x{m}");
            assert_eq!(r.norm, BigRational::from_integer((2 * n * m).into()));
            let z = cx.path_chain(&rect_path(4, n, m), ring).unwrap();
            assert_eq!(cx.boundary(&r.filling).unwrap(), z);
        }
    }
}

#[test]
fn grid_is_globally_injective() {
    let (cx, _) = grid_complex(3, 3).unwrap();
    let r = area(&cx, &rect_path(3, 1, 1), NormedRing::integers(NormKind::Discrete), Budget::nodes(1000)).unwrap();
    assert!(r.region.full);
    assert_eq!(r.status, FillingStatus::Optimal);
}

#[test]
fn zero_cycle_and_missing_dimension() {
    let (cx, _) = grid_complex(1, 1).unwrap();
    let ring = NormedRing::integers(NormKind::Absolute);
    let r = exact_filling(&cx, &Chain::zero(ring, 1), Budget::nodes(10)).unwrap();
    assert_eq!(r.status, FillingStatus::Optimal);
    assert!(r.filling.is_zero());

    let hollow = Complex::from_simplices(3, [vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    let z = hollow.path_chain(&[0, 1, 2, 0], ring).unwrap();
    let r = exact_filling(&hollow, &z, Budget::nodes(10)).unwrap();
    assert_eq!(r.status, FillingStatus::NotABoundary);
}

fn open_tetrahedron() -> Complex {
    Complex::from_simplices(4, [vec![0, 1, 3], vec![1, 2, 3], vec![0, 2, 3]]).unwrap()
}

#[test]
fn missing_face_filled_by_the_others() {
    let cx = open_tetrahedron();
    for ring in rings() {
        let z = cx.path_chain(&[0, 1, 2, 0], ring).unwrap();
        let r = exact_filling(&cx, &z, Budget::nodes(10_000)).unwrap();
        assert_eq!(r.status, FillingStatus::Optimal);
        assert_eq!(r.norm, BigRational::from_integer(3.into()));
        assert_eq!(cx.boundary(&r.filling).unwrap(), z);
    }
}

#[test]
fn two_fillings_pick_the_smaller() {
    // the square 0-1-2-3 bounds both a two-triangle disc and a four-triangle cone on 4
    let cx = Complex::from_simplices(
        5,
        [vec![0, 1, 2], vec![0, 2, 3], vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![0, 3, 4]],
    )
    .unwrap();
    for ring in rings() {
        let z = cx.path_chain(&[0, 1, 2, 3, 0], ring).unwrap();
        let r = exact_filling(&cx, &z, Budget::nodes(100_000)).unwrap();
        assert_eq!(r.status, FillingStatus::Optimal, "{ring:?}");
        assert_eq!(r.norm, BigRational::from_integer(2.into()));
        assert!(r.filling.support().all(|c| cx.vertices(2, c) != [0, 1, 4]));
    }
}

#[test]
fn not_a_cycle_is_a_contract_error() {
    let (cx, _) = grid_complex(2, 2).unwrap();
    let ring = NormedRing::integers(NormKind::Discrete);
    let z = cx.path_chain(&[0, 1, 2], ring).unwrap();
    assert!(matches!(exact_filling(&cx, &z, Budget::nodes(10)), Err(Error::Contract(_))));
    assert!(matches!(area(&cx, &[0, 1, 2], ring, Budget::nodes(10)), Err(Error::Contract(_))));
}

#[test]
fn tiny_budget_reports_it() {
    let cx = Complex::from_simplices(
        5,
        [vec![0, 1, 2], vec![0, 2, 3], vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![0, 3, 4]],
    )
    .unwrap();
    let ring = NormedRing::integers(NormKind::Discrete);
    let z = cx.path_chain(&[0, 1, 2, 3, 0], ring).unwrap();
    let r = exact_filling(&cx, &z, Budget::nodes(1)).unwrap();
    assert!(matches!(r.status, FillingStatus::UpperBound | FillingStatus::InfeasibleWithinBudget));
}

#[test]
fn status_round_trips() {
    for s in [
        FillingStatus::Optimal,
        FillingStatus::UpperBound,
        FillingStatus::InfeasibleWithinBudget,
        FillingStatus::NotABoundary,
    ] {
        assert_eq!(s.to_string().parse::<FillingStatus>().unwrap(), s);
    }
}

#[test]
fn budget_from_env_falls_back() {
    assert!(Budget::from_env().nodes > 0);
}
