//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use homfill::{Chain, Complex, NormKind, NormedRing};
use num_bigint::BigInt;
use num_rational::BigRational;

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zabs() -> NormedRing {
    NormedRing::integers(NormKind::Absolute)
}

pub fn zdisc() -> NormedRing {
    NormedRing::integers(NormKind::Discrete)
}

/// Signed edge incidences of a 2-cell, computed from its vertex triple.
fn triangle_edges(cx: &Complex, t: u32) -> [(usize, i64); 3] {
    let v = cx.vertices(2, t);
    let e = |a: u32, b: u32| cx.find(&[a, b]).expect("face present") as usize;
    [(e(v[1], v[2]), 1), (e(v[0], v[2]), -1), (e(v[0], v[1]), 1)]
}

/// Least norm of an integral 2-chain on `cells` with boundary `z`, trying every
/// coefficient vector with entries in `-bound..=bound`.
pub fn brute_force_fill(cx: &Complex, z: &Chain, cells: &[u32], bound: i64, norm: NormKind) -> Option<i64> {
    let n_edges = cx.n_cells(1);
    let mut target = vec![0i64; n_edges];
    for (id, c) in z.iter() {
        target[id as usize] = z.ring().format_coefficient(c).parse().expect("integral coefficient");
    }
    let inc: Vec<[(usize, i64); 3]> = cells.iter().map(|&t| triangle_edges(cx, t)).collect();
    let mut acc = vec![0i64; n_edges];
    let mut best: Option<i64> = None;
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        inc: &[[(usize, i64); 3]],
        bound: i64,
        norm: NormKind,
        acc: &mut Vec<i64>,
        target: &[i64],
        cost: i64,
        best: &mut Option<i64>,
    ) {
        if best.is_some_and(|b| cost >= b) {
            return;
        }
        if i == inc.len() {
            if acc == target {
                *best = Some(cost);
            }
            return;
        }
        for x in -bound..=bound {
            for &(e, s) in &inc[i] {
                acc[e] += s * x;
            }
            let c = match (x, norm) {
                (0, _) => 0,
                (_, NormKind::Discrete) => 1,
                (_, NormKind::Absolute) => x.abs(),
            };
            go(i + 1, inc, bound, norm, acc, target, cost + c, best);
            for &(e, s) in &inc[i] {
                acc[e] -= s * x;
            }
        }
    }
    go(0, &inc, bound, norm, &mut acc, &target, 0, &mut best);
    best
}

/// `(x, y)` of a vertex of `grid_complex(w, _)`.
pub fn grid_xy(w: u32, v: u32) -> (u32, u32) {
    (v % (w + 1), v / (w + 1))
}

/// 2-cells of a grid whose vertices lie in the bounding box of the cycle's vertices.
pub fn grid_box_cells(cx: &Complex, w: u32, z: &Chain) -> Vec<u32> {
    let pts: Vec<(u32, u32)> = z.support().flat_map(|e| cx.vertices(1, e).to_vec()).map(|v| grid_xy(w, v)).collect();
    let (x0, x1) = (pts.iter().map(|p| p.0).min().unwrap(), pts.iter().map(|p| p.0).max().unwrap());
    let (y0, y1) = (pts.iter().map(|p| p.1).min().unwrap(), pts.iter().map(|p| p.1).max().unwrap());
    (0..cx.n_cells(2) as u32)
        .filter(|&t| {
            cx.vertices(2, t).iter().all(|&v| {
                let (x, y) = grid_xy(w, v);
                (x0..=x1).contains(&x) && (y0..=y1).contains(&y)
            })
        })
        .collect()
}

/// Every nonzero 1-cycle with coefficients ±1 and at most `max_len` edges, found by
/// walking closed trails from every vertex and adding edge-disjoint pairs.
pub fn unit_cycles(cx: &Complex, max_len: usize, ring: NormedRing) -> Vec<Chain> {
    let nv = cx.n_vertices() as u32;
    let mut adj = vec![Vec::new(); nv as usize];
    for e in 0..cx.n_cells(1) as u32 {
        let v = cx.vertices(1, e);
        adj[v[0] as usize].push((v[1], e));
        adj[v[1] as usize].push((v[0], e));
    }
    let mut found: BTreeSet<Vec<(u32, i64)>> = BTreeSet::new();
    fn walk(
        start: u32,
        at: u32,
        adj: &[Vec<(u32, u32)>],
        cx: &Complex,
        used: &mut Vec<(u32, i64)>,
        max_len: usize,
        found: &mut BTreeSet<Vec<(u32, i64)>>,
    ) {
        if used.len() >= 3 && at == start {
            let mut key = used.clone();
            key.sort_unstable();
            let neg: Vec<(u32, i64)> = key.iter().map(|&(e, s)| (e, -s)).collect();
            found.insert(key.min(neg));
        }
        if used.len() == max_len {
            return;
        }
        for &(w, e) in &adj[at as usize] {
            if used.iter().any(|&(f, _)| f == e) {
                continue;
            }
            let s = if cx.vertices(1, e)[0] == at { 1 } else { -1 };
            used.push((e, s));
            walk(start, w, adj, cx, used, max_len, found);
            used.pop();
        }
    }
    for v in 0..nv {
        walk(v, v, &adj, cx, &mut Vec::new(), max_len, &mut found);
    }
    let trails: Vec<Vec<(u32, i64)>> = found.iter().cloned().collect();
    let mut all: BTreeSet<Vec<(u32, i64)>> = found;
    for (i, a) in trails.iter().enumerate() {
        for b in &trails[i + 1..] {
            if a.len() + b.len() > max_len || a.iter().any(|x| b.iter().any(|y| y.0 == x.0)) {
                continue;
            }
            for sign in [1, -1] {
                let mut s: Vec<(u32, i64)> = a.iter().copied().chain(b.iter().map(|&(e, x)| (e, sign * x))).collect();
                s.sort_unstable();
                let neg: Vec<(u32, i64)> = s.iter().map(|&(e, x)| (e, -x)).collect();
                all.insert(s.min(neg));
            }
        }
    }
    all.into_iter().map(|t| Chain::from_i64(ring, 1, t)).collect()
}
