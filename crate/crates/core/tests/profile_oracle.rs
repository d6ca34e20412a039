mod common;

use common::*;
use homfill::builders::grid_complex;
use homfill::profiler::{profile, EntryMode, ProfileConfig};
use homfill::solver::Budget;
use homfill::{Complex, NormedRing};

/// `f(l)` for `l = 1..=l_max`: largest brute-force filling norm over unit cycles of length `<= l`.
fn brute_profile(cx: &Complex, l_max: usize, ring: NormedRing) -> Vec<i64> {
    let cells: Vec<u32> = (0..cx.n_cells(2) as u32).collect();
    let mut best = vec![0i64; l_max + 1];
    for z in unit_cycles(cx, l_max, ring) {
        if let Some(n) = brute_force_fill(cx, &z, &cells, 1, ring.norm_kind()) {
            let l = z.support_len();
            best[l] = best[l].max(n);
        }
    }
    for l in 1..=l_max {
        best[l] = best[l].max(best[l - 1]);
    }
    best[1..].to_vec()
}

fn octahedron() -> Complex {
    // poles 0 and 5 over the square 1 2 3 4
    let mut t = Vec::new();
    for (a, b) in [(1, 2), (2, 3), (3, 4), (4, 1)] {
        t.push([0u32, a, b]);
        t.push([5u32, a, b]);
    }
    Complex::from_simplices(6, t).unwrap()
}

#[test]
fn exhaustive_entries_equal_brute_force() {
    let (grid, _) = grid_complex(2, 2).unwrap();
    for (cx, l_max) in [(grid, 8), (octahedron(), 6)] {
        assert!(cx.n_cells(2) <= 40);
        for ring in [zabs(), zdisc()] {
            let cfg = ProfileConfig { exhaustive_to: l_max, budget: Budget::nodes(1_000_000), ..Default::default() };
            let p = profile(&cx, 1, l_max, ring, &cfg).unwrap();
            let want = brute_profile(&cx, l_max, ring);
            let got: Vec<i64> = p.entries.iter().map(|e| e.f_hat.to_integer().try_into().unwrap()).collect();
            assert_eq!(got, want, "{ring}");
            assert!(p.entries.iter().all(|e| e.mode == EntryMode::Exhaustive));
            assert_eq!(p.non_boundaries, 0);
        }
    }
}
