use std::sync::Arc;

use num_rational::Rational64;

use super::{FiniteMetric, Truncation};
use crate::chains::Complex;
use crate::error::{Error, Result};

/// Rips complex: the flag complex of the points at distance `<= d`, truncated at `max_dim`.
///
/// The result carries `d` and a handle to `metric`.
pub fn rips_complex(metric: &Arc<FiniteMetric>, d: Rational64, max_dim: usize) -> Result<Complex> {
    if max_dim < 1 {
        return Err(Error::contract("rips_complex needs max_dim >= 1"));
    }
    if d <= Rational64::from_integer(0) {
        return Err(Error::contract("Rips scale must be positive"));
    }
    let n = metric.len();
    // raw(u, v) <= d·scale, compared without rounding
    let (p, q) = (*d.numer() as i128, *d.denom() as i128);
    let scale = metric.scale() as i128;
    let close = |u: u32, v: u32| (metric.raw(u, v) as i128) * q <= p * scale;
    let up: Vec<Vec<u32>> = (0..n as u32)
        .map(|u| (u + 1..n as u32).filter(|&v| close(u, v)).collect())
        .collect();
    let mut by_dim: Vec<Vec<Vec<u32>>> = vec![Vec::new(); max_dim + 1];
    let mut clique = Vec::with_capacity(max_dim + 1);
    for u in 0..n as u32 {
        clique.clear();
        clique.push(u);
        extend_cliques(&up, &mut clique, &up[u as usize], max_dim, &mut by_dim);
    }
    let mut cx = Complex::close_and_index(n, by_dim).with_metric(metric.clone());
    cx.meta.rips_scale = Some(d);
    Ok(cx)
}

fn extend_cliques(
    up: &[Vec<u32>],
    clique: &mut Vec<u32>,
    candidates: &[u32],
    max_dim: usize,
    out: &mut [Vec<Vec<u32>>],
) {
    if clique.len() > max_dim {
        return;
    }
    for (i, &v) in candidates.iter().enumerate() {
        clique.push(v);
        out[clique.len() - 1].push(clique.clone());
        if clique.len() <= max_dim {
            let next: Vec<u32> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|w| up[v as usize].binary_search(w).is_ok())
                .collect();
            extend_cliques(up, clique, &next, max_dim, out);
        }
        clique.pop();
    }
}

/// Triangulated `w × h` grid.
///
/// Vertex `(x, y)` has id `y·(w+1) + x`. Each unit square is cut along the diagonal
/// from `(x, y)` to `(x+1, y+1)`. The metric is the path metric of the 1-skeleton,
/// diagonals included.
pub fn grid_complex(w: u32, h: u32) -> Result<(Complex, Arc<FiniteMetric>)> {
    if w == 0 || h == 0 {
        return Err(Error::config("grid dimensions must be at least 1"));
    }
    let id = |x: u32, y: u32| y * (w + 1) + x;
    let n = ((w + 1) * (h + 1)) as usize;
    let mut simplices: Vec<Vec<u32>> = Vec::new();
    for y in 0..=h {
        for x in 0..=w {
            if x < w {
                simplices.push(vec![id(x, y), id(x + 1, y)]);
            }
            if y < h {
                simplices.push(vec![id(x, y), id(x, y + 1)]);
            }
            if x < w && y < h {
                simplices.push(vec![id(x, y), id(x + 1, y), id(x + 1, y + 1)]);
                simplices.push(vec![id(x, y), id(x, y + 1), id(x + 1, y + 1)]);
            }
        }
    }
    let cx = Complex::from_simplices(n, &simplices)?;
    let edges: Vec<(u32, u32)> = cx.cells(1).map(|c| (c.vertices[0], c.vertices[1])).collect();
    let metric = Arc::new(FiniteMetric::from_graph(n, edges)?);
    Ok((cx.with_metric(metric.clone()), metric))
}

/// Ball of radius `depth` about a vertex of the `valence`-regular tree.
///
/// Vertices are numbered breadth-first from the centre 0.
pub fn tree_complex(valence: u32, depth: u32) -> Result<(Complex, Arc<FiniteMetric>)> {
    if valence < 1 {
        return Err(Error::config("tree valence must be at least 1"));
    }
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut frontier = vec![0u32];
    let mut next_id = 1u32;
    for level in 0..depth {
        let mut next = Vec::new();
        for &u in &frontier {
            let children = if level == 0 { valence } else { valence - 1 };
            for _ in 0..children {
                edges.push((u, next_id));
                next.push(next_id);
                next_id = next_id
                    .checked_add(1)
                    .ok_or_else(|| Error::config("tree too large"))?;
            }
        }
        frontier = next;
    }
    let n = next_id as usize;
    let metric = Arc::new(
        FiniteMetric::from_graph(n, edges.iter().copied())?
            .with_truncation(Truncation { center: 0, radius: depth }),
    );
    let cx = Complex::from_simplices(n, edges.iter().map(|&(a, b)| [a, b]))?.with_metric(metric.clone());
    Ok((cx, metric))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(k: u32) -> Arc<FiniteMetric> {
        Arc::new(FiniteMetric::from_graph(k as usize, (0..k - 1).map(|i| (i, i + 1))).unwrap())
    }

    #[test]
    fn equilateral_triangle_is_filled() {
        let one = Rational64::from_integer(1);
        let m = Arc::new(FiniteMetric::from_matrix(&vec![vec![one; 3]; 3].iter().enumerate().map(|(i, r)| {
            let mut r = r.clone();
            r[i] = Rational64::from_integer(0);
            r
        }).collect::<Vec<_>>()).unwrap());
        let cx = rips_complex(&m, one, 2).unwrap();
        assert_eq!((cx.n_cells(1), cx.n_cells(2)), (3, 1));
    }

    #[test]
    fn small_scale_is_discrete() {
        let cx = rips_complex(&line(4), Rational64::new(1, 2), 2).unwrap();
        assert_eq!(cx.n_cells(0), 4);
        assert_eq!(cx.n_cells(1), 0);
    }

    #[test]
    fn rips_records_scale() {
        let cx = rips_complex(&line(4), Rational64::from_integer(2), 3).unwrap();
        assert_eq!(cx.meta().rips_scale, Some(Rational64::from_integer(2)));
        assert!(cx.metric().is_some());
        assert_eq!(cx.n_cells(3), 0);
    }

    #[test]
    fn grid_counts() {
        let (cx, m) = grid_complex(1, 1).unwrap();
        assert_eq!((cx.n_cells(0), cx.n_cells(1), cx.n_cells(2)), (4, 5, 2));
        assert_eq!(m.raw(0, 3), 1);
        let (cx, _) = grid_complex(2, 1).unwrap();
        assert_eq!((cx.n_cells(0), cx.n_cells(2)), (6, 4));
    }

    #[test]
    fn tree_counts() {
        let (cx, m) = tree_complex(3, 2).unwrap();
        assert_eq!(cx.n_vertices(), 1 + 3 + 6);
        assert_eq!(cx.n_cells(1), 9);
        assert_eq!(m.truncation(), Some(Truncation { center: 0, radius: 2 }));
        let (cx, _) = tree_complex(3, 0).unwrap();
        assert_eq!(cx.n_vertices(), 1);
    }
}
