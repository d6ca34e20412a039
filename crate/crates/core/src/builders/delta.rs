use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FiniteMetric;
use crate::error::{Error, Result};

/// Default largest point set (or graph block) enumerated exhaustively.
pub const DEFAULT_EXACT_CAP: usize = 300;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMode {
    Exact { cap: usize },
    Sampled { count: u64, seed: u64 },
}

impl DeltaMode {
    pub fn exact() -> Self {
        DeltaMode::Exact { cap: DEFAULT_EXACT_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicityEstimate {
    pub delta: Rational64,
    pub mode: DeltaMode,
    /// Unordered quadruples examined.
    pub quadruples: u64,
}

/// Four-point hyperbolicity constant.
///
/// In exact mode `δ` is the maximum over all quadruples of
/// `min((u,v)_b, (v,w)_b) − (u,w)_b`, which equals half the gap between the two
/// largest of the three pair sums of `{u, v, w, b}`. For graph metrics the
/// maximum is taken block by block: biconnected components are isometric
/// subgraphs and the constant of a graph is the largest constant of its blocks,
/// so trees are settled without enumerating anything. The cap applies to each
/// enumerated block. Sampled mode returns a lower bound.
pub fn estimate_delta(m: &FiniteMetric, mode: DeltaMode) -> Result<HyperbolicityEstimate> {
    let (best, quadruples) = match mode {
        DeltaMode::Exact { cap } => {
            let groups: Vec<Vec<u32>> = match m.graph() {
                Some(adj) => biconnected_blocks(adj),
                None => vec![(0..m.len() as u32).collect()],
            };
            if let Some(big) = groups.iter().find(|g| g.len() > cap) {
                return Err(Error::config(format!(
                    "exact four-point enumeration over {} points exceeds the cap of {cap}; use sampled mode",
                    big.len()
                )));
            }
            let mut best = 0u64;
            let mut count = 0u64;
            for g in groups.iter().filter(|g| g.len() >= 4) {
                let (b, c) = max_gap(m, g);
                best = best.max(b);
                count += c;
            }
            (best, count)
        }
        DeltaMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = m.len() as u32;
            let mut best = 0u64;
            if n > 0 {
                for _ in 0..count {
                    let q: [u32; 4] = std::array::from_fn(|_| rng.gen_range(0..n));
                    best = best.max(gap(m, q[0], q[1], q[2], q[3]));
                }
            }
            (best, count)
        }
    };
    Ok(HyperbolicityEstimate {
        delta: Rational64::new(best as i64, 2 * m.scale()),
        mode,
        quadruples,
    })
}

/// Gap between the two largest pair sums, in numerator units.
fn gap(m: &FiniteMetric, a: u32, b: u32, c: u32, d: u32) -> u64 {
    let s1 = m.raw(a, b) as u64 + m.raw(c, d) as u64;
    let s2 = m.raw(a, c) as u64 + m.raw(b, d) as u64;
    let s3 = m.raw(a, d) as u64 + m.raw(b, c) as u64;
    let (hi, mid) = if s1 >= s2 { (s1, s2) } else { (s2, s1) };
    let (hi, mid) = if s3 >= hi { (s3, hi) } else { (hi, mid.max(s3)) };
    hi - mid
}

fn max_gap(m: &FiniteMetric, pts: &[u32]) -> (u64, u64) {
    let k = pts.len();
    let mut best = 0u64;
    let mut count = 0u64;
    for i in 0..k {
        let ra = m.row(pts[i]);
        for j in i + 1..k {
            let rb = m.row(pts[j]);
            let dab = ra[pts[j] as usize] as u64;
            for l in j + 1..k {
                let c = pts[l] as usize;
                let rc = m.row(pts[l]);
                let (dac, dbc) = (ra[c] as u64, rb[c] as u64);
                for &d in &pts[l + 1..] {
                    let d = d as usize;
                    let s1 = dab + rc[d] as u64;
                    let s2 = dac + rb[d] as u64;
                    let s3 = ra[d] as u64 + dbc;
                    let (hi, mid) = if s1 >= s2 { (s1, s2) } else { (s2, s1) };
                    let g = if s3 >= hi { s3 - hi } else { hi - mid.max(s3) };
                    best = best.max(g);
                }
                count += (k - l - 1) as u64;
            }
        }
    }
    (best, count)
}

/// Vertex sets of the biconnected components (blocks) of a graph.
/// Isolated vertices form singleton blocks.
pub(crate) fn biconnected_blocks(adj: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = adj.len();
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut time = 0u32;
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<(u32, u32)> = Vec::new();
    for root in 0..n {
        if disc[root] != u32::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        if adj[root].is_empty() {
            blocks.push(vec![root as u32]);
            continue;
        }
        // (vertex, parent, next neighbour index)
        let mut stack: Vec<(u32, u32, usize)> = vec![(root as u32, u32::MAX, 0)];
        while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
            if *next < adj[u as usize].len() {
                let w = adj[u as usize][*next];
                *next += 1;
                if disc[w as usize] == u32::MAX {
                    edge_stack.push((u, w));
                    disc[w as usize] = time;
                    low[w as usize] = time;
                    time += 1;
                    stack.push((w, u, 0));
                } else if w != parent && disc[w as usize] < disc[u as usize] {
                    edge_stack.push((u, w));
                    low[u as usize] = low[u as usize].min(disc[w as usize]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p as usize] = low[p as usize].min(low[u as usize]);
                    if low[u as usize] >= disc[p as usize] {
                        let mut verts = Vec::new();
                        while let Some((a, b)) = edge_stack.pop() {
                            verts.push(a);
                            verts.push(b);
                            if (a, b) == (p, u) {
                                break;
                            }
                        }
                        verts.sort_unstable();
                        verts.dedup();
                        blocks.push(verts);
                    }
                }
            }
        }
    }
    blocks
}
