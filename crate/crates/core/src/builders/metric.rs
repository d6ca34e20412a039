use std::collections::VecDeque;

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};

/// Where a truncated space was cut out: the ball of `radius` around `center`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub center: u32,
    pub radius: u32,
}

/// An exact finite metric space on points `0..n`.
///
/// Distances are stored as integer numerators over one common denominator, so
/// graph metrics (denominator 1) and rational matrices share the same fast path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetric {
    n: usize,
    scale: i64,
    dist: Vec<u32>,
    /// Adjacency lists when the metric is the path metric of a graph.
    graph: Option<Vec<Vec<u32>>>,
    truncation: Option<Truncation>,
}

impl FiniteMetric {
    /// Path metric of a connected graph on `n` vertices.
    pub fn from_graph(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::contract(format!("edge ({u}, {v}) out of range")));
            }
            if u != v {
                adj[u as usize].push(v);
                adj[v as usize].push(u);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        let mut dist = vec![u32::MAX; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            queue.push_back(s as u32);
            while let Some(u) = queue.pop_front() {
                let du = row[u as usize];
                for &w in &adj[u as usize] {
                    if row[w as usize] == u32::MAX {
                        row[w as usize] = du + 1;
                        queue.push_back(w);
                    }
                }
            }
            if row.contains(&u32::MAX) {
                return Err(Error::contract("metric graph must be connected"));
            }
        }
        Ok(FiniteMetric { n, scale: 1, dist, graph: Some(adj), truncation: None })
    }

    /// Explicit distance matrix; the metric axioms are checked.
    pub fn from_matrix(rows: &[Vec<Rational64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::contract("distance matrix must be square"));
        }
        let scale = rows
            .iter()
            .flatten()
            .fold(1i64, |acc, q| acc.lcm(q.denom()));
        let mut dist = Vec::with_capacity(n * n);
        for q in rows.iter().flatten() {
            if *q < Rational64::from_integer(0) {
                return Err(Error::contract("distances must be nonnegative"));
            }
            let num = q.numer() * (scale / q.denom());
            dist.push(u32::try_from(num).map_err(|_| Error::contract("distance too large"))?);
        }
        let m = FiniteMetric { n, scale, dist, graph: None, truncation: None };
        m.check_axioms()?;
        Ok(m)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.n;
        for u in 0..n {
            if self.raw(u as u32, u as u32) != 0 {
                return Err(Error::contract(format!("d({u},{u}) must be 0")));
            }
            for v in 0..n {
                let duv = self.raw(u as u32, v as u32);
                if duv != self.raw(v as u32, u as u32) {
                    return Err(Error::contract(format!("d({u},{v}) is not symmetric")));
                }
                if u != v && duv == 0 {
                    return Err(Error::contract(format!("distinct points {u},{v} at distance 0")));
                }
                for w in 0..n {
                    if duv as u64 > self.raw(u as u32, w as u32) as u64 + self.raw(w as u32, v as u32) as u64 {
                        return Err(Error::contract(format!(
                            "triangle inequality fails for ({u},{v}) through {w}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_truncation(mut self, t: Truncation) -> Self {
        self.truncation = Some(t);
        self
    }

    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distance(&self, u: u32, v: u32) -> Rational64 {
        Rational64::new(self.raw(u, v) as i64, self.scale)
    }

    /// Numerator of `d(u, v)` over [`scale`](Self::scale).
    pub fn raw(&self, u: u32, v: u32) -> u32 {
        self.dist[u as usize * self.n + v as usize]
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub(crate) fn row(&self, u: u32) -> &[u32] {
        &self.dist[u as usize * self.n..(u as usize + 1) * self.n]
    }

    pub fn graph(&self) -> Option<&[Vec<u32>]> {
        self.graph.as_deref()
    }

    /// Whether `d(u, v) <= threshold`.
    pub fn within(&self, u: u32, v: u32, threshold: Rational64) -> bool {
        (self.raw(u, v) as i128) * (*threshold.denom() as i128)
            <= (*threshold.numer() as i128) * (self.scale as i128)
    }

    /// A geodesic from `from` to `to` in the underlying graph, endpoints included.
    ///
    /// At each step the least-id neighbour one unit closer to `to` is taken, so the
    /// path is canonical. `None` for metrics that do not come from a graph.
    pub fn geodesic(&self, from: u32, to: u32) -> Option<Vec<u32>> {
        let adj = self.graph.as_ref()?;
        let target = self.row(to);
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            let dc = target[cur as usize];
            cur = *adj[cur as usize].iter().find(|&&w| target[w as usize] + 1 == dc)?;
            path.push(cur);
        }
        Some(path)
    }

    /// Points within distance `r` of `center`.
    pub fn ball(&self, center: u32, r: Rational64) -> Vec<u32> {
        (0..self.n as u32).filter(|&v| self.within(center, v, r)).collect()
    }

    /// Same metric with points renamed by `perm` (new id of old point `i` is `perm[i]`).
    pub fn relabel(&self, perm: &[u32]) -> FiniteMetric {
        let n = self.n;
        let mut dist = vec![0u32; n * n];
        for u in 0..n {
            for v in 0..n {
                dist[perm[u] as usize * n + perm[v] as usize] = self.dist[u * n + v];
            }
        }
        let graph = self.graph.as_ref().map(|adj| {
            let mut out = vec![Vec::new(); n];
            for (u, nb) in adj.iter().enumerate() {
                out[perm[u] as usize] = nb.iter().map(|&w| perm[w as usize]).collect();
                out[perm[u] as usize].sort_unstable();
            }
            out
        });
        FiniteMetric { n, scale: self.scale, dist, graph, truncation: None }
    }
}

/// `(u, v)_base = ½ (d(u, base) + d(v, base) − d(u, v))`.
pub fn gromov_product(m: &FiniteMetric, u: u32, v: u32, base: u32) -> Rational64 {
    let num = m.raw(u, base) as i64 + m.raw(v, base) as i64 - m.raw(u, v) as i64;
    Rational64::new(num, 2 * m.scale())
}
