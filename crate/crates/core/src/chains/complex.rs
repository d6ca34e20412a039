use std::sync::Arc;

use num_rational::Rational64;

use crate::builders::FiniteMetric;
use crate::error::{Error, Result};

/// An oriented cell: ascending vertex ids, identified by its index within its dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub dim: usize,
    pub id: u32,
    pub vertices: Vec<u32>,
}

/// Provenance carried alongside a complex. None of it affects the cell structure.
#[derive(Clone, Debug, Default)]
pub struct ComplexMeta {
    /// Metric on the vertex set, when the complex was built from one.
    pub metric: Option<Arc<FiniteMetric>>,
    /// Edge threshold of a Rips complex.
    pub rips_scale: Option<Rational64>,
    /// Largest number of edges in a 2-cell attaching polygon before subdivision.
    pub attaching_edges: Option<usize>,
    /// False when vertex identification was only heuristic.
    pub certified: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct CellTable {
    /// Vertex tuples, flattened with stride `dim + 1`, sorted lexicographically.
    verts: Vec<u32>,
    /// Face `i` of a cell omits vertex `i` and carries sign `(-1)^i`.
    faces: Vec<u32>,
    coface_start: Vec<u32>,
    cofaces: Vec<u32>,
    coface_signs: Vec<i8>,
}

/// A finite simplicial complex with canonically oriented cells.
///
/// Cells of each dimension are stored sorted by vertex tuple, so a cell's id is
/// its rank in that order. Every face of every cell is present.
#[derive(Clone, Debug)]
pub struct Complex {
    n_vertices: usize,
    tables: Vec<CellTable>,
    pub(crate) meta: ComplexMeta,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.n_vertices == other.n_vertices && self.tables == other.tables
    }
}

impl Eq for Complex {}

impl Complex {
    /// Build the smallest complex on `n_vertices` vertices containing every given simplex.
    pub fn from_simplices<I, S>(n_vertices: usize, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut by_dim: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
        for s in simplices {
            let mut v = s.as_ref().to_vec();
            if v.is_empty() {
                continue;
            }
            v.sort_unstable();
            if v.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::contract(format!("simplex {v:?} repeats a vertex")));
            }
            if let Some(&bad) = v.iter().find(|&&x| x as usize >= n_vertices) {
                return Err(Error::contract(format!(
                    "vertex {bad} out of range for {n_vertices} vertices"
                )));
            }
            let k = v.len() - 1;
            if by_dim.len() <= k {
                by_dim.resize_with(k + 1, Vec::new);
            }
            by_dim[k].push(v);
        }
        Ok(Self::close_and_index(n_vertices, by_dim))
    }

    /// `by_dim[k]` holds sorted k-simplices (duplicates allowed). Vertices are implicit.
    pub(crate) fn close_and_index(n_vertices: usize, mut by_dim: Vec<Vec<Vec<u32>>>) -> Self {
        while by_dim.len() > 1 && by_dim.last().is_some_and(|t| t.is_empty()) {
            by_dim.pop();
        }
        for k in (1..by_dim.len()).rev() {
            by_dim[k].sort_unstable();
            by_dim[k].dedup();
            if k >= 2 {
                let mut faces = Vec::with_capacity(by_dim[k].len() * (k + 1));
                for s in &by_dim[k] {
                    for i in 0..=k {
                        let mut f = s.clone();
                        f.remove(i);
                        faces.push(f);
                    }
                }
                by_dim[k - 1].extend(faces);
            }
        }
        let mut tables = Vec::with_capacity(by_dim.len().max(1));
        tables.push(CellTable {
            verts: (0..n_vertices as u32).collect(),
            ..Default::default()
        });
        for cells in by_dim.into_iter().skip(1) {
            tables.push(CellTable {
                verts: cells.into_iter().flatten().collect(),
                ..Default::default()
            });
        }
        let mut cx = Complex { n_vertices, tables, meta: ComplexMeta { certified: true, ..Default::default() } };
        cx.index_incidences();
        cx
    }

    fn index_incidences(&mut self) {
        for k in 1..self.tables.len() {
            let width = k + 1;
            let count = self.tables[k].verts.len() / width;
            let mut faces = Vec::with_capacity(count * width);
            let mut buf = Vec::with_capacity(k);
            for c in 0..count {
                let v = &self.tables[k].verts[c * width..(c + 1) * width];
                for i in 0..width {
                    buf.clear();
                    buf.extend(v.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x));
                    let f = self.find_in(k - 1, &buf).expect("closed under faces");
                    faces.push(f);
                }
            }
            self.tables[k].faces = faces;
        }
        for k in 0..self.tables.len() {
            let n_here = self.n_cells(k);
            let mut start = vec![0u32; n_here + 1];
            if k + 1 < self.tables.len() {
                let up = &self.tables[k + 1];
                for &f in &up.faces {
                    start[f as usize + 1] += 1;
                }
                for i in 0..n_here {
                    start[i + 1] += start[i];
                }
                let mut fill = start.clone();
                let mut cofaces = vec![0u32; up.faces.len()];
                let mut signs = vec![0i8; up.faces.len()];
                let w = k + 2;
                for (pos, &f) in up.faces.iter().enumerate() {
                    let slot = fill[f as usize] as usize;
                    cofaces[slot] = (pos / w) as u32;
                    signs[slot] = if (pos % w) % 2 == 0 { 1 } else { -1 };
                    fill[f as usize] += 1;
                }
                self.tables[k].cofaces = cofaces;
                self.tables[k].coface_signs = signs;
            }
            self.tables[k].coface_start = start;
        }
    }

    fn find_in(&self, dim: usize, vertices: &[u32]) -> Option<u32> {
        let table = self.tables.get(dim)?;
        let width = dim + 1;
        let count = table.verts.len() / width;
        let (mut lo, mut hi) = (0usize, count);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match table.verts[mid * width..(mid + 1) * width].cmp(vertices) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid as u32),
            }
        }
        None
    }

    /// Id of the cell with these vertices (in any order), if present.
    pub fn find(&self, vertices: &[u32]) -> Option<u32> {
        if vertices.is_empty() {
            return None;
        }
        let mut v = vertices.to_vec();
        v.sort_unstable();
        self.find_in(v.len() - 1, &v)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Top dimension with at least one cell; 0 for a complex with no edges.
    pub fn dimension(&self) -> usize {
        self.tables.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.n_vertices == 0
    }

    pub fn n_cells(&self, dim: usize) -> usize {
        self.tables.get(dim).map_or(0, |t| t.verts.len() / (dim + 1))
    }

    pub fn vertices(&self, dim: usize, id: u32) -> &[u32] {
        let w = dim + 1;
        &self.tables[dim].verts[id as usize * w..(id as usize + 1) * w]
    }

    pub fn cell(&self, dim: usize, id: u32) -> Cell {
        Cell { dim, id, vertices: self.vertices(dim, id).to_vec() }
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = Cell> + '_ {
        (0..self.n_cells(dim) as u32).map(move |id| self.cell(dim, id))
    }

    /// Boundary faces of a cell of dimension >= 1, with incidence signs.
    pub fn faces(&self, dim: usize, id: u32) -> impl Iterator<Item = (u32, i8)> + '_ {
        let w = dim + 1;
        let slice: &[u32] = if dim == 0 {
            &[]
        } else {
            &self.tables[dim].faces[id as usize * w..(id as usize + 1) * w]
        };
        slice
            .iter()
            .enumerate()
            .map(|(i, &f)| (f, if i % 2 == 0 { 1 } else { -1 }))
    }

    /// Cells of dimension `dim + 1` having this cell as a face, with incidence signs.
    pub fn cofaces(&self, dim: usize, id: u32) -> impl Iterator<Item = (u32, i8)> + '_ {
        let t = &self.tables[dim];
        let (a, b) = if t.cofaces.is_empty() {
            (0, 0)
        } else {
            (t.coface_start[id as usize] as usize, t.coface_start[id as usize + 1] as usize)
        };
        t.cofaces[a..b].iter().copied().zip(t.coface_signs[a..b].iter().copied())
    }

    pub fn coface_count(&self, dim: usize, id: u32) -> usize {
        let t = &self.tables[dim];
        if t.cofaces.is_empty() {
            0
        } else {
            (t.coface_start[id as usize + 1] - t.coface_start[id as usize]) as usize
        }
    }

    /// Number of edges at each vertex.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        (0..self.n_vertices as u32).map(|v| self.coface_count(0, v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.vertex_degrees().into_iter().max().unwrap_or(0)
    }

    /// Number of connected components of the 1-skeleton.
    pub fn connected_components(&self) -> usize {
        let mut uf = UnionFind::new(self.n_vertices);
        for e in 0..self.n_cells(1) as u32 {
            let v = self.vertices(1, e);
            uf.union(v[0] as usize, v[1] as usize);
        }
        uf.count()
    }

    /// FNV-1a hash of the cell structure, stable across runs and platforms.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        eat(self.n_vertices as u64);
        for (k, t) in self.tables.iter().enumerate() {
            eat(k as u64);
            for &v in &t.verts {
                eat(v as u64);
            }
        }
        h
    }

    pub fn meta(&self) -> &ComplexMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut ComplexMeta {
        &mut self.meta
    }

    pub fn metric(&self) -> Option<&FiniteMetric> {
        self.meta.metric.as_deref()
    }

    pub fn with_metric(mut self, metric: Arc<FiniteMetric>) -> Self {
        self.meta.metric = Some(metric);
        self
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub(crate) fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}
