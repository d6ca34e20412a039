//! Simplicial complexes, sparse chains and the boundary operator.
//!
//! Cells are oriented by ascending vertex ids and the boundary of
//! `(v0, …, vk)` is `Σ (-1)^i (v0, …, v̂i, …, vk)`. All cells carry unit mass, so
//! the mass of an integral chain is its ℓ¹-norm.

mod chain;
mod complex;

pub use chain::Chain;
pub use complex::{Cell, Complex, ComplexMeta};
pub(crate) use complex::UnionFind;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::rings::NormedRing;

/// A subcomplex of some parent complex, recorded by parent cell ids per dimension.
///
/// Because ids are the parent's, the embedding into the parent is the identity on ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subcomplex {
    cells: Vec<BTreeSet<u32>>,
}

impl Subcomplex {
    pub fn empty() -> Self {
        Subcomplex::default()
    }

    /// The whole of `complex`.
    pub fn full(complex: &Complex) -> Self {
        Subcomplex {
            cells: (0..=complex.dimension())
                .map(|k| (0..complex.n_cells(k) as u32).collect())
                .collect(),
        }
    }

    pub fn contains(&self, dim: usize, id: u32) -> bool {
        self.cells.get(dim).is_some_and(|s| s.contains(&id))
    }

    pub fn n_cells(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, |s| s.len())
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_cells() == 0
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = u32> + '_ {
        self.cells.get(dim).into_iter().flatten().copied()
    }

    pub fn is_subset_of(&self, other: &Subcomplex) -> bool {
        self.cells
            .iter()
            .enumerate()
            .all(|(k, s)| s.iter().all(|&c| other.contains(k, c)))
    }

    fn insert(&mut self, dim: usize, id: u32) -> bool {
        if self.cells.len() <= dim {
            self.cells.resize_with(dim + 1, BTreeSet::new);
        }
        self.cells[dim].insert(id)
    }

    /// Boolean membership mask for one dimension of the parent.
    pub(crate) fn mask(&self, complex: &Complex, dim: usize) -> Vec<bool> {
        let mut m = vec![false; complex.n_cells(dim)];
        for c in self.cells(dim) {
            m[c as usize] = true;
        }
        m
    }

    /// Materialise as a standalone complex on the subcomplex's vertices.
    ///
    /// Returns the complex together with the embedding: for every dimension, the
    /// parent id of each local cell.
    pub fn to_complex(&self, parent: &Complex) -> (Complex, Vec<Vec<u32>>) {
        let verts: Vec<u32> = self.cells(0).collect();
        let local: BTreeMap<u32, u32> =
            verts.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let mut by_dim: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
        for k in 1..self.cells.len() {
            by_dim.push(
                self.cells(k)
                    .map(|c| parent.vertices(k, c).iter().map(|v| local[v]).collect())
                    .collect(),
            );
        }
        let cx = Complex::close_and_index(verts.len(), by_dim);
        let embedding = (0..=cx.dimension())
            .map(|k| {
                cx.cells(k)
                    .map(|cell| {
                        let pv: Vec<u32> = cell.vertices.iter().map(|&v| verts[v as usize]).collect();
                        parent.find(&pv).expect("subcomplex cell exists in parent")
                    })
                    .collect()
            })
            .collect();
        (cx, embedding)
    }
}

impl Complex {
    /// `∂` of a chain of dimension at least 1.
    pub fn boundary(&self, chain: &Chain) -> Result<Chain> {
        let k = chain.dim();
        if k == 0 {
            return Err(Error::contract("no boundary below dimension 1"));
        }
        self.check_chain(chain)?;
        let ring = chain.ring();
        let mut out = Chain::zero(ring, k - 1);
        for (id, c) in chain.iter() {
            for (f, s) in self.faces(k, id) {
                out.add_term(f, &ring.signed(c, s));
            }
        }
        Ok(out)
    }

    /// Whether `∂ chain = 0`.
    pub fn is_cycle(&self, chain: &Chain) -> Result<bool> {
        Ok(self.boundary(chain)?.is_zero())
    }

    pub(crate) fn check_chain(&self, chain: &Chain) -> Result<()> {
        let n = self.n_cells(chain.dim());
        match chain.iter().map(|(id, _)| id).find(|&id| id as usize >= n) {
            Some(bad) => Err(Error::contract(format!(
                "chain refers to {}-cell {bad}, but the complex has {n}",
                chain.dim()
            ))),
            None => Ok(()),
        }
    }

    /// Smallest subcomplex containing the given `(dimension, id)` cells.
    pub fn hull(&self, cells: impl IntoIterator<Item = (usize, u32)>) -> Subcomplex {
        let mut sub = Subcomplex::empty();
        for (k, id) in cells {
            sub.insert(k, id);
        }
        self.close_downward(&mut sub);
        sub
    }

    fn close_downward(&self, sub: &mut Subcomplex) {
        for k in (1..sub.cells.len()).rev() {
            let faces: Vec<u32> =
                sub.cells[k].iter().flat_map(|&c| self.faces(k, c).map(|(f, _)| f)).collect();
            for f in faces {
                sub.insert(k - 1, f);
            }
        }
    }

    /// `sub` together with every cell that has a boundary face in `sub`, closed under faces.
    pub fn expand_neighborhood(&self, sub: &Subcomplex) -> Subcomplex {
        let mut out = sub.clone();
        for k in 0..sub.cells.len() {
            if k >= self.dimension() {
                break;
            }
            for f in sub.cells(k) {
                for (c, _) in self.cofaces(k, f) {
                    out.insert(k + 1, c);
                }
            }
        }
        self.close_downward(&mut out);
        out
    }

    /// Hull of the support of a chain.
    pub fn support_hull(&self, chain: &Chain) -> Subcomplex {
        self.hull(chain.iter().map(|(id, _)| (chain.dim(), id)))
    }

    /// Decompose a cycle into cycles whose supports are connected through shared faces.
    ///
    /// Components are ordered by their least cell id.
    pub fn split_connected_support(&self, cycle: &Chain) -> Result<Vec<Chain>> {
        if !self.is_cycle(cycle)? {
            return Err(Error::contract("split_connected_support needs a cycle"));
        }
        let k = cycle.dim();
        let support: Vec<u32> = cycle.iter().map(|(id, _)| id).collect();
        let mut uf = UnionFind::new(support.len());
        let mut first_at_face: BTreeMap<u32, usize> = BTreeMap::new();
        for (i, &c) in support.iter().enumerate() {
            for (f, _) in self.faces(k, c) {
                match first_at_face.get(&f) {
                    Some(&j) => uf.union(i, j),
                    None => {
                        first_at_face.insert(f, i);
                    }
                }
            }
        }
        let mut slot: BTreeMap<usize, usize> = BTreeMap::new();
        let mut groups: Vec<Chain> = Vec::new();
        for (i, (id, c)) in cycle.iter().enumerate() {
            let root = uf.find(i);
            let g = *slot.entry(root).or_insert_with(|| {
                groups.push(Chain::zero(cycle.ring(), k));
                groups.len() - 1
            });
            groups[g].add_term(id, c);
        }
        Ok(groups)
    }

    /// 1-chain traced by a walk through the 1-skeleton, unit coefficient per step.
    ///
    /// Backtracking steps cancel. Consecutive repeated vertices are ignored.
    pub fn path_chain(&self, path: &[u32], ring: NormedRing) -> Result<Chain> {
        let mut chain = Chain::zero(ring, 1);
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a == b {
                continue;
            }
            let e = self
                .find(&[a, b])
                .ok_or_else(|| Error::contract(format!("no edge between {a} and {b}")))?;
            let sign = if a < b { 1 } else { -1 };
            chain.add_term(e, &ring.from_i64(sign));
        }
        Ok(chain)
    }
}

#[cfg(test)]
mod tests;
