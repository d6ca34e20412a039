//! Iterative-deepening search over supports, for the discrete norm.
//!
//! A node is a set `S` of `(n+1)`-cells. A face is *open* when it still forces
//! another cell: it carries `z` but no cell of `S`, or it carries no `z` and
//! exactly one cell of `S`. Every filling's support is closed, so branching on the
//! cofaces of one open face (excluding the ones tried in earlier siblings) is
//! complete. Closed supports are checked by an exact solve in the ring; a closed
//! support with no solution is extended by cells adjacent to `S` or to `supp z`,
//! which is enough because every component of a minimal filling meets `supp z`.

use std::collections::BTreeSet;

use super::system::LocalSystem;
use super::{Meter, Probe};
use crate::chains::{Chain, Complex};

pub(crate) struct SupportSearch<'a> {
    cx: &'a Complex,
    z: &'a Chain,
    k: usize,
    allowed: Option<&'a [bool]>,
    dist: &'a [u32],
    on_z: Vec<bool>,
    count: Vec<u16>,
    open: BTreeSet<u32>,
    in_s: Vec<bool>,
    excluded: Vec<u32>,
    s: Vec<u32>,
    pruned: bool,
}

impl<'a> SupportSearch<'a> {
    pub fn new(cx: &'a Complex, z: &'a Chain, allowed: Option<&'a [bool]>, dist: &'a [u32]) -> Self {
        let k = z.dim() + 1;
        let mut on_z = vec![false; cx.n_cells(k - 1)];
        for f in z.support() {
            on_z[f as usize] = true;
        }
        SupportSearch {
            cx,
            z,
            k,
            allowed,
            dist,
            on_z,
            count: vec![0; cx.n_cells(k - 1)],
            open: z.support().collect(),
            in_s: vec![false; cx.n_cells(k)],
            excluded: vec![0; cx.n_cells(k)],
            s: Vec::new(),
            pruned: false,
        }
    }

    /// Least norm any filling can have.
    pub fn lower_bound(&self) -> usize {
        self.open.len().div_ceil(self.k + 1)
    }

    /// Search for a filling of norm at most `bound`.
    pub fn probe(&mut self, bound: usize, meter: &mut Meter) -> Probe {
        self.pruned = false;
        match self.dfs(bound, meter) {
            Some(Ok(c)) => Probe::Found(c),
            Some(Err(())) => Probe::Exhausted,
            None if self.pruned => Probe::NotFound,
            None => Probe::Empty,
        }
    }

    fn available(&self, c: u32) -> bool {
        !self.in_s[c as usize]
            && self.excluded[c as usize] == 0
            && self.allowed.is_none_or(|m| m[c as usize])
    }

    fn key(&self, c: u32) -> (u32, u32) {
        let far = self.cx.vertices(self.k, c).iter().map(|&v| self.dist[v as usize]).max().unwrap_or(0);
        (far, c)
    }

    fn is_open(&self, f: u32) -> bool {
        let c = self.count[f as usize];
        if self.on_z[f as usize] {
            c == 0
        } else {
            c == 1
        }
    }

    fn touch(&mut self, c: u32, delta: i32) {
        self.in_s[c as usize] = delta > 0;
        let faces: Vec<u32> = self.cx.faces(self.k, c).map(|(f, _)| f).collect();
        for f in faces {
            let cnt = &mut self.count[f as usize];
            *cnt = (*cnt as i32 + delta) as u16;
            if self.is_open(f) {
                self.open.insert(f);
            } else {
                self.open.remove(&f);
            }
        }
        if delta > 0 {
            self.s.push(c);
        } else {
            self.s.pop();
        }
    }

    fn sorted(&self, mut cands: Vec<u32>) -> Vec<u32> {
        cands.sort_unstable_by_key(|&c| self.key(c));
        cands.dedup();
        cands
    }

    fn branches(&self) -> Vec<u32> {
        if self.open.is_empty() {
            let mut cands = Vec::new();
            let mut faces: BTreeSet<u32> = self.z.support().collect();
            for &c in &self.s {
                faces.extend(self.cx.faces(self.k, c).map(|(f, _)| f));
            }
            for f in faces {
                cands.extend(self.cx.cofaces(self.k - 1, f).map(|(c, _)| c).filter(|&c| self.available(c)));
            }
            return self.sorted(cands);
        }
        let mut best: Option<Vec<u32>> = None;
        for &f in &self.open {
            let cands: Vec<u32> =
                self.cx.cofaces(self.k - 1, f).map(|(c, _)| c).filter(|&c| self.available(c)).collect();
            if best.as_ref().is_none_or(|b| cands.len() < b.len()) {
                let empty = cands.is_empty();
                best = Some(cands);
                if empty {
                    break;
                }
            }
        }
        self.sorted(best.unwrap_or_default())
    }

    /// `None`: nothing within the bound; `Some(Err)`: budget ran out.
    fn dfs(&mut self, bound: usize, meter: &mut Meter) -> Option<Result<Chain, ()>> {
        if !meter.tick() {
            return Some(Err(()));
        }
        if self.s.len() + self.lower_bound() > bound {
            self.pruned = true;
            return None;
        }
        if self.open.is_empty() && !self.s.is_empty() {
            let mut cells = self.s.clone();
            cells.sort_unstable();
            let sys = LocalSystem::new(self.cx, self.z, &cells);
            if let Some(x) = sys.solve_any(self.z.ring()) {
                return Some(Ok(sys.chain(self.z.ring(), self.k, &x)));
            }
            if self.s.len() + 1 > bound {
                self.pruned = true;
                return None;
            }
        }
        let cands = self.branches();
        let mut result = None;
        let mut tried = 0;
        for &c in &cands {
            self.touch(c, 1);
            let r = self.dfs(bound, meter);
            self.touch(c, -1);
            if r.is_some() {
                result = r;
                break;
            }
            self.excluded[c as usize] += 1;
            tried += 1;
        }
        for &c in &cands[..tried] {
            self.excluded[c as usize] -= 1;
        }
        result
    }
}
