//! Iterative-deepening search over integer coefficients, for the absolute norm on `Z`.
//!
//! The residual `z − ∂c` is tracked face by face. A face with nonzero residual
//! needs some new cell on it; the search picks the face with the fewest
//! candidate cofaces and tries each, the value that clears the face first and then
//! the others by increasing magnitude. One unit of coefficient changes the residual
//! mass by at most `n + 2`, which gives the lower bound.

use std::collections::BTreeSet;

use super::{Meter, Probe};
use crate::chains::{Chain, Complex};
use crate::error::{Error, Result};

pub(crate) struct ValueSearch<'a> {
    cx: &'a Complex,
    k: usize,
    allowed: Option<&'a [bool]>,
    dist: &'a [u32],
    ring: crate::rings::NormedRing,
    residual: Vec<i64>,
    nonzero: BTreeSet<u32>,
    mass: i64,
    assigned: Vec<bool>,
    excluded: Vec<u32>,
    values: Vec<(u32, i64)>,
    cost: i64,
    pruned: bool,
}

impl<'a> ValueSearch<'a> {
    pub fn new(cx: &'a Complex, z: &'a Chain, allowed: Option<&'a [bool]>, dist: &'a [u32]) -> Result<Self> {
        let k = z.dim() + 1;
        let ring = z.ring();
        let mut residual = vec![0i64; cx.n_cells(k - 1)];
        let mut mass = 0i64;
        for (f, x) in z.iter() {
            let v = ring
                .to_i64(x)
                .filter(|v| v.unsigned_abs() < (1 << 40))
                .ok_or_else(|| Error::config("coefficient too large for the absolute-norm search"))?;
            residual[f as usize] = v;
            mass += v.abs();
        }
        Ok(ValueSearch {
            cx,
            k,
            allowed,
            dist,
            ring,
            residual,
            nonzero: z.support().collect(),
            mass,
            assigned: vec![false; cx.n_cells(k)],
            excluded: vec![0; cx.n_cells(k)],
            values: Vec::new(),
            cost: 0,
            pruned: false,
        })
    }

    pub fn lower_bound(&self) -> i64 {
        (self.mass + self.k as i64) / (self.k as i64 + 1)
    }

    pub fn probe(&mut self, bound: i64, meter: &mut Meter) -> Probe {
        self.pruned = false;
        match self.dfs(bound, meter) {
            Some(Ok(c)) => Probe::Found(c),
            Some(Err(())) => Probe::Exhausted,
            None if self.pruned => Probe::NotFound,
            None => Probe::Empty,
        }
    }

    fn available(&self, c: u32) -> bool {
        !self.assigned[c as usize]
            && self.excluded[c as usize] == 0
            && self.allowed.is_none_or(|m| m[c as usize])
    }

    /// Subtract `v·∂c` from the residual.
    fn apply(&mut self, c: u32, v: i64) {
        let faces: Vec<(u32, i8)> = self.cx.faces(self.k, c).collect();
        for (f, s) in faces {
            let r = &mut self.residual[f as usize];
            self.mass -= r.abs();
            *r -= v * s as i64;
            self.mass += r.abs();
            if *r == 0 {
                self.nonzero.remove(&f);
            } else {
                self.nonzero.insert(f);
            }
        }
    }

    fn dfs(&mut self, bound: i64, meter: &mut Meter) -> Option<Result<Chain, ()>> {
        if !meter.tick() {
            return Some(Err(()));
        }
        if self.cost + self.lower_bound() > bound {
            self.pruned = true;
            return None;
        }
        if self.nonzero.is_empty() {
            let terms = self.values.iter().map(|&(c, v)| (c, v));
            return Some(Ok(Chain::from_i64(self.ring, self.k, terms)));
        }
        // face with fewest candidate cofaces
        let mut best: Option<(u32, Vec<(u32, i8)>)> = None;
        for &f in &self.nonzero {
            let cands: Vec<(u32, i8)> =
                self.cx.cofaces(self.k - 1, f).filter(|&(c, _)| self.available(c)).collect();
            if best.as_ref().is_none_or(|(_, b)| cands.len() < b.len()) {
                let empty = cands.is_empty();
                best = Some((f, cands));
                if empty {
                    break;
                }
            }
        }
        let (f, mut cands) = best.expect("nonzero residual");
        cands.sort_unstable_by_key(|&(c, _)| {
            let far = self.cx.vertices(self.k, c).iter().map(|&v| self.dist[v as usize]).max();
            (far, c)
        });
        let rf = self.residual[f as usize];
        let room = bound - self.cost;
        if !cands.is_empty() {
            // values beyond `room` are never tried
            self.pruned = true;
        }
        let mut result = None;
        let mut tried = 0;
        'cells: for &(c, s) in &cands {
            let clear = rf * s as i64;
            let others = (1..=room).flat_map(|m| [m, -m]).filter(|&v| v != clear);
            let vals: Vec<i64> = std::iter::once(clear).filter(|v| v.abs() <= room).chain(others).collect();
            self.assigned[c as usize] = true;
            for v in vals {
                self.apply(c, v);
                self.cost += v.abs();
                self.values.push((c, v));
                let r = self.dfs(bound, meter);
                self.values.pop();
                self.cost -= v.abs();
                self.apply(c, -v);
                if r.is_some() {
                    self.assigned[c as usize] = false;
                    result = r;
                    break 'cells;
                }
            }
            self.assigned[c as usize] = false;
            self.excluded[c as usize] += 1;
            tried += 1;
        }
        for &(c, _) in &cands[..tried] {
            self.excluded[c as usize] -= 1;
        }
        result
    }
}
