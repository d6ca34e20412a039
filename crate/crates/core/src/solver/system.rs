//! The linear system `∂c = z` restricted to a set of candidate cells.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::chains::{Chain, Complex};
use crate::linalg::{self, Column, ModOutcome, PRIME};
use crate::rings::{Coefficient, NormedRing, RingKind};

pub(crate) struct LocalSystem {
    /// Global ids of the `(n+1)`-cells, one per column.
    pub cells: Vec<u32>,
    pub nrows: usize,
    pub columns: Vec<Column>,
    /// Right-hand side: local row and coefficient of `z`.
    pub rhs: Vec<(u32, Coefficient)>,
}

pub(crate) enum Unique {
    NotInjective,
    Infeasible,
    Solution(Vec<Coefficient>),
}

impl LocalSystem {
    /// Columns are the given cells, rows every face of them together with `supp z`.
    pub fn new(cx: &Complex, z: &Chain, cells: &[u32]) -> Self {
        let k = z.dim() + 1;
        let mut rows: BTreeMap<u32, u32> = BTreeMap::new();
        for &c in cells {
            for (f, _) in cx.faces(k, c) {
                rows.insert(f, 0);
            }
        }
        for f in z.support() {
            rows.insert(f, 0);
        }
        for (i, v) in rows.values_mut().enumerate() {
            *v = i as u32;
        }
        let columns = cells
            .iter()
            .map(|&c| cx.faces(k, c).map(|(f, s)| (rows[&f], s as i64)).collect())
            .collect();
        let rhs = z.iter().map(|(f, x)| (rows[&f], x.clone())).collect();
        LocalSystem { cells: cells.to_vec(), nrows: rows.len(), columns, rhs }
    }

    pub fn chain(&self, ring: NormedRing, dim: usize, x: &[Coefficient]) -> Chain {
        Chain::from_terms(ring, dim, self.cells.iter().copied().zip(x.iter().cloned()))
    }

    fn rhs_rational(&self) -> Vec<BigRational> {
        let mut b = vec![BigRational::zero(); self.nrows];
        for (r, x) in &self.rhs {
            b[*r as usize] = match x {
                Coefficient::Integer(n) => BigRational::from_integer(n.clone()),
                Coefficient::Rational(q) => q.clone(),
                Coefficient::Residue(v) => BigRational::from_integer(BigInt::from(*v)),
            };
        }
        b
    }

    fn rhs_mod(&self, p: u64) -> Option<Vec<(u32, u64)>> {
        let pb = BigInt::from(p);
        let reduce = |n: &BigInt| n.mod_floor(&pb).to_u64().expect("residue");
        self.rhs
            .iter()
            .map(|(r, x)| {
                let v = match x {
                    Coefficient::Integer(n) => reduce(n),
                    Coefficient::Rational(q) => {
                        let d = reduce(q.denom());
                        if d == 0 {
                            return None;
                        }
                        let inv = BigInt::from(d).modpow(&BigInt::from(p - 2), &pb);
                        reduce(&(reduce(q.numer()) * inv))
                    }
                    Coefficient::Residue(v) => v % p,
                };
                Some((*r, v))
            })
            .collect()
    }

    /// Independence test over `F_p` (each prime factor of `m` for `Z/m`) and, when
    /// the columns are independent, the unique solution.
    pub fn solve_unique(&self, ring: NormedRing) -> Unique {
        if self.columns.len() > self.nrows {
            return Unique::NotInjective;
        }
        match ring.kind() {
            RingKind::IntegersMod(m) => {
                for p in linalg::prime_factors(m) {
                    if linalg::rank_mod(&self.columns, self.nrows, p) < self.columns.len() {
                        return Unique::NotInjective;
                    }
                }
                match self.solve_any(ring) {
                    Some(x) => Unique::Solution(x),
                    None => Unique::Infeasible,
                }
            }
            RingKind::Integers | RingKind::Rationals => {
                let Some(b) = self.rhs_mod(PRIME) else {
                    return self.unique_by_elimination(ring);
                };
                match linalg::solve_injective_mod(&self.columns, self.nrows, &b, PRIME) {
                    ModOutcome::NotInjective => Unique::NotInjective,
                    // independent over F_p, hence over Q, and inconsistent mod p
                    ModOutcome::Infeasible => self.unique_by_elimination(ring),
                    ModOutcome::Solution(xp) => {
                        let lifted: Option<Vec<BigRational>> = xp
                            .iter()
                            .map(|&a| {
                                linalg::rational_reconstruct(a, PRIME)
                                    .map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                            })
                            .collect();
                        let b = self.rhs_rational();
                        match lifted {
                            Some(x) if linalg::verify_rational(&self.columns, self.nrows, &x, &b) => {
                                self.finish_unique(ring, x)
                            }
                            _ => self.unique_by_elimination(ring),
                        }
                    }
                }
            }
        }
    }

    /// Columns are known independent over `Q`: the solution, if any, is unique.
    fn unique_by_elimination(&self, ring: NormedRing) -> Unique {
        match linalg::solve_rational(&self.columns, self.nrows, &self.rhs_rational()) {
            Some(x) => self.finish_unique(ring, x),
            None => Unique::Infeasible,
        }
    }

    fn finish_unique(&self, ring: NormedRing, x: Vec<BigRational>) -> Unique {
        match ring.kind() {
            RingKind::Rationals => Unique::Solution(x.into_iter().map(Coefficient::Rational).collect()),
            _ => {
                if x.iter().any(|q| !q.is_integer()) {
                    return Unique::Infeasible;
                }
                Unique::Solution(x.iter().map(|q| ring.from_bigint(&q.to_integer())).collect())
            }
        }
    }

    /// Some solution in the ring, or `None`.
    pub fn solve_any(&self, ring: NormedRing) -> Option<Vec<Coefficient>> {
        match ring.kind() {
            RingKind::Rationals => {
                let x = linalg::solve_rational(&self.columns, self.nrows, &self.rhs_rational())?;
                Some(x.into_iter().map(Coefficient::Rational).collect())
            }
            RingKind::Integers => {
                let mut b = vec![BigInt::zero(); self.nrows];
                for (r, x) in &self.rhs {
                    if let Coefficient::Integer(n) = x {
                        b[*r as usize] = n.clone();
                    }
                }
                let x = linalg::solve_integer(&self.columns, self.nrows, &b)?;
                Some(x.into_iter().map(Coefficient::Integer).collect())
            }
            RingKind::IntegersMod(m) => {
                let mut b = vec![0u64; self.nrows];
                for (r, x) in &self.rhs {
                    if let Coefficient::Residue(v) = x {
                        b[*r as usize] = *v;
                    }
                }
                let x = linalg::solve_mod_m(&self.columns, self.nrows, &b, m)?;
                Some(x.into_iter().map(Coefficient::Residue).collect())
            }
        }
    }

    /// Exact minimum of `Σ|x_j|` over rational solutions.
    pub fn min_l1(&self) -> Option<(Vec<BigRational>, BigRational)> {
        match linalg::min_l1_rational(&self.columns, self.nrows, &self.rhs_rational()) {
            linalg::LpOutcome::Infeasible => None,
            linalg::LpOutcome::Optimal { x, value } => Some((x, value)),
        }
    }

    /// Number of dense entries a tableau for this system would hold.
    pub fn dense_size(&self) -> usize {
        self.nrows.saturating_mul(self.columns.len() + 1)
    }
}

pub(crate) fn ceil_rational(q: &BigRational) -> BigInt {
    let f = q.floor().to_integer();
    if q.is_integer() {
        f
    } else {
        f + BigInt::one()
    }
}
