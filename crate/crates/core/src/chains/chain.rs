use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::rings::{Coefficient, NormedRing};

/// A finite formal sum of `dim`-cells with coefficients in a normed ring.
///
/// Cells are referred to by id in some complex; the chain itself does not hold the
/// complex. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    dim: usize,
    ring: NormedRing,
    terms: BTreeMap<u32, Coefficient>,
}

impl Chain {
    pub fn zero(ring: NormedRing, dim: usize) -> Self {
        Chain { dim, ring, terms: BTreeMap::new() }
    }

    /// Sum of the given terms; repeated cells are added together.
    pub fn from_terms(
        ring: NormedRing,
        dim: usize,
        terms: impl IntoIterator<Item = (u32, Coefficient)>,
    ) -> Self {
        let mut c = Chain::zero(ring, dim);
        for (id, x) in terms {
            c.add_term(id, &x);
        }
        c
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_i64(ring: NormedRing, dim: usize, terms: impl IntoIterator<Item = (u32, i64)>) -> Self {
        Chain::from_terms(ring, dim, terms.into_iter().map(|(id, x)| (id, ring.from_i64(x))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ring(&self) -> NormedRing {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of cells in the support.
    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().copied()
    }

    pub fn get(&self, id: u32) -> Option<&Coefficient> {
        self.terms.get(&id)
    }

    /// Terms in ascending cell order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Coefficient)> + '_ {
        self.terms.iter().map(|(&id, c)| (id, c))
    }

    pub fn add_term(&mut self, id: u32, c: &Coefficient) {
        if self.ring.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&id) {
            Some(x) => {
                let s = self.ring.add(x, c);
                if self.ring.is_zero(&s) {
                    self.terms.remove(&id);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(id, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.dim, other.dim, "adding chains of different dimensions");
        let mut out = self.clone();
        for (id, c) in other.iter() {
            out.add_term(id, c);
        }
        out
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Chain {
        self.scale(&self.ring.from_i64(-1))
    }

    pub fn scale(&self, r: &Coefficient) -> Chain {
        Chain::from_terms(self.ring, self.dim, self.iter().map(|(id, c)| (id, self.ring.mul(r, c))))
    }

    /// ℓ¹-norm: the sum of coefficient norms.
    pub fn l1_norm(&self) -> BigRational {
        self.terms
            .values()
            .fold(BigRational::zero(), |acc, c| acc + self.ring.norm_of(c))
    }

    /// Reinterpret the coefficients in another ring (through their integer values).
    pub fn convert(&self, ring: NormedRing) -> Chain {
        Chain::from_terms(
            ring,
            self.dim,
            self.iter().map(|(id, c)| {
                let v = match c {
                    Coefficient::Integer(n) => ring.from_bigint(n),
                    Coefficient::Rational(q) if ring.modulus().is_none() => match ring.kind() {
                        crate::rings::RingKind::Rationals => Coefficient::Rational(q.clone()),
                        _ => ring.from_bigint(&q.to_integer()),
                    },
                    Coefficient::Rational(q) => ring.from_bigint(&q.to_integer()),
                    Coefficient::Residue(r) => ring.from_i64(*r as i64),
                };
                (id, v)
            }),
        )
    }
}
