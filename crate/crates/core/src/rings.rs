//! Coefficient rings paired with a norm.
//!
//! Three rings are shipped: the integers, the rationals and the integers modulo `m`.
//! Every ring carries the discrete norm (`0 ↦ 0`, everything else `↦ 1`); the
//! integers and rationals, being subrings of the complex numbers, may instead
//! carry the restriction of the absolute value. Coefficients are always exact,
//! only norm values are real numbers, and those are returned as exact rationals.
//!
//! Other unital rings can be added by extending [`RingKind`] and the arithmetic
//! in [`NormedRing`]; nothing else in the crate inspects the ring directly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    Integers,
    Rationals,
    /// `Z/mZ` with `m >= 2`.
    IntegersMod(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormKind {
    Discrete,
    Absolute,
}

/// An exact ring element. The variant always matches the ring it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficient {
    Integer(BigInt),
    /// Lowest terms, positive denominator (maintained by `BigRational`).
    Rational(BigRational),
    /// A residue in `[0, m)`.
    Residue(u64),
}

/// A validated (ring, norm) pair. Cheap to copy and freely shareable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormedRing {
    kind: RingKind,
    norm: NormKind,
}

impl NormedRing {
    pub fn new(kind: RingKind, norm: NormKind) -> Result<Self> {
        match (kind, norm) {
            (RingKind::IntegersMod(m), _) if m < 2 => {
                Err(Error::config(format!("modulus must be at least 2, got {m}")))
            }
            (RingKind::IntegersMod(m), NormKind::Absolute) => Err(Error::config(format!(
                "the absolute norm needs a subring of the complex numbers; Z/{m} is not one"
            ))),
            _ => Ok(NormedRing { kind, norm }),
        }
    }

    pub fn integers(norm: NormKind) -> Self {
        NormedRing { kind: RingKind::Integers, norm }
    }

    pub fn rationals(norm: NormKind) -> Self {
        NormedRing { kind: RingKind::Rationals, norm }
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.kind {
            RingKind::IntegersMod(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_discrete(&self) -> bool {
        self.norm == NormKind::Discrete
    }

    /// The same ring with the discrete norm.
    pub fn with_discrete_norm(&self) -> Self {
        NormedRing { kind: self.kind, norm: NormKind::Discrete }
    }

    pub fn zero(&self) -> Coefficient {
        self.from_i64(0)
    }

    pub fn one(&self) -> Coefficient {
        self.from_i64(1)
    }

    /// Image of an integer under the unique ring map from `Z`.
    pub fn from_i64(&self, n: i64) -> Coefficient {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coefficient {
        match self.kind {
            RingKind::Integers => Coefficient::Integer(n.clone()),
            RingKind::Rationals => Coefficient::Rational(BigRational::from_integer(n.clone())),
            RingKind::IntegersMod(m) => {
                let r = n.mod_floor(&BigInt::from(m));
                Coefficient::Residue(r.to_u64().expect("residue fits in u64"))
            }
        }
    }

    /// Does `c` belong to this ring (right variant, canonical form)?
    pub fn contains(&self, c: &Coefficient) -> bool {
        match (self.kind, c) {
            (RingKind::Integers, Coefficient::Integer(_)) => true,
            (RingKind::Rationals, Coefficient::Rational(q)) => q.denom().is_positive(),
            (RingKind::IntegersMod(m), Coefficient::Residue(r)) => *r < m,
            _ => false,
        }
    }

    pub fn is_zero(&self, c: &Coefficient) -> bool {
        match c {
            Coefficient::Integer(n) => n.is_zero(),
            Coefficient::Rational(q) => q.is_zero(),
            Coefficient::Residue(r) => *r == 0,
        }
    }

    pub fn add(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        match (a, b) {
            (Coefficient::Integer(x), Coefficient::Integer(y)) => Coefficient::Integer(x + y),
            (Coefficient::Rational(x), Coefficient::Rational(y)) => Coefficient::Rational(x + y),
            (Coefficient::Residue(x), Coefficient::Residue(y)) => {
                let m = self.modulus().expect("residue in a modular ring");
                Coefficient::Residue(((*x as u128 + *y as u128) % m as u128) as u64)
            }
            _ => panic!("mixed coefficient kinds in {self}"),
        }
    }

    pub fn neg(&self, a: &Coefficient) -> Coefficient {
        match a {
            Coefficient::Integer(x) => Coefficient::Integer(-x),
            Coefficient::Rational(x) => Coefficient::Rational(-x),
            Coefficient::Residue(x) => {
                let m = self.modulus().expect("residue in a modular ring");
                Coefficient::Residue(if *x == 0 { 0 } else { m - x })
            }
        }
    }

    pub fn sub(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        match (a, b) {
            (Coefficient::Integer(x), Coefficient::Integer(y)) => Coefficient::Integer(x * y),
            (Coefficient::Rational(x), Coefficient::Rational(y)) => Coefficient::Rational(x * y),
            (Coefficient::Residue(x), Coefficient::Residue(y)) => {
                let m = self.modulus().expect("residue in a modular ring");
                Coefficient::Residue(((*x as u128 * *y as u128) % m as u128) as u64)
            }
            _ => panic!("mixed coefficient kinds in {self}"),
        }
    }

    /// Multiply by a boundary incidence sign.
    pub fn signed(&self, a: &Coefficient, sign: i8) -> Coefficient {
        if sign >= 0 {
            a.clone()
        } else {
            self.neg(a)
        }
    }

    /// `|r|` under the ring's norm, as an exact nonnegative rational.
    pub fn norm_of(&self, c: &Coefficient) -> BigRational {
        if self.is_zero(c) {
            return BigRational::zero();
        }
        match (self.norm, c) {
            (NormKind::Discrete, _) => BigRational::one(),
            (NormKind::Absolute, Coefficient::Integer(n)) => BigRational::from_integer(n.abs()),
            (NormKind::Absolute, Coefficient::Rational(q)) => q.abs(),
            (NormKind::Absolute, Coefficient::Residue(_)) => {
                unreachable!("absolute norm is never paired with a modular ring")
            }
        }
    }

    /// Parse a coefficient literal: an integer, or `p/q` for rationals.
    pub fn parse_coefficient(&self, s: &str) -> Result<Coefficient> {
        let s = s.trim();
        let bad = || Error::config(format!("cannot read {s:?} as an element of {self}"));
        match self.kind {
            RingKind::Rationals => {
                let q = match s.split_once('/') {
                    Some((p, q)) => {
                        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                        if q.is_zero() {
                            return Err(bad());
                        }
                        BigRational::new(p, q)
                    }
                    None => BigRational::from_integer(s.parse().map_err(|_| bad())?),
                };
                Ok(Coefficient::Rational(q))
            }
            _ => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(self.from_bigint(&n))
            }
        }
    }

    pub fn format_coefficient(&self, c: &Coefficient) -> String {
        match c {
            Coefficient::Integer(n) => n.to_string(),
            Coefficient::Rational(q) if q.is_integer() => q.numer().to_string(),
            Coefficient::Rational(q) => format!("{}/{}", q.numer(), q.denom()),
            Coefficient::Residue(r) => r.to_string(),
        }
    }

    /// Integer value of a coefficient when it has one that fits in an `i64`:
    /// integers and integral rationals, residues as their least representative.
    pub(crate) fn to_i64(&self, c: &Coefficient) -> Option<i64> {
        match c {
            Coefficient::Integer(n) => n.to_i64(),
            Coefficient::Rational(q) if q.is_integer() => q.numer().to_i64(),
            Coefficient::Rational(_) => None,
            Coefficient::Residue(r) => i64::try_from(*r).ok(),
        }
    }
}

impl fmt::Display for NormedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let norm = match self.norm {
            NormKind::Discrete => "disc",
            NormKind::Absolute => "abs",
        };
        match self.kind {
            RingKind::Integers => write!(f, "Z:{norm}"),
            RingKind::Rationals => write!(f, "Q:{norm}"),
            RingKind::IntegersMod(m) => write!(f, "Zmod{m}:{norm}"),
        }
    }
}

impl FromStr for NormedRing {
    type Err = Error;

    /// Accepts `Z:abs`, `Z:disc`, `Q:abs`, `Q:disc` and `Zmod<m>:disc`.
    fn from_str(s: &str) -> Result<Self> {
        let (ring, norm) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::config(format!("ring spec {s:?} must look like RING:NORM")))?;
        let norm = match norm {
            "abs" => NormKind::Absolute,
            "disc" => NormKind::Discrete,
            other => return Err(Error::config(format!("unknown norm {other:?}"))),
        };
        let kind = match ring {
            "Z" => RingKind::Integers,
            "Q" => RingKind::Rationals,
            _ => match ring.strip_prefix("Zmod") {
                Some(m) => RingKind::IntegersMod(
                    m.parse()
                        .map_err(|_| Error::config(format!("bad modulus in {s:?}")))?,
                ),
                None => return Err(Error::config(format!("unknown ring {ring:?}"))),
            },
        };
        NormedRing::new(kind, norm)
    }
}
