//! Theta-curve and rectangle inequalities for the area function, and the coning check.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::cycles;
use crate::chains::{Chain, Complex};
use crate::error::{Error, Result};
use crate::rings::NormedRing;
use crate::solver::{Budget, Filler, FillingResult, FillingStatus};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaReport {
    /// `A(α₃⁻¹α₁)`, `A(α₂⁻¹α₁)`, `A(α₃⁻¹α₂)`.
    pub areas: [BigRational; 3],
    pub statuses: [FillingStatus; 3],
    /// `None` when some area is not certified.
    pub holds: Option<bool>,
}

/// `α` followed by `β` backwards; both run between the same endpoints.
fn join_back(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut p = a.to_vec();
    p.extend(b.iter().rev().skip(1));
    p
}

fn check_path(cx: &Complex, p: &[u32]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::contract("empty path"));
    }
    for w in p.windows(2) {
        if w[0] != w[1] && cx.find(&[w[0], w[1]]).is_none() {
            return Err(Error::contract(format!("no edge between {} and {}", w[0], w[1])));
        }
    }
    Ok(())
}

/// `A(α₃⁻¹α₁) ≤ A(α₂⁻¹α₁) + A(α₃⁻¹α₂)` for three paths with common endpoints.
pub fn check_theta(
    cx: &Complex,
    a1: &[u32],
    a2: &[u32],
    a3: &[u32],
    ring: NormedRing,
    budget: Budget,
) -> Result<ThetaReport> {
    for p in [a1, a2, a3] {
        check_path(cx, p)?;
        if p.first() != a1.first() || p.last() != a1.last() {
            return Err(Error::contract("theta paths must share both endpoints"));
        }
    }
    let filler = Filler::new(cx).with_budget(budget);
    let r13 = filler.area(&join_back(a1, a3), ring)?;
    let r12 = filler.area(&join_back(a1, a2), ring)?;
    let r23 = filler.area(&join_back(a2, a3), ring)?;
    let statuses = [r13.status, r12.status, r23.status];
    let certified = statuses.iter().all(|&s| s == FillingStatus::Optimal);
    let holds = certified.then(|| r13.norm <= &r12.norm + &r23.norm);
    Ok(ThetaReport { areas: [r13.norm, r12.norm, r23.norm], statuses, holds })
}

/// Seeded triples of paths between random vertex pairs, each through a random waypoint.
pub fn theta_triples(cx: &Complex, count: usize, seed: u64) -> Vec<[Vec<u32>; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = cx.n_vertices() as u32;
    let mut out = Vec::with_capacity(count);
    if nv == 0 {
        return out;
    }
    let mut attempts = 0;
    while out.len() < count && attempts < 20 * count + 20 {
        attempts += 1;
        let (p, q) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        let mut via = || -> Option<Vec<u32>> {
            let w = rng.gen_range(0..nv);
            let mut a = cycles::skeleton_path(cx, p, w, None)?;
            let b = cycles::skeleton_path(cx, w, q, None)?;
            a.extend_from_slice(&b[1..]);
            Some(a)
        };
        if let (Some(a), Some(b), Some(c)) = (via(), via(), via()) {
            out.push([a, b, c]);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectangleReport {
    pub area: BigRational,
    pub status: FillingStatus,
    /// `d(im α₁, im α₃)` and `d(im α₂, im α₄)`.
    pub d1: Rational64,
    pub d2: Rational64,
    pub k: Rational64,
    pub holds: Option<bool>,
}

fn set_distance(cx: &Complex, a: &[u32], b: &[u32]) -> Result<Rational64> {
    let m = cx.metric().ok_or_else(|| Error::config("the rectangle check needs a vertex metric"))?;
    let mut best = None;
    for &u in a {
        for &v in b {
            let d = m.distance(u, v);
            if best.is_none_or(|b| d < b) {
                best = Some(d);
            }
        }
    }
    Ok(best.unwrap_or_default())
}

/// `A(γ) ≥ K·d₁·d₂` for `γ = α₁α₂α₃α₄`; `K = 1/N` with `N` the longest attaching
/// polygon recorded on the complex (3 when none is).
pub fn check_rectangle(cx: &Complex, sides: [&[u32]; 4], ring: NormedRing, budget: Budget) -> Result<RectangleReport> {
    for (i, s) in sides.iter().enumerate() {
        check_path(cx, s)?;
        let next = sides[(i + 1) % 4];
        if s.last() != next.first() {
            return Err(Error::contract("rectangle sides must join end to start"));
        }
    }
    let mut gamma = sides[0].to_vec();
    for s in &sides[1..] {
        gamma.extend_from_slice(&s[1..]);
    }
    let d1 = set_distance(cx, sides[0], sides[2])?;
    let d2 = set_distance(cx, sides[1], sides[3])?;
    let n = cx.meta().attaching_edges.unwrap_or(3) as i64;
    let k = Rational64::new(1, n);
    let r = Filler::new(cx).with_budget(budget).area(&gamma, ring)?;
    let rhs = k * d1 * d2;
    let rhs = BigRational::new(BigInt::from(*rhs.numer()), BigInt::from(*rhs.denom()));
    let holds = (r.status == FillingStatus::Optimal).then(|| r.norm >= rhs);
    Ok(RectangleReport { area: r.norm, status: r.status, d1, d2, k, holds })
}

#[derive(Clone, Debug)]
pub struct ConingConfig {
    /// Unit-coefficient cycles in the ball are enumerated up to this length.
    pub exhaustive_to: usize,
    /// Random closed walks inside the ball (1-cycles only).
    pub samples: usize,
    pub max_walk: usize,
    pub seed: u64,
    pub budget: Budget,
}

impl Default for ConingConfig {
    fn default() -> Self {
        ConingConfig { exhaustive_to: 6, samples: 50, max_walk: 16, seed: 0, budget: Budget::from_env() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConingRow {
    pub r: u32,
    /// `max ‖fill z‖ / (r·|z|)` over the cycles examined.
    pub c_hat: BigRational,
    pub cycles: usize,
    pub worst_status: Option<FillingStatus>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConingReport {
    pub rows: Vec<ConingRow>,
    pub constant: BigRational,
}

impl ConingReport {
    /// `max c_hat / min c_hat` over the radii with a positive value.
    pub fn spread(&self) -> Option<f64> {
        let v: Vec<f64> = self.rows.iter().filter_map(|r| r.c_hat.to_f64()).filter(|&x| x > 0.0).collect();
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(0.0, f64::max);
        (!v.is_empty()).then(|| hi / lo)
    }
}

/// Coning ratios of cycles of dimension `1..=n` supported in `B_r(basepoint)`.
///
/// Cycles come from exhaustive enumeration, boundaries of metric balls inside
/// `B_r` and random closed walks inside `B_r`; fillings may use the whole complex.
pub fn check_coning(
    cx: &Complex,
    basepoint: u32,
    radii: &[u32],
    n: usize,
    ring: NormedRing,
    config: &ConingConfig,
) -> Result<ConingReport> {
    let metric = cx.metric().ok_or_else(|| Error::config("the coning check needs a vertex metric"))?;
    if n == 0 || n >= cx.dimension().max(1) {
        return Err(Error::contract(format!("coning needs 1 <= n < dim = {}", cx.dimension())));
    }
    if basepoint as usize >= cx.n_vertices() {
        return Err(Error::contract(format!("basepoint {basepoint} is not a vertex")));
    }
    let filler = Filler::new(cx).with_budget(config.budget);
    let mut rows = Vec::new();
    for &r in radii {
        if r == 0 {
            return Err(Error::contract("coning radii must be positive"));
        }
        let reach = r as i64 * metric.scale();
        let inside: Vec<bool> = (0..cx.n_vertices() as u32).map(|v| metric.raw(basepoint, v) as i64 <= reach).collect();
        let centers: Vec<u32> = (0..cx.n_vertices() as u32).filter(|&v| inside[v as usize]).collect();
        let mut zs: Vec<Chain> = Vec::new();
        for k in 1..=n {
            let mask: Vec<bool> = (0..cx.n_cells(k) as u32)
                .map(|c| cx.vertices(k, c).iter().all(|&v| inside[v as usize]))
                .collect();
            zs.extend(cycles::unit_circuits(cx, k, config.exhaustive_to, ring, Some(&mask)));
            zs.extend(cycles::ball_boundaries(cx, k, ring, &centers, r, Some(&inside))?);
            if k == 1 {
                zs.extend(cycles::random_walk_cycles(
                    cx,
                    ring,
                    config.max_walk,
                    config.samples,
                    config.seed ^ r as u64,
                    Some(&inside),
                )?);
            }
        }
        zs.retain(|z| !z.is_zero());
        let filled: Vec<FillingResult> = zs.par_iter().map(|z| filler.fill(z)).collect::<Result<_>>()?;
        let mut c_hat = BigRational::zero();
        let mut worst = None;
        let mut count = 0;
        let rr = BigRational::from_integer(r.into());
        for (z, f) in zs.iter().zip(&filled) {
            if f.status == FillingStatus::NotABoundary {
                continue;
            }
            count += 1;
            worst = worst.max(Some(f.status));
            if f.has_filling() {
                let ratio = &f.norm / (&rr * z.l1_norm());
                if ratio > c_hat {
                    c_hat = ratio;
                }
            }
        }
        rows.push(ConingRow { r, c_hat, cycles: count, worst_status: worst });
    }
    let constant = rows.iter().map(|r| r.c_hat.clone()).max().unwrap_or_default();
    Ok(ConingReport { rows, constant })
}
