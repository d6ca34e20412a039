//! Exact minimal fillings.
//!
//! Given an `n`-cycle `z`, find an `(n+1)`-chain `c` with `∂c = z` and least
//! ℓ¹-norm. The search starts in `hull(supp z)` and grows the region one
//! neighbourhood at a time. Within a region:
//!
//! - if the boundary columns are independent (tested over `F_p`, `p = 2^61 − 1`,
//!   or over each prime dividing `m` for `Z/m`) the filling is unique and is solved
//!   for directly;
//! - otherwise the discrete norm uses a search over supports, `Z` with the
//!   absolute value an exact LP relaxation followed by a search over coefficients,
//!   and `Q` with the absolute value the exact LP.
//!
//! A result is `Optimal` when the region reached a fixed point of expansion, when
//! the boundary map of the whole complex is injective, or when a search over the
//! whole complex rules out anything cheaper.

mod support;
mod system;
mod value;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::chains::{Chain, Complex};
use crate::error::{Error, Result};
use crate::linalg::{self, Column, PRIME};
use crate::rings::{Coefficient, NormKind, NormedRing, RingKind};
use support::SupportSearch;
pub(crate) use system::ceil_rational;
use system::{LocalSystem, Unique};
use value::ValueSearch;

/// Environment variable holding the default node budget.
pub const BUDGET_ENV: &str = "HOMFILL_BUDGET_NODES";

/// Node budget used when neither a flag nor the environment sets one.
pub const DEFAULT_BUDGET_NODES: u64 = 2_000_000;

/// Largest boundary map tested for injectivity as a whole.
const GLOBAL_RANK_LIMIT: usize = 6000;

/// Largest dense tableau handed to the exact LP.
const LP_LIMIT: usize = 250_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FillingStatus {
    /// No filling of smaller norm exists.
    Optimal,
    /// A filling was found but the search stopped before certifying it.
    UpperBound,
    /// The search stopped before finding any filling.
    InfeasibleWithinBudget,
    /// Certified: the cycle bounds nothing in this complex.
    NotABoundary,
}

impl fmt::Display for FillingStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FillingStatus::Optimal => "optimal",
            FillingStatus::UpperBound => "upper_bound",
            FillingStatus::InfeasibleWithinBudget => "infeasible_within_budget",
            FillingStatus::NotABoundary => "not_a_boundary",
        })
    }
}

impl std::str::FromStr for FillingStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "optimal" => FillingStatus::Optimal,
            "upper_bound" => FillingStatus::UpperBound,
            "infeasible_within_budget" => FillingStatus::InfeasibleWithinBudget,
            "not_a_boundary" => FillingStatus::NotABoundary,
            _ => return Err(Error::config(format!("unknown filling status {s:?}"))),
        })
    }
}

/// Where the reported filling was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchRegion {
    /// Number of neighbourhood expansions applied to `hull(supp z)`.
    pub depth: usize,
    /// `(n+1)`-cells in the final region.
    pub cells: usize,
    /// The certificate covers the whole complex.
    pub full: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillingResult {
    /// An `(n+1)`-chain with boundary `z`; zero when no filling was found.
    pub filling: Chain,
    pub norm: BigRational,
    pub status: FillingStatus,
    pub region: SearchRegion,
    /// Search nodes explored.
    pub nodes: u64,
}

impl FillingResult {
    /// Whether `filling` is a genuine filling.
    pub fn has_filling(&self) -> bool {
        matches!(self.status, FillingStatus::Optimal | FillingStatus::UpperBound)
    }
}

/// Caps on the search effort of one filling problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub nodes: u64,
    pub millis: Option<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_env()
    }
}

impl Budget {
    pub fn nodes(nodes: u64) -> Self {
        Budget { nodes, millis: None }
    }

    /// Node budget from `HOMFILL_BUDGET_NODES`, else [`DEFAULT_BUDGET_NODES`].
    pub fn from_env() -> Self {
        let nodes = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET_NODES);
        Budget { nodes, millis: None }
    }
}

pub(crate) struct Meter {
    used: u64,
    limit: u64,
    deadline: Option<Instant>,
    out: bool,
}

impl Meter {
    fn new(b: Budget) -> Self {
        Meter {
            used: 0,
            limit: b.nodes,
            deadline: b.millis.map(|ms| Instant::now() + Duration::from_millis(ms)),
            out: false,
        }
    }

    /// Count one node; false once the budget is spent.
    pub(crate) fn tick(&mut self) -> bool {
        if self.out {
            return false;
        }
        self.used += 1;
        if self.used > self.limit {
            self.out = true;
        } else if self.used.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                self.out = Instant::now() >= d;
            }
        }
        !self.out
    }
}

/// Outcome of one bounded probe of an iterative-deepening search.
pub(crate) enum Probe {
    Found(Chain),
    /// Nothing within the bound, but the bound cut the search.
    NotFound,
    /// Nothing at all: the whole space was explored.
    Empty,
    Exhausted,
}

enum RegionOutcome {
    Found(Chain, BigRational),
    /// No filling supported in the region.
    None,
    /// Nothing in the region beats the incumbent.
    NoBetter,
    Exhausted,
    /// Budget ran out after finding this filling.
    Partial(Chain, BigRational),
}

/// Solves filling problems in one complex, caching facts about the complex between calls.
pub struct Filler<'a> {
    complex: &'a Complex,
    budget: Budget,
    injective: Mutex<HashMap<(usize, u64), bool>>,
}

impl<'a> Filler<'a> {
    pub fn new(complex: &'a Complex) -> Self {
        Filler { complex, budget: Budget::from_env(), injective: Mutex::new(HashMap::new()) }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn complex(&self) -> &'a Complex {
        self.complex
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// Whether `∂_k` of the whole complex is injective over the ring, when cheap to decide.
    fn globally_injective(&self, k: usize, ring: NormedRing) -> Option<bool> {
        let cx = self.complex;
        if cx.n_cells(k + 1) > 0 || cx.n_cells(k) > cx.n_cells(k - 1) {
            return Some(false);
        }
        if cx.n_cells(k) > GLOBAL_RANK_LIMIT {
            return None;
        }
        let primes = match ring.kind() {
            RingKind::IntegersMod(m) => linalg::prime_factors(m),
            _ => vec![PRIME],
        };
        let mut cache = self.injective.lock().expect("cache lock");
        let cols: Vec<Column> = (0..cx.n_cells(k) as u32)
            .map(|c| cx.faces(k, c).map(|(f, s)| (f, s as i64)).collect())
            .collect();
        let mut all = true;
        for p in primes {
            let inj = *cache
                .entry((k, p))
                .or_insert_with(|| linalg::rank_mod(&cols, cx.n_cells(k - 1), p) == cols.len());
            all &= inj;
        }
        Some(all)
    }

    /// Minimal filling of the cycle `z`.
    pub fn fill(&self, z: &Chain) -> Result<FillingResult> {
        let cx = self.complex;
        if z.dim() == 0 {
            return Err(Error::contract("fillings are defined for cycles of dimension at least 1"));
        }
        if !cx.is_cycle(z)? {
            return Err(Error::contract("exact_filling needs a cycle"));
        }
        let ring = z.ring();
        let k = z.dim() + 1;
        let mut meter = Meter::new(self.budget);
        let empty = |status, region| FillingResult {
            filling: Chain::zero(ring, k),
            norm: BigRational::zero(),
            status,
            region,
            nodes: 0,
        };
        if z.is_zero() {
            return Ok(empty(FillingStatus::Optimal, SearchRegion { depth: 0, cells: 0, full: false }));
        }
        if k > cx.dimension() {
            return Ok(empty(FillingStatus::NotABoundary, SearchRegion { depth: 0, cells: 0, full: true }));
        }
        let dist = vertex_distances(cx, z);
        let global = self.globally_injective(k, ring);
        let mut region = cx.support_hull(z);
        let mut depth = 0usize;
        let mut best: Option<(Chain, BigRational)> = None;
        let mut unchanged = 0usize;
        let finish = |best: Option<(Chain, BigRational)>, status, region, meter: &Meter| {
            let (filling, norm) = best.unwrap_or_else(|| (Chain::zero(ring, k), BigRational::zero()));
            FillingResult { filling, norm, status, region, nodes: meter.used.min(meter.limit) }
        };
        loop {
            let cells: Vec<u32> = region.cells(k).collect();
            let here = SearchRegion { depth, cells: cells.len(), full: false };
            let mask = region.mask(cx, k);
            let outcome = self.solve_region(z, Some(&mask), &cells, best.as_ref().map(|b| &b.1), &dist, &mut meter)?;
            match outcome {
                RegionOutcome::Found(c, v) => {
                    best = Some((c, v));
                    unchanged = 0;
                }
                RegionOutcome::None | RegionOutcome::NoBetter => {
                    if best.is_some() {
                        unchanged += 1;
                    }
                }
                RegionOutcome::Partial(c, v) => {
                    return Ok(finish(Some((c, v)), FillingStatus::UpperBound, here, &meter));
                }
                RegionOutcome::Exhausted => {
                    let status = if best.is_some() {
                        FillingStatus::UpperBound
                    } else {
                        FillingStatus::InfeasibleWithinBudget
                    };
                    return Ok(finish(best, status, here, &meter));
                }
            }
            if global == Some(true) && best.is_some() {
                let region = SearchRegion { full: true, ..here };
                return Ok(finish(best, FillingStatus::Optimal, region, &meter));
            }
            let next = cx.expand_neighborhood(&region);
            if next.total_cells() == region.total_cells() {
                let status = if best.is_some() { FillingStatus::Optimal } else { FillingStatus::NotABoundary };
                return Ok(finish(best, status, here, &meter));
            }
            if unchanged >= 2 && depth >= 2 {
                let full = SearchRegion { depth, cells: cx.n_cells(k), full: true };
                let incumbent = best.as_ref().map(|b| b.1.clone());
                let all: Vec<u32> = (0..cx.n_cells(k) as u32).collect();
                return Ok(match self.solve_region(z, None, &all, incumbent.as_ref(), &dist, &mut meter)? {
                    RegionOutcome::Found(c, v) => finish(Some((c, v)), FillingStatus::Optimal, full, &meter),
                    RegionOutcome::NoBetter | RegionOutcome::None => {
                        finish(best, FillingStatus::Optimal, full, &meter)
                    }
                    RegionOutcome::Exhausted => finish(best, FillingStatus::UpperBound, here, &meter),
                    RegionOutcome::Partial(c, v) => finish(Some((c, v)), FillingStatus::UpperBound, here, &meter),
                });
            }
            region = next;
            depth += 1;
        }
    }

    /// Best filling supported on `cells`. `allowed = None` means the whole complex,
    /// where only the searches run (no dense linear algebra).
    fn solve_region(
        &self,
        z: &Chain,
        allowed: Option<&[bool]>,
        cells: &[u32],
        incumbent: Option<&BigRational>,
        dist: &[u32],
        meter: &mut Meter,
    ) -> Result<RegionOutcome> {
        let cx = self.complex;
        let ring = z.ring();
        let k = z.dim() + 1;
        if cells.is_empty() {
            return Ok(RegionOutcome::None);
        }
        let better = |v: &BigRational| incumbent.is_none_or(|b| v < b);
        let found = |c: Chain| {
            let v = c.l1_norm();
            if better(&v) {
                RegionOutcome::Found(c, v)
            } else {
                RegionOutcome::NoBetter
            }
        };
        let small = cells.len() <= GLOBAL_RANK_LIMIT;
        let sys = if allowed.is_some() || small { Some(LocalSystem::new(cx, z, cells)) } else { None };
        if let Some(sys) = &sys {
            if !meter.tick() {
                return Ok(RegionOutcome::Exhausted);
            }
            match sys.solve_unique(ring) {
                Unique::Solution(x) => return Ok(found(sys.chain(ring, k, &x))),
                Unique::Infeasible => return Ok(RegionOutcome::None),
                Unique::NotInjective => {}
            }
        }
        let cap = incumbent.map(|b| ceil_rational(b).to_i64().unwrap_or(i64::MAX) - 1);
        match (ring.norm_kind(), ring.kind()) {
            (NormKind::Discrete, _) => {
                let mut search = SupportSearch::new(cx, z, allowed, dist);
                let start = search.lower_bound();
                Ok(deepen(start as i64, cap, incumbent.is_some(), |b| search.probe(b as usize, meter), found))
            }
            (NormKind::Absolute, RingKind::Integers) => {
                let mut start = 0i64;
                let mut cap = cap;
                let mut fallback = None;
                if let Some(sys) = sys.as_ref().filter(|s| s.dense_size() <= LP_LIMIT) {
                    let Some((x, v)) = sys.min_l1() else {
                        return Ok(RegionOutcome::None);
                    };
                    if x.iter().all(|q| q.is_integer()) {
                        let xs: Vec<Coefficient> = x.iter().map(|q| ring.from_bigint(&q.to_integer())).collect();
                        return Ok(found(sys.chain(ring, k, &xs)));
                    }
                    start = ceil_rational(&v).to_i64().unwrap_or(i64::MAX);
                    if cap.is_none() {
                        // any integral filling caps the search
                        let Some(x) = sys.solve_any(ring) else {
                            return Ok(RegionOutcome::None);
                        };
                        let c = sys.chain(ring, k, &x);
                        let v = c.l1_norm();
                        let u = ceil_rational(&v).to_i64().unwrap_or(i64::MAX);
                        if u <= start {
                            return Ok(found(c));
                        }
                        cap = Some(u - 1);
                        fallback = Some((c, v));
                    }
                }
                let mut search = ValueSearch::new(cx, z, allowed, dist)?;
                let lb = start.max(search.lower_bound());
                let has = incumbent.is_some() || fallback.is_some();
                let out = deepen(lb, cap, has, |b| search.probe(b, meter), found);
                Ok(match (out, fallback) {
                    (RegionOutcome::NoBetter | RegionOutcome::None, Some((c, v))) => RegionOutcome::Found(c, v),
                    (RegionOutcome::Exhausted, Some((c, v))) => RegionOutcome::Partial(c, v),
                    (out, _) => out,
                })
            }
            (NormKind::Absolute, _) => match sys.as_ref().filter(|s| s.dense_size() <= 4 * LP_LIMIT) {
                Some(sys) => Ok(match sys.min_l1() {
                    None => RegionOutcome::None,
                    Some((x, _)) => {
                        let xs: Vec<Coefficient> = x.into_iter().map(Coefficient::Rational).collect();
                        found(sys.chain(ring, k, &xs))
                    }
                }),
                None => Ok(RegionOutcome::Exhausted),
            },
        }
    }
}

/// Iterative deepening from `start` up to `cap` inclusive (unbounded without a cap).
fn deepen(
    start: i64,
    cap: Option<i64>,
    has_incumbent: bool,
    mut probe: impl FnMut(i64) -> Probe,
    found: impl Fn(Chain) -> RegionOutcome,
) -> RegionOutcome {
    let none = || if has_incumbent { RegionOutcome::NoBetter } else { RegionOutcome::None };
    let mut b = start;
    loop {
        if cap.is_some_and(|c| b > c) {
            return none();
        }
        match probe(b) {
            Probe::Found(c) => return found(c),
            Probe::Empty => return none(),
            Probe::Exhausted => return RegionOutcome::Exhausted,
            Probe::NotFound => b += 1,
        }
    }
}

/// Breadth-first distance of every vertex from the vertices of `supp z`.
fn vertex_distances(cx: &Complex, z: &Chain) -> Vec<u32> {
    let mut dist = vec![u32::MAX; cx.n_vertices()];
    let mut queue = VecDeque::new();
    for c in z.support() {
        for &v in cx.vertices(z.dim(), c) {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = 0;
                queue.push_back(v);
            }
        }
    }
    while let Some(u) = queue.pop_front() {
        for (e, _) in cx.cofaces(0, u) {
            let w = cx.vertices(1, e).iter().copied().find(|&w| w != u).expect("edge");
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[u as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Minimal filling of `z` in `complex` under `budget`. See [`Filler::fill`].
pub fn exact_filling(complex: &Complex, z: &Chain, budget: Budget) -> Result<FillingResult> {
    Filler::new(complex).with_budget(budget).fill(z)
}

/// Area of a closed edge path: the minimal filling of the 1-chain it traces.
pub fn area(complex: &Complex, path: &[u32], ring: NormedRing, budget: Budget) -> Result<FillingResult> {
    Filler::new(complex).with_budget(budget).area(path, ring)
}

impl Filler<'_> {
    pub fn area(&self, path: &[u32], ring: NormedRing) -> Result<FillingResult> {
        if path.first() != path.last() {
            return Err(Error::contract("area needs a closed edge path"));
        }
        let z = self.complex.path_chain(path, ring)?;
        self.fill(&z)
    }
}

/// Integer value of a norm, for reports.
pub fn norm_as_integer(norm: &BigRational) -> Option<BigInt> {
    norm.is_integer().then(|| norm.to_integer())
}

#[cfg(test)]
mod tests;
