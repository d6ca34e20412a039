//! Empirical isoperimetric profiles and the checks built on them.
//!
//! A profile records, for each length `l`, the largest filling norm found among
//! the `n`-cycles examined with `|z| ≤ l`. Up to the exhaustive length every
//! unit-coefficient cycle is examined; beyond it the values come from random
//! closed walks and probe families and are lower bounds.

mod axioms;
pub mod cycles;
mod growth;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::chains::{Chain, Complex};
use crate::error::{Error, Result};
use crate::rings::NormedRing;
use crate::solver::{ceil_rational, Budget, Filler, FillingResult, FillingStatus};

pub use axioms::{
    check_coning, check_rectangle, check_theta, theta_triples, ConingConfig, ConingReport, ConingRow,
    RectangleReport, ThetaReport,
};
pub use growth::{
    classify_points, subeuclidean_points, GrowthBands, GrowthClass, GrowthLabel, SubEuclideanReport, MIN_POINTS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntryMode {
    /// Every unit-coefficient cycle of this length was examined.
    Exhaustive,
    /// Lower bound from samples and probes.
    Sampled,
}

impl fmt::Display for EntryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntryMode::Exhaustive => "exhaustive",
            EntryMode::Sampled => "sampled",
        })
    }
}

impl FromStr for EntryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(EntryMode::Exhaustive),
            "sampled" => Ok(EntryMode::Sampled),
            _ => Err(Error::config(format!("unknown profile mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileEntry {
    pub l: usize,
    /// Largest filling norm among examined cycles with `|z| ≤ l`.
    pub f_hat: BigRational,
    pub mode: EntryMode,
    /// Cycles with `|z| = l` that were filled.
    pub samples: usize,
    /// Worst status among those fillings.
    pub worst_status: Option<FillingStatus>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoProfile {
    /// Fingerprint of the complex, as 16 hex digits.
    pub complex_id: String,
    pub dim: usize,
    pub ring: NormedRing,
    pub exhaustive_to: usize,
    pub seed: u64,
    pub entries: Vec<ProfileEntry>,
    /// Examined cycles that bound nothing.
    pub non_boundaries: usize,
}

impl IsoProfile {
    /// Points where `f_hat` strictly increases.
    pub fn envelope(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut last = BigRational::zero();
        for e in &self.entries {
            if e.f_hat > last {
                out.push((e.l as f64, e.f_hat.to_f64().unwrap_or(f64::INFINITY)));
                last = e.f_hat.clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.f_hat.is_zero())
    }

    /// Whether some underlying filling hit the budget.
    pub fn is_flagged(&self) -> bool {
        self.entries.iter().any(|e| matches!(e.worst_status, Some(s) if s != FillingStatus::Optimal))
    }
}

/// Metric balls whose boundaries are used as probe cycles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BallProbes {
    /// `None`: every vertex.
    pub centers: Option<Vec<u32>>,
    pub max_radius: u32,
}

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct ProfileConfig {
    pub exhaustive_to: usize,
    pub samples: usize,
    pub seed: u64,
    pub balls: Option<BallProbes>,
    /// Extra closed edge paths (1-cycles only).
    pub paths: Vec<Vec<u32>>,
    pub budget: Budget,
}


fn length(z: &Chain) -> usize {
    ceil_rational(&z.l1_norm()).to_usize().unwrap_or(usize::MAX)
}

struct Tally {
    best: Vec<BigRational>,
    samples: Vec<usize>,
    worst: Vec<Option<FillingStatus>>,
    non_boundaries: usize,
}

impl Tally {
    fn new(l_max: usize) -> Self {
        Tally {
            best: vec![BigRational::zero(); l_max + 1],
            samples: vec![0; l_max + 1],
            worst: vec![None; l_max + 1],
            non_boundaries: 0,
        }
    }

    fn record(&mut self, l: usize, r: &FillingResult) {
        if r.status == FillingStatus::NotABoundary {
            self.non_boundaries += 1;
            return;
        }
        self.samples[l] += 1;
        self.worst[l] = self.worst[l].max(Some(r.status));
        if r.has_filling() && r.norm > self.best[l] {
            self.best[l] = r.norm.clone();
        }
    }

    /// `max_{l' ≤ l} best[l']`.
    fn prefix(&self, l: usize) -> BigRational {
        self.best[..=l.min(self.best.len() - 1)].iter().max().cloned().unwrap_or_default()
    }
}

/// Isoperimetric profile of `complex` in dimension `n` for `1 ≤ l ≤ l_max`.
pub fn profile(
    complex: &Complex,
    n: usize,
    l_max: usize,
    ring: NormedRing,
    config: &ProfileConfig,
) -> Result<IsoProfile> {
    if n == 0 {
        return Err(Error::contract("profiles are defined for n >= 1"));
    }
    if n > complex.dimension().max(1) {
        return Err(Error::contract(format!("no {n}-cells in a complex of dimension {}", complex.dimension())));
    }
    if !config.paths.is_empty() && n != 1 {
        return Err(Error::contract("path probes are 1-cycles; use n = 1"));
    }
    let l_exh = config.exhaustive_to.min(l_max);
    let filler = Filler::new(complex).with_budget(config.budget);
    let mut tally = Tally::new(l_max);

    let circuits = cycles::unit_circuits(complex, n, l_exh, ring, None);
    let filled = fill_all(&filler, &circuits)?;
    for (z, r) in circuits.iter().zip(&filled) {
        tally.record(length(z), r);
    }
    composites(&filler, &circuits, &filled, l_exh, &mut tally)?;

    let mut others = if n == 1 {
        cycles::random_walk_cycles(complex, ring, l_max, config.samples, config.seed, None)?
    } else {
        cycles::random_boundaries(complex, n, ring, l_max.div_ceil(n + 2), config.samples, config.seed)?
    };
    if let Some(b) = &config.balls {
        let all: Vec<u32>;
        let centers = match &b.centers {
            Some(c) => c.as_slice(),
            None => {
                all = (0..complex.n_vertices() as u32).collect();
                &all
            }
        };
        others.extend(cycles::ball_boundaries(complex, n, ring, centers, b.max_radius, None)?);
    }
    for p in &config.paths {
        if p.first() != p.last() {
            return Err(Error::contract("probe paths must be closed"));
        }
        others.push(complex.path_chain(p, ring)?);
    }
    others.retain(|z| !z.is_zero() && length(z) <= l_max);
    let filled = fill_all(&filler, &others)?;
    for (z, r) in others.iter().zip(&filled) {
        tally.record(length(z), r);
    }

    let mut entries = Vec::with_capacity(l_max);
    let mut run = BigRational::zero();
    for l in 1..=l_max {
        if tally.best[l] > run {
            run = tally.best[l].clone();
        }
        entries.push(ProfileEntry {
            l,
            f_hat: run.clone(),
            mode: if l <= l_exh { EntryMode::Exhaustive } else { EntryMode::Sampled },
            samples: tally.samples[l],
            worst_status: tally.worst[l],
        });
    }
    Ok(IsoProfile {
        complex_id: format!("{:016x}", complex.fingerprint()),
        dim: n,
        ring,
        exhaustive_to: l_exh,
        seed: config.seed,
        entries,
        non_boundaries: tally.non_boundaries,
    })
}

fn fill_all(filler: &Filler, zs: &[Chain]) -> Result<Vec<FillingResult>> {
    zs.par_iter().map(|z| filler.fill(z)).collect()
}

/// Fill sums of disjoint circuits that could beat the current maxima.
///
/// A sum of cycles with disjoint supports has norm the sum of the norms and a
/// filling norm at most the sum of theirs, so only combinations whose summed
/// filling norms exceed the running maximum need an actual solve.
fn composites(
    filler: &Filler,
    circuits: &[Chain],
    filled: &[FillingResult],
    l_exh: usize,
    tally: &mut Tally,
) -> Result<()> {
    let mut list: Vec<(usize, f64, usize)> = circuits
        .iter()
        .zip(filled)
        .enumerate()
        .filter(|(_, (_, r))| r.has_filling())
        .map(|(i, (z, r))| (length(z), r.norm.to_f64().unwrap_or(f64::INFINITY), i))
        .collect();
    if list.len() < 2 {
        return Ok(());
    }
    list.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.2.cmp(&b.2)));
    let m_min = list.iter().map(|c| c.0).min().unwrap_or(1);
    // best connected value up to each length, and its superadditive closure
    let mut conn = vec![0.0f64; l_exh + 1];
    for &(l, v, _) in &list {
        conn[l] = conn[l].max(v);
    }
    for l in 1..=l_exh {
        conn[l] = conn[l].max(conn[l - 1]);
    }
    let mut upper = conn.clone();
    for x in 1..=l_exh {
        for y in 1..x {
            upper[x] = upper[x].max(conn[y] + upper[x - y]);
        }
    }
    let nk = circuits[0].dim();
    let mut used = vec![false; filler.complex().n_cells(nk)];
    let mut chosen = Vec::new();
    let mut search = Composite { filler, circuits, list: &list, upper: &upper, m_min, l_exh, tally };
    search.rec(0, 0, 0.0, &mut used, &mut chosen)
}

struct Composite<'a, 'b> {
    filler: &'a Filler<'b>,
    circuits: &'a [Chain],
    list: &'a [(usize, f64, usize)],
    upper: &'a [f64],
    m_min: usize,
    l_exh: usize,
    tally: &'a mut Tally,
}

impl Composite<'_, '_> {
    fn cur(&self, l: usize) -> f64 {
        self.tally.prefix(l.min(self.l_exh)).to_f64().unwrap_or(0.0)
    }

    fn rec(&mut self, start: usize, lc: usize, nc: f64, used: &mut [bool], chosen: &mut Vec<usize>) -> Result<()> {
        const EPS: f64 = 1e-9;
        for i in start..self.list.len() {
            let (len, norm, idx) = self.list[i];
            let rem_after_min = self.l_exh.saturating_sub(lc + self.m_min);
            if nc + norm + self.upper[rem_after_min] + EPS < self.cur(lc + self.m_min) {
                break;
            }
            if lc + len > self.l_exh {
                continue;
            }
            let z = &self.circuits[idx];
            if z.support().any(|c| used[c as usize]) {
                continue;
            }
            let (l2, n2) = (lc + len, nc + norm);
            chosen.push(idx);
            if chosen.len() >= 2 && n2 + EPS > self.cur(l2) {
                let sum = chosen.iter().skip(1).fold(self.circuits[chosen[0]].clone(), |a, &j| a.add(&self.circuits[j]));
                let r = self.filler.fill(&sum)?;
                self.tally.record(l2, &r);
            }
            let rem = self.l_exh - l2;
            if rem >= self.m_min && n2 + self.upper[rem] + EPS > self.cur(l2 + self.m_min) {
                for c in z.support() {
                    used[c as usize] = true;
                }
                self.rec(i + 1, l2, n2, used, chosen)?;
                for c in z.support() {
                    used[c as usize] = false;
                }
            }
            chosen.pop();
        }
        Ok(())
    }
}

/// Growth class of a profile from its envelope.
pub fn classify_growth(p: &IsoProfile, bands: &GrowthBands) -> Result<GrowthClass> {
    classify_points(&p.envelope(), p.dim, bands)
}

/// Sub-Euclidean check of a profile in its own dimension.
pub fn check_subeuclidean(p: &IsoProfile, n: usize, bands: &GrowthBands) -> Result<SubEuclideanReport> {
    if n != p.dim {
        return Err(Error::contract(format!("profile has dimension {}, asked for {n}", p.dim)));
    }
    subeuclidean_points(&p.envelope(), n, bands)
}

/// Single-point profile from explicit `(l, f_hat)` values, for synthetic data and tests.
pub fn synthetic_profile(dim: usize, ring: NormedRing, values: &[(usize, BigRational)]) -> IsoProfile {
    let l_max = values.iter().map(|v| v.0).max().unwrap_or(0);
    let mut entries = Vec::new();
    let mut run = BigRational::zero();
    for l in 1..=l_max {
        let here = values.iter().filter(|v| v.0 == l).map(|v| v.1.clone()).max();
        if let Some(h) = &here {
            if *h > run {
                run = h.clone();
            }
        }
        entries.push(ProfileEntry {
            l,
            f_hat: run.clone(),
            mode: EntryMode::Sampled,
            samples: usize::from(here.is_some()),
            worst_status: here.map(|_| FillingStatus::Optimal),
        });
    }
    IsoProfile {
        complex_id: "synthetic".into(),
        dim,
        ring,
        exhaustive_to: 0,
        seed: 0,
        entries,
        non_boundaries: 0,
    }
}
