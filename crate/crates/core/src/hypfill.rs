//! Linear fillings of 1-cycles in Rips complexes of hyperbolic spaces.
//!
//! The filler repeatedly takes the support vertex `v` farthest from the
//! basepoint and looks at its neighbours `u_1 < … < u_l` in `supp z`:
//!
//! 1. two neighbours, adjacent to each other: one triangle removes `v`;
//! 2. some adjacent pair: one triangle removes an edge at `v`;
//! 3. no adjacent pair: a vertex `u'` near the geodesic from `v` towards the
//!    basepoint is coned onto the star of `u_1` in `supp z`, after which case 1 or
//!    2 applies.
//!
//! Each vertex elimination uses at most `N = max{k+1, (k−1)(k+1)} + 1` triangles,
//! `k` the largest vertex degree, so `|c| ≤ N|z|` for the discrete norm.

use std::sync::Arc;

use num_rational::{BigRational, Rational64};
use num_traits::Zero;

use crate::builders::FiniteMetric;
use crate::chains::{Chain, Complex};
use crate::error::{Error, Result};
use crate::rings::{Coefficient, NormKind};
use crate::solver::{FillingResult, FillingStatus, SearchRegion};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    /// 1, 2 or 3.
    pub case: u8,
    pub v: u32,
    /// Case 1 and 2: `[u_i, u_j]`. Case 3: `[u_1, u']` followed by the coned neighbours.
    pub involved: Vec<u32>,
    /// The 2-chain whose boundary was subtracted.
    pub chain: Chain,
    pub norm_before: BigRational,
    pub norm_after: BigRational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn case_counts(&self) -> [usize; 3] {
        let mut n = [0; 3];
        for s in &self.steps {
            n[s.case as usize - 1] += 1;
        }
        n
    }
}

pub struct HyperbolicContext<'a> {
    complex: &'a Complex,
    metric: Arc<FiniteMetric>,
    d: Rational64,
    delta: Rational64,
    epsilon: Rational64,
    basepoint: u32,
    k: usize,
    margin: Rational64,
}

impl<'a> HyperbolicContext<'a> {
    /// Context for a Rips complex built by [`crate::builders::rips_complex`].
    pub fn new(complex: &'a Complex, delta: Rational64, epsilon: Rational64, basepoint: u32) -> Result<Self> {
        let d = complex
            .meta()
            .rips_scale
            .ok_or_else(|| Error::config("the linear filler needs a Rips complex (no edge threshold recorded)"))?;
        let metric = complex
            .meta()
            .metric
            .clone()
            .ok_or_else(|| Error::config("the linear filler needs the vertex metric of the Rips complex"))?;
        if delta < Rational64::zero() || epsilon < Rational64::zero() {
            return Err(Error::config("delta and epsilon must be nonnegative"));
        }
        let need = delta * 4 + epsilon * 2;
        if d <= need {
            return Err(Error::config(format!(
                "Rips threshold d = {d} must exceed 4*delta + 2*epsilon = {need}"
            )));
        }
        if complex.dimension() < 2 {
            return Err(Error::config("the Rips complex must contain its triangles (max_dim >= 2)"));
        }
        if basepoint as usize >= complex.n_vertices() {
            return Err(Error::config(format!("basepoint {basepoint} is not a vertex")));
        }
        Ok(HyperbolicContext {
            complex,
            metric,
            d,
            delta,
            epsilon,
            basepoint,
            k: complex.max_degree(),
            margin: Rational64::zero(),
        })
    }

    /// Required slack between the reach of the filler and the truncation radius.
    pub fn with_margin(mut self, margin: Rational64) -> Self {
        self.margin = margin;
        self
    }

    pub fn complex(&self) -> &'a Complex {
        self.complex
    }

    pub fn d(&self) -> Rational64 {
        self.d
    }

    pub fn delta(&self) -> Rational64 {
        self.delta
    }

    pub fn epsilon(&self) -> Rational64 {
        self.epsilon
    }

    pub fn basepoint(&self) -> u32 {
        self.basepoint
    }

    /// Largest vertex degree of the 1-skeleton.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn margin(&self) -> Rational64 {
        self.margin
    }
}

/// `max{k+1, (k−1)(k+1)} + 1`.
pub fn bound_for_degree(k: usize) -> u64 {
    let k = k as u64;
    (k + 1).max((k.max(1) - 1) * (k + 1)) + 1
}

pub fn linear_bound(ctx: &HyperbolicContext) -> u64 {
    bound_for_degree(ctx.k)
}

struct Run<'c, 'a> {
    ctx: &'c HyperbolicContext<'a>,
    z: Chain,
    c: Chain,
    trace: ReductionTrace,
}

fn fail(message: String, trace: &ReductionTrace) -> Error {
    Error::Certification { message, trace: Some(Box::new(trace.clone())) }
}

impl Run<'_, '_> {
    fn cx(&self) -> &Complex {
        self.ctx.complex
    }

    fn dist(&self, a: u32, b: u32) -> Rational64 {
        self.ctx.metric.distance(a, b)
    }

    fn adjacent(&self, a: u32, b: u32) -> bool {
        a != b && self.dist(a, b) <= self.ctx.d
    }

    fn edge(&self, a: u32, b: u32) -> Option<u32> {
        self.cx().find(&[a.min(b), a.max(b)])
    }

    /// Coefficient of the oriented edge `a → b`.
    fn coef(&self, a: u32, b: u32) -> Coefficient {
        let ring = self.z.ring();
        match self.edge(a, b).and_then(|e| self.z.get(e)) {
            Some(x) if a < b => x.clone(),
            Some(x) => ring.neg(x),
            None => ring.zero(),
        }
    }

    fn neighbours(&self, v: u32) -> Vec<u32> {
        let cx = self.cx();
        let mut out: Vec<u32> = cx
            .cofaces(0, v)
            .filter(|&(e, _)| self.z.get(e).is_some())
            .map(|(e, _)| cx.vertices(1, e).iter().copied().find(|&w| w != v).expect("edge"))
            .collect();
        out.sort_unstable();
        out
    }

    fn support_vertices(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.z.support().flat_map(|e| self.cx().vertices(1, e).to_vec()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// `r·⟨a,b,c⟩` as a chain on the canonically oriented triangle.
    fn triangle(&self, a: u32, b: u32, c: u32, r: &Coefficient) -> Result<Chain> {
        let ring = self.z.ring();
        let mut t = [a, b, c];
        let mut sign = 1i8;
        for i in 0..3 {
            for j in i + 1..3 {
                if t[i] > t[j] {
                    sign = -sign;
                }
            }
        }
        t.sort_unstable();
        let id = self
            .cx()
            .find(&t)
            .ok_or_else(|| fail(format!("triangle {t:?} is missing from the Rips complex"), &self.trace))?;
        let mut ch = Chain::zero(ring, 2);
        ch.add_term(id, &ring.signed(r, sign));
        Ok(ch)
    }

    fn apply(&mut self, case: u8, v: u32, involved: Vec<u32>, chain: Chain) -> Result<()> {
        let before = self.z.l1_norm();
        let b = self.cx().boundary(&chain)?;
        self.z = self.z.sub(&b);
        self.c = self.c.add(&chain);
        let after = self.z.l1_norm();
        self.trace.steps.push(ReductionStep { case, v, involved, chain, norm_before: before, norm_after: after });
        Ok(())
    }

    /// Vertex playing `u'` for the star of `u` around `v`.
    fn cone_point(&self, v: u32, u: u32, others: &[u32], supp: &[u32]) -> Option<u32> {
        let reach = self.ctx.d + self.ctx.delta * 2;
        let near: Vec<u32> = supp.iter().copied().filter(|&x| self.dist(x, u) <= reach).collect();
        let valid = |w: u32| {
            w != u
                && near.iter().all(|&x| x == w || self.dist(x, w) <= self.ctx.d)
                && others.iter().all(|&x| self.adjacent(x, w))
        };
        let path = self.ctx.metric.geodesic(v, self.ctx.basepoint)?;
        let half = self.ctx.d / 2;
        let steps = (half.numer() * 2 + half.denom()) / (half.denom() * 2);
        let pos = path[(steps.max(0) as usize).min(path.len() - 1)];
        if valid(pos) {
            return Some(pos);
        }
        let r = self.ctx.epsilon + 1;
        self.ctx.metric.ball(pos, r).into_iter().filter(|&w| valid(w)).min()
    }

    fn step(&mut self) -> Result<()> {
        let ring = self.z.ring();
        let x0 = self.ctx.basepoint;
        let supp = self.support_vertices();
        let v = *supp
            .iter()
            .max_by(|&&a, &&b| self.ctx.metric.raw(a, x0).cmp(&self.ctx.metric.raw(b, x0)).then(b.cmp(&a)))
            .expect("nonzero cycle");
        let us = self.neighbours(v);
        if us.len() < 2 {
            return Err(fail(format!("vertex {v} has fewer than two neighbours in a cycle"), &self.trace));
        }
        if us.len() == 2 && self.adjacent(us[0], us[1]) {
            let r = self.coef(us[0], v);
            let t = self.triangle(us[0], v, us[1], &r)?;
            return self.apply(1, v, vec![us[0], us[1]], t);
        }
        for i in 0..us.len() {
            for j in i + 1..us.len() {
                if self.adjacent(us[i], us[j]) {
                    let r = self.coef(us[i], v);
                    let t = self.triangle(us[i], v, us[j], &r)?;
                    return self.apply(2, v, vec![us[i], us[j]], t);
                }
            }
        }
        let far = self.dist(v, x0) - self.ctx.delta * 2;
        let u1 = *us
            .iter()
            .find(|&&u| self.dist(u, x0) >= far)
            .ok_or_else(|| fail(format!("no neighbour of {v} is far enough from the basepoint"), &self.trace))?;
        let others: Vec<u32> = us.iter().copied().filter(|&u| u != u1).collect();
        let u_ = self
            .cone_point(v, u1, &others, &supp)
            .ok_or_else(|| fail(format!("no cone point for the star of {u1} at {v}"), &self.trace))?;
        let star: Vec<u32> = self.neighbours(u1).into_iter().filter(|&x| x != u_).collect();
        let mut chain = Chain::zero(ring, 2);
        for &x in &star {
            let r = self.coef(u1, x);
            chain = chain.add(&self.triangle(u1, x, u_, &r)?);
        }
        let mut involved = vec![u1, u_];
        involved.extend(&star);
        self.apply(3, v, involved, chain)?;
        if !ring.is_zero(&self.coef(u1, u_)) {
            return Err(fail(format!("edge ({u1}, {u_}) kept a nonzero coefficient after coning"), &self.trace));
        }
        Ok(())
    }
}

/// Fill the 1-cycle `z` by the reduction above.
///
/// For the discrete norm the result satisfies `|c| ≤ N|z|`, or a certification
/// error carrying the trace is returned. For the absolute norm the bound is not
/// checked.
pub fn linear_fill(ctx: &HyperbolicContext, z: &Chain) -> Result<(FillingResult, ReductionTrace)> {
    let cx = ctx.complex;
    if z.dim() != 1 {
        return Err(Error::contract("the linear filler works on 1-cycles"));
    }
    if !cx.is_cycle(z)? {
        return Err(Error::contract("linear_fill needs a cycle"));
    }
    let ring = z.ring();
    let mut run = Run { ctx, z: z.clone(), c: Chain::zero(ring, 2), trace: ReductionTrace::default() };
    if let Some(t) = ctx.metric.truncation() {
        let rho = run
            .support_vertices()
            .into_iter()
            .map(|x| ctx.metric.distance(x, ctx.basepoint))
            .max()
            .unwrap_or_default();
        let reach = ctx.metric.distance(t.center, ctx.basepoint) + rho + ctx.margin;
        if reach > Rational64::from_integer(t.radius as i64) {
            return Err(Error::Margin(format!(
                "support reaches {reach} from the centre (including margin {}), truncation radius is {}",
                ctx.margin, t.radius
            )));
        }
    }
    let certified = ring.norm_kind() == NormKind::Discrete;
    let limit = linear_bound(ctx) as u128 * z.support_len() as u128;
    let mut used: u128 = 0;
    while !run.z.is_zero() {
        run.step()?;
        used += run.trace.steps.last().map_or(0, |s| s.chain.support_len()) as u128;
        if certified && used > limit {
            return Err(fail(
                format!("used {used} triangles, more than N*|z| = {limit}; delta or d may be mis-estimated"),
                &run.trace,
            ));
        }
        if !certified && run.trace.len() as u128 > 4 * limit + 16 {
            return Err(fail("reduction does not terminate".into(), &run.trace));
        }
    }
    if cx.boundary(&run.c)? != *z {
        return Err(fail("accumulated filling has the wrong boundary".into(), &run.trace));
    }
    let norm = run.c.l1_norm();
    let result = FillingResult {
        region: SearchRegion { depth: 0, cells: run.c.support_len(), full: false },
        filling: run.c,
        norm,
        status: FillingStatus::UpperBound,
        nodes: run.trace.len() as u64,
    };
    Ok((result, run.trace))
}
