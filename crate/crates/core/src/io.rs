//! Line-oriented text formats for complexes, chains, fill summaries, reduction
//! traces, profiles and plot data.
//!
//! Writers emit canonical text (cells in lexicographic order, fixed key order), so
//! reading a file and writing it back reproduces it byte for byte. Readers skip
//! blank lines and lines starting with `#`, except where noted.

use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::{BigRational, Rational64};

use crate::builders::{FiniteMetric, Truncation};
use crate::chains::{Chain, Complex};
use crate::error::{Error, Result};
use crate::hypfill::{ReductionStep, ReductionTrace};
use crate::profiler::{EntryMode, GrowthClass, IsoProfile, ProfileEntry};
use crate::rings::NormedRing;
use crate::solver::FillingStatus;

const COMPLEX_HEADER: &str = "homfill complex";
const CHAIN_HEADER: &str = "homfill chain";
const TRACE_HEADER: &str = "homfill trace";
const PROFILE_HEADER: &str = "l,f_hat,mode,samples,worst_status";

/// Numbered significant lines of a text.
struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Lines { inner: it.peekable(), last: 0 }
    }

    fn next(&mut self) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(Error::parse(self.last + 1, "unexpected end of file")),
        }
    }

    fn peek(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|&(_, l)| l)
    }

    fn done(&mut self) -> Result<()> {
        match self.inner.next() {
            None => Ok(()),
            Some((n, l)) => Err(Error::parse(n, format!("unexpected line {l:?}"))),
        }
    }

    /// `key value` with the given key; returns the value.
    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, l) = self.next()?;
        match l.split_once(char::is_whitespace) {
            Some((k, v)) if k == key => Ok((n, v.trim())),
            _ if l == key => Ok((n, "")),
            _ => Err(Error::parse(n, format!("expected {key:?}, found {l:?}"))),
        }
    }

    fn header(&mut self, h: &str) -> Result<()> {
        let (n, l) = self.next()?;
        if l != h {
            return Err(Error::parse(n, format!("expected header {h:?}")));
        }
        Ok(())
    }
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::parse(line, format!("cannot read {s:?} as a number")))
}

fn ids(line: usize, s: &str) -> Result<Vec<u32>> {
    s.split_whitespace().map(|t| num(line, t)).collect()
}

pub fn write_complex(cx: &Complex) -> String {
    let mut out = String::new();
    let meta = cx.meta();
    writeln!(out, "{COMPLEX_HEADER}").unwrap();
    writeln!(out, "dimension {}", cx.dimension()).unwrap();
    writeln!(out, "vertices {}", cx.n_vertices()).unwrap();
    for k in 1..=cx.dimension() {
        writeln!(out, "cells {k} {}", cx.n_cells(k)).unwrap();
        for id in 0..cx.n_cells(k) as u32 {
            let v: Vec<String> = cx.vertices(k, id).iter().map(u32::to_string).collect();
            writeln!(out, "{}", v.join(" ")).unwrap();
        }
    }
    if let Some(d) = meta.rips_scale {
        writeln!(out, "rips_scale {d}").unwrap();
    }
    if let Some(n) = meta.attaching_edges {
        writeln!(out, "attaching_edges {n}").unwrap();
    }
    writeln!(out, "certified {}", meta.certified).unwrap();
    if let Some(m) = &meta.metric {
        write_metric(&mut out, m);
    }
    out
}

fn write_metric(out: &mut String, m: &FiniteMetric) {
    match m.graph() {
        Some(adj) => {
            let edges: Vec<(usize, u32)> = adj
                .iter()
                .enumerate()
                .flat_map(|(u, a)| a.iter().filter(move |&&v| v as usize > u).map(move |&v| (u, v)))
                .collect();
            writeln!(out, "metric graph {} {}", m.len(), edges.len()).unwrap();
            for (u, v) in edges {
                writeln!(out, "{u} {v}").unwrap();
            }
        }
        None => {
            writeln!(out, "metric matrix {}", m.len()).unwrap();
            for u in 0..m.len() as u32 {
                let row: Vec<String> = (0..m.len() as u32).map(|v| m.distance(u, v).to_string()).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
        }
    }
    if let Some(t) = m.truncation() {
        writeln!(out, "truncation {} {}", t.center, t.radius).unwrap();
    }
}

pub fn read_complex(text: &str) -> Result<Complex> {
    let mut lines = Lines::new(text);
    lines.header(COMPLEX_HEADER)?;
    let (n, v) = lines.keyed("dimension")?;
    let dim: usize = num(n, v)?;
    let (n, v) = lines.keyed("vertices")?;
    let nv: usize = num(n, v)?;
    let mut simplices: Vec<Vec<u32>> = (0..nv as u32).map(|v| vec![v]).collect();
    let mut listed = vec![0usize; dim + 1];
    for k in 1..=dim {
        let (n, v) = lines.keyed("cells")?;
        let parts = ids(n, v)?;
        if parts.len() != 2 || parts[0] as usize != k {
            return Err(Error::parse(n, format!("expected \"cells {k} COUNT\"")));
        }
        listed[k] = parts[1] as usize;
        for _ in 0..parts[1] {
            let (n, l) = lines.next()?;
            let s = ids(n, l)?;
            if s.len() != k + 1 || s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse(n, format!("expected {} ascending vertex ids", k + 1)));
            }
            simplices.push(s);
        }
    }
    let mut cx = Complex::from_simplices(nv, simplices)?;
    if cx.dimension() != dim && !(dim > 0 && listed[dim] == 0) {
        return Err(Error::parse(lines.last, "declared dimension does not match the cells"));
    }
    for (k, &count) in listed.iter().enumerate().skip(1) {
        if cx.n_cells(k) != count {
            return Err(Error::parse(lines.last, format!("cells of dimension {k} are not closed under faces")));
        }
    }
    if lines.peek().is_some_and(|l| l.starts_with("rips_scale")) {
        let (n, v) = lines.keyed("rips_scale")?;
        cx.meta_mut().rips_scale = Some(num::<Rational64>(n, v)?);
    }
    if lines.peek().is_some_and(|l| l.starts_with("attaching_edges")) {
        let (n, v) = lines.keyed("attaching_edges")?;
        cx.meta_mut().attaching_edges = Some(num(n, v)?);
    }
    let (n, v) = lines.keyed("certified")?;
    cx.meta_mut().certified = num(n, v)?;
    if lines.peek().is_some() {
        let m = read_metric(&mut lines)?;
        if m.len() != nv {
            return Err(Error::parse(lines.last, "metric size differs from the vertex count"));
        }
        cx = cx.with_metric(Arc::new(m));
    }
    lines.done()?;
    Ok(cx)
}

fn read_metric(lines: &mut Lines<'_>) -> Result<FiniteMetric> {
    let (n, v) = lines.keyed("metric")?;
    let mut parts = v.split_whitespace();
    let kind = parts.next().unwrap_or_default();
    let rest: Vec<usize> = parts.map(|t| num(n, t)).collect::<Result<_>>()?;
    let mut m = match (kind, rest.as_slice()) {
        ("graph", &[points, count]) => {
            let mut edges = Vec::with_capacity(count);
            for _ in 0..count {
                let (n, l) = lines.next()?;
                match ids(n, l)?.as_slice() {
                    &[a, b] => edges.push((a, b)),
                    _ => return Err(Error::parse(n, "expected an edge \"u v\"")),
                }
            }
            FiniteMetric::from_graph(points, edges)?
        }
        ("matrix", &[points]) => {
            let mut rows = Vec::with_capacity(points);
            for _ in 0..points {
                let (n, l) = lines.next()?;
                let row: Vec<Rational64> = l.split_whitespace().map(|t| num(n, t)).collect::<Result<_>>()?;
                rows.push(row);
            }
            FiniteMetric::from_matrix(&rows)?
        }
        _ => return Err(Error::parse(n, "expected \"metric graph N E\" or \"metric matrix N\"")),
    };
    if lines.peek().is_some_and(|l| l.starts_with("truncation")) {
        let (n, v) = lines.keyed("truncation")?;
        match ids(n, v)?.as_slice() {
            &[center, radius] => m = m.with_truncation(Truncation { center, radius }),
            _ => return Err(Error::parse(n, "expected \"truncation CENTER RADIUS\"")),
        }
    }
    Ok(m)
}

fn write_terms(out: &mut String, c: &Chain) {
    writeln!(out, "terms {}", c.support_len()).unwrap();
    for (id, x) in c.iter() {
        writeln!(out, "{id} {}", c.ring().format_coefficient(x)).unwrap();
    }
}

fn read_terms(lines: &mut Lines<'_>, ring: NormedRing, dim: usize) -> Result<Chain> {
    let (n, v) = lines.keyed("terms")?;
    let count: usize = num(n, v)?;
    let mut c = Chain::zero(ring, dim);
    for _ in 0..count {
        let (n, l) = lines.next()?;
        let (id, x) = l.split_once(char::is_whitespace).ok_or_else(|| Error::parse(n, "expected \"ID COEFF\""))?;
        let id: u32 = num(n, id)?;
        let x = ring.parse_coefficient(x).map_err(|e| Error::parse(n, e.to_string()))?;
        if c.get(id).is_some() {
            return Err(Error::parse(n, format!("cell {id} listed twice")));
        }
        c.add_term(id, &x);
    }
    Ok(c)
}

pub fn write_chain(c: &Chain) -> String {
    let mut out = String::new();
    writeln!(out, "{CHAIN_HEADER}").unwrap();
    writeln!(out, "ring {}", c.ring()).unwrap();
    writeln!(out, "dimension {}", c.dim()).unwrap();
    write_terms(&mut out, c);
    out
}

pub fn read_chain(text: &str) -> Result<Chain> {
    let mut lines = Lines::new(text);
    lines.header(CHAIN_HEADER)?;
    let (n, v) = lines.keyed("ring")?;
    let ring: NormedRing = v.parse().map_err(|e: Error| Error::parse(n, e.to_string()))?;
    let (n, v) = lines.keyed("dimension")?;
    let dim = num(n, v)?;
    let c = read_terms(&mut lines, ring, dim)?;
    lines.done()?;
    Ok(c)
}

/// `key: value` lines in the given order.
pub fn write_record(fields: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in fields {
        writeln!(out, "{k}: {v}").unwrap();
    }
    out
}

pub fn read_record(text: &str) -> Result<Vec<(String, String)>> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    while lines.peek().is_some() {
        let (n, l) = lines.next()?;
        let (k, v) = l.split_once(':').ok_or_else(|| Error::parse(n, "expected \"key: value\""))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn write_trace(trace: &ReductionTrace, ring: NormedRing) -> String {
    let mut out = String::new();
    writeln!(out, "{TRACE_HEADER}").unwrap();
    writeln!(out, "ring {ring}").unwrap();
    writeln!(out, "steps {}", trace.len()).unwrap();
    for s in &trace.steps {
        let inv: Vec<String> = s.involved.iter().map(u32::to_string).collect();
        writeln!(
            out,
            "step case {} vertex {} before {} after {} involved {}",
            s.case,
            s.v,
            s.norm_before,
            s.norm_after,
            inv.join(",")
        )
        .unwrap();
        write_terms(&mut out, &s.chain);
    }
    out
}

pub fn read_trace(text: &str) -> Result<ReductionTrace> {
    let mut lines = Lines::new(text);
    lines.header(TRACE_HEADER)?;
    let (n, v) = lines.keyed("ring")?;
    let ring: NormedRing = v.parse().map_err(|e: Error| Error::parse(n, e.to_string()))?;
    let (n, v) = lines.keyed("steps")?;
    let count: usize = num(n, v)?;
    let mut steps = Vec::with_capacity(count);
    for _ in 0..count {
        let (n, v) = lines.keyed("step")?;
        let t: Vec<&str> = v.split_whitespace().collect();
        let bad = || Error::parse(n, "expected \"step case C vertex V before X after Y involved A,B,...\"");
        if t.len() != 10 || [t[0], t[2], t[4], t[6], t[8]] != ["case", "vertex", "before", "after", "involved"] {
            return Err(bad());
        }
        let case: u8 = num(n, t[1])?;
        if !(1..=3).contains(&case) {
            return Err(bad());
        }
        let involved = t[9].split(',').map(|x| num(n, x)).collect::<Result<_>>()?;
        let chain = read_terms(&mut lines, ring, 2)?;
        steps.push(ReductionStep {
            case,
            v: num(n, t[3])?,
            involved,
            chain,
            norm_before: num::<BigRational>(n, t[5])?,
            norm_after: num::<BigRational>(n, t[7])?,
        });
    }
    lines.done()?;
    Ok(ReductionTrace { steps })
}

/// Comma-separated profile table, preceded by `# key: value` metadata lines.
pub fn write_profile(p: &IsoProfile) -> String {
    let mut out = String::new();
    writeln!(out, "# complex: {}", p.complex_id).unwrap();
    writeln!(out, "# dim: {}", p.dim).unwrap();
    writeln!(out, "# ring: {}", p.ring).unwrap();
    writeln!(out, "# exhaustive_to: {}", p.exhaustive_to).unwrap();
    writeln!(out, "# seed: {}", p.seed).unwrap();
    writeln!(out, "# non_boundaries: {}", p.non_boundaries).unwrap();
    writeln!(out, "{PROFILE_HEADER}").unwrap();
    for e in &p.entries {
        let status = e.worst_status.map(|s| s.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{},{},{status}", e.l, e.f_hat, e.mode, e.samples).unwrap();
    }
    out
}

/// Reads the output of [`write_profile`]. The metadata comments are required.
pub fn read_profile(text: &str) -> Result<IsoProfile> {
    let mut meta: Vec<(usize, &str, &str)> = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (i, l) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if l.is_empty() {
            continue;
        }
        if let Some(c) = l.strip_prefix('#') {
            if let Some((k, v)) = c.split_once(':') {
                meta.push((i, k.trim(), v.trim()));
            }
        } else if !seen_header {
            if l != PROFILE_HEADER {
                return Err(Error::parse(i, format!("expected the header {PROFILE_HEADER:?}")));
            }
            seen_header = true;
        } else {
            rows.push((i, l));
        }
    }
    if !seen_header {
        return Err(Error::parse(1, "missing profile header"));
    }
    let get = |key: &str| -> Result<(usize, &str)> {
        meta.iter()
            .find(|m| m.1 == key)
            .map(|m| (m.0, m.2))
            .ok_or_else(|| Error::parse(1, format!("missing \"# {key}:\" line")))
    };
    let (_, complex_id) = get("complex")?;
    let (n, v) = get("dim")?;
    let dim = num(n, v)?;
    let (n, v) = get("ring")?;
    let ring: NormedRing = v.parse().map_err(|e: Error| Error::parse(n, e.to_string()))?;
    let (n, v) = get("exhaustive_to")?;
    let exhaustive_to = num(n, v)?;
    let (n, v) = get("seed")?;
    let seed = num(n, v)?;
    let (n, v) = get("non_boundaries")?;
    let non_boundaries = num(n, v)?;
    let mut entries: Vec<ProfileEntry> = Vec::with_capacity(rows.len());
    for (n, l) in rows {
        let f: Vec<&str> = l.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(Error::parse(n, "expected five comma-separated fields"));
        }
        let e = ProfileEntry {
            l: num(n, f[0])?,
            f_hat: num(n, f[1])?,
            mode: f[2].parse::<EntryMode>().map_err(|e| Error::parse(n, e.to_string()))?,
            samples: num(n, f[3])?,
            worst_status: match f[4] {
                "" => None,
                s => Some(s.parse::<FillingStatus>().map_err(|e| Error::parse(n, e.to_string()))?),
            },
        };
        if let Some(prev) = entries.last() {
            if e.l <= prev.l || e.f_hat < prev.f_hat {
                return Err(Error::parse(n, "lengths must increase and f_hat must not decrease"));
            }
        }
        entries.push(e);
    }
    Ok(IsoProfile { complex_id: complex_id.to_string(), dim, ring, exhaustive_to, seed, entries, non_boundaries })
}

/// `l f_hat fit` rows for plotting, under a header with the fitted exponent.
pub fn write_plotdata(p: &IsoProfile, fit: &GrowthClass) -> String {
    let mut out = String::new();
    writeln!(out, "# alpha = {:.6}", fit.alpha).unwrap();
    writeln!(out, "# band = {:.6} {:.6}", fit.band.0, fit.band.1).unwrap();
    writeln!(out, "# label = {}", fit.label).unwrap();
    writeln!(out, "l f_hat fit").unwrap();
    for e in &p.entries {
        writeln!(out, "{} {} {:.6}", e.l, e.f_hat, fit.fit(e.l as f64)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cayley_ball, grid_complex, rips_complex, Presentation};
    use crate::rings::NormKind;

    #[test]
    fn small_grid_text() {
        let (cx, _) = grid_complex(1, 1).unwrap();
        let text = write_complex(&cx);
        assert!(text.starts_with("homfill complex\ndimension 2\nvertices 4\ncells 1 5\n0 1\n"));
        assert!(text.contains("cells 2 2\n"));
        assert!(text.contains("metric graph 4 5\n"));
    }

    #[test]
    fn complexes_round_trip() {
        let (g, _) = grid_complex(3, 2).unwrap();
        let (_, m) = cayley_ball(&Presentation::free(2).unwrap(), 2).unwrap();
        let r = rips_complex(&m, Rational64::from_integer(2), 2).unwrap();
        let (z, _) = cayley_ball(&Presentation::z2(), 2).unwrap();
        for cx in [g, r, z] {
            let text = write_complex(&cx);
            let back = read_complex(&text).unwrap();
            assert_eq!(back, cx);
            assert_eq!(back.meta().rips_scale, cx.meta().rips_scale);
            assert_eq!(back.meta().metric, cx.meta().metric);
            assert_eq!(write_complex(&back), text);
        }
    }

    #[test]
    fn matrix_metric_round_trip() {
        let q = |n, d| Rational64::new(n, d);
        let rows = vec![
            vec![q(0, 1), q(1, 2), q(1, 1)],
            vec![q(1, 2), q(0, 1), q(1, 2)],
            vec![q(1, 1), q(1, 2), q(0, 1)],
        ];
        let m = Arc::new(FiniteMetric::from_matrix(&rows).unwrap());
        let cx = rips_complex(&m, q(1, 2), 2).unwrap();
        let text = write_complex(&cx);
        assert!(text.contains("metric matrix 3\n0 1/2 1\n"));
        assert_eq!(write_complex(&read_complex(&text).unwrap()), text);
    }

    #[test]
    fn chains_round_trip() {
        let q = NormedRing::rationals(NormKind::Absolute);
        let c = Chain::from_terms(q, 1, [(3, q.parse_coefficient("-2/3").unwrap()), (0, q.one())]);
        let text = write_chain(&c);
        assert_eq!(text, "homfill chain\nring Q:abs\ndimension 1\nterms 2\n0 1\n3 -2/3\n");
        assert_eq!(read_chain(&text).unwrap(), c);
        let z5: NormedRing = "Zmod5:disc".parse().unwrap();
        let c = Chain::from_i64(z5, 2, [(1, 7), (4, -1)]);
        assert_eq!(write_chain(&read_chain(&write_chain(&c)).unwrap()), write_chain(&c));
    }

    #[test]
    fn bad_inputs_name_the_line() {
        let e = read_chain("homfill chain\nring Z:abs\ndimension 1\nterms 2\n0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 6, .. }), "{e}");
        let e = read_chain("homfill chain\nring Z:abs\ndimension 1\nterms 1\n0 x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 5, .. }), "{e}");
        let e = read_complex("homfill complex\ndimension 2\nvertices 3\ncells 1 1\n0 1\ncells 2 1\n0 1 2\ncertified true\n");
        assert!(e.is_err());
    }

    #[test]
    fn records_keep_their_order() {
        let r = write_record(&[("norm", "4".into()), ("status", "optimal".into())]);
        assert_eq!(r, "norm: 4\nstatus: optimal\n");
        let back = read_record(&r).unwrap();
        assert_eq!(back[1], ("status".to_string(), "optimal".to_string()));
    }

    #[test]
    fn traces_round_trip() {
        use crate::hypfill::{linear_fill, HyperbolicContext};
        let (_, m) = cayley_ball(&Presentation::free(2).unwrap(), 3).unwrap();
        let cx = rips_complex(&m, Rational64::from_integer(3), 2).unwrap();
        let ctx = HyperbolicContext::new(&cx, Rational64::from_integer(0), Rational64::from_integer(1), 0).unwrap();
        let ring = NormedRing::integers(NormKind::Discrete);
        let z = cx.path_chain(&[1, 3, 2, 4, 1], ring).unwrap();
        let (_, t) = linear_fill(&ctx, &z).unwrap();
        assert!(!t.is_empty());
        let text = write_trace(&t, ring);
        let back = read_trace(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(write_trace(&back, ring), text);
    }

    #[test]
    fn profiles_round_trip() {
        use crate::profiler::{profile, ProfileConfig};
        let (cx, _) = grid_complex(2, 2).unwrap();
        let ring = NormedRing::integers(NormKind::Discrete);
        let cfg = ProfileConfig { exhaustive_to: 4, samples: 10, seed: 5, ..Default::default() };
        let p = profile(&cx, 1, 8, ring, &cfg).unwrap();
        let text = write_profile(&p);
        assert!(text.contains("\nl,f_hat,mode,samples,worst_status\n1,0,exhaustive,0,\n"));
        assert!(text.contains("\n3,1,exhaustive,"));
        let back = read_profile(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(write_profile(&back), text);
    }
}
