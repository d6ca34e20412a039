use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{FiniteMetric, Truncation};
use crate::chains::Complex;
use crate::error::{Error, Result};

/// Printed whenever a ball is built with a presentation outside the certified presets.
pub const HEURISTIC_WARNING: &str = "vertex identification is heuristic beyond free reductions";

/// Letters are encoded as `2g` for generator `g` and `2g + 1` for its inverse.
type Word = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum WordProblem {
    /// No relators: freely reduced words are normal forms.
    Free,
    /// A free abelian group; each generator maps to a vector and the image is a normal form.
    Abelian(Vec<Vec<i64>>),
    /// Dehn's algorithm. Certified only for presentations known to be C'(1/6).
    Dehn { certified: bool },
}

/// A finite group presentation over single-letter generators.
///
/// Generators are lowercase letters; in words an uppercase letter denotes the inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<char>,
    relators: Vec<Word>,
    word_problem: WordProblem,
}

impl Presentation {
    /// A presentation with arbitrary relators. Without relators the group is free and
    /// certified; otherwise identification falls back to Dehn's algorithm, uncertified.
    pub fn new(generators: &[char], relators: &[&str]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &g in generators {
            if !g.is_ascii_lowercase() || !seen.insert(g) {
                return Err(Error::config(format!(
                    "generators must be distinct lowercase letters, got {g:?}"
                )));
            }
        }
        if generators.is_empty() {
            return Err(Error::config("a presentation needs at least one generator"));
        }
        let mut p = Presentation {
            generators: generators.to_vec(),
            relators: Vec::new(),
            word_problem: WordProblem::Free,
        };
        for r in relators {
            let w = p.encode(r)?;
            if w.is_empty() {
                return Err(Error::config("relators must be nonempty"));
            }
            if w.windows(2).any(|x| x[0] == x[1] ^ 1) {
                return Err(Error::config(format!("relator {r} is not freely reduced")));
            }
            p.relators.push(w);
        }
        if !p.relators.is_empty() {
            p.word_problem = WordProblem::Dehn { certified: false };
        }
        Ok(p)
    }

    /// Free group on the first `rank` letters of the alphabet.
    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::config(format!("free group rank must be in 1..=26, got {rank}")));
        }
        let gens: Vec<char> = (b'a'..b'a' + rank as u8).map(char::from).collect();
        Presentation::new(&gens, &[])
    }

    /// `⟨a, b | abAB⟩` with the normal form `(exp_a, exp_b)`.
    pub fn z2() -> Self {
        let mut p = Presentation::new(&['a', 'b'], &["abAB"]).expect("valid");
        p.word_problem = WordProblem::Abelian(vec![vec![1, 0], vec![0, 1]]);
        p
    }

    /// `Z²` generated by `a`, `b` and `c = ab = ba`; the Cayley complex is the
    /// triangulated plane.
    pub fn z2_with_diagonal() -> Self {
        let mut p = Presentation::new(&['a', 'b', 'c'], &["cBA", "cAB"]).expect("valid");
        p.word_problem = WordProblem::Abelian(vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        p
    }

    /// Closed orientable surface group of genus 2, `⟨a, b, c, d | abABcdCD⟩`.
    /// The relator satisfies C'(1/7), so Dehn's algorithm decides equality.
    pub fn genus2() -> Self {
        let mut p = Presentation::new(&['a', 'b', 'c', 'd'], &["abABcdCD"]).expect("valid");
        p.word_problem = WordProblem::Dehn { certified: true };
        p
    }

    /// Shipped group presets: `fN` (free of rank N), `z`, `z2`, `z2abc`, `genus2`.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "z" => Presentation::free(1),
            "z2" => Ok(Presentation::z2()),
            "z2abc" => Ok(Presentation::z2_with_diagonal()),
            "genus2" => Ok(Presentation::genus2()),
            _ => match name.strip_prefix('f').and_then(|r| r.parse::<usize>().ok()) {
                Some(rank) => Presentation::free(rank),
                None => Err(Error::config(format!("unknown group preset {name:?}"))),
            },
        }
    }

    /// Read `generators a b ...` and `relators w1 w2 ...` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut gens: Option<Vec<char>> = None;
        let mut rels: Vec<String> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("generators") => {
                    let mut g = Vec::new();
                    for tok in parts {
                        let mut chars = tok.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) => g.push(c),
                            _ => return Err(Error::parse(i + 1, format!("generator {tok:?} is not one letter"))),
                        }
                    }
                    gens = Some(g);
                }
                Some("relators") => rels.extend(parts.map(str::to_string)),
                Some(other) => return Err(Error::parse(i + 1, format!("unexpected keyword {other:?}"))),
                None => {}
            }
        }
        let gens = gens.ok_or_else(|| Error::parse(0, "missing generators line"))?;
        let rel_refs: Vec<&str> = rels.iter().map(String::as_str).collect();
        Presentation::new(&gens, &rel_refs)
    }

    pub fn generators(&self) -> &[char] {
        &self.generators
    }

    /// Relators as strings, uppercase letters for inverses.
    pub fn relators(&self) -> Vec<String> {
        self.relators.iter().map(|w| self.decode(w)).collect()
    }

    /// Whether vertex identification in [`cayley_ball`] is exact.
    pub fn is_certified(&self) -> bool {
        !matches!(self.word_problem, WordProblem::Dehn { certified: false })
    }

    fn encode(&self, s: &str) -> Result<Word> {
        s.chars()
            .map(|c| {
                let lower = c.to_ascii_lowercase();
                let g = self
                    .generators
                    .iter()
                    .position(|&x| x == lower)
                    .ok_or_else(|| Error::config(format!("letter {c:?} is not a generator")))?;
                Ok((2 * g) as u8 + u8::from(c.is_ascii_uppercase()))
            })
            .collect()
    }

    fn decode(&self, w: &[u8]) -> String {
        w.iter()
            .map(|&l| {
                let c = self.generators[(l / 2) as usize];
                if l % 2 == 1 {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect()
    }

    /// Every cyclic rotation of every relator and of its inverse.
    fn relator_rotations(&self) -> Vec<Word> {
        let mut out = BTreeSet::new();
        for r in &self.relators {
            let inv = inverse(r);
            for w in [r, &inv] {
                for s in 0..w.len() {
                    let mut rot = w[s..].to_vec();
                    rot.extend_from_slice(&w[..s]);
                    out.insert(rot);
                }
            }
        }
        out.into_iter().collect()
    }
}

fn inverse(w: &[u8]) -> Word {
    w.iter().rev().map(|&l| l ^ 1).collect()
}

fn free_reduce(w: &mut Word) {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if out.last() == Some(&(l ^ 1)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *w = out;
}

/// Replace pieces longer than half a relator by the shorter complement until none is left.
fn dehn_reduce(w: &mut Word, rotations: &[Word]) {
    free_reduce(w);
    'outer: loop {
        for r in rotations {
            let n = r.len();
            for k in (n / 2 + 1..=n).rev() {
                if k > w.len() {
                    continue;
                }
                if let Some(i) = (0..=w.len() - k).find(|&i| w[i..i + k] == r[..k]) {
                    let mut next = w[..i].to_vec();
                    next.extend(inverse(&r[k..]));
                    next.extend_from_slice(&w[i + k..]);
                    *w = next;
                    free_reduce(w);
                    continue 'outer;
                }
            }
        }
        break;
    }
}

/// Identifies words with vertices already discovered.
struct Identifier<'a> {
    p: &'a Presentation,
    rotations: Vec<Word>,
    /// Whether exponent sums are invariants of the group element.
    balanced: bool,
    buckets: HashMap<Vec<i64>, Vec<u32>>,
}

impl<'a> Identifier<'a> {
    fn new(p: &'a Presentation) -> Self {
        let rank = p.generators.len();
        let balanced = p.relators.iter().all(|r| exponent_sums(r, rank).iter().all(|&x| x == 0));
        Identifier { p, rotations: p.relator_rotations(), balanced, buckets: HashMap::new() }
    }

    fn key(&self, w: &[u8]) -> Vec<i64> {
        match &self.p.word_problem {
            WordProblem::Free => w.iter().map(|&l| l as i64).collect(),
            WordProblem::Abelian(images) => {
                let mut v = vec![0i64; images[0].len()];
                for &l in w {
                    let sign = if l % 2 == 0 { 1 } else { -1 };
                    for (x, y) in v.iter_mut().zip(&images[(l / 2) as usize]) {
                        *x += sign * y;
                    }
                }
                v
            }
            WordProblem::Dehn { .. } if self.balanced => exponent_sums(w, self.p.generators.len()),
            WordProblem::Dehn { .. } => Vec::new(),
        }
    }

    fn equal(&self, a: &[u8], b: &[u8]) -> bool {
        match self.p.word_problem {
            WordProblem::Free | WordProblem::Abelian(_) => true,
            WordProblem::Dehn { .. } => {
                let mut w = a.to_vec();
                w.extend(inverse(b));
                dehn_reduce(&mut w, &self.rotations);
                w.is_empty()
            }
        }
    }

    /// Existing vertex equal to `w` among those at depth `>= min_depth`.
    fn lookup(&self, w: &[u8], reps: &[Word], depth: &[u32], min_depth: u32) -> Option<u32> {
        let bucket = self.buckets.get(&self.key(w))?;
        bucket
            .iter()
            .copied()
            .find(|&v| depth[v as usize] >= min_depth && self.equal(w, &reps[v as usize]))
    }

    fn insert(&mut self, w: &[u8], id: u32) {
        let k = self.key(w);
        self.buckets.entry(k).or_default().push(id);
    }
}

fn exponent_sums(w: &[u8], rank: usize) -> Vec<i64> {
    let mut v = vec![0i64; rank];
    for &l in w {
        v[(l / 2) as usize] += if l % 2 == 0 { 1 } else { -1 };
    }
    v
}

/// The ball of radius `radius` about the identity in the Cayley 2-complex.
///
/// Vertices are numbered in breadth-first order with letters tried as
/// `a, A, b, B, …`; vertex 0 is the identity. The 1-skeleton contains the Cayley
/// edges between ball vertices. Every relator polygon whose vertices all lie in the
/// ball and are pairwise distinct is fan-triangulated from its least vertex, which
/// may add diagonal edges. The metric is the word metric restricted to the ball
/// (the path metric of the Cayley edges).
pub fn cayley_ball(p: &Presentation, radius: u32) -> Result<(Complex, Arc<FiniteMetric>)> {
    let mut ident = Identifier::new(p);
    let letters = (2 * p.generators.len()) as u8;
    let mut reps: Vec<Word> = vec![Vec::new()];
    let mut depth: Vec<u32> = vec![0];
    ident.insert(&[], 0);
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    // right multiplication table, filled in as vertices are expanded
    let mut step: Vec<Vec<Option<u32>>> = Vec::new();
    let mut frontier: Vec<u32> = vec![0];
    for level in 0..=radius {
        let mut next = Vec::new();
        for &u in &frontier {
            let mut row = vec![None; letters as usize];
            for l in 0..letters {
                let mut w = reps[u as usize].clone();
                w.push(l);
                free_reduce(&mut w);
                let min_depth = level.saturating_sub(1);
                let v = match ident.lookup(&w, &reps, &depth, min_depth) {
                    Some(v) => Some(v),
                    None if level < radius => {
                        let v = reps.len() as u32;
                        ident.insert(&w, v);
                        reps.push(w);
                        depth.push(level + 1);
                        next.push(v);
                        Some(v)
                    }
                    None => None,
                };
                if let Some(v) = v {
                    if v != u {
                        edges.insert((u.min(v), u.max(v)));
                    }
                }
                row[l as usize] = v;
            }
            step.push(row);
        }
        frontier = next;
    }
    let n = reps.len();
    let metric = FiniteMetric::from_graph(n, edges.iter().copied())?
        .with_truncation(Truncation { center: 0, radius });

    let mut polygons: BTreeSet<Vec<u32>> = BTreeSet::new();
    for r in &p.relators {
        for g in 0..n as u32 {
            let mut cycle = vec![g];
            let mut cur = g;
            let mut inside = true;
            for &l in &r[..r.len() - 1] {
                match step[cur as usize][l as usize] {
                    Some(v) => {
                        cur = v;
                        cycle.push(v);
                    }
                    None => {
                        inside = false;
                        break;
                    }
                }
            }
            if !inside || step[cur as usize][r[r.len() - 1] as usize] != Some(g) {
                continue;
            }
            let distinct: BTreeSet<u32> = cycle.iter().copied().collect();
            if distinct.len() != cycle.len() || cycle.len() < 3 {
                continue;
            }
            polygons.insert(canonical_polygon(&cycle));
        }
    }
    let mut simplices: Vec<Vec<u32>> = edges.iter().map(|&(a, b)| vec![a, b]).collect();
    for poly in &polygons {
        for i in 1..poly.len() - 1 {
            simplices.push(vec![poly[0], poly[i], poly[i + 1]]);
        }
    }
    let metric = Arc::new(metric);
    let mut cx = Complex::from_simplices(n, simplices)?.with_metric(metric.clone());
    cx.meta.attaching_edges = p.relators.iter().map(Vec::len).max();
    cx.meta.certified = p.is_certified();
    Ok((cx, metric))
}

/// Rotate a polygon to start at its least vertex, in the direction of the smaller neighbour.
fn canonical_polygon(cycle: &[u32]) -> Vec<u32> {
    let m = cycle.len();
    let s = (0..m).min_by_key(|&i| cycle[i]).expect("nonempty");
    let fwd: Vec<u32> = (0..m).map(|i| cycle[(s + i) % m]).collect();
    let bwd: Vec<u32> = (0..m).map(|i| cycle[(s + m - i) % m]).collect();
    fwd.min(bwd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode_round_trip() {
        let p = Presentation::genus2();
        assert_eq!(p.relators(), vec!["abABcdCD".to_string()]);
        assert!(p.is_certified());
    }

    #[test]
    fn rejects_bad_relators() {
        assert!(Presentation::new(&['a'], &["aA"]).is_err());
        assert!(Presentation::new(&['a'], &["ab"]).is_err());
        assert!(Presentation::new(&['a', 'a'], &[]).is_err());
    }

    #[test]
    fn parse_presentation_text() {
        let p = Presentation::parse("# torus\ngenerators a b\nrelators abAB\n").unwrap();
        assert_eq!(p.generators(), &['a', 'b']);
        assert!(!p.is_certified());
    }

    #[test]
    fn dehn_recognises_trivial_words() {
        let p = Presentation::genus2();
        let rot = p.relator_rotations();
        let mut w = p.encode("abABcdCD").unwrap();
        dehn_reduce(&mut w, &rot);
        assert!(w.is_empty());
        // five letters of the relator shorten to three
        let mut w = p.encode("abABc").unwrap();
        dehn_reduce(&mut w, &rot);
        assert_eq!(p.decode(&w), "dcD");
        let mut w = p.encode("abAB").unwrap();
        dehn_reduce(&mut w, &rot);
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn radius_zero_is_a_point() {
        let (cx, m) = cayley_ball(&Presentation::genus2(), 0).unwrap();
        assert_eq!(cx.n_vertices(), 1);
        assert_eq!(cx.n_cells(1), 0);
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn free_ball_is_a_tree() {
        let (cx, _) = cayley_ball(&Presentation::free(2).unwrap(), 3).unwrap();
        assert_eq!(cx.n_vertices(), 1 + 4 + 12 + 36);
        assert_eq!(cx.n_cells(1), cx.n_vertices() - 1);
        assert_eq!(cx.n_cells(2), 0);
    }

    #[test]
    fn z2_ball_counts() {
        let (cx, m) = cayley_ball(&Presentation::z2(), 3).unwrap();
        assert_eq!(cx.n_vertices(), 25);
        // unit squares with all four corners in the ℓ¹ ball
        let squares = (-3i64..3)
            .flat_map(|x| (-3i64..3).map(move |y| (x, y)))
            .filter(|&(x, y)| {
                [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)]
                    .iter()
                    .all(|&(a, b)| a.abs() + b.abs() <= 3)
            })
            .count();
        assert_eq!(cx.n_cells(2), 2 * squares);
        assert_eq!(cx.meta().attaching_edges, Some(4));
        assert_eq!(m.truncation(), Some(Truncation { center: 0, radius: 3 }));
    }

    #[test]
    fn genus2_sphere_sizes() {
        // growth series of the genus-2 surface group: 1, 8, 56, 392, …
        let (cx, m) = cayley_ball(&Presentation::genus2(), 3).unwrap();
        let mut spheres = [0usize; 4];
        for v in 0..cx.n_vertices() as u32 {
            spheres[m.raw(0, v) as usize] += 1;
        }
        assert_eq!(spheres, [1, 8, 56, 392]);
        // an octagon through the identity reaches distance 4
        assert_eq!(cx.n_cells(2), 0);
    }

    #[test]
    fn genus2_identifies_half_relators() {
        let (cx, m) = cayley_ball(&Presentation::genus2(), 4).unwrap();
        let s4 = (0..cx.n_vertices() as u32).filter(|&v| m.raw(0, v) == 4).count();
        // 8·7³ reduced words, with the 16 half-relator words glued in pairs
        assert_eq!(s4, 2744 - 8);
        // the eight octagons at the identity, six triangles each, at least
        assert!(cx.n_cells(2) >= 48);
    }

    #[test]
    fn diagonal_generator_makes_triangles() {
        let (cx, m) = cayley_ball(&Presentation::z2_with_diagonal(), 1).unwrap();
        assert_eq!(cx.n_vertices(), 7);
        // a and c = ab are adjacent through b
        assert_eq!(m.raw(1, 5), 1);
        // the hexagon around the identity, and nothing else
        assert_eq!(cx.n_cells(2), 6);
        assert_eq!(cx.n_cells(1), 12);
    }
}
