//! Sources of cycles for profiles: exhaustive circuits, random closed walks,
//! boundaries of metric balls and grid rectangles.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::{Chain, Complex};
use crate::error::Result;
use crate::rings::{NormedRing, RingKind};

/// Every connected-support `n`-cycle with coefficients `±1` and at most
/// `max_len` cells, up to sign. Cells must satisfy `allowed` when given.
///
/// Cycles are grown from their least cell by adding cofaces of the least face
/// whose boundary coefficient is still nonzero; cofaces tried in earlier
/// branches are excluded, so every support is reached once. A cycle is emitted
/// as soon as its boundary vanishes, so cycles whose support contains a smaller
/// cycle are produced only as unions found along the way.
pub fn unit_circuits(
    cx: &Complex,
    n: usize,
    max_len: usize,
    ring: NormedRing,
    allowed: Option<&[bool]>,
) -> Vec<Chain> {
    if n == 0 || n > cx.dimension() || max_len == 0 {
        return Vec::new();
    }
    let modulus = match ring.kind() {
        RingKind::IntegersMod(m) => m as i64,
        _ => 0,
    };
    let mut st = Enum {
        cx,
        n,
        max_len,
        ring,
        allowed,
        modulus,
        residual: vec![0; cx.n_cells(n - 1)],
        nonzero: std::collections::BTreeSet::new(),
        used: vec![false; cx.n_cells(n)],
        excluded: vec![0; cx.n_cells(n)],
        s: Vec::new(),
        root: 0,
        out: Vec::new(),
    };
    for r in 0..cx.n_cells(n) as u32 {
        if allowed.is_some_and(|m| !m[r as usize]) {
            continue;
        }
        st.root = r;
        st.push(r, 1);
        st.dfs();
        st.pop();
    }
    st.out
}

struct Enum<'a> {
    cx: &'a Complex,
    n: usize,
    max_len: usize,
    ring: NormedRing,
    allowed: Option<&'a [bool]>,
    modulus: i64,
    residual: Vec<i64>,
    nonzero: std::collections::BTreeSet<u32>,
    used: Vec<bool>,
    excluded: Vec<u32>,
    s: Vec<(u32, i64)>,
    root: u32,
    out: Vec<Chain>,
}

impl Enum<'_> {
    fn is_zero(&self, x: i64) -> bool {
        if self.modulus == 0 {
            x == 0
        } else {
            x.rem_euclid(self.modulus) == 0
        }
    }

    fn shift(&mut self, c: u32, v: i64) {
        let faces: Vec<(u32, i8)> = self.cx.faces(self.n, c).collect();
        for (f, s) in faces {
            self.residual[f as usize] += v * s as i64;
            if self.is_zero(self.residual[f as usize]) {
                self.nonzero.remove(&f);
            } else {
                self.nonzero.insert(f);
            }
        }
    }

    fn push(&mut self, c: u32, v: i64) {
        self.used[c as usize] = true;
        self.s.push((c, v));
        self.shift(c, v);
    }

    fn pop(&mut self) {
        let (c, v) = self.s.pop().expect("nonempty");
        self.shift(c, -v);
        self.used[c as usize] = false;
    }

    fn dfs(&mut self) {
        if self.nonzero.is_empty() {
            self.out.push(Chain::from_i64(self.ring, self.n, self.s.iter().copied()));
            return;
        }
        let need = self.nonzero.len().div_ceil(self.n + 1);
        if self.s.len() + need > self.max_len {
            return;
        }
        let f = *self.nonzero.iter().next().expect("nonzero");
        let cands: Vec<u32> = self
            .cx
            .cofaces(self.n - 1, f)
            .map(|(c, _)| c)
            .filter(|&c| {
                c > self.root
                    && !self.used[c as usize]
                    && self.excluded[c as usize] == 0
                    && self.allowed.is_none_or(|m| m[c as usize])
            })
            .collect();
        let signs: &[i64] = if self.modulus == 2 { &[1] } else { &[1, -1] };
        for &c in &cands {
            for &v in signs {
                self.push(c, v);
                self.dfs();
                self.pop();
            }
            self.excluded[c as usize] += 1;
        }
        for &c in &cands {
            self.excluded[c as usize] -= 1;
        }
    }
}

/// Breadth-first shortest edge path in the 1-skeleton, through allowed vertices only.
pub fn skeleton_path(cx: &Complex, from: u32, to: u32, allowed: Option<&[bool]>) -> Option<Vec<u32>> {
    let nv = cx.n_vertices();
    let mut prev = vec![u32::MAX; nv];
    prev[from as usize] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur as usize];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for w in neighbours(cx, u) {
            if prev[w as usize] == u32::MAX && allowed.is_none_or(|m| m[w as usize]) {
                prev[w as usize] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

pub(crate) fn neighbours(cx: &Complex, u: u32) -> impl Iterator<Item = u32> + '_ {
    cx.cofaces(0, u).map(move |(e, _)| {
        let vs = cx.vertices(1, e);
        if vs[0] == u {
            vs[1]
        } else {
            vs[0]
        }
    })
}

/// Random closed walks: `t` random steps from a random vertex, then a shortest way
/// back, kept when the walk has at most `max_len` edges and its chain is nonzero.
pub fn random_walk_cycles(
    cx: &Complex,
    ring: NormedRing,
    max_len: usize,
    count: usize,
    seed: u64,
    allowed: Option<&[bool]>,
) -> Result<Vec<Chain>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verts: Vec<u32> = (0..cx.n_vertices() as u32)
        .filter(|&v| allowed.is_none_or(|m| m[v as usize]) && cx.coface_count(0, v) > 0)
        .collect();
    let mut out = Vec::new();
    if verts.is_empty() || max_len < 3 {
        return Ok(out);
    }
    let mut attempts = 0usize;
    while out.len() < count && attempts < 50 * count + 100 {
        attempts += 1;
        let start = verts[rng.gen_range(0..verts.len())];
        let t = rng.gen_range(2..=max_len - 1);
        let mut walk = vec![start];
        let mut cur = start;
        for _ in 0..t {
            let nb: Vec<u32> = neighbours(cx, cur).filter(|&w| allowed.is_none_or(|m| m[w as usize])).collect();
            if nb.is_empty() {
                break;
            }
            cur = nb[rng.gen_range(0..nb.len())];
            walk.push(cur);
        }
        let Some(back) = skeleton_path(cx, cur, start, allowed) else {
            continue;
        };
        if walk.len() - 1 + back.len() - 1 > max_len {
            continue;
        }
        walk.extend_from_slice(&back[1..]);
        let z = cx.path_chain(&walk, ring)?;
        if !z.is_zero() {
            out.push(z);
        }
    }
    Ok(out)
}

/// Random boundaries of connected unit `(n+1)`-chains, for `n >= 2`.
pub fn random_boundaries(
    cx: &Complex,
    n: usize,
    ring: NormedRing,
    max_cells: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Chain>> {
    let k = n + 1;
    let mut out = Vec::new();
    if k > cx.dimension() || cx.n_cells(k) == 0 {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let size = rng.gen_range(1..=max_cells.max(1));
        let mut cells = vec![rng.gen_range(0..cx.n_cells(k) as u32)];
        for _ in 1..size {
            let base = cells[rng.gen_range(0..cells.len())];
            let faces: Vec<u32> = cx.faces(k, base).map(|(f, _)| f).collect();
            let f = faces[rng.gen_range(0..faces.len())];
            let cof: Vec<u32> = cx.cofaces(k - 1, f).map(|(c, _)| c).filter(|c| !cells.contains(c)).collect();
            if !cof.is_empty() {
                cells.push(cof[rng.gen_range(0..cof.len())]);
            }
        }
        let c = Chain::from_i64(ring, k, cells.iter().map(|&c| (c, if rng.gen_bool(0.5) { 1 } else { -1 })));
        let z = cx.boundary(&c)?;
        if !z.is_zero() {
            out.push(z);
        }
    }
    Ok(out)
}

/// Boundary of the `(n+1)`-cells inside each metric ball `B_s(center)` that can be
/// oriented coherently (every interior face shared by exactly two cells, with
/// opposite induced signs). Balls that cannot are skipped.
pub fn ball_boundaries(
    cx: &Complex,
    n: usize,
    ring: NormedRing,
    centers: &[u32],
    max_radius: u32,
    allowed: Option<&[bool]>,
) -> Result<Vec<Chain>> {
    let k = n + 1;
    let mut out = Vec::new();
    let Some(metric) = cx.metric() else {
        return Ok(out);
    };
    if k > cx.dimension() {
        return Ok(out);
    }
    for &c in centers {
        let mut last = 0usize;
        for s in 1..=max_radius {
            let r = s as i64 * metric.scale();
            let inside = |v: u32| metric.raw(c, v) as i64 <= r && allowed.is_none_or(|m| m[v as usize]);
            let cells: Vec<u32> =
                (0..cx.n_cells(k) as u32).filter(|&t| cx.vertices(k, t).iter().all(|&v| inside(v))).collect();
            if cells.is_empty() || cells.len() == last {
                continue;
            }
            last = cells.len();
            if let Some(signs) = coherent_orientation(cx, k, &cells) {
                let chain = Chain::from_i64(ring, k, cells.iter().copied().zip(signs));
                let z = cx.boundary(&chain)?;
                if !z.is_zero() {
                    out.push(z);
                }
            }
        }
    }
    Ok(out)
}

fn coherent_orientation(cx: &Complex, k: usize, cells: &[u32]) -> Option<Vec<i64>> {
    use std::collections::HashMap;
    let mut by_face: HashMap<u32, Vec<(usize, i8)>> = HashMap::new();
    for (i, &c) in cells.iter().enumerate() {
        for (f, s) in cx.faces(k, c) {
            by_face.entry(f).or_default().push((i, s));
        }
    }
    if by_face.values().any(|v| v.len() > 2) {
        return None;
    }
    let mut sign = vec![0i64; cells.len()];
    for root in 0..cells.len() {
        if sign[root] != 0 {
            continue;
        }
        sign[root] = 1;
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            for (f, s) in cx.faces(k, cells[i]) {
                for &(j, t) in &by_face[&f] {
                    if j == i {
                        continue;
                    }
                    let want = -sign[i] * s as i64 * t as i64;
                    if sign[j] == 0 {
                        sign[j] = want;
                        stack.push(j);
                    } else if sign[j] != want {
                        return None;
                    }
                }
            }
        }
    }
    Some(sign)
}

/// Closed edge path around the `n × m` rectangle with lower-left corner `(x, y)`
/// in a grid of width `w` (vertex `(x, y)` has id `y(w+1) + x`).
pub fn grid_rectangle(w: u32, x: u32, y: u32, n: u32, m: u32) -> Vec<u32> {
    let id = |a: u32, b: u32| b * (w + 1) + a;
    let mut p = Vec::with_capacity(2 * (n + m) as usize + 1);
    p.extend((0..n).map(|i| id(x + i, y)));
    p.extend((0..m).map(|j| id(x + n, y + j)));
    p.extend((1..=n).rev().map(|i| id(x + i, y + m)));
    p.extend((1..=m).rev().map(|j| id(x, y + j)));
    p.push(id(x, y));
    p
}
